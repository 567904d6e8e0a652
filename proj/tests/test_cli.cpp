#include "idforge/json_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int exitCode = -1;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(IDFORGE_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buffer[512];
    while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe))
        r.output.append(buffer, n);
    int status = pclose(pipe);
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch_dir() {
    static std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() / "idforge-cli-tests";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    auto path = scratch_dir() / name;
    std::ofstream out(path);
    out << text;
    out.close();
    return path.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kMonoParams = R"({
  "schemaVersion": 1,
  "identity": "3; 0-1,0-2,1-2",
  "kappa": 3,
  "lambda": 1,
  "g": [2],
  "f": [1]
})";

const char* kBlockedParams = R"({
  "schemaVersion": 1,
  "identity": "3; 0-1,0-2|1-2",
  "kappa": 3,
  "lambda": 1,
  "g": [2],
  "f": [1]
})";

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").exitCode == 0);
    for (const char* sub :
         {"identities", "check", "verify", "search", "sample", "encode", "decode"})
        CHECK(run(std::string(sub) + " --help").exitCode == 0);
    CHECK(run("").exitCode == 2);
    CHECK(run("frobnicate").exitCode == 2);
    CHECK(run("identities").exitCode == 2);          // --r missing
    CHECK(run("identities --r 1").exitCode == 2);    // out of range
    CHECK(run("identities --r 3 --format yaml").exitCode == 2);
}

TEST_CASE("identity listing counts") {
    RunResult r3 = run("identities --r 3");
    CHECK(r3.exitCode == 0);
    CHECK(r3.output.find("3; 0-1,0-2,1-2") != std::string::npos);
    CHECK(r3.output.find("3; 0-1,0-2|1-2") != std::string::npos);
    CHECK(r3.output.find("3; 0-1|0-2|1-2") != std::string::npos);

    RunResult j3 = run("identities --r 3 --mode j --depth 4 --format json");
    CHECK(j3.exitCode == 0);
    idforge::Json parsed = idforge::Json::parse(j3.output);
    CHECK(parsed["count"] == 2);
    CHECK(parsed["identities"].size() == 2);
}

TEST_CASE("coloring comparison reports both directions") {
    std::string mono = write_file("mono.txt", "0 1 1\n0 2 1\n1 2 1\n");
    std::string split = write_file("split.txt", "0 1 1\n0 2 1\n1 2 2\n");
    std::string relabeled = write_file("relabeled.txt", "0 1 7\n0 2 9\n1 2 7\n");

    RunResult same = run("check " + mono + " " + mono + " --format json");
    CHECK(same.exitCode == 0);
    idforge::Json j = idforge::Json::parse(same.output);
    CHECK(j["aRealizesB"] == true);
    CHECK(j["bRealizesA"] == true);
    CHECK(j["equivalent"] == true);

    RunResult diff = run("check " + mono + " " + split + " --format json");
    CHECK(diff.exitCode == 0);
    j = idforge::Json::parse(diff.output);
    CHECK(j["aRealizesB"] == true); // constant colorings realize everything
    CHECK(j["bRealizesA"] == false);
    CHECK(j["equivalent"] == false);

    RunResult equiv = run("check " + split + " " + relabeled + " --format json");
    j = idforge::Json::parse(equiv.output);
    CHECK(j["equivalent"] == true);

    CHECK(run("check " + mono + " /nonexistent.txt").exitCode == 2);
    std::string bad = write_file("bad.txt", "0 1\n");
    CHECK(run("check " + mono + " " + bad).exitCode == 2);
}

TEST_CASE("search, verify, sample, encode and decode form a pipeline") {
    std::string params = write_file("mono_params.json", kMonoParams);
    std::string witnessPath = (scratch_dir() / "mono_witness.json").string();

    RunResult search = run("search " + params + " --budget 3 --out " + witnessPath);
    CHECK(search.exitCode == 0);
    CHECK(search.output.find("witness found") != std::string::npos);

    RunResult verify = run("verify " + witnessPath + " --format json");
    CHECK(verify.exitCode == 0);
    idforge::Json report = idforge::Json::parse(verify.output);
    CHECK(report["passed"] == true);

    RunResult sample = run("sample " + witnessPath + " --trials 400 --seed 11 --format json");
    CHECK(sample.exitCode == 0);
    idforge::Json est = idforge::Json::parse(sample.output);
    CHECK(est["realization"]["trials"] == 400);
    CHECK(est["realization"]["freq"].is_number());
    CHECK(est["realization"]["exact"]["exact"].is_string());
    RunResult again = run("sample " + witnessPath + " --trials 400 --seed 11 --format json");
    CHECK(again.output == sample.output);

    std::string cnfPath = (scratch_dir() / "mono.cnf").string();
    std::string modelPath = (scratch_dir() / "mono.model").string();
    RunResult encode = run("encode " + params + " --budget 3 --out " + cnfPath +
                           " --solve --model-out " + modelPath);
    CHECK(encode.exitCode == 0);
    CHECK(encode.output.find("satisfiable") != std::string::npos);
    CHECK(read_file(modelPath).rfind("s SATISFIABLE", 0) == 0);

    std::string decodedPath = (scratch_dir() / "decoded_witness.json").string();
    RunResult decode = run("decode " + cnfPath + " " + modelPath + " --out " + decodedPath);
    CHECK(decode.exitCode == 0);
    RunResult verifyDecoded = run("verify " + decodedPath);
    CHECK(verifyDecoded.exitCode == 0);
}

TEST_CASE("failing instances exit 1 across subcommands") {
    std::string params = write_file("blocked_params.json", kBlockedParams);
    RunResult search = run("search " + params + " --budget 3");
    CHECK(search.exitCode == 1);
    CHECK(search.output.find("no witness") != std::string::npos);

    std::string cnfPath = (scratch_dir() / "blocked.cnf").string();
    RunResult encode = run("encode " + params + " --budget 3 --out " + cnfPath + " --solve");
    CHECK(encode.exitCode == 1);
    CHECK(encode.output.find("unsatisfiable") != std::string::npos);

    // a witness that fails the realization bound: single color everywhere
    idforge::Json w;
    w["schemaVersion"] = 1;
    w["identity"] = "3; 0-1,0-2,1-2";
    w["kappa"] = 3;
    w["lambda"] = 1;
    w["g"] = {1};
    w["f"] = {1};
    w["entries"] = idforge::Json::array();
    int gen = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            w["entries"].push_back({{"w", {i, j}},
                                    {"L", 1},
                                    {"gens", {gen++}},
                                    {"terms", {3}}});
    std::string failing = write_file("failing_witness.json", w.dump(2));
    RunResult verify = run("verify " + failing);
    CHECK(verify.exitCode == 1);
    CHECK(verify.output.find("FAIL") != std::string::npos);
}

TEST_CASE("resource and parse problems exit 2") {
    CHECK(run("verify /nonexistent.json").exitCode == 2);
    std::string junk = write_file("junk.json", "{\"schemaVersion\": 1");
    CHECK(run("verify " + junk).exitCode == 2);

    std::string params = write_file("big_params.json", R"({
      "schemaVersion": 1, "identity": "3; 0-1,0-2,1-2",
      "kappa": 3, "lambda": 1, "g": [2], "f": [1]
    })");
    CHECK(run("search " + params + " --budget 5").exitCode == 2);
    CHECK(run("search " + params).exitCode == 2); // --budget required
}

TEST_CASE("thread plumbing is validated") {
    std::string params = write_file("threads_params.json", kMonoParams);
    CHECK(run("search " + params + " --budget 3 --threads 2").exitCode == 0);
    CHECK(run("search " + params + " --budget 3 --threads 0").exitCode == 2);
    CHECK(run("search " + params + " --budget 3", "ID_FORGE_THREADS=2").exitCode == 0);
    CHECK(run("search " + params + " --budget 3", "ID_FORGE_THREADS=abc").exitCode == 2);
    CHECK(run("search " + params + " --budget 3", "ID_FORGE_THREADS=0").exitCode == 2);
}
