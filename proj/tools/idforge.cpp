// idforge — command-line front end for the identity-forcing toolkit.
//
// Subcommands cover the full pipeline: enumerating pair-coloring identities,
// checking realization, verifying and searching for witnesses, sampling
// random points against a witness, and round-tripping witness constraints
// through DIMACS CNF (encode / solve / decode).
//
// Exit codes: 0 = success (verified / found / satisfiable), 1 = a well-formed
// query with a negative answer (failed verification, no witness,
// unsatisfiable), 2 = usage, parse, or resource-limit errors.

#include "idforge/cnf.hpp"
#include "idforge/coloring.hpp"
#include "idforge/dpll.hpp"
#include "idforge/errors.hpp"
#include "idforge/identity.hpp"
#include "idforge/json_io.hpp"
#include "idforge/sampler.hpp"
#include "idforge/statement.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace idforge;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string measure_str(const DyadicMeasure& m) {
    std::ostringstream out;
    out << m.str() << " (" << m.to_double() << ")";
    return out.str();
}

std::string pair_str(VertexPair w) {
    return "{" + std::to_string(w.first) + "," + std::to_string(w.second) + "}";
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_witness_table(const StatementParams& p, const Witness& w) {
    std::cout << "identity " << p.identity.str() << "  kappa=" << p.kappa
              << " lambda=" << p.lambda << "\n";
    for (const auto& [key, entry] : w.entries) {
        std::cout << "  w=" << pair_str(key.first) << " L=" << key.second << "  gens=[";
        for (std::size_t k = 0; k < entry.gens.size(); ++k)
            std::cout << (k ? "," : "") << entry.gens[k].value;
        std::cout << "]  terms=[";
        for (std::size_t k = 0; k < entry.terms.size(); ++k)
            std::cout << (k ? "," : "") << entry.terms[k];
        std::cout << "]\n";
    }
}

void print_report_table(const VerificationReport& r) {
    if (r.structure_ok) {
        std::cout << "structure: ok\n";
    } else {
        std::cout << "structure: " << r.structural_issues.size() << " issue(s)\n";
        for (const auto& s : r.structural_issues)
            std::cout << "  " << s << "\n";
    }
    if (r.partitions_ok()) {
        std::cout << "partitions: ok\n";
    } else {
        std::cout << "partitions: " << r.partition_failures.size() << " failure(s)\n";
        for (const auto& s : r.partition_failures)
            std::cout << "  " << s << "\n";
    }
    std::cout << "level agreement: " << (r.c4_ok() ? "ok" : "FAILED") << " ("
              << r.c4.size() << " instance(s))\n";
    for (const C4Instance& i : r.c4)
        if (!i.pass)
            std::cout << "  w=" << pair_str(i.w) << " N=" << i.N << " L=" << i.L
                      << " value=" << measure_str(i.value)
                      << " threshold=" << measure_str(i.threshold) << "\n";
    std::cout << "realization bound: " << (r.c5_ok() ? "ok" : "FAILED") << " ("
              << r.c5.size() << " instance(s))\n";
    for (const C5Instance& i : r.c5)
        if (!i.pass) {
            std::cout << "  P={";
            for (std::size_t k = 0; k < i.P.size(); ++k)
                std::cout << (k ? "," : "") << i.P[k];
            std::cout << "} L=" << i.L << " value=" << measure_str(i.value)
                      << " bound=1/" << i.L << "\n";
        }
    std::cout << "result: " << (r.passed() ? "PASS" : "FAIL") << "\n";
    if (!r.passed())
        std::cout << "first failure: " << r.first_failure() << "\n";
}

struct Options {
    std::string format = "table";
    int threads = 1;

    bool json() const { return format == "json"; }
};

int run_identities(const Options& opt, int r, const std::string& mode, int depth) {
    std::vector<Identity> ids =
        mode == "j" ? j_identities(r, depth < 0 ? r : depth) : enumerate_identities(r);
    if (opt.json()) {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["r"] = r;
        j["mode"] = mode;
        if (mode == "j")
            j["depth"] = depth < 0 ? r : depth;
        j["count"] = ids.size();
        Json list = Json::array();
        for (const Identity& id : ids)
            list.push_back(id.str());
        j["identities"] = std::move(list);
        print_json(j);
    } else {
        for (const Identity& id : ids)
            std::cout << id.str() << "\n";
        std::cout << "count: " << ids.size() << "\n";
    }
    return 0;
}

int run_check(const Options& opt, const std::string& pathA, const std::string& pathB) {
    Coloring a = parse_coloring(read_file(pathA));
    Coloring b = parse_coloring(read_file(pathB));
    bool ab = realizes(a, b);
    bool ba = realizes(b, a);
    if (opt.json()) {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["aRealizesB"] = ab;
        j["bRealizesA"] = ba;
        j["equivalent"] = ab && ba;
        print_json(j);
    } else {
        std::cout << "A realizes B: " << (ab ? "yes" : "no") << "\n";
        std::cout << "B realizes A: " << (ba ? "yes" : "no") << "\n";
        std::cout << "equivalent: " << (ab && ba ? "yes" : "no") << "\n";
    }
    return 0;
}

int run_verify(const Options& opt, const std::string& witnessPath) {
    auto [params, witness] = load_witness(witnessPath);
    VerificationReport report = verify_witness(params, witness);
    if (opt.json())
        print_json(report_to_json(report));
    else
        print_report_table(report);
    return report.passed() ? 0 : 1;
}

int run_search(const Options& opt, const std::string& paramsPath, int budget,
               const std::string& outPath) {
    StatementParams params = load_params(paramsPath);
    std::optional<Witness> witness = search_witness(params, budget);
    if (!witness) {
        if (opt.json()) {
            Json j;
            j["schemaVersion"] = kSchemaVersion;
            j["found"] = false;
            print_json(j);
        } else {
            std::cout << "no witness within budget " << budget << "\n";
        }
        return 1;
    }
    Json doc = witness_to_json(params, *witness);
    if (!outPath.empty())
        save_text(outPath, doc.dump(2) + "\n");
    if (opt.json()) {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["found"] = true;
        j["witness"] = std::move(doc);
        print_json(j);
    } else {
        std::cout << "witness found (budget " << budget << ")\n";
        print_witness_table(params, *witness);
        if (!outPath.empty())
            std::cout << "written to " << outPath << "\n";
    }
    return 0;
}

int run_sample(const Options& opt, const std::string& witnessPath, std::uint64_t trials,
               std::uint64_t seed, std::vector<int> P, int L) {
    auto [params, witness] = load_witness(witnessPath);
    SamplePoint point = sample_point(seed, 0, touched_generators(witness));
    TrajectoryReport trajectory = limit_coloring(point, params, witness);

    const int r = params.identity.size();
    if (L <= 0)
        L = params.lambda;
    bool estimable = params.kappa >= r;
    if (P.empty() && estimable)
        for (int v = 0; v < r; ++v)
            P.push_back(v);
    std::optional<RealizationEstimate> estimate;
    if (!P.empty())
        estimate = estimate_realization_probability(params, witness, P, L, trials, seed);

    if (opt.json()) {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["seed"] = seed;
        j["pairs"] = trajectory_to_json(trajectory)["pairs"];
        j["realization"] = estimate ? estimate_to_json(*estimate) : Json(nullptr);
        print_json(j);
    } else {
        std::cout << "point trajectories (seed " << seed << ", trial 0):\n";
        for (const PairTrajectory& traj : trajectory.pairs) {
            std::cout << "  w=" << pair_str(traj.w) << " colors=";
            for (std::size_t k = 0; k < traj.colors.size(); ++k)
                std::cout << (k ? " " : "") << traj.colors[k];
            if (traj.stabilized_at > 0)
                std::cout << "  stabilized at level " << traj.stabilized_at << "\n";
            else
                std::cout << "  not stabilized\n";
        }
        if (estimate) {
            std::cout << "realization of " << params.identity.str() << " on P={";
            for (std::size_t k = 0; k < estimate->P.size(); ++k)
                std::cout << (k ? "," : "") << estimate->P[k];
            std::cout << "} at level " << estimate->L << ": " << estimate->hits << "/"
                      << estimate->trials << " = " << estimate->frequency
                      << "  exact " << measure_str(estimate->exact) << "\n";
        } else {
            std::cout << "realization estimate skipped: kappa=" << params.kappa
                      << " < identity size " << r << "\n";
        }
    }
    return 0;
}

int run_encode(const Options& opt, const std::string& paramsPath, int budget,
               const std::string& outPath, bool solve, const std::string& modelPath) {
    StatementParams params = load_params(paramsPath);
    CnfInstance instance = encode(params, budget);
    if (!outPath.empty())
        save_text(outPath, export_dimacs(instance));

    std::optional<std::vector<bool>> model;
    if (solve)
        model = solve_cnf(instance.var_count(), instance.clauses);

    if (opt.json()) {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["variables"] = instance.var_count();
        j["termChoiceVariables"] = instance.q_count();
        j["poolVariables"] = instance.pool_count();
        j["clauses"] = instance.clauses.size();
        if (solve)
            j["satisfiable"] = model.has_value();
        print_json(j);
    } else {
        std::cout << "variables: " << instance.var_count() << " ("
                  << instance.q_count() << " term choices, pool of "
                  << instance.pool_count() << ")\n";
        std::cout << "clauses: " << instance.clauses.size() << "\n";
        if (!outPath.empty())
            std::cout << "written to " << outPath << "\n";
        if (solve)
            std::cout << (model ? "satisfiable" : "unsatisfiable") << "\n";
    }
    if (solve && model && !modelPath.empty()) {
        std::ostringstream out;
        out << "s SATISFIABLE\nv";
        for (int v = 1; v <= instance.var_count(); ++v)
            out << " " << ((*model)[static_cast<std::size_t>(v)] ? v : -v);
        out << " 0\n";
        save_text(modelPath, out.str());
        if (!opt.json())
            std::cout << "model written to " << modelPath << "\n";
    }
    if (solve)
        return model ? 0 : 1;
    return 0;
}

int run_decode(const Options& opt, const std::string& cnfPath,
               const std::string& modelPath, const std::string& outPath) {
    CnfInstance instance = parse_dimacs(read_file(cnfPath));
    std::vector<int> literals = parse_model_literals(read_file(modelPath));
    Witness witness = decode(literals, instance);
    VerificationReport report = verify_witness(instance.params, witness);
    Json doc = witness_to_json(instance.params, witness);
    if (!outPath.empty())
        save_text(outPath, doc.dump(2) + "\n");
    if (opt.json()) {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["witness"] = std::move(doc);
        j["report"] = report_to_json(report);
        print_json(j);
    } else {
        print_witness_table(instance.params, witness);
        if (!outPath.empty())
            std::cout << "written to " << outPath << "\n";
        print_report_table(report);
    }
    return report.passed() ? 0 : 1;
}

int resolve_threads(const CLI::Option* opt, int fromFlag) {
    if (opt->count() > 0) {
        if (fromFlag < 1)
            throw ParseError("--threads must be at least 1");
        return fromFlag;
    }
    if (const char* env = std::getenv("ID_FORGE_THREADS")) {
        try {
            std::size_t used = 0;
            int v = std::stoi(env, &used);
            if (used != std::string(env).size() || v < 1)
                throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw ParseError("ID_FORGE_THREADS must be a positive integer, got \"" +
                             std::string(env) + "\"");
        }
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"identity-forcing toolkit: identities, witnesses, sampling, CNF"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    int threadsFlag = 1;
    CLI::Option* threadsOpt =
        app.add_option("--threads", threadsFlag,
                       "Worker cap (all subcommands currently run one worker); "
                       "defaults to ID_FORGE_THREADS when set, else 1")
            ->check(CLI::PositiveNumber);

    auto* cmdIdentities =
        app.add_subcommand("identities", "List canonical identities of a given size");
    int idR = 3;
    std::string idMode = "all";
    int idDepth = -1;
    cmdIdentities->add_option("--r", idR, "Coloring size (number of vertices)")
        ->required()
        ->check(CLI::Range(2, 5));
    cmdIdentities->add_option("--mode", idMode, "all identities, or j: those realized by meet colorings")
        ->check(CLI::IsMember({"all", "j"}));
    cmdIdentities->add_option("--depth", idDepth, "Word length for mode j (default r)");

    auto* cmdCheck =
        app.add_subcommand("check", "Compare two colorings for mutual realization");
    std::string checkA, checkB;
    cmdCheck->add_option("a", checkA, "First coloring file (\"i j c\" lines)")->required();
    cmdCheck->add_option("b", checkB, "Second coloring file")->required();

    auto* cmdVerify = app.add_subcommand("verify", "Verify a witness file");
    std::string verifyPath;
    cmdVerify->add_option("witness", verifyPath, "Witness JSON file")->required();

    auto* cmdSearch =
        app.add_subcommand("search", "Exhaustive witness search for a parameter file");
    std::string searchPath, searchOut;
    int searchBudget = 0;
    cmdSearch->add_option("params", searchPath, "Parameter JSON file")->required();
    cmdSearch->add_option("--budget", searchBudget, "Number of distinct generators")
        ->required()
        ->check(CLI::Range(0, 4));
    cmdSearch->add_option("--out", searchOut, "Write the witness JSON here");

    auto* cmdSample =
        app.add_subcommand("sample", "Sample random points against a witness");
    std::string samplePath;
    std::uint64_t sampleTrials = 1000, sampleSeed = 0;
    std::vector<int> sampleP;
    int sampleL = -1;
    cmdSample->add_option("witness", samplePath, "Witness JSON file")->required();
    cmdSample->add_option("--trials", sampleTrials, "Number of sampled points")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmdSample->add_option("--seed", sampleSeed, "Sampler seed")->required();
    cmdSample->add_option("--P", sampleP,
                          "Vertices whose pairs to test for realization "
                          "(default: the first r vertices)");
    cmdSample->add_option("--L", sampleL, "Level for the realization estimate (default lambda)");

    auto* cmdEncode =
        app.add_subcommand("encode", "Encode a parameter file as DIMACS CNF");
    std::string encodePath, encodeOut, encodeModelOut;
    int encodeBudget = 0;
    bool encodeSolve = false;
    cmdEncode->add_option("params", encodePath, "Parameter JSON file")->required();
    cmdEncode->add_option("--budget", encodeBudget,
                          "Generator budget recorded for downstream search comparisons")
        ->required()
        ->check(CLI::Range(0, 64));
    cmdEncode->add_option("--out", encodeOut, "Write the DIMACS file here")->required();
    cmdEncode->add_flag("--solve", encodeSolve, "Run the built-in solver on the result");
    cmdEncode->add_option("--model-out", encodeModelOut, "Write a satisfying model here")
        ->needs("--solve");

    auto* cmdDecode =
        app.add_subcommand("decode", "Decode a solver model back into a witness");
    std::string decodeCnf, decodeModel, decodeOut;
    cmdDecode->add_option("cnf", decodeCnf, "DIMACS file produced by encode")->required();
    cmdDecode->add_option("model", decodeModel, "Solver model file (\"v\" lines)")
        ->required();
    cmdDecode->add_option("--out", decodeOut, "Write the decoded witness JSON here");

    // let the global --format / --threads flags appear after the subcommand
    for (CLI::App* sub : {cmdIdentities, cmdCheck, cmdVerify, cmdSearch, cmdSample,
                          cmdEncode, cmdDecode})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        opt.threads = resolve_threads(threadsOpt, threadsFlag);
        if (cmdIdentities->parsed())
            return run_identities(opt, idR, idMode, idDepth);
        if (cmdCheck->parsed())
            return run_check(opt, checkA, checkB);
        if (cmdVerify->parsed())
            return run_verify(opt, verifyPath);
        if (cmdSearch->parsed())
            return run_search(opt, searchPath, searchBudget, searchOut);
        if (cmdSample->parsed())
            return run_sample(opt, samplePath, sampleTrials, sampleSeed, sampleP, sampleL);
        if (cmdEncode->parsed())
            return run_encode(opt, encodePath, encodeBudget, encodeOut, encodeSolve,
                              encodeModelOut);
        if (cmdDecode->parsed())
            return run_decode(opt, decodeCnf, decodeModel, decodeOut);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
