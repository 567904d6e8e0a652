#include "idforge/json_io.hpp"

#include "idforge/errors.hpp"

#include <fstream>
#include <sstream>

namespace idforge {

namespace {

// Shape-checked field access translating JSON mishaps into ParseError.
const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError(std::string("missing field \"") + name + "\"");
    return *it;
}

int int_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer())
        throw ParseError(std::string("field \"") + name + "\" must be an integer");
    return v.get<int>();
}

std::vector<int> int_list(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_array())
        throw ParseError(std::string("field \"") + name + "\" must be an array");
    std::vector<int> out;
    for (const Json& e : v) {
        if (!e.is_number_integer())
            throw ParseError(std::string("field \"") + name + "\" must hold integers");
        out.push_back(e.get<int>());
    }
    return out;
}

Json measure_json(const DyadicMeasure& m) {
    return Json{{"exact", m.str()}, {"approx", m.to_double()}};
}

} // namespace

Json params_to_json(const StatementParams& p) {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["identity"] = p.identity.str();
    j["kappa"] = p.kappa;
    j["lambda"] = p.lambda;
    j["g"] = p.g;
    j["f"] = p.f;
    return j;
}

StatementParams params_from_json(const Json& j) {
    if (!j.is_object())
        throw ParseError("parameter document must be a JSON object");
    if (j.contains("schemaVersion") && int_field(j, "schemaVersion") != kSchemaVersion)
        throw ParseError("unsupported schemaVersion (expected " +
                         std::to_string(kSchemaVersion) + ")");
    const Json& id = field(j, "identity");
    if (!id.is_string())
        throw ParseError("field \"identity\" must be a string");
    StatementParams p;
    p.identity = Identity::parse(id.get<std::string>());
    p.kappa = int_field(j, "kappa");
    p.lambda = int_field(j, "lambda");
    p.g = int_list(j, "g");
    p.f = int_list(j, "f");
    p.validate();
    return p;
}

Json witness_to_json(const StatementParams& p, const Witness& w) {
    Json j = params_to_json(p);
    Json entries = Json::array();
    for (const auto& [key, entry] : w.entries) {
        Json e;
        e["w"] = Json::array({key.first.first, key.first.second});
        e["L"] = key.second;
        Json gens = Json::array();
        for (GeneratorId g : entry.gens)
            gens.push_back(g.value);
        e["gens"] = std::move(gens);
        e["terms"] = entry.terms;
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

std::pair<StatementParams, Witness> witness_from_json(const Json& j) {
    StatementParams p = params_from_json(j);
    const Json& entries = field(j, "entries");
    if (!entries.is_array())
        throw ParseError("field \"entries\" must be an array");
    Witness w;
    for (const Json& e : entries) {
        std::vector<int> pairIdx = int_list(e, "w");
        if (pairIdx.size() != 2)
            throw ParseError("entry field \"w\" must hold two vertices");
        VertexPair pr{pairIdx[0], pairIdx[1]};
        int L = int_field(e, "L");
        WitnessEntry entry;
        for (int g : int_list(e, "gens")) {
            if (g < 0)
                throw ParseError("generator ids must be non-negative");
            entry.gens.push_back(GeneratorId{static_cast<std::uint32_t>(g)});
        }
        const Json& terms = field(e, "terms");
        if (!terms.is_array())
            throw ParseError("entry field \"terms\" must be an array");
        for (const Json& t : terms) {
            if (!t.is_number_integer() || t.get<std::int64_t>() < 0)
                throw ParseError("term indices must be non-negative integers");
            entry.terms.push_back(t.get<std::uint64_t>());
        }
        if (w.entries.count({pr, L}))
            throw ParseError("duplicate entry for pair {" + std::to_string(pr.first) +
                             "," + std::to_string(pr.second) + "} at level " +
                             std::to_string(L));
        w.entries[{pr, L}] = std::move(entry);
    }
    return {std::move(p), std::move(w)};
}

Json report_to_json(const VerificationReport& r) {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["passed"] = r.passed();
    j["structureOk"] = r.structure_ok;
    j["structuralIssues"] = r.structural_issues;
    j["partitionFailures"] = r.partition_failures;
    Json c4 = Json::array();
    for (const C4Instance& i : r.c4) {
        Json e;
        e["w"] = Json::array({i.w.first, i.w.second});
        e["N"] = i.N;
        e["L"] = i.L;
        e["value"] = measure_json(i.value);
        e["threshold"] = measure_json(i.threshold);
        e["pass"] = i.pass;
        c4.push_back(std::move(e));
    }
    j["c4"] = std::move(c4);
    Json c5 = Json::array();
    for (const C5Instance& i : r.c5) {
        Json e;
        e["P"] = i.P;
        e["L"] = i.L;
        e["value"] = measure_json(i.value);
        e["bound"] = "1/" + std::to_string(i.L);
        e["pass"] = i.pass;
        c5.push_back(std::move(e));
    }
    j["c5"] = std::move(c5);
    j["firstFailure"] = r.first_failure();
    return j;
}

Json trajectory_to_json(const TrajectoryReport& t) {
    Json pairs = Json::array();
    for (const PairTrajectory& traj : t.pairs) {
        Json e;
        e["w"] = Json::array({traj.w.first, traj.w.second});
        e["colors"] = traj.colors;
        if (traj.stabilized_at > 0)
            e["stabilizedAt"] = traj.stabilized_at;
        else
            e["stabilizedAt"] = nullptr;
        pairs.push_back(std::move(e));
    }
    return Json{{"pairs", std::move(pairs)}};
}

Json estimate_to_json(const RealizationEstimate& e) {
    Json j;
    j["P"] = e.P;
    j["L"] = e.L;
    j["freq"] = e.frequency;
    j["exact"] = measure_json(e.exact);
    j["trials"] = e.trials;
    j["seed"] = e.seed;
    j["hits"] = e.hits;
    return j;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(path + ": " + err.what());
    }
}

StatementParams load_params(const std::string& path) {
    Json j = load_json(path);
    try {
        return params_from_json(j);
    } catch (const ParseError& err) {
        throw ParseError(path + ": " + err.what());
    }
}

std::pair<StatementParams, Witness> load_witness(const std::string& path) {
    Json j = load_json(path);
    try {
        return witness_from_json(j);
    } catch (const ParseError& err) {
        throw ParseError(path + ": " + err.what());
    }
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path);
    out << text;
    if (!out)
        throw ParseError("write failed for " + path);
}

} // namespace idforge
