#pragma once

#include "idforge/sampler.hpp"
#include "idforge/statement.hpp"

#include <json.hpp>

#include <string>
#include <utility>

namespace idforge {

// Insertion-ordered JSON keeps emitted documents byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// {"schemaVersion", "identity", "kappa", "lambda", "g", "f"}
Json params_to_json(const StatementParams& p);
StatementParams params_from_json(const Json& j); // ParseError on bad shape

// Parameters plus "entries": [{"w": [i,j], "L", "gens", "terms"}, ...]
Json witness_to_json(const StatementParams& p, const Witness& w);
std::pair<StatementParams, Witness> witness_from_json(const Json& j);

Json report_to_json(const VerificationReport& r);
Json trajectory_to_json(const TrajectoryReport& t); // stabilizedAt: null when unseen
Json estimate_to_json(const RealizationEstimate& e);

// ParseError on unreadable files or malformed JSON.
Json load_json(const std::string& path);
StatementParams load_params(const std::string& path);
std::pair<StatementParams, Witness> load_witness(const std::string& path);
void save_text(const std::string& path, const std::string& text);

} // namespace idforge
