#pragma once

// JSON documents for problems, allocations, scenario configs and reports,
// and the per-round CSV. Every parse error is an Error{invalid_input}.

#include <string>

#include <json.hpp>

#include "psq/model.hpp"
#include "psq/scenario.hpp"
#include "psq/sim.hpp"

namespace psq::io {

using Json = nlohmann::json;

/// %.12g; non-finite values as "nan", "inf", "-inf".
std::string format_number(double v);

/// Parses text; malformed JSON throws Error{invalid_input}.
Json parse(const std::string& text);
Json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Rounds every floating-point number to 12 significant digits (non-finite
/// ones become null) and dumps with two-space indentation.
std::string dump(const Json& doc);

AllocationProblem problem_from_json(const Json& doc);
Json to_json(const AllocationProblem& problem);

Json to_json(const Allocation& allocation, const std::string& scheme);

ScenarioConfig config_from_json(const Json& doc);
Json to_json(const ScenarioConfig& config);

Json to_json(const ExperimentReport& report);

/// round,scheme,welfare,jain,over_provision_count,q_ext
std::string records_csv(const ExperimentReport& report);

}  // namespace psq::io
