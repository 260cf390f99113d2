#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dpdp/fitness.hpp"
#include "dpdp/ga.hpp"
#include "dpdp/scenario.hpp"
#include "dpdp/simulator.hpp"

namespace dpdp {

/// A scenario file: the world and its timeline plus GA and simulation
/// defaults. The JSON schema is described in README.md.
struct ScenarioDocument {
  Scenario scenario;
  GaConfig ga;
  FitnessConfig fitness;
  SimConfig sim;

  bool operator==(const ScenarioDocument&) const = default;
};

/// Throws ParseError for malformed JSON or wrongly typed fields and
/// ValidationError for semantic problems.
ScenarioDocument parse_scenario(std::string_view json_text);
ScenarioDocument load_scenario(const std::filesystem::path& path);

/// Pretty-printed JSON; parse_scenario(write_scenario(d)) == d.
std::string write_scenario(const ScenarioDocument& doc);

/// Cross-reference and range checks. Throws ValidationError naming the
/// offending field.
void validate(const ScenarioDocument& doc);

}  // namespace dpdp
