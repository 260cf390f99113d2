#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpdp/fitness.hpp"
#include "dpdp/simulator.hpp"
#include "dpdp/world.hpp"

namespace dpdp {

/// Shortest round-trip digits laid out like java.lang.Double.toString:
/// plain decimal in [1e-3, 1e7), otherwise d.dddE<exp>. Always has a '.'.
std::string format_java_double(double x);

/// Shortest round-trip decimal with '.' separator, no exponent padding.
std::string format_number(double x);

/// "(Move S2,false)", "(Take S2,Art2,150,false)", "(ChargeBattery C1,true)".
std::string format_action(const Action& a);

/// Label followed by '=' and every action back to back.
std::string format_plan_listing(std::string_view label, std::span<const Action> actions);

/// "F_C1 =<f1> F_C2 =<f2> F_A =<aggregate>".
std::string format_fitness_line(const FitnessBreakdown& f);

/// Header plus one row per (trace record, agent).
std::string trace_csv(std::span<const TraceRecord> trace);

nlohmann::ordered_json breakdown_json(const FitnessBreakdown& f);
nlohmann::ordered_json results_json(const RunResult& result, std::string_view scenario_name,
                                     std::uint64_t seed);

struct SvgStyle {
  double view_size = 1000.0;  // longer side of the viewBox
  double margin = 20.0;
  std::vector<std::string> agent_colors{"red", "blue", "green", "orange", "purple", "brown"};
};

/// Final world markers plus one polyline per agent through its traced positions.
std::string render_svg(const World& world, std::span<const TraceRecord> trace, const SvgStyle& style = {});

/// Writes to a sibling temporary file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace dpdp
