#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgp/crowd_sim.hpp"

namespace pgp {

/// Current version stamped into the schema_version column of every output
/// file.
inline constexpr int kSchemaVersion = 1;

/// Parses a scenario config file (JSON). Missing fields keep their defaults;
/// unknown or ill-typed fields raise ContractViolation naming the field.
ScenarioConfig load_scenario_config(const std::string& path);
ScenarioConfig parse_scenario_config(const std::string& text);

/// Density sweep description for the benchmark runner.
struct SweepSpec {
  std::vector<double> densities{0.01, 0.1, 0.2, 0.3, 0.4, 0.5,
                                0.6,  0.7, 0.8, 0.9, 1.0};
  int seeds_per_cell = 100;
  std::vector<PlannerStack> planners = all_planner_stacks();
  std::uint64_t master_seed = 1;
  std::string output_dir;  // optional; CLI flag and env var take precedence
  ScenarioConfig scenario; // shared base; density/seed/planner set per cell

  void validate() const;
};

SweepSpec load_sweep_spec(const std::string& path);
SweepSpec parse_sweep_spec(const std::string& text);

/// Formats a double deterministically for the DSV outputs.
std::string fmt_double(double v);

/// Writes the per-step trace: one header row, then one row per step with
/// time, per-agent position and velocity, ego flags and the active subgoal.
void write_trace(const RunRecord& record, const std::string& path);

/// Single-line JSON with the run's metrics, for the CLI.
std::string metrics_json_line(const RunRecord& record);

}  // namespace pgp
