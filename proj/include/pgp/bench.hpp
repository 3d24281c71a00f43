#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgp/io.hpp"
#include "pgp/metrics.hpp"

namespace pgp {

/// One completed (planner, density, seed) cell.
struct RunRow {
  std::string planner;
  int density_index = 0;
  double density = 0.0;
  int seed_index = 0;
  std::uint64_t cell_seed = 0;
  std::string outcome;  // "reached", "timeout" or "error"
  MetricsRecord metrics;
};

/// Seed shared by every planner for one (density, seed) cell.
std::uint64_t cell_seed(std::uint64_t master_seed, int density_index, int seed_index);

/// Runs all cells of the sweep with `jobs` workers. Completed rows are
/// journaled immediately (runs_journal.csv) so an interrupted sweep resumes
/// where it stopped when `resume` is set. Returns rows sorted by
/// (planner, density, seed) regardless of completion order.
std::vector<RunRow> run_sweep(const SweepSpec& spec, const std::string& out_dir,
                              int jobs, bool resume);

/// Writes runs.csv and aggregate.csv from sorted rows.
void write_sweep_tables(const std::vector<RunRow>& rows, const std::string& out_dir);

std::vector<RunRow> read_runs_table(const std::string& path);

/// Renders per-metric mean/CI tables and the paired significance table from a
/// completed sweep directory. Missing cells show up as NA.
void write_report(const std::string& in_dir, const std::string& out_dir);

}  // namespace pgp
