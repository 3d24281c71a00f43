#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pgp/bench.hpp"
#include "pgp/core.hpp"
#include "pgp/io.hpp"

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed,
            const std::string& trace_out) {
  pgp::ScenarioConfig config = pgp::load_scenario_config(config_path);
  config.seed = seed;
  const pgp::RunRecord record = pgp::run_scenario(config);
  if (!trace_out.empty()) pgp::write_trace(record, trace_out);
  std::cout << pgp::metrics_json_line(record) << '\n';
  return 0;
}

int cmd_sweep(const std::string& spec_path, std::string out_dir, int jobs, bool resume) {
  const pgp::SweepSpec spec = pgp::load_sweep_spec(spec_path);
  if (out_dir.empty()) out_dir = spec.output_dir;
  if (out_dir.empty()) {
    const char* env = std::getenv("PGP_BENCH_OUT");
    if (env != nullptr) out_dir = env;
  }
  pgp::require(!out_dir.empty(),
               "output_dir: not set (use --out, the spec file, or PGP_BENCH_OUT)");
  const std::vector<pgp::RunRow> rows = pgp::run_sweep(spec, out_dir, jobs, resume);
  pgp::write_sweep_tables(rows, out_dir);
  pgp::write_report(out_dir, out_dir);
  std::cerr << "sweep: wrote tables to " << out_dir << '\n';
  return 0;
}

int cmd_report(const std::string& in_dir, std::string out_dir) {
  if (out_dir.empty()) out_dir = in_dir;
  pgp::write_report(in_dir, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowd navigation benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_out;
  std::string spec_path;
  std::string out_dir;
  std::string in_dir;
  std::uint64_t seed = 0;
  int jobs = std::max(1u, std::thread::hardware_concurrency());
  bool resume = false;

  CLI::App* run = app.add_subcommand("run", "run one scenario and print its metrics");
  run->add_option("--config", config_path, "scenario config JSON")->required();
  run->add_option("--seed", seed, "scenario seed (overrides the config)")->required();
  run->add_option("--trace", trace_out, "write the per-step trace CSV here");

  CLI::App* sweep = app.add_subcommand("sweep", "run a planner x density x seed sweep");
  sweep->add_option("--spec", spec_path, "sweep spec JSON")->required();
  sweep->add_option("--out", out_dir,
                    "output directory (falls back to the spec, then $PGP_BENCH_OUT)");
  sweep->add_option("--jobs", jobs, "parallel workers")->capture_default_str();
  sweep->add_flag("--resume", resume, "skip cells already recorded in the journal");

  CLI::App* report = app.add_subcommand("report", "rebuild summary tables from a sweep");
  report->add_option("--in", in_dir, "directory holding runs.csv")->required();
  report->add_option("--out", out_dir, "output directory (defaults to --in)");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, seed, trace_out);
    if (sweep->parsed()) return cmd_sweep(spec_path, out_dir, jobs, resume);
    return cmd_report(in_dir, out_dir);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const pgp::ContractViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
