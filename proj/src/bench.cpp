#include "pgp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "pgp/rng.hpp"

namespace pgp {
namespace {

constexpr const char* kRunHeader =
    "schema_version,planner,density_index,density,seed_index,cell_seed,outcome,"
    "time_to_target,path_length,collision_rate_moving,svr_moving,avg_social_force";

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{
      "time_to_target", "path_length", "collision_rate_moving", "svr_moving",
      "avg_social_force"};
  return names;
}

double metric_value(const MetricsRecord& m, const std::string& name) {
  if (name == "time_to_target") return m.time_to_target;
  if (name == "path_length") return m.path_length;
  if (name == "collision_rate_moving") return m.collision_rate_moving;
  if (name == "svr_moving") return m.svr_moving;
  return m.avg_social_force;
}

std::string format_run_row(const RunRow& r) {
  std::ostringstream os;
  os << kSchemaVersion << ',' << r.planner << ',' << r.density_index << ','
     << fmt_double(r.density) << ',' << r.seed_index << ',' << r.cell_seed << ','
     << r.outcome;
  if (r.outcome == "error") {
    os << ",NA,NA,NA,NA,NA";
  } else {
    os << ',' << fmt_double(r.metrics.time_to_target) << ','
       << fmt_double(r.metrics.path_length) << ','
       << fmt_double(r.metrics.collision_rate_moving) << ','
       << fmt_double(r.metrics.svr_moving) << ','
       << fmt_double(r.metrics.avg_social_force);
  }
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

double parse_metric(const std::string& s) {
  return s == "NA" ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
}

int planner_rank(const std::string& name) {
  const std::vector<PlannerStack> stacks = all_planner_stacks();
  for (std::size_t i = 0; i < stacks.size(); ++i) {
    if (planner_name(stacks[i]) == name) return static_cast<int>(i);
  }
  return static_cast<int>(stacks.size());
}

void sort_rows(std::vector<RunRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::make_tuple(planner_rank(a.planner), a.planner, a.density_index,
                           a.seed_index) <
           std::make_tuple(planner_rank(b.planner), b.planner, b.density_index,
                           b.seed_index);
  });
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double sum = 0.0;
  for (double x : v) sum += square(x - m);
  return std::sqrt(sum / static_cast<double>(v.size() - 1));
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, int density_index, int seed_index) {
  // The planner is deliberately absent: every stack must face the same crowd.
  return mix_seed(mix_seed(master_seed, static_cast<std::uint64_t>(density_index)),
                  static_cast<std::uint64_t>(seed_index));
}

std::vector<RunRow> read_runs_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty table");
  if (line != kRunHeader) throw std::runtime_error(path + ": unrecognized header");

  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 12) throw std::runtime_error(path + ": malformed row: " + line);
    RunRow r;
    r.planner = f[1];
    r.density_index = std::stoi(f[2]);
    r.density = std::stod(f[3]);
    r.seed_index = std::stoi(f[4]);
    r.cell_seed = std::stoull(f[5]);
    r.outcome = f[6];
    r.metrics.time_to_target = parse_metric(f[7]);
    r.metrics.path_length = parse_metric(f[8]);
    r.metrics.collision_rate_moving = parse_metric(f[9]);
    r.metrics.svr_moving = parse_metric(f[10]);
    r.metrics.avg_social_force = parse_metric(f[11]);
    r.metrics.outcome = r.outcome == "reached" ? Outcome::kReached : Outcome::kTimeout;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<RunRow> run_sweep(const SweepSpec& spec, const std::string& out_dir,
                              int jobs, bool resume) {
  spec.validate();
  std::filesystem::create_directories(out_dir);
  const std::string journal_path = out_dir + "/runs_journal.csv";

  std::vector<RunRow> rows;
  std::set<std::tuple<std::string, int, int>> completed;
  const bool fresh = !resume || !std::filesystem::exists(journal_path);
  if (!fresh) {
    rows = read_runs_table(journal_path);
    for (const RunRow& r : rows) {
      completed.insert({r.planner, r.density_index, r.seed_index});
    }
  }

  struct Task {
    PlannerStack stack;
    int density_index;
    int seed_index;
  };
  std::vector<Task> tasks;
  for (const PlannerStack& stack : spec.planners) {
    const std::string name = planner_name(stack);
    for (int di = 0; di < static_cast<int>(spec.densities.size()); ++di) {
      for (int si = 0; si < spec.seeds_per_cell; ++si) {
        if (!completed.count({name, di, si})) tasks.push_back({stack, di, si});
      }
    }
  }

  std::ofstream journal(journal_path,
                        fresh ? std::ios::trunc : (std::ios::app | std::ios::ate));
  if (!journal) throw std::runtime_error("cannot open " + journal_path + " for writing");
  if (fresh) journal << kRunHeader << '\n' << std::flush;

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::size_t finished = rows.size();
  const std::size_t total = tasks.size() + rows.size();

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];

      RunRow row;
      row.planner = planner_name(task.stack);
      row.density_index = task.density_index;
      row.density = spec.densities[task.density_index];
      row.seed_index = task.seed_index;
      row.cell_seed = cell_seed(spec.master_seed, task.density_index, task.seed_index);
      std::string error;
      try {
        ScenarioConfig config = spec.scenario;
        config.density = row.density;
        config.seed = row.cell_seed;
        config.planner = task.stack;
        const RunRecord record = run_scenario(config);
        row.metrics = compute_metrics(record);
        row.outcome = record.outcome == Outcome::kReached ? "reached" : "timeout";
      } catch (const std::exception& e) {
        row.outcome = "error";
        error = e.what();
      }

      std::lock_guard<std::mutex> lock(mu);
      journal << format_run_row(row) << '\n' << std::flush;
      rows.push_back(row);
      ++finished;
      if (!error.empty()) {
        std::cerr << "sweep: " << row.planner << " density " << fmt_double(row.density)
                  << " seed " << row.seed_index << " failed: " << error << '\n';
      } else if (finished % 25 == 0 || finished == total) {
        std::cerr << "sweep: " << finished << "/" << total << " runs done\n";
      }
    }
  };

  const int n_workers = std::max(1, jobs);
  if (n_workers <= 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(n_workers, tasks.size());
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  sort_rows(rows);
  return rows;
}

void write_sweep_tables(const std::vector<RunRow>& rows, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::ofstream runs(out_dir + "/runs.csv", std::ios::trunc);
  if (!runs) throw std::runtime_error("cannot write " + out_dir + "/runs.csv");
  runs << kRunHeader << '\n';
  for (const RunRow& r : rows) runs << format_run_row(r) << '\n';

  std::ofstream agg(out_dir + "/aggregate.csv", std::ios::trunc);
  if (!agg) throw std::runtime_error("cannot write " + out_dir + "/aggregate.csv");
  agg << "schema_version,planner,density_index,density,runs,reached,success_rate,"
         "time_to_target_mean,time_to_target_sd,time_to_target_mean_reached,"
         "path_length_mean,path_length_sd,collision_rate_mean,collision_rate_sd,"
         "svr_mean,svr_sd,social_force_mean,social_force_sd\n";

  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].planner == rows[i].planner &&
           rows[j].density_index == rows[i].density_index) {
      ++j;
    }
    int reached = 0;
    std::vector<double> time, time_reached, path, collision, svr_v, force;
    int valid = 0;
    for (std::size_t k = i; k < j; ++k) {
      if (rows[k].outcome == "error") continue;
      ++valid;
      time.push_back(rows[k].metrics.time_to_target);
      path.push_back(rows[k].metrics.path_length);
      collision.push_back(rows[k].metrics.collision_rate_moving);
      svr_v.push_back(rows[k].metrics.svr_moving);
      force.push_back(rows[k].metrics.avg_social_force);
      if (rows[k].outcome == "reached") {
        ++reached;
        time_reached.push_back(rows[k].metrics.time_to_target);
      }
    }
    agg << kSchemaVersion << ',' << rows[i].planner << ',' << rows[i].density_index
        << ',' << fmt_double(rows[i].density) << ',' << (j - i) << ',' << reached << ','
        << fmt_double(valid > 0 ? static_cast<double>(reached) / valid : 0.0);
    if (valid == 0) {
      agg << ",NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA";
    } else {
      agg << ',' << fmt_double(mean(time)) << ',' << fmt_double(sample_sd(time)) << ','
          << (time_reached.empty() ? std::string("NA") : fmt_double(mean(time_reached)))
          << ',' << fmt_double(mean(path)) << ',' << fmt_double(sample_sd(path)) << ','
          << fmt_double(mean(collision)) << ',' << fmt_double(sample_sd(collision))
          << ',' << fmt_double(mean(svr_v)) << ',' << fmt_double(sample_sd(svr_v))
          << ',' << fmt_double(mean(force)) << ',' << fmt_double(sample_sd(force));
    }
    agg << '\n';
    i = j;
  }
}

void write_report(const std::string& in_dir, const std::string& out_dir) {
  std::vector<RunRow> rows;
  if (std::filesystem::exists(in_dir + "/runs.csv")) {
    rows = read_runs_table(in_dir + "/runs.csv");
  } else {
    rows = read_runs_table(in_dir + "/runs_journal.csv");
    sort_rows(rows);
  }
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> planners;
  std::map<int, double> densities;
  for (const RunRow& r : rows) {
    if (std::find(planners.begin(), planners.end(), r.planner) == planners.end()) {
      planners.push_back(r.planner);
    }
    densities[r.density_index] = r.density;
  }
  std::sort(planners.begin(), planners.end(), [](const std::string& a, const std::string& b) {
    return std::make_pair(planner_rank(a), a) < std::make_pair(planner_rank(b), b);
  });

  // cell -> rows, keyed by planner and density index
  std::map<std::pair<std::string, int>, std::vector<const RunRow*>> cells;
  for (const RunRow& r : rows) {
    if (r.outcome == "error") continue;
    cells[{r.planner, r.density_index}].push_back(&r);
  }

  for (const std::string& metric : metric_names()) {
    std::ofstream out(out_dir + "/report_" + metric + ".csv", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report_" + metric + ".csv");
    out << "schema_version,density";
    for (const std::string& p : planners) out << ',' << p << "_mean," << p << "_ci95";
    out << '\n';
    for (const auto& [di, density] : densities) {
      out << kSchemaVersion << ',' << fmt_double(density);
      for (const std::string& p : planners) {
        const auto it = cells.find({p, di});
        if (it == cells.end() || it->second.empty()) {
          out << ",NA,NA";
          continue;
        }
        std::vector<double> vals;
        for (const RunRow* r : it->second) vals.push_back(metric_value(r->metrics, metric));
        const double ci = 1.96 * sample_sd(vals) / std::sqrt(static_cast<double>(vals.size()));
        out << ',' << fmt_double(mean(vals)) << ',' << fmt_double(ci);
      }
      out << '\n';
    }
  }

  std::ofstream sig(out_dir + "/significance.csv", std::ios::trunc);
  if (!sig) throw std::runtime_error("cannot write significance.csv");
  sig << "schema_version,metric,baseline,density,n_pairs,p_value\n";
  for (const std::string& metric : metric_names()) {
    for (const char* base_name : {"dwa", "orca", "sf"}) {
      const std::string base = base_name;
      const std::string pgp = "pgp_" + base;
      if (std::find(planners.begin(), planners.end(), base) == planners.end() ||
          std::find(planners.begin(), planners.end(), pgp) == planners.end()) {
        continue;
      }
      std::vector<double> pooled_a, pooled_b;
      for (const auto& [di, density] : densities) {
        std::map<int, double> base_by_seed;
        const auto bit = cells.find({base, di});
        if (bit != cells.end()) {
          for (const RunRow* r : bit->second) {
            base_by_seed[r->seed_index] = metric_value(r->metrics, metric);
          }
        }
        std::vector<double> a, b;
        const auto pit = cells.find({pgp, di});
        if (pit != cells.end()) {
          for (const RunRow* r : pit->second) {
            const auto match = base_by_seed.find(r->seed_index);
            if (match == base_by_seed.end()) continue;
            a.push_back(metric_value(r->metrics, metric));
            b.push_back(match->second);
          }
        }
        pooled_a.insert(pooled_a.end(), a.begin(), a.end());
        pooled_b.insert(pooled_b.end(), b.begin(), b.end());
        sig << kSchemaVersion << ',' << metric << ',' << base << ','
            << fmt_double(density) << ',' << a.size() << ',';
        sig << (a.size() >= 5 ? fmt_double(wilcoxon_paired(a, b)) : std::string("NA"));
        sig << '\n';
      }
      sig << kSchemaVersion << ',' << metric << ',' << base << ",pooled,"
          << pooled_a.size() << ',';
      sig << (pooled_a.size() >= 5 ? fmt_double(wilcoxon_paired(pooled_a, pooled_b))
                                   : std::string("NA"));
      sig << '\n';
    }
  }
}

}  // namespace pgp
