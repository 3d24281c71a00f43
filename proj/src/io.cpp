#include "pgp/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pgp/metrics.hpp"

namespace pgp {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ContractViolation(field + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min(e.byte, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ContractViolation(what + ": parse error at line " + std::to_string(line) +
                            ": " + e.what());
  }
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

std::uint64_t as_seed(const json& v, const std::string& field) {
  if (!(v.is_number_integer() || v.is_number_unsigned())) {
    fail(field, "expected an integer");
  }
  if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
    fail(field, "must be non-negative");
  }
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) out.push_back(as_number(e, field));
  return out;
}

using FieldMap = std::map<std::string, std::function<void(const json&)>>;

void apply_object(const json& obj, const std::string& scope, const FieldMap& fields) {
  if (!obj.is_object()) fail(scope.empty() ? "config" : scope, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const auto f = fields.find(it.key());
    if (f == fields.end()) fail(scope + it.key(), "unknown field");
    f->second(it.value());
  }
}

void parse_scenario_into(const json& j, const std::string& scope, ScenarioConfig& c) {
  const auto num = [scope](const char* name) { return scope + name; };

  FieldMap pgp_fields{
      {"horizon_T", [&](const json& v) { c.pgp.horizon_T = as_number(v, num("pgp.horizon_T")); }},
      {"rate", [&](const json& v) { c.pgp.rate = as_number(v, num("pgp.rate")); }},
      {"v_max", [&](const json& v) { c.pgp.v_max = as_number(v, num("pgp.v_max")); }},
      {"d_turned", [&](const json& v) { c.pgp.d_turned = as_number(v, num("pgp.d_turned")); }},
      {"fan_angles_deg",
       [&](const json& v) {
         c.pgp.fan_angles.clear();
         for (double deg : as_number_list(v, num("pgp.fan_angles_deg"))) {
           c.pgp.fan_angles.push_back(deg2rad(deg));
         }
       }},
      {"outside_fractions",
       [&](const json& v) {
         c.pgp.outside_fractions = as_number_list(v, num("pgp.outside_fractions"));
       }},
      {"turn_slowdown_threshold_deg",
       [&](const json& v) {
         c.pgp.turn_slowdown_threshold =
             deg2rad(as_number(v, num("pgp.turn_slowdown_threshold_deg")));
       }},
      {"max_turn_rate",
       [&](const json& v) { c.pgp.max_turn_rate = as_number(v, num("pgp.max_turn_rate")); }},
  };

  FieldMap sigma_fields{
      {"sigma0",
       [&](const json& v) { c.sigma_growth.sigma0 = as_number(v, num("sigma_growth.sigma0")); }},
      {"cap_multiplier",
       [&](const json& v) {
         c.sigma_growth.cap_multiplier = as_number(v, num("sigma_growth.cap_multiplier"));
       }},
      {"cap_speed_gain",
       [&](const json& v) {
         c.sigma_growth.cap_speed_gain = as_number(v, num("sigma_growth.cap_speed_gain"));
       }},
      {"per_step_gain",
       [&](const json& v) {
         c.sigma_growth.per_step_gain = as_number(v, num("sigma_growth.per_step_gain"));
       }},
  };

  FieldMap risk_fields{
      {"p_escape",
       [&](const json& v) { c.risk.p_escape = as_number(v, num("risk.p_escape")); }},
  };

  FieldMap sf_fields{
      {"v_max", [&](const json& v) { c.sf.v_max = as_number(v, num("sf.v_max")); }},
      {"strength", [&](const json& v) { c.sf.strength = as_number(v, num("sf.strength")); }},
      {"lambda", [&](const json& v) { c.sf.lambda = as_number(v, num("sf.lambda")); }},
      {"gamma", [&](const json& v) { c.sf.gamma = as_number(v, num("sf.gamma")); }},
      {"n", [&](const json& v) { c.sf.n = as_number(v, num("sf.n")); }},
      {"n_prime", [&](const json& v) { c.sf.n_prime = as_number(v, num("sf.n_prime")); }},
      {"relaxation_time",
       [&](const json& v) { c.sf.relaxation_time = as_number(v, num("sf.relaxation_time")); }},
      {"goal_threshold",
       [&](const json& v) { c.sf.goal_threshold = as_number(v, num("sf.goal_threshold")); }},
  };

  FieldMap group_fields{
      {"coherence_factor",
       [&](const json& v) {
         c.group_forces.coherence_factor = as_number(v, num("group_forces.coherence_factor"));
       }},
      {"repulsion_factor",
       [&](const json& v) {
         c.group_forces.repulsion_factor = as_number(v, num("group_forces.repulsion_factor"));
       }},
      {"repulsion_threshold",
       [&](const json& v) {
         c.group_forces.repulsion_threshold =
             as_number(v, num("group_forces.repulsion_threshold"));
       }},
      {"gaze_factor",
       [&](const json& v) {
         c.group_forces.gaze_factor = as_number(v, num("group_forces.gaze_factor"));
       }},
  };

  FieldMap dwa_fields{
      {"t_plan", [&](const json& v) { c.dwa.t_plan = as_number(v, num("dwa.t_plan")); }},
      {"dt", [&](const json& v) { c.dwa.dt = as_number(v, num("dwa.dt")); }},
      {"v_min", [&](const json& v) { c.dwa.v_min = as_number(v, num("dwa.v_min")); }},
      {"v_max", [&](const json& v) { c.dwa.v_max = as_number(v, num("dwa.v_max")); }},
      {"yaw_rate_max",
       [&](const json& v) { c.dwa.yaw_rate_max = as_number(v, num("dwa.yaw_rate_max")); }},
      {"yaw_accel_max",
       [&](const json& v) { c.dwa.yaw_accel_max = as_number(v, num("dwa.yaw_accel_max")); }},
      {"accel_max",
       [&](const json& v) { c.dwa.accel_max = as_number(v, num("dwa.accel_max")); }},
      {"speed_samples",
       [&](const json& v) { c.dwa.speed_samples = as_int(v, num("dwa.speed_samples")); }},
      {"yaw_samples",
       [&](const json& v) { c.dwa.yaw_samples = as_int(v, num("dwa.yaw_samples")); }},
      {"heading_weight",
       [&](const json& v) { c.dwa.heading_weight = as_number(v, num("dwa.heading_weight")); }},
      {"speed_weight",
       [&](const json& v) { c.dwa.speed_weight = as_number(v, num("dwa.speed_weight")); }},
      {"clearance_weight",
       [&](const json& v) {
         c.dwa.clearance_weight = as_number(v, num("dwa.clearance_weight"));
       }},
      {"clearance_cap",
       [&](const json& v) { c.dwa.clearance_cap = as_number(v, num("dwa.clearance_cap")); }},
  };

  FieldMap orca_fields{
      {"time_horizon",
       [&](const json& v) { c.orca.time_horizon = as_number(v, num("orca.time_horizon")); }},
      {"dt", [&](const json& v) { c.orca.dt = as_number(v, num("orca.dt")); }},
      {"v_max", [&](const json& v) { c.orca.v_max = as_number(v, num("orca.v_max")); }},
      {"neighbor_dist",
       [&](const json& v) { c.orca.neighbor_dist = as_number(v, num("orca.neighbor_dist")); }},
      {"max_neighbors",
       [&](const json& v) { c.orca.max_neighbors = as_int(v, num("orca.max_neighbors")); }},
      {"side_bias",
       [&](const json& v) { c.orca.side_bias = as_number(v, num("orca.side_bias")); }},
  };

  FieldMap top{
      {"stage_side", [&](const json& v) { c.stage_side = as_number(v, num("stage_side")); }},
      {"density", [&](const json& v) { c.density = as_number(v, num("density")); }},
      {"max_group_size",
       [&](const json& v) { c.max_group_size = as_int(v, num("max_group_size")); }},
      {"desired_speed",
       [&](const json& v) { c.desired_speed = as_number(v, num("desired_speed")); }},
      {"seed", [&](const json& v) { c.seed = as_seed(v, num("seed")); }},
      {"planner",
       [&](const json& v) { c.planner = parse_planner(as_string(v, num("planner"))); }},
      {"sim_dt", [&](const json& v) { c.sim_dt = as_number(v, num("sim_dt")); }},
      {"timeout", [&](const json& v) { c.timeout = as_number(v, num("timeout")); }},
      {"arrival_radius",
       [&](const json& v) { c.arrival_radius = as_number(v, num("arrival_radius")); }},
      {"moving_speed_threshold",
       [&](const json& v) {
         c.moving_speed_threshold = as_number(v, num("moving_speed_threshold"));
       }},
      {"svr_threshold",
       [&](const json& v) { c.svr_threshold = as_number(v, num("svr_threshold")); }},
      {"spawn_jitter",
       [&](const json& v) { c.spawn_jitter = as_number(v, num("spawn_jitter")); }},
      {"min_separation",
       [&](const json& v) { c.min_separation = as_number(v, num("min_separation")); }},
      {"pgp_period", [&](const json& v) { c.pgp_period = as_number(v, num("pgp_period")); }},
      {"sf_subgoal_horizon",
       [&](const json& v) { c.sf_subgoal_horizon = as_number(v, num("sf_subgoal_horizon")); }},
      {"obstacles",
       [&](const json& v) {
         if (!v.is_array()) fail(num("obstacles"), "expected an array of [x1,y1,x2,y2]");
         c.obstacles.segments.clear();
         for (const json& seg : v) {
           const std::vector<double> vals = as_number_list(seg, num("obstacles"));
           if (vals.size() != 4) fail(num("obstacles"), "each segment needs 4 numbers");
           c.obstacles.segments.push_back(
               {Vec2(vals[0], vals[1]), Vec2(vals[2], vals[3])});
         }
       }},
      {"pgp", [&](const json& v) { apply_object(v, num("pgp."), pgp_fields); }},
      {"sigma_growth",
       [&](const json& v) { apply_object(v, num("sigma_growth."), sigma_fields); }},
      {"risk", [&](const json& v) { apply_object(v, num("risk."), risk_fields); }},
      {"sf", [&](const json& v) { apply_object(v, num("sf."), sf_fields); }},
      {"group_forces",
       [&](const json& v) { apply_object(v, num("group_forces."), group_fields); }},
      {"dwa", [&](const json& v) { apply_object(v, num("dwa."), dwa_fields); }},
      {"orca", [&](const json& v) { apply_object(v, num("orca."), orca_fields); }},
  };

  apply_object(j, scope, top);
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
  const json j = parse_json_text(text, "config");
  ScenarioConfig c;
  parse_scenario_into(j, "", c);
  c.validate();
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  return parse_scenario_config(read_file(path));
}

void SweepSpec::validate() const {
  if (densities.empty()) fail("densities", "must not be empty");
  for (double d : densities) {
    if (!(d > 0.0 && d <= 1.5)) fail("densities", "must lie in (0, 1.5]");
  }
  if (seeds_per_cell < 1) fail("seeds_per_cell", "must be at least 1");
  if (planners.empty()) fail("planners", "must not be empty");
  scenario.validate();
}

SweepSpec parse_sweep_spec(const std::string& text) {
  const json j = parse_json_text(text, "sweep spec");
  SweepSpec spec;
  FieldMap top{
      {"densities",
       [&](const json& v) { spec.densities = as_number_list(v, "densities"); }},
      {"seeds_per_cell",
       [&](const json& v) { spec.seeds_per_cell = as_int(v, "seeds_per_cell"); }},
      {"planners",
       [&](const json& v) {
         if (!v.is_array()) fail("planners", "expected an array of names");
         spec.planners.clear();
         for (const json& e : v) spec.planners.push_back(parse_planner(as_string(e, "planners")));
       }},
      {"master_seed", [&](const json& v) { spec.master_seed = as_seed(v, "master_seed"); }},
      {"output_dir", [&](const json& v) { spec.output_dir = as_string(v, "output_dir"); }},
      {"scenario", [&](const json& v) { parse_scenario_into(v, "scenario.", spec.scenario); }},
  };
  apply_object(j, "", top);
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  return parse_sweep_spec(read_file(path));
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_trace(const RunRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");

  const std::size_t agents = record.steps.empty() ? 0 : record.steps[0].agents.size();
  out << "schema_version,time";
  for (std::size_t i = 0; i < agents; ++i) {
    out << ",a" << i << "_x,a" << i << "_y,a" << i << "_vx,a" << i << "_vy";
  }
  out << ",moving,colliding,violating,ego_social_force,has_subgoal,subgoal_x,subgoal_y\n";

  for (const StepRecord& row : record.steps) {
    out << kSchemaVersion << ',' << fmt_double(row.time);
    for (const AgentState& a : row.agents) {
      out << ',' << fmt_double(a.position.x()) << ',' << fmt_double(a.position.y())
          << ',' << fmt_double(a.velocity.x()) << ',' << fmt_double(a.velocity.y());
    }
    out << ',' << (row.moving ? 1 : 0) << ',' << (row.colliding ? 1 : 0) << ','
        << (row.violating ? 1 : 0) << ',' << fmt_double(row.ego_social_force) << ','
        << (row.has_subgoal ? 1 : 0) << ',' << fmt_double(row.subgoal.x()) << ','
        << fmt_double(row.subgoal.y()) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string metrics_json_line(const RunRecord& record) {
  const MetricsRecord m = compute_metrics(record);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["planner"] = planner_name(record.config.planner);
  j["density"] = record.config.density;
  j["seed"] = record.config.seed;
  j["outcome"] = m.outcome == Outcome::kReached ? "reached" : "timeout";
  j["time_to_target"] = m.time_to_target;
  j["path_length"] = m.path_length;
  j["collision_rate_moving"] = m.collision_rate_moving;
  j["svr_moving"] = m.svr_moving;
  j["avg_social_force"] = m.avg_social_force;
  return j.dump();
}

}  // namespace pgp
