#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "geodint/errors.hpp"
#include "geodint/experiment/csv.hpp"
#include "geodint/integrators.hpp"
#include "geodint/solver.hpp"

namespace geodint {

using json = nlohmann::json;

enum class ExperimentKind { sweep, bifurcation, global_error, lognorm, isotropy, karcher };

inline const std::vector<std::pair<ExperimentKind, std::string>>& experiment_kind_names() {
  static const std::vector<std::pair<ExperimentKind, std::string>> names = {
      {ExperimentKind::sweep, "sweep"},           {ExperimentKind::bifurcation, "bifurcation"},
      {ExperimentKind::global_error, "global-error"}, {ExperimentKind::lognorm, "lognorm"},
      {ExperimentKind::isotropy, "isotropy"},     {ExperimentKind::karcher, "karcher"}};
  return names;
}

inline std::string experiment_kind_name(ExperimentKind kind) {
  for (const auto& [k, n] : experiment_kind_names())
    if (k == kind) return n;
  return "?";
}

inline ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [k, n] : experiment_kind_names())
    if (n == name) return k;
  throw invalid_input("config: unknown experiment kind '" + name + "'");
}

namespace cfgdetail {

inline void check_known_keys(const json& obj, const std::string& where,
                             const std::vector<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw invalid_input("config: unknown key '" + where + item.key() + "'");
  }
}

inline void check_required(const json& obj, const std::string& where,
                           const std::vector<std::string>& required) {
  for (const auto& key : required)
    if (!obj.contains(key))
      throw invalid_input("config: missing required key '" + where + key + "'");
}

inline double require_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw invalid_input("config: '" + where + key + "' must be a number");
  return obj[key].get<double>();
}

inline long require_integer(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number_integer())
    throw invalid_input("config: '" + where + key + "' must be an integer");
  return obj[key].get<long>();
}

inline std::string require_string(const json& obj, const std::string& where,
                                  const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw invalid_input("config: '" + where + key + "' must be a string");
  return obj[key].get<std::string>();
}

}  // namespace cfgdetail

inline Eigen::VectorXd parse_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw invalid_input("config: '" + where + "' must be a nonempty numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw invalid_input("config: '" + where + "' must contain only numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Eigen::MatrixXd parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw invalid_input("config: '" + where + "' must be a nested numeric array");
  const size_t rows = j.size(), cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw invalid_input("config: '" + where + "' rows have inconsistent lengths");
    for (size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number())
        throw invalid_input("config: '" + where + "' must contain only numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

inline json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

struct HSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  bool log_spacing = false;
};

inline std::vector<double> make_grid(const HSpec& spec) {
  std::vector<double> grid(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    const double s = static_cast<double>(i) / (spec.count - 1);
    grid[static_cast<size_t>(i)] =
        spec.log_spacing ? spec.min * std::pow(spec.max / spec.min, s)
                         : spec.min + (spec.max - spec.min) * s;
  }
  return grid;
}

inline HSpec parse_hspec(const json& j) {
  using namespace cfgdetail;
  if (!j.is_object()) throw invalid_input("config: 'h' must be an object");
  check_known_keys(j, "h.", {"min", "max", "count", "spacing"});
  check_required(j, "h.", {"min", "max", "count"});
  HSpec spec;
  spec.min = require_number(j, "h.", "min");
  spec.max = require_number(j, "h.", "max");
  spec.count = static_cast<int>(require_integer(j, "h.", "count"));
  const std::string spacing = j.contains("spacing") ? require_string(j, "h.", "spacing")
                                                    : std::string("linear");
  if (spacing == "log") spec.log_spacing = true;
  else if (spacing == "linear") spec.log_spacing = false;
  else throw invalid_input("config: 'h.spacing' must be 'linear' or 'log'");
  if (!(spec.min > 0.0)) throw invalid_input("config: 'h.min' must be positive");
  if (!(spec.max >= spec.min)) throw invalid_input("config: 'h.max' must be at least h.min");
  if (spec.count < 2) throw invalid_input("config: 'h.count' must be at least 2");
  return spec;
}

inline json resolved_hspec(const HSpec& spec) {
  return json{{"min", spec.min},
              {"max", spec.max},
              {"count", spec.count},
              {"spacing", spec.log_spacing ? "log" : "linear"}};
}

inline SolverConfig parse_solver(const json& j) {
  using namespace cfgdetail;
  SolverConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw invalid_input("config: 'solver' must be an object");
  check_known_keys(j, "solver.", {"tolerance", "max_iterations", "strategy", "predictor"});
  if (j.contains("tolerance")) cfg.tolerance = require_number(j, "solver.", "tolerance");
  if (j.contains("max_iterations"))
    cfg.max_iterations = static_cast<int>(require_integer(j, "solver.", "max_iterations"));
  if (j.contains("strategy")) {
    const std::string s = require_string(j, "solver.", "strategy");
    if (s == "newton") cfg.strategy = SolverStrategy::newton;
    else if (s == "fixed-point") cfg.strategy = SolverStrategy::fixed_point;
    else if (s == "newton-with-fallback") cfg.strategy = SolverStrategy::newton_with_fallback;
    else throw invalid_input("config: unknown solver strategy '" + s + "'");
  }
  if (j.contains("predictor")) {
    const std::string s = require_string(j, "solver.", "predictor");
    if (s == "explicit-euler") cfg.predictor = Predictor::explicit_euler;
    else if (s == "previous-point") cfg.predictor = Predictor::previous_point;
    else throw invalid_input("config: unknown solver predictor '" + s + "'");
  }
  validate(cfg);
  return cfg;
}

inline json resolved_solver(const SolverConfig& cfg) {
  const char* strategy = cfg.strategy == SolverStrategy::newton ? "newton"
                         : cfg.strategy == SolverStrategy::fixed_point ? "fixed-point"
                                                                       : "newton-with-fallback";
  return json{{"tolerance", cfg.tolerance},
              {"max_iterations", cfg.max_iterations},
              {"strategy", strategy},
              {"predictor",
               cfg.predictor == Predictor::explicit_euler ? "explicit-euler" : "previous-point"}};
}

/// Manifold description parsed from config.
struct ManifoldSpec {
  std::string kind;  // "sphere2" | "spd" | "euclidean"
  Eigen::Index n = 0;
};

inline ManifoldSpec parse_manifold(const json& j) {
  using namespace cfgdetail;
  if (!j.is_object()) throw invalid_input("config: 'manifold' must be an object");
  check_known_keys(j, "manifold.", {"kind", "n"});
  ManifoldSpec spec;
  spec.kind = require_string(j, "manifold.", "kind");
  if (spec.kind == "sphere2") {
    if (j.contains("n")) throw invalid_input("config: 'manifold.n' does not apply to sphere2");
  } else if (spec.kind == "spd" || spec.kind == "euclidean") {
    spec.n = require_integer(j, "manifold.", "n");
    if (spec.n < 1) throw invalid_input("config: 'manifold.n' must be at least 1");
  } else {
    throw invalid_input("config: unknown manifold kind '" + spec.kind + "'");
  }
  return spec;
}

inline json resolved_manifold(const ManifoldSpec& spec) {
  json j{{"kind", spec.kind}};
  if (spec.kind != "sphere2") j["n"] = spec.n;
  return j;
}

/// Field description parsed from config; interpretation depends on the
/// manifold.
struct FieldSpec {
  std::string name;  // killing | isotropy | karcher | linear | zero
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double c = 1.0;
  std::vector<Eigen::MatrixXd> targets;
  std::vector<double> weights;
  Eigen::MatrixXd matrix;
};

inline FieldSpec parse_field(const json& j, const ManifoldSpec& manifold) {
  using namespace cfgdetail;
  if (!j.is_object()) throw invalid_input("config: 'field' must be an object");
  FieldSpec spec;
  spec.name = require_string(j, "field.", "name");
  if (manifold.kind == "sphere2") {
    if (spec.name == "killing") {
      check_known_keys(j, "field.", {"name", "axis"});
      if (j.contains("axis")) {
        const Eigen::VectorXd a = parse_vector(j["axis"], "field.axis");
        if (a.size() != 3) throw invalid_input("config: 'field.axis' must have 3 entries");
        spec.axis = a;
      }
    } else if (spec.name == "isotropy") {
      check_known_keys(j, "field.", {"name", "c"});
      spec.c = require_number(j, "field.", "c");
    } else if (spec.name == "zero") {
      check_known_keys(j, "field.", {"name"});
    } else {
      throw invalid_input("config: field '" + spec.name + "' is not defined on sphere2");
    }
  } else if (manifold.kind == "spd") {
    if (spec.name == "karcher") {
      check_known_keys(j, "field.", {"name", "targets", "weights"});
      check_required(j, "field.", {"targets"});
      if (!j["targets"].is_array() || j["targets"].empty())
        throw invalid_input("config: 'field.targets' must be a nonempty array of matrices");
      for (size_t t = 0; t < j["targets"].size(); ++t)
        spec.targets.push_back(parse_matrix(j["targets"][t], "field.targets"));
      if (j.contains("weights")) {
        const Eigen::VectorXd w = parse_vector(j["weights"], "field.weights");
        spec.weights.assign(w.data(), w.data() + w.size());
      }
    } else if (spec.name == "zero") {
      check_known_keys(j, "field.", {"name"});
    } else {
      throw invalid_input("config: field '" + spec.name + "' is not defined on spd");
    }
  } else {
    if (spec.name == "linear") {
      check_known_keys(j, "field.", {"name", "matrix"});
      check_required(j, "field.", {"matrix"});
      spec.matrix = parse_matrix(j["matrix"], "field.matrix");
    } else if (spec.name == "zero") {
      check_known_keys(j, "field.", {"name"});
    } else {
      throw invalid_input("config: field '" + spec.name + "' is not defined on euclidean");
    }
  }
  return spec;
}

inline json resolved_field(const FieldSpec& spec) {
  json j{{"name", spec.name}};
  if (spec.name == "killing") j["axis"] = to_json(Eigen::VectorXd(spec.axis));
  if (spec.name == "isotropy") j["c"] = spec.c;
  if (spec.name == "karcher") {
    json targets = json::array();
    for (const auto& t : spec.targets) targets.push_back(to_json(t));
    j["targets"] = targets;
    if (!spec.weights.empty()) j["weights"] = spec.weights;
  }
  if (spec.name == "linear") j["matrix"] = to_json(spec.matrix);
  return j;
}

/// Region description for sampling experiments.
struct RegionSpec {
  std::string kind;  // "chart-box" | "geodesic-ball"
  Eigen::VectorXd lo, hi;
  json center;  // point literal, interpreted per manifold
  double radius = 0.0;
};

inline RegionSpec parse_region(const json& j) {
  using namespace cfgdetail;
  if (!j.is_object()) throw invalid_input("config: 'region' must be an object");
  RegionSpec spec;
  spec.kind = require_string(j, "region.", "kind");
  if (spec.kind == "chart-box") {
    check_known_keys(j, "region.", {"kind", "lo", "hi"});
    check_required(j, "region.", {"lo", "hi"});
    spec.lo = parse_vector(j["lo"], "region.lo");
    spec.hi = parse_vector(j["hi"], "region.hi");
    if (spec.lo.size() != spec.hi.size())
      throw invalid_input("config: 'region.lo' and 'region.hi' must have equal lengths");
  } else if (spec.kind == "geodesic-ball") {
    check_known_keys(j, "region.", {"kind", "center", "radius"});
    check_required(j, "region.", {"center", "radius"});
    spec.center = j["center"];
    spec.radius = require_number(j, "region.", "radius");
    if (!(spec.radius > 0.0)) throw invalid_input("config: 'region.radius' must be positive");
  } else {
    throw invalid_input("config: unknown region kind '" + spec.kind + "'");
  }
  return spec;
}

/// Parsed and default-filled experiment configuration.  `echo` is the
/// resolved tree recorded in the run manifest.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sweep;
  ManifoldSpec manifold;
  FieldSpec field;
  std::vector<MethodId> methods;
  std::vector<json> initial_points;  // literals, interpreted per manifold
  HSpec h;
  SolverConfig solver;
  std::string output_dir;
  std::uint64_t seed = 0;

  double z0 = 0.0;                       // bifurcation
  std::vector<double> c_values;          // isotropy
  double t_star = 1.0;                   // global-error
  std::vector<int> step_counts;          // global-error
  double fine_tol = 1e-8;                // global-error
  int nu_samples = 200;                  // global-error, lognorm
  double ball_margin = 0.5;              // global-error
  RegionSpec region;                     // lognorm
  int samples = 500;                     // lognorm
  double tolerance = 1e-10;              // karcher
  int max_steps = 200;                   // karcher

  json echo;
};

inline ExperimentConfig resolve_config(const json& raw) {
  using namespace cfgdetail;
  if (!raw.is_object()) throw invalid_input("config: top level must be an object");
  check_required(raw, "", {"experiment"});
  ExperimentConfig cfg;
  cfg.kind = parse_experiment_kind(require_string(raw, "", "experiment"));
  const std::string kind_name = experiment_kind_name(cfg.kind);

  std::vector<std::string> allowed = {"experiment", "output_dir", "seed"};
  std::vector<std::string> required;
  switch (cfg.kind) {
    case ExperimentKind::sweep:
      required = {"manifold", "field", "methods", "initial_points", "h"};
      allowed.insert(allowed.end(), {"manifold", "field", "methods", "initial_points", "h",
                                     "solver"});
      break;
    case ExperimentKind::bifurcation:
      required = {"z0", "h"};
      allowed.insert(allowed.end(), {"z0", "h"});
      break;
    case ExperimentKind::global_error:
      required = {"manifold", "field", "methods", "initial_points", "t_star", "step_counts"};
      allowed.insert(allowed.end(), {"manifold", "field", "methods", "initial_points", "t_star",
                                     "step_counts", "solver", "fine_tol", "nu_samples",
                                     "ball_margin"});
      break;
    case ExperimentKind::lognorm:
      required = {"manifold", "field", "region"};
      allowed.insert(allowed.end(), {"manifold", "field", "region", "samples"});
      break;
    case ExperimentKind::isotropy:
      required = {"initial_points", "h"};
      allowed.insert(allowed.end(), {"manifold", "initial_points", "h", "c_values", "solver"});
      break;
    case ExperimentKind::karcher:
      required = {"manifold", "field"};
      allowed.insert(allowed.end(), {"manifold", "field", "tolerance", "max_steps"});
      break;
  }
  check_known_keys(raw, "", allowed);
  check_required(raw, "", required);

  if (raw.contains("manifold")) cfg.manifold = parse_manifold(raw["manifold"]);
  else cfg.manifold = {"sphere2", 0};

  if (cfg.kind == ExperimentKind::isotropy && cfg.manifold.kind != "sphere2")
    throw invalid_input("config: the isotropy experiment runs on sphere2 only");
  if (cfg.kind == ExperimentKind::karcher &&
      (cfg.manifold.kind != "spd"))
    throw invalid_input("config: the karcher experiment runs on spd only");

  if (raw.contains("field")) cfg.field = parse_field(raw["field"], cfg.manifold);
  if (cfg.kind == ExperimentKind::karcher && cfg.field.name != "karcher")
    throw invalid_input("config: the karcher experiment requires a karcher field");

  if (raw.contains("methods")) {
    if (!raw["methods"].is_array() || raw["methods"].empty())
      throw invalid_input("config: 'methods' must be a nonempty array of method names");
    for (const auto& mj : raw["methods"]) {
      if (!mj.is_string()) throw invalid_input("config: 'methods' entries must be strings");
      cfg.methods.push_back(parse_method(mj.get<std::string>()));
    }
  }

  if (raw.contains("initial_points")) {
    if (!raw["initial_points"].is_array())
      throw invalid_input("config: 'initial_points' must be an array of point literals");
    for (const auto& pj : raw["initial_points"]) cfg.initial_points.push_back(pj);
    const size_t expected =
        cfg.kind == ExperimentKind::global_error ? 1u : 2u;
    if (cfg.initial_points.size() != expected)
      throw invalid_input("config: '" + kind_name + "' needs exactly " +
                          std::to_string(expected) + " initial point(s)");
  }

  if (raw.contains("h")) cfg.h = parse_hspec(raw["h"]);
  cfg.solver = parse_solver(raw.contains("solver") ? raw["solver"] : json());

  cfg.output_dir = raw.contains("output_dir") ? require_string(raw, "", "output_dir")
                                              : "out/" + kind_name;
  if (raw.contains("seed")) {
    if (!raw["seed"].is_number_integer() || raw["seed"].get<long long>() < 0)
      throw invalid_input("config: 'seed' must be a nonnegative integer");
    cfg.seed = raw["seed"].get<std::uint64_t>();
  }

  switch (cfg.kind) {
    case ExperimentKind::bifurcation:
      cfg.z0 = require_number(raw, "", "z0");
      if (std::abs(cfg.z0) > 1.0) throw invalid_input("config: 'z0' must lie in [-1, 1]");
      break;
    case ExperimentKind::isotropy:
      cfg.c_values = {0.0, 1.0, 2.0};
      if (raw.contains("c_values")) {
        const Eigen::VectorXd cs = parse_vector(raw["c_values"], "c_values");
        cfg.c_values.assign(cs.data(), cs.data() + cs.size());
      }
      break;
    case ExperimentKind::global_error: {
      cfg.t_star = require_number(raw, "", "t_star");
      if (!(cfg.t_star > 0.0)) throw invalid_input("config: 't_star' must be positive");
      if (!raw["step_counts"].is_array() || raw["step_counts"].size() < 2)
        throw invalid_input("config: 'step_counts' must list at least 2 step counts");
      for (const auto& kj : raw["step_counts"]) {
        if (!kj.is_number_integer() || kj.get<long>() < 1)
          throw invalid_input("config: 'step_counts' entries must be positive integers");
        cfg.step_counts.push_back(static_cast<int>(kj.get<long>()));
      }
      if (raw.contains("fine_tol")) {
        cfg.fine_tol = require_number(raw, "", "fine_tol");
        if (!(cfg.fine_tol > 0.0)) throw invalid_input("config: 'fine_tol' must be positive");
      }
      if (raw.contains("nu_samples")) {
        cfg.nu_samples = static_cast<int>(require_integer(raw, "", "nu_samples"));
        if (cfg.nu_samples < 1) throw invalid_input("config: 'nu_samples' must be at least 1");
      }
      if (raw.contains("ball_margin")) {
        cfg.ball_margin = require_number(raw, "", "ball_margin");
        if (!(cfg.ball_margin >= 0.0))
          throw invalid_input("config: 'ball_margin' must be nonnegative");
      }
      break;
    }
    case ExperimentKind::lognorm:
      cfg.region = parse_region(raw["region"]);
      if (raw.contains("samples")) {
        cfg.samples = static_cast<int>(require_integer(raw, "", "samples"));
        if (cfg.samples < 1) throw invalid_input("config: 'samples' must be at least 1");
      }
      break;
    case ExperimentKind::karcher:
      if (raw.contains("tolerance")) {
        cfg.tolerance = require_number(raw, "", "tolerance");
        if (!(cfg.tolerance > 0.0)) throw invalid_input("config: 'tolerance' must be positive");
      }
      if (raw.contains("max_steps")) {
        cfg.max_steps = static_cast<int>(require_integer(raw, "", "max_steps"));
        if (cfg.max_steps < 1) throw invalid_input("config: 'max_steps' must be at least 1");
      }
      break;
    default:
      break;
  }

  // Resolved echo with defaults materialized.
  json echo;
  echo["experiment"] = kind_name;
  echo["output_dir"] = cfg.output_dir;
  echo["seed"] = cfg.seed;
  switch (cfg.kind) {
    case ExperimentKind::sweep:
      echo["manifold"] = resolved_manifold(cfg.manifold);
      echo["field"] = resolved_field(cfg.field);
      echo["methods"] = json::array();
      for (const auto& m : cfg.methods) echo["methods"].push_back(method_name(m));
      echo["initial_points"] = cfg.initial_points;
      echo["h"] = resolved_hspec(cfg.h);
      echo["solver"] = resolved_solver(cfg.solver);
      break;
    case ExperimentKind::bifurcation:
      echo["z0"] = cfg.z0;
      echo["h"] = resolved_hspec(cfg.h);
      break;
    case ExperimentKind::global_error:
      echo["manifold"] = resolved_manifold(cfg.manifold);
      echo["field"] = resolved_field(cfg.field);
      echo["methods"] = json::array();
      for (const auto& m : cfg.methods) echo["methods"].push_back(method_name(m));
      echo["initial_points"] = cfg.initial_points;
      echo["t_star"] = cfg.t_star;
      echo["step_counts"] = cfg.step_counts;
      echo["solver"] = resolved_solver(cfg.solver);
      echo["fine_tol"] = cfg.fine_tol;
      echo["nu_samples"] = cfg.nu_samples;
      echo["ball_margin"] = cfg.ball_margin;
      break;
    case ExperimentKind::lognorm:
      echo["manifold"] = resolved_manifold(cfg.manifold);
      echo["field"] = resolved_field(cfg.field);
      if (cfg.region.kind == "chart-box")
        echo["region"] = json{{"kind", cfg.region.kind},
                              {"lo", to_json(cfg.region.lo)},
                              {"hi", to_json(cfg.region.hi)}};
      else
        echo["region"] = json{{"kind", cfg.region.kind},
                              {"center", cfg.region.center},
                              {"radius", cfg.region.radius}};
      echo["samples"] = cfg.samples;
      break;
    case ExperimentKind::isotropy:
      echo["manifold"] = resolved_manifold(cfg.manifold);
      echo["c_values"] = cfg.c_values;
      echo["initial_points"] = cfg.initial_points;
      echo["h"] = resolved_hspec(cfg.h);
      echo["solver"] = resolved_solver(cfg.solver);
      break;
    case ExperimentKind::karcher:
      echo["manifold"] = resolved_manifold(cfg.manifold);
      echo["field"] = resolved_field(cfg.field);
      echo["tolerance"] = cfg.tolerance;
      echo["max_steps"] = cfg.max_steps;
      break;
  }
  cfg.echo = echo;
  return cfg;
}

inline json load_config_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_input("config: cannot parse " + path.string() + ": " + e.what());
  }
}

/// Applies one `path.to.key=value` override; the value is parsed as JSON when
/// possible and taken as a string otherwise.
inline void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw invalid_input("override '" + assignment + "' is not of the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;
  }

  json* node = &cfg;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty())
      throw invalid_input("override '" + assignment + "' has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace geodint
