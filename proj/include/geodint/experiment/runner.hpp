#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "geodint/analysis.hpp"
#include "geodint/experiment/config.hpp"
#include "geodint/experiment/csv.hpp"
#include "geodint/lognorm.hpp"
#include "geodint/reference.hpp"

namespace geodint {

/// Outcome of one experiment run; files are written by run_experiment.
struct RunReport {
  int exit_code = 0;
  std::filesystem::path output_dir;
  std::vector<std::string> lines;
};

namespace rundetail {

struct RunOutputs {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  json result = json::object();
  bool flagged = false;  // nonconverged records present
  std::vector<std::string> lines;
};

inline Sphere2::Point parse_point(const Sphere2& m, const json& lit, const std::string& where) {
  const Eigen::VectorXd v = parse_vector(lit, where);
  if (v.size() != 3) throw invalid_input("config: '" + where + "' must have 3 entries");
  const auto p = m.project(Eigen::Vector3d(v));
  m.check_point(p);
  return p;
}

inline SpdManifold::Point parse_point(const SpdManifold& m, const json& lit,
                                      const std::string& where) {
  const Eigen::MatrixXd a = parse_matrix(lit, where);
  if (a.rows() != m.size() || a.cols() != m.size())
    throw invalid_input("config: '" + where + "' must be a " + std::to_string(m.size()) + "x" +
                        std::to_string(m.size()) + " matrix");
  const auto p = m.project(a);
  m.check_point(p);
  return p;
}

inline Euclidean::Point parse_point(const Euclidean& m, const json& lit,
                                    const std::string& where) {
  const Eigen::VectorXd v = parse_vector(lit, where);
  if (v.size() != m.dim())
    throw invalid_input("config: '" + where + "' must have " + std::to_string(m.dim()) +
                        " entries");
  return v;
}

inline VectorField<Sphere2> build_field(const Sphere2&, const FieldSpec& spec) {
  if (spec.name == "killing") return killing_rotation_field(spec.axis);
  if (spec.name == "isotropy") return isotropy_field(spec.c);
  return zero_field(Sphere2{});
}

inline VectorField<SpdManifold> build_field(const SpdManifold& m, const FieldSpec& spec) {
  if (spec.name == "karcher") {
    for (const auto& t : spec.targets)
      if (t.rows() != m.size() || t.cols() != m.size())
        throw invalid_input("config: 'field.targets' entries must be " +
                            std::to_string(m.size()) + "x" + std::to_string(m.size()) +
                            " matrices");
    return karcher_gradient_field(m, spec.targets, spec.weights);
  }
  return zero_field(m);
}

inline VectorField<Euclidean> build_field(const Euclidean& m, const FieldSpec& spec) {
  if (spec.name == "linear") {
    if (spec.matrix.rows() != m.dim() || spec.matrix.cols() != m.dim())
      throw invalid_input("config: 'field.matrix' must be " + std::to_string(m.dim()) + "x" +
                          std::to_string(m.dim()));
    return linear_field(spec.matrix);
  }
  return zero_field(m);
}

inline ChartBundle default_chart(const Sphere2&) { return sphere2_chart(); }
inline ChartBundle default_chart(const SpdManifold& m) { return spd_chart(m.size()); }
inline ChartBundle default_chart(const Euclidean& m) { return euclidean_chart(m.dim()); }

/// Maximizes the logarithmic g-norm over a geodesic ball.  For the sphere the
/// samples are drawn in ambient space and evaluated in per-point charts, so
/// no single chart has to cover the ball.
inline double nu_over_ball(const Sphere2& m, const VectorField<Sphere2>& f,
                           const Sphere2::Point& center, double radius, int n_samples,
                           Rng& rng) {
  radius = std::min(radius, M_PI);
  const Eigen::Matrix3d rot = rotation_taking(Eigen::Vector3d::UnitZ(), center);
  double nu = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double zmin = std::cos(radius);
    const double z = zmin + (1.0 - zmin) * uniform01(rng);
    const double phi = 2.0 * M_PI * uniform01(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Eigen::Vector3d p =
        rot * Eigen::Vector3d(rho * std::cos(phi), rho * std::sin(phi), z);
    nu = std::max(nu, sphere_log_norm_at_point(m, f, m.project(p)));
  }
  return nu;
}

template <class Manifold>
double nu_over_ball(const Manifold& m, const VectorField<Manifold>& f,
                    const typename Manifold::Point& center, double radius, int n_samples,
                    Rng& rng) {
  ChartFieldView<Manifold> view(m, f, default_chart(m));
  GeodesicBallRegion region{m.to_ambient(center), radius};
  return estimate_nu(view, region, static_cast<size_t>(n_samples), rng).nu;
}

inline std::string bool_cell(bool b) { return b ? "1" : "0"; }

template <class Manifold>
void run_sweep_on(const Manifold& m, const ExperimentConfig& cfg, RunOutputs& out) {
  const auto field = build_field(m, cfg.field);
  const auto x0 = parse_point(m, cfg.initial_points[0], "initial_points[0]");
  const auto y0 = parse_point(m, cfg.initial_points[1], "initial_points[1]");
  const auto grid = make_grid(cfg.h);

  CsvBuilder csv("method,h,d0,d_after,converged,iters_x,iters_y");
  json per_method = json::object();
  for (const auto& id : cfg.methods) {
    const auto records = contractivity_sweep(m, id, field, x0, y0, grid, cfg.solver);
    int bad = 0, expanded = 0;
    for (const auto& rec : records) {
      if (!rec.converged()) ++bad;
      else if (rec.d_after > rec.d0) ++expanded;
      csv.row({method_name(id), format_double(rec.h), format_double(rec.d0),
               format_double(rec.d_after), bool_cell(rec.converged()),
               std::to_string(rec.iters_x), std::to_string(rec.iters_y)});
    }
    per_method[method_name(id)] = {{"rows", records.size()},
                                   {"nonconverged", bad},
                                   {"expanded", expanded}};
    if (bad > 0) out.flagged = true;
    out.lines.push_back(method_name(id) + ": " + std::to_string(records.size()) + " steps, " +
                        std::to_string(bad) + " nonconverged, " + std::to_string(expanded) +
                        " expanded");
  }
  out.result["methods"] = per_method;
  out.files.emplace_back("sweep.csv", csv.content());
}

inline void run_bifurcation(const ExperimentConfig& cfg, RunOutputs& out) {
  const auto diagram = bifurcation_diagram(cfg.z0, make_grid(cfg.h));
  CsvBuilder csv("h,root_index,z");
  size_t total = 0, max_count = 0;
  for (size_t j = 0; j < diagram.h_grid.size(); ++j) {
    const auto& roots = diagram.roots[j];
    total += roots.size();
    max_count = std::max(max_count, roots.size());
    for (size_t r = 0; r < roots.size(); ++r)
      csv.row({format_double(diagram.h_grid[j]), std::to_string(r),
               format_double(roots[r])});
  }
  out.result["total_roots"] = total;
  out.result["max_roots_per_h"] = max_count;
  out.lines.push_back(std::to_string(total) + " roots over " +
                      std::to_string(diagram.h_grid.size()) + " step sizes (max " +
                      std::to_string(max_count) + " at one h)");
  out.files.emplace_back("bifurcation.csv", csv.content());
}

template <class Manifold>
void run_global_error_on(const Manifold& m, const ExperimentConfig& cfg, RunOutputs& out) {
  const auto field = build_field(m, cfg.field);
  const auto y0 = parse_point(m, cfg.initial_points[0], "initial_points[0]");

  std::vector<double> h_grid;
  for (int k : cfg.step_counts) h_grid.push_back(cfg.t_star / k);

  // Coarse checkpoints along the flow fix the sampling ball and the points
  // used for the local constant; high accuracy is not needed for either.
  std::vector<double> ts;
  for (int j = 0; j <= 32; ++j) ts.push_back(cfg.t_star * j / 32.0);
  const auto coarse = reference_trajectory(m, field, y0, ts, 1e-4);
  double radius = 0.0;
  for (const auto& p : coarse) radius = std::max(radius, m.distance(y0, p));
  radius += cfg.ball_margin;

  Rng rng(cfg.seed);
  const double nu = nu_over_ball(m, field, y0, radius, cfg.nu_samples, rng);

  std::vector<typename Manifold::Point> c_samples;
  for (size_t j = 0; j < coarse.size(); j += 8) c_samples.push_back(coarse[j]);

  CsvBuilder csv("method,h,k,error,bound,nu,C,p");
  json per_method = json::object();
  for (const auto& id : cfg.methods) {
    const int p = method_order(id);
    const double c =
        estimate_local_constant(m, id, field, c_samples, h_grid, p, cfg.solver, cfg.fine_tol);
    const auto report = global_error_study(m, id, field, y0, cfg.t_star, h_grid, nu, c, p,
                                           cfg.solver, cfg.fine_tol);
    for (size_t j = 0; j < report.h_grid.size(); ++j)
      csv.row({method_name(id), format_double(report.h_grid[j]),
               std::to_string(report.step_counts[j]),
               format_double(report.measured_errors[j]),
               format_double(report.bound_values[j]), format_double(nu), format_double(c),
               std::to_string(p)});
    per_method[method_name(id)] = {{"nu", nu},
                                   {"C", c},
                                   {"p", p},
                                   {"order_estimate", report.order_estimate}};
    char line[160];
    std::snprintf(line, sizeof line, "%s: order %.3f (p = %d), C = %.6g, nu = %.6g",
                  method_name(id).c_str(), report.order_estimate, p, c, nu);
    out.lines.emplace_back(line);
  }
  out.result["methods"] = per_method;
  out.result["nu"] = nu;
  out.result["ball_radius"] = radius;
  out.files.emplace_back("global_error.csv", csv.content());
}

template <class Manifold>
void run_lognorm_on(const Manifold& m, const ExperimentConfig& cfg, RunOutputs& out) {
  const auto field = build_field(m, cfg.field);
  Rng rng(cfg.seed);
  MonotonicityEstimate est;
  if (cfg.region.kind == "chart-box") {
    ChartFieldView<Manifold> view(m, field, default_chart(m));
    ChartBoxRegion region{cfg.region.lo, cfg.region.hi};
    est = estimate_nu(view, region, static_cast<size_t>(cfg.samples), rng);
  } else {
    const auto center = parse_point(m, cfg.region.center, "region.center");
    ChartBundle bundle;
    if constexpr (std::is_same_v<Manifold, Sphere2>) bundle = sphere2_chart_centered(center);
    else bundle = default_chart(m);
    ChartFieldView<Manifold> view(m, field, bundle);
    GeodesicBallRegion region{m.to_ambient(center), cfg.region.radius};
    est = estimate_nu(view, region, static_cast<size_t>(cfg.samples), rng);
  }

  const Eigen::Index d = est.samples.empty() ? 0 : est.samples.front().x.size();
  std::string header;
  for (Eigen::Index i = 0; i < d; ++i) header += "x" + std::to_string(i) + ",";
  header += "mu";
  CsvBuilder csv(header);
  for (const auto& s : est.samples) {
    std::vector<std::string> cells;
    for (Eigen::Index i = 0; i < s.x.size(); ++i) cells.push_back(format_double(s.x[i]));
    cells.push_back(format_double(s.mu));
    csv.row(cells);
  }
  out.result["nu"] = est.nu;
  out.result["region"] = est.region;
  out.result["samples"] = est.samples.size();
  char line[120];
  std::snprintf(line, sizeof line, "nu = %.12g over %zu samples", est.nu, est.samples.size());
  out.lines.emplace_back(line);
  out.files.emplace_back("lognorm.csv", csv.content());
}

inline void run_isotropy(const ExperimentConfig& cfg, RunOutputs& out) {
  const Sphere2 m;
  const auto x0 = parse_point(m, cfg.initial_points[0], "initial_points[0]");
  const auto y0 = parse_point(m, cfg.initial_points[1], "initial_points[1]");
  const double d0 = m.distance(x0, y0);
  const auto grid = make_grid(cfg.h);

  CsvBuilder csv("c,h,d0,d_after");
  json per_c = json::object();
  for (double c : cfg.c_values) {
    const auto field = isotropy_field(c);
    const auto id = MethodId::lie_euler(c);
    int bad = 0;
    for (double h : grid) {
      double d_after = std::numeric_limits<double>::quiet_NaN();
      try {
        const auto ox = method_step(m, id, field, x0, h, cfg.solver);
        const auto oy = method_step(m, id, field, y0, h, cfg.solver);
        if (ox.converged && oy.converged)
          d_after = m.distance(ox.principal(), oy.principal());
        else
          ++bad;
      } catch (const invalid_input&) {
        throw;
      } catch (const error&) {
        ++bad;
      }
      csv.row({format_double(c), format_double(h), format_double(d0),
               format_double(d_after)});
    }
    per_c[format_double(c)] = {{"rows", grid.size()}, {"nonconverged", bad}};
    if (bad > 0) out.flagged = true;
    out.lines.push_back("c = " + format_double(c) + ": " + std::to_string(grid.size()) +
                        " steps, " + std::to_string(bad) + " nonconverged");
  }
  out.result["c_values"] = per_c;
  out.files.emplace_back("isotropy.csv", csv.content());
}

inline void run_karcher(const ExperimentConfig& cfg, RunOutputs& out) {
  const SpdManifold m(cfg.manifold.n);
  build_field(m, cfg.field);  // validates target shapes
  KarcherFieldSpec spec{cfg.field.targets, cfg.field.weights};
  const auto result = karcher_mean_detailed(m, spec, cfg.tolerance, cfg.max_steps);

  CsvBuilder csv("iter,field_norm");
  for (const auto& rec : result.history)
    csv.row({std::to_string(rec.iteration), format_double(rec.field_norm)});
  out.result["mean"] = to_json(result.mean);
  out.result["iterations"] = result.history.size() - 1;
  out.result["final_norm"] = result.history.back().field_norm;
  char line[120];
  std::snprintf(line, sizeof line, "converged in %zu steps, |X| = %.3g",
                result.history.size() - 1, result.history.back().field_norm);
  out.lines.emplace_back(line);
  out.files.emplace_back("karcher.csv", csv.content());
}

inline std::string plot_script(ExperimentKind kind) {
  const std::string prelude =
      "#!/usr/bin/env python3\n"
      "import csv\n"
      "import os\n"
      "from collections import defaultdict\n\n"
      "import matplotlib\n"
      "matplotlib.use(\"Agg\")\n"
      "import matplotlib.pyplot as plt\n\n"
      "here = os.path.dirname(os.path.abspath(__file__))\n";
  switch (kind) {
    case ExperimentKind::sweep:
      return prelude +
             "rows = list(csv.DictReader(open(os.path.join(here, \"sweep.csv\"))))\n"
             "by_method = defaultdict(list)\n"
             "for r in rows:\n"
             "    if r[\"converged\"] == \"1\":\n"
             "        by_method[r[\"method\"]].append((float(r[\"h\"]), float(r[\"d_after\"]) "
             "- float(r[\"d0\"])))\n"
             "fig, ax = plt.subplots(figsize=(6, 4))\n"
             "for method, pts in sorted(by_method.items()):\n"
             "    pts.sort()\n"
             "    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=method)\n"
             "ax.axhline(0.0, color=\"k\", lw=0.5)\n"
             "ax.set_xscale(\"log\")\n"
             "ax.set_xlabel(\"h\")\n"
             "ax.set_ylabel(\"d_after - d0\")\n"
             "ax.legend()\n"
             "fig.tight_layout()\n"
             "fig.savefig(os.path.join(here, \"sweep.png\"), dpi=160)\n";
    case ExperimentKind::bifurcation:
      return prelude +
             "rows = list(csv.DictReader(open(os.path.join(here, \"bifurcation.csv\"))))\n"
             "fig, ax = plt.subplots(figsize=(6, 4))\n"
             "ax.scatter([float(r[\"h\"]) for r in rows], [float(r[\"z\"]) for r in rows], "
             "s=1, c=\"k\")\n"
             "ax.set_xlabel(\"h\")\n"
             "ax.set_ylabel(\"z\")\n"
             "fig.tight_layout()\n"
             "fig.savefig(os.path.join(here, \"bifurcation.png\"), dpi=160)\n";
    case ExperimentKind::global_error:
      return prelude +
             "rows = list(csv.DictReader(open(os.path.join(here, \"global_error.csv\"))))\n"
             "by_method = defaultdict(lambda: ([], [], []))\n"
             "for r in rows:\n"
             "    h, e, b = by_method[r[\"method\"]]\n"
             "    h.append(float(r[\"h\"]))\n"
             "    e.append(float(r[\"error\"]))\n"
             "    b.append(float(r[\"bound\"]))\n"
             "fig, ax = plt.subplots(figsize=(6, 4))\n"
             "for method, (h, e, b) in sorted(by_method.items()):\n"
             "    ax.loglog(h, e, \"o-\", label=method + \" error\")\n"
             "    ax.loglog(h, b, \"--\", label=method + \" bound\")\n"
             "ax.set_xlabel(\"h\")\n"
             "ax.set_ylabel(\"error at t*\")\n"
             "ax.legend()\n"
             "fig.tight_layout()\n"
             "fig.savefig(os.path.join(here, \"global_error.png\"), dpi=160)\n";
    case ExperimentKind::lognorm:
      return prelude +
             "rows = list(csv.DictReader(open(os.path.join(here, \"lognorm.csv\"))))\n"
             "mu = [float(r[\"mu\"]) for r in rows]\n"
             "fig, ax = plt.subplots(figsize=(6, 4))\n"
             "ax.hist(mu, bins=40, color=\"steelblue\")\n"
             "ax.set_xlabel(\"mu\")\n"
             "ax.set_ylabel(\"count\")\n"
             "fig.tight_layout()\n"
             "fig.savefig(os.path.join(here, \"lognorm.png\"), dpi=160)\n";
    case ExperimentKind::isotropy:
      return prelude +
             "rows = list(csv.DictReader(open(os.path.join(here, \"isotropy.csv\"))))\n"
             "by_c = defaultdict(list)\n"
             "for r in rows:\n"
             "    if r[\"d_after\"] != \"nan\":\n"
             "        by_c[r[\"c\"]].append((float(r[\"h\"]), float(r[\"d_after\"]) - "
             "float(r[\"d0\"])))\n"
             "fig, ax = plt.subplots(figsize=(6, 4))\n"
             "for c, pts in sorted(by_c.items(), key=lambda kv: float(kv[0])):\n"
             "    pts.sort()\n"
             "    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=\"c = \" + c)\n"
             "ax.axhline(0.0, color=\"k\", lw=0.5)\n"
             "ax.set_xlabel(\"h\")\n"
             "ax.set_ylabel(\"d_after - d0\")\n"
             "ax.legend()\n"
             "fig.tight_layout()\n"
             "fig.savefig(os.path.join(here, \"isotropy.png\"), dpi=160)\n";
    case ExperimentKind::karcher:
      return prelude +
             "rows = list(csv.DictReader(open(os.path.join(here, \"karcher.csv\"))))\n"
             "fig, ax = plt.subplots(figsize=(6, 4))\n"
             "ax.semilogy([int(r[\"iter\"]) for r in rows], [float(r[\"field_norm\"]) for r "
             "in rows], \"o-\")\n"
             "ax.set_xlabel(\"iteration\")\n"
             "ax.set_ylabel(\"|X|_g\")\n"
             "fig.tight_layout()\n"
             "fig.savefig(os.path.join(here, \"karcher.png\"), dpi=160)\n";
  }
  return prelude;
}

inline RunOutputs build_outputs(const ExperimentConfig& cfg) {
  RunOutputs out;
  switch (cfg.kind) {
    case ExperimentKind::sweep:
      if (cfg.manifold.kind == "sphere2") run_sweep_on(Sphere2{}, cfg, out);
      else if (cfg.manifold.kind == "spd") run_sweep_on(SpdManifold(cfg.manifold.n), cfg, out);
      else run_sweep_on(Euclidean(cfg.manifold.n), cfg, out);
      break;
    case ExperimentKind::bifurcation:
      run_bifurcation(cfg, out);
      break;
    case ExperimentKind::global_error:
      if (cfg.manifold.kind == "sphere2") run_global_error_on(Sphere2{}, cfg, out);
      else if (cfg.manifold.kind == "spd")
        run_global_error_on(SpdManifold(cfg.manifold.n), cfg, out);
      else run_global_error_on(Euclidean(cfg.manifold.n), cfg, out);
      break;
    case ExperimentKind::lognorm:
      if (cfg.manifold.kind == "sphere2") run_lognorm_on(Sphere2{}, cfg, out);
      else if (cfg.manifold.kind == "spd") run_lognorm_on(SpdManifold(cfg.manifold.n), cfg, out);
      else run_lognorm_on(Euclidean(cfg.manifold.n), cfg, out);
      break;
    case ExperimentKind::isotropy:
      run_isotropy(cfg, out);
      break;
    case ExperimentKind::karcher:
      run_karcher(cfg, out);
      break;
  }
  out.files.emplace_back("plot.py", plot_script(cfg.kind));
  return out;
}

}  // namespace rundetail

/// Runs the experiment and writes its CSV, plot script, and manifest into
/// out_dir.  The CSVs depend only on the resolved configuration; the manifest
/// records checksums and timings and is written last.
inline RunReport run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir,
                                const std::string& tool_version) {
  const auto t0 = std::chrono::steady_clock::now();
  rundetail::RunOutputs out = rundetail::build_outputs(cfg);
  const auto t1 = std::chrono::steady_clock::now();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory " + out_dir.string());

  json manifest;
  manifest["tool"] = "geodint";
  manifest["tool_version"] = tool_version;
  manifest["experiment"] = experiment_kind_name(cfg.kind);
  manifest["config"] = cfg.echo;
  manifest["result"] = out.result;
  manifest["outputs"] = json::array();
  for (const auto& [name, content] : out.files) {
    write_text_file(out_dir / name, content);
    manifest["outputs"].push_back({{"file", name},
                                   {"bytes", content.size()},
                                   {"fnv1a64", fnv1a64_hex(content)}});
  }
  const auto t2 = std::chrono::steady_clock::now();
  manifest["timings_ms"] = {
      {"compute", std::chrono::duration<double, std::milli>(t1 - t0).count()},
      {"write", std::chrono::duration<double, std::milli>(t2 - t1).count()}};
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  RunReport report;
  report.exit_code = out.flagged ? 3 : 0;
  report.output_dir = out_dir;
  report.lines = std::move(out.lines);
  if (out.flagged)
    report.lines.push_back("warning: some records did not converge; outputs were kept");
  return report;
}

}  // namespace geodint
