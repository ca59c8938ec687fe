#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geodint/experiment/config.hpp"
#include "geodint/experiment/runner.hpp"

#ifndef GEODINT_VERSION
#define GEODINT_VERSION "0.0.0"
#endif

namespace {

int run_command(const std::string& config_path, const std::vector<std::string>& overrides,
                const std::string& out_flag) {
  geodint::json raw = geodint::load_config_file(config_path);
  for (const auto& assignment : overrides) geodint::apply_override(raw, assignment);
  const geodint::ExperimentConfig cfg = geodint::resolve_config(raw);

  std::string out_dir = cfg.output_dir;
  if (const char* env = std::getenv("GEODINT_OUT_DIR"); env && *env) out_dir = env;
  if (!out_flag.empty()) out_dir = out_flag;

  const auto report = geodint::run_experiment(cfg, out_dir, GEODINT_VERSION);
  std::cout << geodint::experiment_kind_name(cfg.kind) << " -> " << report.output_dir.string()
            << "\n";
  for (const auto& line : report.lines) std::cout << "  " << line << "\n";
  return report.exit_code;
}

void list_command() {
  std::cout << "experiments:\n"
            << "  sweep         step a point pair once per h and compare distances\n"
            << "                keys: manifold, field, methods, initial_points, h; optional"
               " solver\n"
            << "  bifurcation   roots of the implicit rotation step on the sphere\n"
            << "                keys: z0, h\n"
            << "  global-error  end-point error at t_star against the one-step bound\n"
            << "                keys: manifold, field, methods, initial_points, t_star,\n"
            << "                step_counts; optional solver, fine_tol, nu_samples,"
               " ball_margin\n"
            << "  lognorm       logarithmic g-norm samples over a region\n"
            << "                keys: manifold, field, region; optional samples\n"
            << "  isotropy      implicit rotation steps for a family of frame maps\n"
            << "                keys: initial_points, h; optional c_values, solver\n"
            << "  karcher       weighted Karcher mean by implicit gradient steps\n"
            << "                keys: manifold, field; optional tolerance, max_steps\n"
            << "common keys: experiment, output_dir, seed\n"
            << "manifolds: sphere2, spd (n), euclidean (n)\n"
            << "methods: gee, gie, gimp, sphmp, lie\n"
            << "bundled fixtures (fixtures/<name>.json):\n"
            << "  fig2_spd fig3_gie_sphere fig4_midpoints fig5_bifurcation"
               " fig6_isotropy\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic one-step integrator experiments"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "path to the experiment config")->required();
  run->add_option("--set", overrides, "override a config key, as dotted.path=value");
  run->add_option("--out", out_flag, "output directory (overrides config and environment)");

  auto* list = app.add_subcommand("list", "describe the available experiments");
  auto* version = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, overrides, out_flag);
    if (list->parsed()) list_command();
    if (version->parsed()) std::cout << GEODINT_VERSION << "\n";
    return 0;
  } catch (const geodint::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const geodint::chart_domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const geodint::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const geodint::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
