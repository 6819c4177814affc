#include "psurf/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "psurf/fit.hpp"
#include "psurf/flatten.hpp"
#include "psurf/io.hpp"
#include "psurf/simulate.hpp"
#include "psurf/tps.hpp"
#include "psurf/version.hpp"

namespace psurf {

namespace {

struct FitFlags {
  FitConfig cfg;
  CLI::Option* r_opt = nullptr;
  CLI::Option* h_opt = nullptr;
  std::optional<double> lambda;
  std::optional<long long> subsample;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  // long-only help: -h would shadow the bandwidth flag below
  cmd->set_help_flag("--help", "print this help message and exit");
  f.r_opt = cmd->add_option("--r", f.cfg.r,
                            "neighborhood radius in parametrization units")
                ->capture_default_str();
  f.h_opt = cmd->add_option(
                   "--h", f.cfg.h,
                   "Gaussian kernel bandwidth; defaults to (r/2)^2")
                ->capture_default_str();
  cmd->add_option("--n-grid", f.cfg.n_grid, "projection grid count per axis")
      ->capture_default_str();
  cmd->add_option("--n-knots", f.cfg.n_knots,
                  "TPS knot budget (capped at the point count)")
      ->capture_default_str();
  auto* lam = cmd->add_option("--lambda", f.lambda,
                              "fixed smoothing parameter (default: GCV)");
  cmd->add_flag("--gcv", "select the smoothing parameter by GCV (default)")
      ->excludes(lam);
  cmd->add_option("--max-iter", f.cfg.max_iter, "iteration cap")
      ->capture_default_str();
  cmd->add_option("--thres", f.cfg.thres,
                  "convergence threshold on the mean squared change")
      ->capture_default_str();
  cmd->add_option("--subsample", f.subsample,
                  "fit on this many seed-chosen points, project the rest");
  cmd->add_option("--seed", f.cfg.seed, "RNG seed")->capture_default_str();
}

FitConfig resolve(const FitFlags& f) {
  FitConfig cfg = f.cfg;
  if (f.r_opt->count() > 0 && f.h_opt->count() == 0)
    cfg.h = (cfg.r / 2.0) * (cfg.r / 2.0);
  cfg.lambda = f.lambda;
  if (f.subsample) cfg.subsample = static_cast<Eigen::Index>(*f.subsample);
  return cfg;
}

void append_rmse(const std::string& out_dir, double rmse) {
  const std::filesystem::path p = std::filesystem::path(out_dir) / "report.txt";
  std::ofstream f(p, std::ios::app | std::ios::binary);
  if (!f) fail(errc::io, "cannot open " + p.string() + " for writing");
  f << "rmse: " << format_double(rmse) << '\n';
  if (!f.flush()) fail(errc::io, "write failed for " + p.string());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"principal surface fitting and 2D scalar-map flattening"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a principal surface to a CSV point cloud");
  std::string fit_in, fit_out;
  FitFlags fit_flags;
  fit_cmd->add_option("input", fit_in, "input CSV (x,y,z[,scalar])")
      ->required();
  fit_cmd->add_option("--out", fit_out, "output directory")->required();
  add_fit_flags(fit_cmd, fit_flags);

  // flatten
  auto* flat_cmd = app.add_subcommand(
      "flatten", "fit, then flatten the scalar column onto a 2D map");
  std::string flat_in, flat_out;
  FitFlags flat_flags;
  FlattenConfig flat_cfg;
  CLI::Option *sr_opt, *sh_opt;
  flat_cmd->add_option("input", flat_in, "input CSV (x,y,z,scalar)")
      ->required();
  flat_cmd->add_option("--out", flat_out, "output directory")->required();
  add_fit_flags(flat_cmd, flat_flags);
  flat_cmd->add_option("--g", flat_cfg.g, "output map grid count per axis")
      ->capture_default_str();
  sr_opt = flat_cmd->add_option("--smooth-r", flat_cfg.smooth_r,
                                "scalar smoothing radius; defaults to --r");
  sh_opt = flat_cmd->add_option("--smooth-h", flat_cfg.smooth_h,
                                "scalar smoothing bandwidth; defaults to --h");
  flat_cmd->add_option("--min-support", flat_cfg.min_support,
                       "minimum points within radius to unmask a cell")
      ->capture_default_str();

  // simulate
  auto* sim_cmd =
      app.add_subcommand("simulate", "generate one of the synthetic cases");
  sim_cmd->set_help_flag("--help", "print this help message and exit");
  SimCase sim;
  long long sim_n = 6000, sim_sample = 1000;
  std::string sim_out;
  sim_cmd->add_option("--case", sim.case_id, "case id (1..4)")
      ->required()
      ->check(CLI::Range(1, 4));
  sim_cmd->add_option("--n", sim_n, "total generated points")
      ->capture_default_str();
  sim_cmd->add_option("--sample", sim_sample, "subsample size written out")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "output CSV path")->required();

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "generate a case, fit it, and report iterations and RMSE");
  SimCase ev;
  long long ev_n = 6000, ev_sample = 1000;
  std::string ev_out = ".";
  FitFlags ev_flags;
  eval_cmd->add_option("--case", ev.case_id, "case id (1..4)")
      ->required()
      ->check(CLI::Range(1, 4));
  eval_cmd->add_option("--n", ev_n, "total generated points")
      ->capture_default_str();
  eval_cmd->add_option("--sample", ev_sample, "subsample size fitted")
      ->capture_default_str();
  add_fit_flags(eval_cmd, ev_flags);
  eval_cmd->add_option("--out", ev_out, "output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 1;
  }

  if (*fit_cmd) {
    const FitConfig cfg = resolve(fit_flags);
    const PointCloud3 cloud = read_cloud_csv(fit_in);
    const FitResult result = fit_principal_surface(cloud, cfg);
    RunManifest manifest{cfg, std::nullopt, fnv1a64_file(fit_in),
                         k_tool_version};
    write_outputs(result, nullptr, fit_out, manifest);
    std::cout << "iterations_used: " << result.report.iterations_used << '\n'
              << "converged: " << (result.report.converged ? "true" : "false")
              << '\n';
    return 0;
  }

  if (*flat_cmd) {
    const FitConfig cfg = resolve(flat_flags);
    if (sr_opt->count() == 0) flat_cfg.smooth_r = cfg.r;
    if (sh_opt->count() == 0) flat_cfg.smooth_h = cfg.h;
    const PointCloud3 cloud = read_cloud_csv(flat_in);
    if (!cloud.has_scalars())
      fail(errc::data, "flatten requires a 4th scalar column in " + flat_in);
    const FitResult result = fit_principal_surface(cloud, cfg);
    const ScalarMap2D map =
        flatten_scalar_field(result.params, cloud.scalars, flat_cfg);
    RunManifest manifest{cfg, flat_cfg, fnv1a64_file(flat_in), k_tool_version};
    write_outputs(result, &map, flat_out, manifest);
    std::cout << "iterations_used: " << result.report.iterations_used << '\n'
              << "converged: " << (result.report.converged ? "true" : "false")
              << '\n';
    return 0;
  }

  if (*sim_cmd) {
    sim.i_total = static_cast<Eigen::Index>(sim_n);
    sim.sample = static_cast<Eigen::Index>(sim_sample);
    const SimData data = generate_case(sim);
    std::ofstream f(sim_out, std::ios::binary);
    if (!f) fail(errc::io, "cannot open " + sim_out + " for writing");
    for (Eigen::Index i = 0; i < data.cloud.size(); ++i)
      f << format_double(data.cloud.points(i, 0)) << ','
        << format_double(data.cloud.points(i, 1)) << ','
        << format_double(data.cloud.points(i, 2)) << '\n';
    if (!f.flush()) fail(errc::io, "write failed for " + sim_out);
    std::cout << "wrote " << data.cloud.size() << " points to " << sim_out
              << '\n';
    return 0;
  }

  // eval
  ev.i_total = static_cast<Eigen::Index>(ev_n);
  ev.sample = static_cast<Eigen::Index>(ev_sample);
  const SimData data = generate_case(ev);
  const FitConfig cfg = resolve(ev_flags);
  const FitResult result = fit_principal_surface(data.cloud, cfg);
  const double rmse =
      rmse_to_truth(result.model.translated(result.centroid), data.truth, 2500);
  RunManifest manifest{cfg, std::nullopt, "", k_tool_version};
  write_outputs(result, nullptr, ev_out, manifest);
  append_rmse(ev_out, rmse);
  std::cout << "case: " << ev.case_id << '\n'
            << "iterations_used: " << result.report.iterations_used << '\n'
            << "converged: " << (result.report.converged ? "true" : "false")
            << '\n'
            << "rmse: " << format_double(rmse) << '\n';
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
  try {
    return run(argc, argv);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace psurf
