// Acceptance gate: one PASS/FAIL line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psurf/cli.hpp"
#include "psurf/expectation.hpp"
#include "psurf/fit.hpp"
#include "psurf/flatten.hpp"
#include "psurf/io.hpp"
#include "psurf/projection.hpp"
#include "psurf/simulate.hpp"
#include "psurf/tps.hpp"

using namespace psurf;

namespace {

int g_failed = 0;

void report(const std::string& label, bool pass, const std::string& detail) {
  std::cout << label << ": " << (pass ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " - " << detail;
  std::cout << '\n' << std::flush;
  if (!pass) ++g_failed;
}

Param2 random_params(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Param2 t(n, 2);
  for (int i = 0; i < n; ++i) t.row(i) << u(rng), u(rng);
  return t;
}

std::string fmt2(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

// ----- shared full-scale case fits (criteria 1, 3, 9) -----

struct CaseRun {
  SimData data;
  FitResult res;
  double seconds = 0.0;
  bool ok = false;
  std::string err;
};

CaseRun run_case(int cid) {
  CaseRun out;
  out.data = generate_case({cid, 6000, 1000, 7});
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out.res = fit_principal_surface(out.data.cloud, FitConfig{});
    out.ok = true;
  } catch (const error& e) {
    out.err = e.what();
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

// latent rectangles of the four cases, for building truth-perfect models
void latent_box(int cid, double& u0, double& u1, double& v0, double& v1) {
  switch (cid) {
    case 1: u0 = 0.0; u1 = 2.0 * 3.14159265358979323846 - 0.5; v0 = -3.0;
      v1 = 3.0; return;
    case 2: u0 = -5.0; u1 = 5.0; v0 = -5.0; v1 = 5.0; return;
    case 3: u0 = 0.0; u1 = 1.0; v0 = 0.0; v1 = 10.0; return;
    default: u0 = 0.0; u1 = 1.0; v0 = 0.0; v1 = 5.0; return;
  }
}

/// Near-interpolating TPS of the noiseless truth: the "deliberately perfect
/// model" used to validate each RMSE threshold before trusting a fit to it.
SurfaceModel perfect_model(int cid, const GroundTruth& truth) {
  const int side = 35;
  double u0, u1, v0, v1;
  latent_box(cid, u0, u1, v0, v1);
  Param2 t(side * side, 2);
  Eigen::MatrixX3d y(side * side, 3);
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const double t1 = static_cast<double>(a) / (side - 1);
      const double t2 = static_cast<double>(b) / (side - 1);
      t.row(a * side + b) << t1, t2;
      y.row(a * side + b) =
          truth.truth_fn(u0 + (u1 - u0) * t1, v0 + (v1 - v0) * t2)
              .transpose();
    }
  return fit_tps(t, y, t, 0.0);
}

// ----- criterion helpers -----

ProjectionResult brute_project(const Eigen::Vector3d& x,
                               const Eigen::MatrixX3d& grid, int n) {
  ProjectionResult best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double d2 = (x - grid.row(a * n + b).transpose()).squaredNorm();
      if (d2 <= best_d2) {  // ascending scan: last tie = largest (t1, t2)
        best_d2 = d2;
        best.t_star = Eigen::Vector2d(a / (n - 1.0), b / (n - 1.0));
        best.on_boundary = (a == 0 || b == 0 || a == n - 1 || b == n - 1);
      }
    }
  best.distance = std::sqrt(best_d2);
  return best;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += (c == '\n');
  return n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f),
          std::istreambuf_iterator<char>()};
}

int parse_iterations(const std::string& report) {
  std::istringstream ss(report);
  std::string line;
  while (std::getline(ss, line))
    if (line.rfind("iterations_used:", 0) == 0)
      return std::stoi(line.substr(16));
  return -1;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("psurf");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

int main() {
  std::filesystem::path scratch;
  {
    std::random_device rd;
    scratch = std::filesystem::temp_directory_path() /
              ("psurf_acceptance_" + std::to_string(rd()));
    std::filesystem::create_directories(scratch);
  }

  // ===== shared full-scale fits =====
  std::map<int, CaseRun> cases;
  for (int cid = 1; cid <= 4; ++cid) cases.emplace(cid, run_case(cid));

  // ----- criterion 1: convergence envelope -----
  {
    bool pass = true;
    std::string detail;
    for (int cid = 1; cid <= 4; ++cid) {
      const CaseRun& cr = cases.at(cid);
      if (!detail.empty()) detail += "; ";
      if (!cr.ok) {
        pass = false;
        detail += "case " + std::to_string(cid) + " error: " + cr.err;
        continue;
      }
      const bool case_ok = cr.res.report.converged &&
                           cr.res.report.iterations_used < 20 &&
                           cr.seconds < 120.0;
      pass = pass && case_ok;
      detail += "case " + std::to_string(cid) + " " +
                std::to_string(cr.res.report.iterations_used) + " iters " +
                fmt2(cr.seconds) + "s" +
                (cr.res.report.converged ? "" : " (not converged)");
    }
    report("CRITERION 1 convergence-envelope", pass, detail);
  }

  // ----- criterion 2: grid/iteration trend on the bent carpet -----
  FitResult c3_grid15, c3_grid50;  // reused by criterion 5
  bool have_c3_models = false;
  {
    const std::vector<Eigen::Index> samples = {100, 200, 500, 700, 1000};
    const std::vector<int> grids = {15, 30, 50, 100};
    bool pass = true;
    std::string detail;
    int cell_1000_15 = -1;
    for (Eigen::Index m : samples) {
      const SimData data = generate_case({3, 6000, m, 7});
      std::vector<int> iters;
      for (int g : grids) {
        FitConfig cfg;
        cfg.n_grid = g;
        try {
          FitResult res = fit_principal_surface(data.cloud, cfg);
          iters.push_back(res.report.iterations_used);
          if (m == 1000 && g == 15) {
            cell_1000_15 = res.report.iterations_used;
            c3_grid15 = res;
          }
          if (m == 1000 && g == 50) c3_grid50 = res;
        } catch (const error& e) {
          iters.push_back(-1);
          pass = false;
          detail += "fit(" + std::to_string(m) + "," + std::to_string(g) +
                    ") error: " + e.what() + "; ";
        }
      }
      int inversions = 0;
      for (std::size_t k = 1; k < iters.size(); ++k)
        if (iters[k] > iters[k - 1]) ++inversions;
      if (inversions > 1) pass = false;
      detail += "m=" + std::to_string(m) + " iters";
      for (int it : iters) detail += " " + std::to_string(it);
      detail += " (inv " + std::to_string(inversions) + "); ";
    }
    if (cell_1000_15 < 11 || cell_1000_15 > 33) pass = false;
    detail += "(1000,15)=" + std::to_string(cell_1000_15) + " in [11,33]";
    have_c3_models = c3_grid15.params.rows() > 0 && c3_grid50.params.rows() > 0;
    report("CRITERION 2 grid-iteration-trend", pass, detail);
  }

  // ----- criterion 3: surface recovery below the noise scale -----
  {
    const double thresholds[5] = {0.0, 0.15, 0.60, 0.25, 0.12};
    bool pass = true;
    std::string detail;
    for (int cid = 1; cid <= 4; ++cid) {
      const CaseRun& cr = cases.at(cid);
      if (!detail.empty()) detail += "; ";
      // validate the threshold with a truth-perfect model first
      double perfect = std::numeric_limits<double>::quiet_NaN();
      try {
        perfect =
            rmse_to_truth(perfect_model(cid, cr.data.truth), cr.data.truth,
                          2500);
      } catch (const error&) {
      }
      const bool oracle_ok = std::isfinite(perfect) &&
                             perfect < thresholds[cid] / 2.0;
      double rmse = std::numeric_limits<double>::quiet_NaN();
      if (cr.ok)
        rmse = rmse_to_truth(cr.res.model.translated(cr.res.centroid),
                             cr.data.truth, 2500);
      const bool fit_ok = std::isfinite(rmse) && rmse < thresholds[cid];
      pass = pass && oracle_ok && fit_ok;
      detail += "case " + std::to_string(cid) + " rmse " + fmt2(rmse) +
                " (perfect " + fmt2(perfect) + ", limit " +
                fmt2(thresholds[cid]) + ")";
    }
    report("CRITERION 3 surface-recovery", pass, detail);
  }

  // ----- criterion 4: TPS correctness suite -----
  {
    bool pass = true;
    std::string detail;
    const Param2 t = random_params(120, 401);
    Eigen::MatrixX3d aff(120, 3);
    for (int i = 0; i < 120; ++i)
      aff.row(i) << 0.5 - t(i, 0) + 2.0 * t(i, 1), 3.0 * t(i, 0),
          1.0 + t(i, 0) + t(i, 1);
    double worst_affine = 0.0;
    for (double lam : {0.0, 1.0, 100.0}) {
      const SurfaceModel m = fit_tps(t, aff, t, lam);
      for (int i = 0; i < 120; ++i)
        worst_affine = std::max(
            worst_affine,
            (eval_surface(m, t.row(i).transpose()) -
             aff.row(i).transpose())
                .cwiseAbs()
                .maxCoeff());
    }
    if (worst_affine >= 1e-8) pass = false;
    detail += "affine " + fmt2(worst_affine);

    const Param2 ti = random_params(200, 402);
    Eigen::MatrixX3d yi(200, 3);
    for (int i = 0; i < 200; ++i)
      yi.row(i) << std::sin(3 * ti(i, 0)) * std::cos(2 * ti(i, 1)),
          ti(i, 0) * ti(i, 0) - ti(i, 1), std::exp(-ti(i, 0));
    const SurfaceModel mi = fit_tps(ti, yi, ti, 0.0);
    double worst_interp = 0.0;
    for (int i = 0; i < 200; ++i)
      worst_interp = std::max(
          worst_interp, (eval_surface(mi, ti.row(i).transpose()) -
                         yi.row(i).transpose())
                            .cwiseAbs()
                            .maxCoeff());
    if (worst_interp >= 1e-6) pass = false;
    detail += "; interp " + fmt2(worst_interp);

    // orthogonality and penalty monotonicity across the GCV grid
    const Param2 tn = random_params(150, 403);
    Eigen::MatrixX3d yn(150, 3);
    std::mt19937_64 rng(404);
    std::normal_distribution<double> gns(0.0, 1.0);
    for (int i = 0; i < 150; ++i)
      yn.row(i) << std::sin(6 * tn(i, 0)) + 0.2 * gns(rng), gns(rng),
          tn(i, 0) * tn(i, 1) + 0.2 * gns(rng);
    double worst_ortho = 0.0, prev_pen = std::numeric_limits<double>::max();
    bool monotone = true;
    for (double lam : lambda_grid()) {
      const SurfaceModel m = fit_tps(tn, yn, tn, lam);
      Eigen::MatrixXd con(m.knots.rows(), 3);
      con.col(0).setOnes();
      con.rightCols(2) = m.knots;
      worst_ortho = std::max(
          worst_ortho, (con.transpose() * m.delta).cwiseAbs().maxCoeff());
      const double pen = roughness_penalty(m);
      if (pen > prev_pen + 1e-10) monotone = false;
      prev_pen = pen;
    }
    if (worst_ortho >= 1e-8) pass = false;
    if (!monotone) pass = false;
    detail += "; ortho " + fmt2(worst_ortho) + "; penalty " +
              (monotone ? "monotone" : "NOT monotone");
    report("CRITERION 4 tps-suite", pass, detail);
  }

  // ----- criterion 5: projection oracle equivalence -----
  {
    bool pass = true;
    std::string detail;
    if (!have_c3_models) {
      pass = false;
      detail = "no fitted case-3 models available";
    } else {
      std::mt19937_64 rng(505);
      std::uniform_real_distribution<double> ux(-0.5, 3.5), uy(-1.0, 11.0),
          uz(-3.0, 1.0);
      int mismatches = 0;
      for (const auto& [model, n] :
           {std::pair<const SurfaceModel&, int>{c3_grid15.model, 15},
            std::pair<const SurfaceModel&, int>{c3_grid50.model, 50}}) {
        const Eigen::MatrixX3d grid = eval_surface_grid(model, n);
        for (int k = 0; k < 100; ++k) {
          const Eigen::Vector3d x(ux(rng), uy(rng), uz(rng));
          const ProjectionResult a = project_point(x, grid, n);
          const ProjectionResult b = brute_project(x, grid, n);
          if (a.t_star(0) != b.t_star(0) || a.t_star(1) != b.t_star(1) ||
              a.distance != b.distance || a.on_boundary != b.on_boundary)
            ++mismatches;
        }
      }
      pass = mismatches == 0;
      detail = std::to_string(mismatches) + " mismatches over 200 queries";
    }
    report("CRITERION 5 projection-oracle", pass, detail);
  }

  // ----- criterion 6: expectation oracle equivalence -----
  {
    const Param2 t = random_params(1000, 606);
    const double r = 0.15, h = 0.005625;
    int set_mismatches = 0;
    double worst_w = 0.0, worst_sum = 0.0;
    for (int q = 0; q < 200; ++q) {
      const Eigen::Index i = q * 5;
      const NeighborSet nbrs = find_neighbors(t, i, r);
      std::vector<Eigen::Index> brute;
      for (Eigen::Index j = 0; j < t.rows(); ++j)
        if ((t.row(j) - t.row(i)).norm() <= r) brute.push_back(j);
      if (nbrs.indices != brute) {
        ++set_mismatches;
        continue;
      }
      const WeightVector w = kernel_weights(t, i, nbrs, h);
      Eigen::VectorXd e(static_cast<Eigen::Index>(brute.size()));
      for (std::size_t k = 0; k < brute.size(); ++k)
        e(static_cast<Eigen::Index>(k)) =
            -(t.row(brute[k]) - t.row(i)).squaredNorm() / h;
      e.array() -= e.maxCoeff();
      Eigen::VectorXd bw = e.array().exp();
      bw /= bw.sum();
      worst_w = std::max(worst_w, (w.weights - bw).cwiseAbs().maxCoeff());
      worst_sum = std::max(worst_sum, std::abs(w.weights.sum() - 1.0));
    }
    const bool pass =
        set_mismatches == 0 && worst_w < 1e-12 && worst_sum < 1e-12;
    report("CRITERION 6 expectation-oracle", pass,
           std::to_string(set_mismatches) + " set mismatches, max weight dev " +
               fmt2(worst_w) + ", max sum dev " + fmt2(worst_sum));
  }

  // ----- criterion 7: flattening -----
  {
    bool pass = true;
    std::string detail;
    const Param2 t = random_params(1000, 707);
    const FlattenConfig cfg{};
    if (cfg.g != 100) pass = false;

    const ScalarMap2D cmap = flatten_scalar_field(
        t, Eigen::VectorXd::Constant(1000, 0.5), cfg);
    if (cmap.g != 100 || cmap.values.rows() != 100 ||
        cmap.values.cols() != 100)
      pass = false;
    double worst_const = 0.0;
    for (int iy = 0; iy < cmap.g; ++iy)
      for (int ix = 0; ix < cmap.g; ++ix)
        if (!cmap.mask(iy, ix))
          worst_const =
              std::max(worst_const, std::abs(cmap.values(iy, ix) - 0.5));
    if (worst_const >= 1e-12) pass = false;
    detail += "const dev " + fmt2(worst_const);

    const Eigen::VectorXd ramp = t.col(0);
    const ScalarMap2D rmap = flatten_scalar_field(t, ramp, cfg);
    double worst_cell = 0.0, worst_oracle = 0.0;
    for (int iy = 0; iy < rmap.g; ++iy)
      for (int ix = 0; ix < rmap.g; ++ix) {
        const double cx = (ix + 0.5) / rmap.g, cy = (iy + 0.5) / rmap.g;
        // brute-force recomputation of the cell contract
        std::vector<Eigen::Index> in;
        for (Eigen::Index j = 0; j < t.rows(); ++j) {
          const double dx = t(j, 0) - cx, dy = t(j, 1) - cy;
          if (std::sqrt(dx * dx + dy * dy) <= cfg.smooth_r) in.push_back(j);
        }
        if (static_cast<int>(in.size()) < cfg.min_support) {
          if (!rmap.mask(iy, ix)) pass = false;
          continue;
        }
        if (rmap.mask(iy, ix)) {
          pass = false;
          continue;
        }
        double emax = -1e300;
        std::vector<double> e(in.size());
        for (std::size_t k = 0; k < in.size(); ++k) {
          const double dx = t(in[k], 0) - cx, dy = t(in[k], 1) - cy;
          e[k] = -(dx * dx + dy * dy) / cfg.smooth_h;
          emax = std::max(emax, e[k]);
        }
        double wsum = 0.0, acc = 0.0;
        for (std::size_t k = 0; k < in.size(); ++k) {
          const double w = std::exp(e[k] - emax);
          wsum += w;
          acc += w * ramp(in[k]);
        }
        const double ref = acc / wsum;
        worst_oracle =
            std::max(worst_oracle, std::abs(rmap.values(iy, ix) - ref));
        worst_cell = std::max(worst_cell, std::abs(rmap.values(iy, ix) - cx));
      }
    if (worst_oracle >= 1e-12 || worst_cell > 0.05) pass = false;
    detail += "; ramp cell dev " + fmt2(worst_cell) + ", oracle dev " +
              fmt2(worst_oracle) + ", grid 100x100";
    report("CRITERION 7 flattening", pass, detail);
  }

  // ----- criterion 8: end-to-end determinism -----
  {
    bool pass = true;
    std::string detail;
    const std::filesystem::path dir = scratch / "det";
    std::filesystem::create_directories(dir);
    const std::string out = dir.string();
    std::string params_a, params_b;
    int iters_a = -1, iters_b = -2;
    if (run_cli({"eval", "--case", "1", "--seed", "7", "--out", out}) == 0) {
      params_a = slurp(dir / "params.csv");
      iters_a = parse_iterations(slurp(dir / "report.txt"));
    } else {
      pass = false;
      detail = "first eval failed; ";
    }
    if (run_cli({"eval", "--case", "1", "--seed", "7", "--out", out}) == 0) {
      params_b = slurp(dir / "params.csv");
      iters_b = parse_iterations(slurp(dir / "report.txt"));
    } else {
      pass = false;
      detail += "second eval failed; ";
    }
    if (params_a.empty() || params_a != params_b) pass = false;
    if (iters_a != iters_b) pass = false;
    detail += "params.csv " +
              std::string(params_a == params_b && !params_a.empty()
                              ? "byte-identical"
                              : "DIFFER") +
              ", iterations " + std::to_string(iters_a) + " vs " +
              std::to_string(iters_b);
    report("CRITERION 8 determinism", pass, detail);
  }

  // ----- criterion 9: approximate self-consistency -----
  {
    bool pass = true;
    std::string detail;
    int checked = 0;
    for (int cid = 1; cid <= 4; ++cid) {
      const CaseRun& cr = cases.at(cid);
      if (!cr.ok || !cr.res.report.converged) continue;
      ++checked;
      const double stat =
          self_consistency_stat(cr.data.cloud, cr.res, FitConfig{});
      const double bound = 3.0 * cr.res.final_surface_update;
      if (!(stat <= bound)) pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "case " + std::to_string(cid) + " stat " + fmt2(stat) +
                " vs 3x update " + fmt2(bound);
    }
    if (checked == 0) {
      pass = false;
      detail = "no converged case fits to check";
    }
    report("CRITERION 9 self-consistency", pass, detail);
  }

  // ----- FA-map stand-in: bent carpet with a smooth scalar field -----
  {
    bool pass = true;
    std::string detail;
    const SimData data = generate_case({3, 6000, 6000, 7});
    std::string csv = "x,y,z,fa\n";
    for (Eigen::Index i = 0; i < data.cloud.size(); ++i) {
      const double s = 0.2 + 0.6 * data.cloud.points(i, 1) / 10.0;
      csv += format_double(data.cloud.points(i, 0)) + "," +
             format_double(data.cloud.points(i, 1)) + "," +
             format_double(data.cloud.points(i, 2)) + "," + format_double(s) +
             "\n";
    }
    const std::filesystem::path in = scratch / "carpet_fa.csv";
    {
      std::ofstream f(in, std::ios::binary);
      f << csv;
    }
    const std::filesystem::path out = scratch / "fa";
    const int rc = run_cli({"flatten", in.string(), "--out", out.string(),
                            "--subsample", "1000"});
    if (rc != 0) {
      pass = false;
      detail = "flatten exited " + std::to_string(rc);
    } else {
      const ScalarMap2D map = read_map_csv((out / "map.csv").string());
      if (map.g != 100) pass = false;
      int unmasked = 0;
      double lo = 1e300, hi = -1e300;
      double grad_acc = 0.0;
      int grad_n = 0;
      for (int iy = 0; iy < map.g; ++iy)
        for (int ix = 0; ix < map.g; ++ix) {
          if (map.mask(iy, ix)) continue;
          ++unmasked;
          lo = std::min(lo, map.values(iy, ix));
          hi = std::max(hi, map.values(iy, ix));
          if (ix + 1 < map.g && !map.mask(iy, ix + 1)) {
            grad_acc += std::abs(map.values(iy, ix + 1) - map.values(iy, ix));
            ++grad_n;
          }
          if (iy + 1 < map.g && !map.mask(iy + 1, ix)) {
            grad_acc += std::abs(map.values(iy + 1, ix) - map.values(iy, ix));
            ++grad_n;
          }
        }
      const double frac = unmasked / (100.0 * 100.0);
      const double mean_grad = grad_n ? grad_acc / grad_n : 1e300;
      if (frac < 0.5) pass = false;
      if (lo < 0.15 || hi > 0.85) pass = false;
      if (hi - lo < 0.3) pass = false;
      if (mean_grad > 0.05) pass = false;
      const int line_count = count_lines(slurp(out / "map.csv"));
      if (line_count != 100) pass = false;
      detail = "unmasked " + fmt2(100.0 * frac) + "%, range [" + fmt2(lo) +
               "," + fmt2(hi) + "], mean adjacent step " + fmt2(mean_grad) +
               ", pgm+csv written";
    }
    report("FA-MAP STAND-IN bent-carpet", pass, detail);
  }

  std::error_code ec;
  std::filesystem::remove_all(scratch, ec);

  if (g_failed == 0) {
    std::cout << "ALL CRITERIA PASSED\n";
    return 0;
  }
  std::cout << g_failed << " CRITERIA FAILED\n";
  return 1;
}
