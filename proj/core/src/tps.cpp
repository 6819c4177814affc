#include "psurf/tps.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace psurf {

double tps_eta(double rho) {
  return rho > 0.0 ? rho * rho * std::log(rho) : 0.0;
}

namespace {

Eigen::MatrixXd radial_matrix(const Eigen::MatrixX2d& a,
                              const Eigen::MatrixX2d& b) {
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      const double dx = a(i, 0) - b(j, 0);
      const double dy = a(i, 1) - b(j, 1);
      out(i, j) = tps_eta(std::sqrt(dx * dx + dy * dy));
    }
  return out;
}

Eigen::MatrixXd poly_matrix(const Eigen::MatrixX2d& t) {
  Eigen::MatrixXd p(t.rows(), 3);
  p.col(0).setOnes();
  p.col(1) = t.col(0);
  p.col(2) = t.col(1);
  return p;
}

struct Solved {
  Eigen::MatrixXd theta;  // (K+3) x 3
  double rss = 0.0;
  double tr_hat = 0.0;
  double min_pivot = 0.0;
  bool singular = false;
};

// One bordered solve: [ B'B + lam*diag(Omega,0), C~ ; C~', 0 ] with the
// orthogonality constraint C'delta = 0 appended as three trailing rows.
Solved solve_bordered(const Eigen::MatrixXd& bmat, const Eigen::MatrixXd& gram,
                      const Eigen::MatrixXd& omega, const Eigen::MatrixXd& con,
                      const Eigen::MatrixX3d& targets, double lam,
                      bool want_trace, bool refine) {
  const Eigen::Index k = omega.rows();
  const Eigen::Index m = k + 6;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(m, m);
  sys.topLeftCorner(k + 3, k + 3) = gram;
  sys.topLeftCorner(k, k) += lam * omega;
  sys.topRightCorner(k, 3) = con;
  sys.bottomLeftCorner(3, k) = con.transpose();

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 3);
  rhs.topRows(k + 3) = bmat.transpose() * targets;

  Solved out;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  out.min_pivot = pivots.minCoeff();
  const double scale = sys.cwiseAbs().maxCoeff();
  if (out.min_pivot < 1e-12 * scale) {
    out.singular = true;
    return out;
  }

  Eigen::MatrixXd sol = lu.solve(rhs);
  if (refine) sol += lu.solve(rhs - sys * sol);
  out.theta = sol.topRows(k + 3);

  out.rss = (targets - bmat * out.theta).squaredNorm();
  if (want_trace) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, k + 3);
    w.topRows(k + 3) = gram;
    const Eigen::MatrixXd x = lu.solve(w);
    out.tr_hat = x.topLeftCorner(k + 3, k + 3).trace();
  }
  return out;
}

}  // namespace

Eigen::MatrixX2d select_knots(const Param2& params, int n_knots,
                              std::uint64_t seed) {
  const Eigen::Index n = params.rows();
  std::vector<Eigen::Index> rows;
  if (n <= n_knots) {
    rows.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  } else {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(rows),
                static_cast<std::size_t>(n_knots), rng);
  }
  std::set<std::pair<double, double>> seen;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i : rows)
    if (seen.insert({params(i, 0), params(i, 1)}).second) kept.push_back(i);
  if (kept.size() < 10)
    fail(errc::degeneracy, "only " + std::to_string(kept.size()) +
                               " distinct knot locations; need at least 10");
  Eigen::MatrixX2d knots(static_cast<Eigen::Index>(kept.size()), 2);
  for (std::size_t a = 0; a < kept.size(); ++a)
    knots.row(static_cast<Eigen::Index>(a)) = params.row(kept[a]);
  return knots;
}

SurfaceModel fit_tps(const Param2& params, const Eigen::MatrixX3d& targets,
                     const Eigen::MatrixX2d& knots,
                     const std::optional<double>& lambda) {
  const Eigen::Index n = params.rows();
  const Eigen::Index k = knots.rows();

  Eigen::MatrixXd bmat(n, k + 3);
  bmat.leftCols(k) = radial_matrix(params, knots);
  bmat.rightCols(3) = poly_matrix(params);
  const Eigen::MatrixXd gram = bmat.transpose() * bmat;
  const Eigen::MatrixXd omega = radial_matrix(knots, knots);
  const Eigen::MatrixXd con = poly_matrix(knots);

  double best_lam = 0.0;
  if (lambda) {
    best_lam = *lambda;
  } else {
    double best_score = std::numeric_limits<double>::infinity();
    for (double lam : lambda_grid()) {
      const Solved s = solve_bordered(bmat, gram, omega, con, targets, lam,
                                      /*want_trace=*/true, /*refine=*/false);
      if (s.singular) continue;
      const double denom = static_cast<double>(n) - s.tr_hat;
      if (denom < 1e-9 * static_cast<double>(n)) continue;
      const double score = static_cast<double>(n) * s.rss / (denom * denom);
      if (score < best_score) {
        best_score = score;
        best_lam = lam;
      }
    }
    if (!std::isfinite(best_score))
      fail(errc::fit,
           "GCV search failed: no candidate lambda yielded a solvable system");
  }

  const Solved s = solve_bordered(bmat, gram, omega, con, targets, best_lam,
                                  /*want_trace=*/false, /*refine=*/true);
  if (s.singular)
    fail(errc::conditioning,
         "bordered TPS system singular (smallest pivot " +
             std::to_string(s.min_pivot) + ")");

  SurfaceModel model;
  model.knots = knots;
  model.delta = s.theta.topRows(k);
  model.beta = s.theta.bottomRows(3);
  model.lambda = best_lam;
  return model;
}

Eigen::Vector3d eval_surface(const SurfaceModel& model,
                             const Eigen::Vector2d& t) {
  Eigen::Vector3d out = model.beta.row(0).transpose() +
                        t(0) * model.beta.row(1).transpose() +
                        t(1) * model.beta.row(2).transpose();
  for (Eigen::Index b = 0; b < model.knots.rows(); ++b) {
    const double dx = t(0) - model.knots(b, 0);
    const double dy = t(1) - model.knots(b, 1);
    out += tps_eta(std::sqrt(dx * dx + dy * dy)) *
           model.delta.row(b).transpose();
  }
  return out;
}

Eigen::MatrixX3d eval_surface_grid(const SurfaceModel& model, int n_grid) {
  Eigen::MatrixX3d grid(static_cast<Eigen::Index>(n_grid) * n_grid, 3);
  for (int a = 0; a < n_grid; ++a) {
    const double t1 = static_cast<double>(a) / (n_grid - 1);
    for (int b = 0; b < n_grid; ++b) {
      const double t2 = static_cast<double>(b) / (n_grid - 1);
      grid.row(static_cast<Eigen::Index>(a) * n_grid + b) =
          eval_surface(model, {t1, t2}).transpose();
    }
  }
  return grid;
}

double roughness_penalty(const SurfaceModel& model) {
  const Eigen::MatrixXd omega = radial_matrix(model.knots, model.knots);
  return (model.delta.transpose() * omega * model.delta).trace();
}

}  // namespace psurf
