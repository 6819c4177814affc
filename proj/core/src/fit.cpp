#include "psurf/fit.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "psurf/expectation.hpp"
#include "psurf/pca.hpp"
#include "psurf/projection.hpp"
#include "psurf/tps.hpp"

namespace psurf {

double convergence_error(const Param2& t_old, const Param2& t_new) {
  if (t_old.rows() != t_new.rows())
    fail(errc::shape, "parametrization row counts differ: " +
                          std::to_string(t_old.rows()) + " vs " +
                          std::to_string(t_new.rows()));
  return (t_old - t_new).rowwise().squaredNorm().mean();
}

void renormalize_columns(Param2& t) {
  for (int c = 0; c < 2; ++c) {
    const double lo = t.col(c).minCoeff();
    const double hi = t.col(c).maxCoeff();
    if (hi - lo < 1e-6)
      fail(errc::collapse, "parametrization column " + std::to_string(c) +
                               " collapsed (range " + std::to_string(hi - lo) +
                               ")");
    t.col(c) = (t.col(c).array() - lo) / (hi - lo);
  }
}

namespace {

std::vector<Eigen::Index> subsample_rows(Eigen::Index n, Eigen::Index m,
                                         std::uint64_t seed) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  if (m >= n) return all;
  std::vector<Eigen::Index> picked;
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked),
              static_cast<std::size_t>(m), rng);
  return picked;
}

double mean_surface_residual(const SurfaceModel& model, const Param2& t,
                             const Eigen::MatrixX3d& targets) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    acc += (eval_surface(model, t.row(i).transpose()) -
            targets.row(i).transpose())
               .norm();
  return acc / static_cast<double>(t.rows());
}

}  // namespace

namespace {

void validate_config(const FitConfig& cfg) {
  if (cfg.r <= 0.0 || cfg.h <= 0.0 || cfg.n_grid < 2 || cfg.n_knots < 10 ||
      cfg.max_iter < 1 || cfg.thres < 0.0 || cfg.k_fallback < 1 ||
      (cfg.lambda && *cfg.lambda < 0.0) ||
      (cfg.subsample && *cfg.subsample < 3))
    fail(errc::data, "invalid fit configuration");
}

}  // namespace

FitResult fit_principal_surface(const PointCloud3& cloud,
                                const FitConfig& cfg) {
  validate_cloud(cloud);
  validate_config(cfg);
  const Eigen::Index n_all = cloud.size();

  std::vector<Eigen::Index> fitted =
      cfg.subsample ? subsample_rows(n_all, *cfg.subsample, cfg.seed)
                    : subsample_rows(n_all, n_all, cfg.seed);
  const auto n_fit = static_cast<Eigen::Index>(fitted.size());

  PointCloud3 sub;
  sub.points.resize(n_fit, 3);
  for (Eigen::Index a = 0; a < n_fit; ++a)
    sub.points.row(a) = cloud.points.row(fitted[static_cast<std::size_t>(a)]);

  FitResult result;
  const CenteredCloud centered = center_points(sub);
  result.centroid = centered.centroid;
  result.fitted_indices = fitted;

  PointCloud3 work;  // centered copy the loop operates on
  work.points = centered.points;

  Param2 t = normalize_unit_square(pca_scores(centered));

  SurfaceModel model;
  ProjectionPass pass;
  int iter = 0;
  try {
    for (iter = 1; iter <= cfg.max_iter; ++iter) {
      const LocalAverages avg = local_average_all(work, t, cfg);
      const Eigen::MatrixX2d knots = select_knots(t, cfg.n_knots, cfg.seed);
      model = fit_tps(t, avg.points, knots, cfg.lambda);
      result.final_surface_update =
          mean_surface_residual(model, t, avg.points);
      pass = project_all(work.points, model, cfg.n_grid);
      Param2 t_new = pass.params;
      renormalize_columns(t_new);
      const double err = convergence_error(t, t_new);
      t = t_new;
      result.report.err_trace.push_back(err);
      result.report.iterations_used = iter;
      result.report.final_err = err;
      if (err <= cfg.thres) {
        result.report.converged = true;
        break;
      }
    }
  } catch (const error& e) {
    throw error(e.kind(),
                "iteration " + std::to_string(iter) + ": " + e.what());
  }

  result.model = model;
  result.boundary_fraction = pass.boundary_fraction;

  result.params.resize(n_all, 2);
  result.distances.resize(n_all);
  for (Eigen::Index a = 0; a < n_fit; ++a) {
    result.params.row(fitted[static_cast<std::size_t>(a)]) = t.row(a);
    result.distances(fitted[static_cast<std::size_t>(a)]) = pass.distances(a);
  }
  if (n_fit < n_all) {
    const Eigen::MatrixX3d grid = eval_surface_grid(model, cfg.n_grid);
    std::vector<bool> in_fit(static_cast<std::size_t>(n_all), false);
    for (Eigen::Index i : fitted) in_fit[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < n_all; ++i) {
      if (in_fit[static_cast<std::size_t>(i)]) continue;
      const Eigen::Vector3d x =
          cloud.points.row(i).transpose() - result.centroid;
      const ProjectionResult p = project_point(x, grid, cfg.n_grid);
      result.params.row(i) = p.t_star.transpose();
      result.distances(i) = p.distance;
    }
  }
  return result;
}

double self_consistency_stat(const PointCloud3& cloud, const FitResult& result,
                             const FitConfig& cfg) {
  const auto n_fit = static_cast<Eigen::Index>(result.fitted_indices.size());
  PointCloud3 work;
  work.points.resize(n_fit, 3);
  Param2 t(n_fit, 2);
  for (Eigen::Index a = 0; a < n_fit; ++a) {
    const Eigen::Index i = result.fitted_indices[static_cast<std::size_t>(a)];
    work.points.row(a) =
        cloud.points.row(i) - result.centroid.transpose();
    t.row(a) = result.params.row(i);
  }
  const LocalAverages avg = local_average_all(work, t, cfg);
  double acc = 0.0;
  for (Eigen::Index a = 0; a < n_fit; ++a)
    acc += (eval_surface(result.model, t.row(a).transpose()) -
            avg.points.row(a).transpose())
               .norm();
  return acc / static_cast<double>(n_fit);
}

}  // namespace psurf
