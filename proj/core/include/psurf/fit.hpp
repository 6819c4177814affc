#pragma once

#include <vector>

#include "psurf/types.hpp"

namespace psurf {

struct FitResult {
  SurfaceModel model;  // centered coordinates; translate by centroid to export
  Param2 params;       // one row per input point, input order
  FitReport report;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();

  // diagnostics
  Eigen::VectorXd distances;  // projection distance per input point
  double boundary_fraction = 0.0;
  double final_surface_update = 0.0;  // mean |f(t_i) - xlm_i| at the last pass
  std::vector<Eigen::Index> fitted_indices;  // rows the surface was fitted on
};

/// (1/I) * sum_i |t_i_old - t_i_new|^2.
double convergence_error(const Param2& t_old, const Param2& t_new);

/// Min-max rescale of each column onto [0,1] in place; collapse error when a
/// column's range falls below 1e-6.
void renormalize_columns(Param2& t);

/// Algorithm: center, initialize the parametrization from PCA scores, then
/// iterate local averaging, TPS smoothing, and lattice projection until the
/// mean squared parametrization change drops to thres or max_iter is hit.
/// With cfg.subsample set below I, the surface is fitted on a
/// seed-deterministic subsample and the held-out points are projected onto
/// the final surface.
FitResult fit_principal_surface(const PointCloud3& cloud, const FitConfig& cfg);

/// Self-consistency proxy: recompute local averages at the final
/// parametrization of the fitted points and return the mean distance to the
/// surface there.
double self_consistency_stat(const PointCloud3& cloud, const FitResult& result,
                             const FitConfig& cfg);

}  // namespace psurf
