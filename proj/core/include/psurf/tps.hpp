#pragma once

#include <cstdint>
#include <optional>

#include "psurf/types.hpp"

namespace psurf {

/// TPS radial basis eta(rho) = rho^2 log rho, with eta(0) = 0 exactly.
double tps_eta(double rho);

/// All parametrization points when I <= n_knots, otherwise a
/// seed-deterministic uniform subsample of n_knots rows; exact duplicate
/// locations removed either way. Degeneracy error below 10 distinct knots.
Eigen::MatrixX2d select_knots(const Param2& params, int n_knots,
                              std::uint64_t seed);

/// Penalized TPS fit of the three target columns over the knot basis,
/// one shared smoothing parameter: fixed when `lambda` is set, otherwise
/// chosen by GCV on the pooled residual over lambda_grid().
SurfaceModel fit_tps(const Param2& params, const Eigen::MatrixX3d& targets,
                     const Eigen::MatrixX2d& knots,
                     const std::optional<double>& lambda);

Eigen::Vector3d eval_surface(const SurfaceModel& model,
                             const Eigen::Vector2d& t);

/// Surface evaluated on the inclusive n_grid x n_grid lattice over [0,1]^2;
/// row a*n_grid + b is the node (a/(n_grid-1), b/(n_grid-1)).
Eigen::MatrixX3d eval_surface_grid(const SurfaceModel& model, int n_grid);

/// Pooled roughness penalty delta^T Omega delta of a fitted model.
double roughness_penalty(const SurfaceModel& model);

}  // namespace psurf
