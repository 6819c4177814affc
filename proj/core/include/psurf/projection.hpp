#pragma once

#include "psurf/types.hpp"

namespace psurf {

struct ProjectionResult {
  Eigen::Vector2d t_star;
  double distance = 0.0;
  bool on_boundary = false;
};

/// Nearest lattice node by Euclidean distance to the evaluated surface;
/// exact ties go to the lexicographically largest (t1, t2). surface_grid
/// must come from eval_surface_grid(model, n_grid).
ProjectionResult project_point(const Eigen::Vector3d& x,
                               const Eigen::MatrixX3d& surface_grid,
                               int n_grid);

struct ProjectionPass {
  Param2 params;
  Eigen::VectorXd distances;
  double boundary_fraction = 0.0;
};

ProjectionPass project_all(const Eigen::MatrixX3d& points,
                           const SurfaceModel& model, int n_grid);

}  // namespace psurf
