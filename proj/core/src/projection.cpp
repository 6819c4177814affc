#include "psurf/projection.hpp"

#include <cmath>
#include <limits>

#include "psurf/tps.hpp"

namespace psurf {

ProjectionResult project_point(const Eigen::Vector3d& x,
                               const Eigen::MatrixX3d& surface_grid,
                               int n_grid) {
  // Ascending flat index is ascending lexicographic (t1, t2), so replacing
  // on <= leaves the lexicographically largest node among exact ties.
  Eigen::Index best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index node = 0; node < surface_grid.rows(); ++node) {
    const double d2 = (surface_grid.row(node).transpose() - x).squaredNorm();
    if (d2 <= best_d2) {
      best_d2 = d2;
      best = node;
    }
  }
  const int a = static_cast<int>(best / n_grid);
  const int b = static_cast<int>(best % n_grid);
  ProjectionResult out;
  out.t_star = {static_cast<double>(a) / (n_grid - 1),
                static_cast<double>(b) / (n_grid - 1)};
  out.distance = std::sqrt(best_d2);
  out.on_boundary =
      a == 0 || a == n_grid - 1 || b == 0 || b == n_grid - 1;
  return out;
}

ProjectionPass project_all(const Eigen::MatrixX3d& points,
                           const SurfaceModel& model, int n_grid) {
  const Eigen::MatrixX3d grid = eval_surface_grid(model, n_grid);
  const Eigen::Index n = points.rows();
  ProjectionPass out;
  out.params.resize(n, 2);
  out.distances.resize(n);
  Eigen::Index boundary = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const ProjectionResult p =
        project_point(points.row(i).transpose(), grid, n_grid);
    out.params.row(i) = p.t_star.transpose();
    out.distances(i) = p.distance;
    if (p.on_boundary) ++boundary;
  }
  out.boundary_fraction =
      static_cast<double>(boundary) / static_cast<double>(n);
  return out;
}

}  // namespace psurf
