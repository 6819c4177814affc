#include "psurf/types.hpp"

#include <cmath>
#include <string>

namespace psurf {

void validate_cloud(const PointCloud3& cloud) {
  const Eigen::Index n = cloud.points.rows();
  if (n < 3)
    fail(errc::size, "need at least 3 points, got " + std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int d = 0; d < 3; ++d)
      if (!std::isfinite(cloud.points(i, d)))
        fail(errc::data,
             "non-finite coordinate at row " + std::to_string(i));
  if (cloud.has_scalars() && cloud.scalars.size() != n)
    fail(errc::shape, "scalar length " + std::to_string(cloud.scalars.size()) +
                          " does not match point count " + std::to_string(n));
}

std::vector<double> lambda_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i)
    grid[i] = std::pow(10.0, -6.0 + 8.0 * i / 19.0);
  return grid;
}

}  // namespace psurf
