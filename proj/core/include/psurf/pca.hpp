#pragma once

#include "psurf/types.hpp"

namespace psurf {

struct CenteredCloud {
  Eigen::MatrixX3d points;
  Eigen::Vector3d centroid;
};

CenteredCloud center_points(const PointCloud3& cloud);

/// First two columns of U*Sigma from the thin SVD of the centered matrix,
/// sign-fixed so each column's largest-magnitude entry is positive.
/// Throws a degeneracy error when the points are collinear (rank < 2).
Eigen::MatrixX2d pca_scores(const CenteredCloud& centered);

/// Per-column min-max scaling onto [0,1]; degeneracy error on a constant
/// column.
Param2 normalize_unit_square(const Eigen::MatrixX2d& scores);

}  // namespace psurf
