#include "psurf/pca.hpp"

#include <Eigen/SVD>

namespace psurf {

CenteredCloud center_points(const PointCloud3& cloud) {
  validate_cloud(cloud);
  CenteredCloud out;
  out.centroid = cloud.points.colwise().mean();
  out.points = cloud.points.rowwise() - out.centroid.transpose();
  return out;
}

Eigen::MatrixX2d pca_scores(const CenteredCloud& centered) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered.points,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(1) <= 1e-12 * sv(0))
    fail(errc::degeneracy,
         "points are collinear (rank < 2); jitter the input or reject it");
  Eigen::MatrixX2d scores =
      svd.matrixU().leftCols(2) * sv.head(2).asDiagonal();
  // Deterministic sign: largest-magnitude entry of each column positive.
  for (int c = 0; c < 2; ++c) {
    Eigen::Index at;
    scores.col(c).cwiseAbs().maxCoeff(&at);
    if (scores(at, c) < 0.0) scores.col(c) = -scores.col(c);
  }
  return scores;
}

Param2 normalize_unit_square(const Eigen::MatrixX2d& scores) {
  Param2 out = scores;
  for (int c = 0; c < 2; ++c) {
    const double lo = out.col(c).minCoeff();
    const double hi = out.col(c).maxCoeff();
    if (hi - lo <= 0.0)
      fail(errc::degeneracy, "score column " + std::to_string(c) +
                                 " is constant; cannot span [0,1]");
    out.col(c) = (out.col(c).array() - lo) / (hi - lo);
  }
  return out;
}

}  // namespace psurf
