#pragma once

#include <vector>

#include "psurf/types.hpp"

namespace psurf {

/// Uniform 2D grid over the parametrization with cell size equal to the
/// query radius; radius queries scan the 3x3 cell neighborhood and filter
/// exactly, so results match a brute-force scan.
class NeighborGrid {
public:
  NeighborGrid(const Param2& params, double r);

  /// Indices j with |t_j - t| <= r, ascending.
  std::vector<Eigen::Index> query(const Eigen::Vector2d& t) const;

  /// The k nearest points to t by parametrization distance (k capped at I).
  std::vector<Eigen::Index> nearest(const Eigen::Vector2d& t,
                                    Eigen::Index k) const;

private:
  const Param2& params_;
  double r_;
  double lo_[2];
  int n_[2];
  std::vector<std::vector<Eigen::Index>> cells_;

  int cell_of(double x, int axis) const;
};

struct NeighborSet {
  std::vector<Eigen::Index> indices;
  Eigen::Index center_index = -1;
};

/// Sparse weight vector: nonzero exactly on `indices`.
struct WeightVector {
  std::vector<Eigen::Index> indices;
  Eigen::VectorXd weights;
};

NeighborSet find_neighbors(const Param2& params, Eigen::Index i, double r);

/// Gaussian kernel weights w_j proportional to exp(-|t_j - t_i|^2 / h) over
/// the neighbor set, normalized to sum 1 (max exponent subtracted first).
WeightVector kernel_weights(const Param2& params, Eigen::Index i,
                            const NeighborSet& nbrs, double h);

struct LocalAverages {
  Eigen::MatrixX3d points;
  Eigen::VectorXd scalars;  // empty when the cloud has no scalars
};

/// Row i = kernel-weighted average of the 3D positions (and scalars when
/// present) over the radius-r neighborhood of t_i; a singleton neighborhood
/// falls back to the k_fallback nearest points.
LocalAverages local_average_all(const PointCloud3& cloud, const Param2& params,
                                const FitConfig& cfg);

}  // namespace psurf
