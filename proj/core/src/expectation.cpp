#include "psurf/expectation.hpp"

#include <algorithm>
#include <cmath>

namespace psurf {

NeighborGrid::NeighborGrid(const Param2& params, double r)
    : params_(params), r_(r) {
  for (int a = 0; a < 2; ++a) {
    lo_[a] = params.col(a).minCoeff();
    const double hi = params.col(a).maxCoeff();
    n_[a] = std::max(1, static_cast<int>(std::ceil((hi - lo_[a]) / r)));
  }
  cells_.resize(static_cast<std::size_t>(n_[0]) * n_[1]);
  for (Eigen::Index i = 0; i < params.rows(); ++i) {
    const int cx = cell_of(params(i, 0), 0);
    const int cy = cell_of(params(i, 1), 1);
    cells_[static_cast<std::size_t>(cx) * n_[1] + cy].push_back(i);
  }
}

int NeighborGrid::cell_of(double x, int axis) const {
  int c = static_cast<int>(std::floor((x - lo_[axis]) / r_));
  return std::clamp(c, 0, n_[axis] - 1);
}

std::vector<Eigen::Index> NeighborGrid::query(const Eigen::Vector2d& t) const {
  std::vector<Eigen::Index> out;
  const double r2 = r_ * r_;
  const int cx = cell_of(t(0), 0);
  const int cy = cell_of(t(1), 1);
  for (int ax = std::max(0, cx - 1); ax <= std::min(n_[0] - 1, cx + 1); ++ax)
    for (int ay = std::max(0, cy - 1); ay <= std::min(n_[1] - 1, cy + 1);
         ++ay)
      for (Eigen::Index j : cells_[static_cast<std::size_t>(ax) * n_[1] + ay]) {
        const double dx = params_(j, 0) - t(0);
        const double dy = params_(j, 1) - t(1);
        if (dx * dx + dy * dy <= r2) out.push_back(j);
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Eigen::Index> NeighborGrid::nearest(const Eigen::Vector2d& t,
                                                Eigen::Index k) const {
  // Rare fallback path; a full scan keeps it exact.
  const Eigen::Index n = params_.rows();
  k = std::min(k, n);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  auto d2 = [&](Eigen::Index j) {
    const double dx = params_(j, 0) - t(0);
    const double dy = params_(j, 1) - t(1);
    return dx * dx + dy * dy;
  };
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      const double da = d2(a), db = d2(b);
                      return da < db || (da == db && a < b);
                    });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

NeighborSet find_neighbors(const Param2& params, Eigen::Index i, double r) {
  NeighborGrid grid(params, r);
  return NeighborSet{grid.query(params.row(i).transpose()), i};
}

namespace {

Eigen::VectorXd weights_for(const Param2& params, const Eigen::Vector2d& t0,
                            const std::vector<Eigen::Index>& idx, double h) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::VectorXd expo(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double dx = params(idx[static_cast<std::size_t>(a)], 0) - t0(0);
    const double dy = params(idx[static_cast<std::size_t>(a)], 1) - t0(1);
    expo(a) = -(dx * dx + dy * dy) / h;
  }
  expo.array() -= expo.maxCoeff();
  Eigen::VectorXd w = expo.array().exp();
  return w / w.sum();
}

}  // namespace

WeightVector kernel_weights(const Param2& params, Eigen::Index i,
                            const NeighborSet& nbrs, double h) {
  return WeightVector{
      nbrs.indices,
      weights_for(params, params.row(i).transpose(), nbrs.indices, h)};
}

LocalAverages local_average_all(const PointCloud3& cloud, const Param2& params,
                                const FitConfig& cfg) {
  const Eigen::Index n = cloud.size();
  NeighborGrid grid(params, cfg.r);
  LocalAverages out;
  out.points.resize(n, 3);
  if (cloud.has_scalars()) out.scalars.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d t0 = params.row(i).transpose();
    std::vector<Eigen::Index> idx = grid.query(t0);
    if (idx.size() <= 1) idx = grid.nearest(t0, cfg.k_fallback);
    const Eigen::VectorXd w = weights_for(params, t0, idx, cfg.h);
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    double sacc = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      acc += w(static_cast<Eigen::Index>(a)) *
             cloud.points.row(idx[a]).transpose();
      if (cloud.has_scalars())
        sacc += w(static_cast<Eigen::Index>(a)) * cloud.scalars(idx[a]);
    }
    out.points.row(i) = acc.transpose();
    if (cloud.has_scalars()) out.scalars(i) = sacc;
  }
  return out;
}

}  // namespace psurf
