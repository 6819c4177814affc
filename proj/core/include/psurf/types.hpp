#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "psurf/errors.hpp"

namespace psurf {

using Param2 = Eigen::MatrixX2d;

/// 3D points with an optional per-point scalar field (empty when absent).
struct PointCloud3 {
  Eigen::MatrixX3d points;
  Eigen::VectorXd scalars;

  Eigen::Index size() const { return points.rows(); }
  bool has_scalars() const { return scalars.size() > 0; }
};

/// Throws data/shape/size errors for non-finite coordinates, scalar-length
/// mismatch, or fewer than 3 points.
void validate_cloud(const PointCloud3& cloud);

struct FitConfig {
  double r = 0.15;
  double h = 0.005625;  // (r/2)^2
  int n_grid = 50;
  int n_knots = 300;
  std::optional<double> lambda;  // fixed smoothing parameter; nullopt = GCV
  int max_iter = 50;
  double thres = 1e-4;  // on per-point mean squared parametrization change
  int k_fallback = 10;
  std::uint64_t seed = 0;
  std::optional<Eigen::Index> subsample;
};

/// The GCV search grid: 20 log-spaced values in [1e-6, 1e2].
std::vector<double> lambda_grid();

struct FitReport {
  int iterations_used = 0;
  std::vector<double> err_trace;
  bool converged = false;
  double final_err = std::numeric_limits<double>::quiet_NaN();
};

/// Fitted thin-plate spline surface, one radial + affine expansion per
/// output coordinate: f_d(t) = sum_b delta(b,d) eta(|t - knot_b|)
///                            + beta(0,d) + beta(1,d) t1 + beta(2,d) t2.
struct SurfaceModel {
  Eigen::MatrixX2d knots;
  Eigen::MatrixX3d delta;
  Eigen::Matrix3d beta;
  double lambda = 0.0;

  /// Same surface shifted by c (for exporting in original coordinates).
  SurfaceModel translated(const Eigen::Vector3d& c) const {
    SurfaceModel out = *this;
    out.beta.row(0) += c.transpose();
    return out;
  }
};

/// Regular g-by-g map of a scalar over the unit square. values(iy, ix)
/// holds the cell with center ((ix+0.5)/g, (iy+0.5)/g); mask true = no
/// support.
struct ScalarMap2D {
  int g = 0;
  Eigen::MatrixXd values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
};

}  // namespace psurf
