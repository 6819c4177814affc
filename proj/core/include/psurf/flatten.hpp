#pragma once

#include <vector>

#include "psurf/types.hpp"

namespace psurf {

struct FlattenConfig {
  int g = 100;
  double smooth_r = 0.15;
  double smooth_h = 0.005625;
  int min_support = 3;
};

/// Per-cell Gaussian-kernel average of the scalars whose parametrizations
/// lie within smooth_r of the cell center; cells with fewer than min_support
/// contributors are masked. Error when every cell is masked.
ScalarMap2D flatten_scalar_field(const Param2& params,
                                 const Eigen::VectorXd& scalars,
                                 const FlattenConfig& cfg);

/// Row-major raster, row 0 = highest-t2 cell row (image convention); masked
/// cells carry quiet NaN.
std::vector<double> map_to_image(const ScalarMap2D& map);

/// Inverse of map_to_image (NaN = masked).
ScalarMap2D image_to_map(const std::vector<double>& raster, int g);

}  // namespace psurf
