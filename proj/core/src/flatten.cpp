#include "psurf/flatten.hpp"

#include <cmath>
#include <limits>

#include "psurf/expectation.hpp"

namespace psurf {

ScalarMap2D flatten_scalar_field(const Param2& params,
                                 const Eigen::VectorXd& scalars,
                                 const FlattenConfig& cfg) {
  if (params.rows() != scalars.size())
    fail(errc::shape, "parametrization and scalar counts differ");
  if (cfg.g < 2 || cfg.smooth_r <= 0.0 || cfg.smooth_h <= 0.0 ||
      cfg.min_support < 1)
    fail(errc::data, "invalid flatten configuration");
  for (Eigen::Index i = 0; i < scalars.size(); ++i)
    if (!std::isfinite(scalars(i)))
      fail(errc::data, "non-finite scalar at row " + std::to_string(i));

  NeighborGrid grid(params, cfg.smooth_r);
  ScalarMap2D map;
  map.g = cfg.g;
  map.values = Eigen::MatrixXd::Zero(cfg.g, cfg.g);
  map.mask.setConstant(cfg.g, cfg.g, true);

  bool any = false;
  for (int iy = 0; iy < cfg.g; ++iy) {
    for (int ix = 0; ix < cfg.g; ++ix) {
      const Eigen::Vector2d c((ix + 0.5) / cfg.g, (iy + 0.5) / cfg.g);
      const std::vector<Eigen::Index> idx = grid.query(c);
      if (static_cast<int>(idx.size()) < cfg.min_support) continue;
      Eigen::VectorXd expo(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const double dx = params(idx[a], 0) - c(0);
        const double dy = params(idx[a], 1) - c(1);
        expo(static_cast<Eigen::Index>(a)) =
            -(dx * dx + dy * dy) / cfg.smooth_h;
      }
      expo.array() -= expo.maxCoeff();
      const Eigen::VectorXd w = expo.array().exp();
      double acc = 0.0;
      for (std::size_t a = 0; a < idx.size(); ++a)
        acc += w(static_cast<Eigen::Index>(a)) * scalars(idx[a]);
      map.values(iy, ix) = acc / w.sum();
      map.mask(iy, ix) = false;
      any = true;
    }
  }
  if (!any) fail(errc::data, "every map cell is unsupported (empty map)");
  return map;
}

std::vector<double> map_to_image(const ScalarMap2D& map) {
  std::vector<double> raster;
  raster.reserve(static_cast<std::size_t>(map.g) * map.g);
  for (int iy = map.g - 1; iy >= 0; --iy)
    for (int ix = 0; ix < map.g; ++ix)
      raster.push_back(map.mask(iy, ix)
                           ? std::numeric_limits<double>::quiet_NaN()
                           : map.values(iy, ix));
  return raster;
}

ScalarMap2D image_to_map(const std::vector<double>& raster, int g) {
  if (static_cast<int>(raster.size()) != g * g)
    fail(errc::shape, "raster size does not match g*g");
  ScalarMap2D map;
  map.g = g;
  map.values = Eigen::MatrixXd::Zero(g, g);
  map.mask.setConstant(g, g, true);
  for (int row = 0; row < g; ++row)
    for (int ix = 0; ix < g; ++ix) {
      const double v = raster[static_cast<std::size_t>(row) * g + ix];
      const int iy = g - 1 - row;
      if (std::isnan(v)) continue;
      map.values(iy, ix) = v;
      map.mask(iy, ix) = false;
    }
  return map;
}

}  // namespace psurf
