#pragma once

#include <cstdint>
#include <functional>

#include "psurf/types.hpp"

namespace psurf {

struct SimCase {
  int case_id = 1;  // 1..4
  Eigen::Index i_total = 6000;
  Eigen::Index sample = 1000;
  std::uint64_t seed = 0;
};

/// Noiseless surface for a case. truth_fn maps the latent pair (u, v) —
/// profile coordinate and sweep coordinate, each scaled to the case's
/// natural range — to the exact surface point. dense_truth samples it on a
/// lattice of at least 10^4 points; max_spacing is the largest distance
/// between lattice-adjacent samples.
struct GroundTruth {
  std::function<Eigen::Vector3d(double, double)> truth_fn;
  Eigen::MatrixX3d dense_truth;
  double max_spacing = 0.0;
};

struct SimData {
  PointCloud3 cloud;  // the size-`sample` subsample
  GroundTruth truth;
};

SimData generate_case(const SimCase& spec);

/// RMS distance from the model evaluated on an interior lattice of about
/// n_eval nodes (0.05 border band excluded) to the nearest dense truth
/// sample.
double rmse_to_truth(const SurfaceModel& model, const GroundTruth& truth,
                     int n_eval);

}  // namespace psurf
