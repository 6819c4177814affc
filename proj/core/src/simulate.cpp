#include "psurf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "psurf/tps.hpp"

namespace psurf {

namespace {

constexpr double k_pi = std::numbers::pi;

double himmelblau_z(double z1, double z2) {
  const double a = z1 * z1 + z2 - 11.0;
  const double b = z1 + z2 * z2 - 7.0;
  return -(a * a + b * b) / 100.0;
}

// Latent-to-surface maps; u is the profile coordinate, v the sweep.
Eigen::Vector3d truth_point(int case_id, double u, double v) {
  switch (case_id) {
    case 1:
      return {std::cos(u), std::sin(u), v};
    case 2:
      return {u, v, himmelblau_z(u, v)};
    case 3:
      if (u <= 0.5) return {4.0 * u, v, 0.0};
      else {
        const double th = k_pi / 2.0 - k_pi * (u - 0.5) / 0.5;
        return {std::cos(th) + 2.0, v, -1.0 + std::sin(th)};
      }
    default: {
      // traversed end-to-end: bar into drop into bar into arc into bar
      if (u < 0.30) return {1.0 - u / 0.30, v, 0.0};
      if (u < 0.45) return {0.0, v, -(u - 0.30) / 0.15};
      if (u < 0.60) return {0.5 * (u - 0.45) / 0.15, v, -1.0};
      if (u < 0.85) {
        const double th = k_pi / 2.0 - k_pi * (u - 0.60) / 0.25;
        return {0.5 + 0.5 * std::cos(th), v, -1.5 + 0.5 * std::sin(th)};
      }
      return {0.5 - 0.5 * (u - 0.85) / 0.15, v, -2.0};
    }
  }
}

struct LatentRange {
  double u0, u1, v0, v1;
  int nu, nv;
};

LatentRange latent_range(int case_id) {
  switch (case_id) {
    case 1:
      return {0.0, 2.0 * k_pi - 0.5, -3.0, 3.0, 200, 120};
    case 2:
      return {-5.0, 5.0, -5.0, 5.0, 201, 201};
    case 3:
      return {0.0, 1.0, 0.0, 10.0, 200, 101};
    default:
      return {0.0, 1.0, 0.0, 5.0, 300, 101};
  }
}

GroundTruth make_truth(int case_id) {
  GroundTruth truth;
  truth.truth_fn = [case_id](double u, double v) {
    return truth_point(case_id, u, v);
  };
  const LatentRange lr = latent_range(case_id);
  truth.dense_truth.resize(static_cast<Eigen::Index>(lr.nu) * lr.nv, 3);
  for (int a = 0; a < lr.nu; ++a) {
    const double u = lr.u0 + (lr.u1 - lr.u0) * a / (lr.nu - 1);
    for (int b = 0; b < lr.nv; ++b) {
      const double v = lr.v0 + (lr.v1 - lr.v0) * b / (lr.nv - 1);
      truth.dense_truth.row(static_cast<Eigen::Index>(a) * lr.nv + b) =
          truth_point(case_id, u, v).transpose();
    }
  }
  double max_sp = 0.0;
  for (int a = 0; a < lr.nu; ++a)
    for (int b = 0; b < lr.nv; ++b) {
      const Eigen::Index at = static_cast<Eigen::Index>(a) * lr.nv + b;
      if (a + 1 < lr.nu)
        max_sp = std::max(
            max_sp, (truth.dense_truth.row(at + lr.nv) -
                     truth.dense_truth.row(at))
                        .norm());
      if (b + 1 < lr.nv)
        max_sp = std::max(max_sp, (truth.dense_truth.row(at + 1) -
                                   truth.dense_truth.row(at))
                                      .norm());
    }
  truth.max_spacing = max_sp;
  return truth;
}

}  // namespace

SimData generate_case(const SimCase& spec) {
  if (spec.case_id < 1 || spec.case_id > 4)
    fail(errc::data, "case_id must be 1..4");
  if (spec.sample < 1 || spec.sample > spec.i_total)
    fail(errc::data, "sample must be in [1, i_total]");

  const Eigen::Index n = spec.i_total;
  std::mt19937_64 rng(spec.seed);
  Eigen::MatrixX3d pts(n, 3);

  switch (spec.case_id) {
    case 1: {
      std::uniform_real_distribution<double> theta(0.0, 2.0 * k_pi - 0.5);
      std::normal_distribution<double> eps(0.0, 0.15);
      std::uniform_real_distribution<double> z(-3.0, 3.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double th = theta(rng);
        const double e = eps(rng);
        const double zi = z(rng);
        pts.row(i) << std::cos(th) * (1.0 + e), std::sin(th) * (1.0 + e), zi;
      }
      break;
    }
    case 2: {
      std::uniform_real_distribution<double> zu(-5.0, 5.0);
      std::normal_distribution<double> eps(0.0, 50.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double z1 = zu(rng);
        const double z2 = zu(rng);
        const double e = eps(rng);
        const double a = z1 * z1 + z2 - 11.0;
        const double b = z1 + z2 * z2 - 7.0;
        pts.row(i) << z1, z2, -(a * a + b * b + e) / 100.0;
      }
      break;
    }
    case 3: {
      std::uniform_real_distribution<double> z1flat(0.0, 2.0);
      std::uniform_real_distribution<double> theta(-k_pi / 2.0, k_pi / 2.0);
      std::uniform_real_distribution<double> z2(0.0, 10.0);
      std::uniform_real_distribution<double> eps(-0.4, 0.4);
      const Eigen::Index half = n / 2;
      for (Eigen::Index i = 0; i < n; ++i) {
        double x1, x3;
        if (i < half) {
          x1 = z1flat(rng);
          x3 = 0.0;
        } else {
          const double th = theta(rng);
          x1 = std::cos(th) + 2.0;
          x3 = -1.0 + std::sin(th);
        }
        const double x2 = z2(rng);
        pts.row(i) << x1, x2, x3 + eps(rng);
      }
      break;
    }
    default: {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      std::uniform_real_distribution<double> uneg(-1.0, 0.0);
      std::uniform_real_distribution<double> uhalf(0.0, 0.5);
      std::uniform_real_distribution<double> theta(-k_pi / 2.0, k_pi / 2.0);
      std::uniform_real_distribution<double> z2(0.0, 5.0);
      std::uniform_real_distribution<double> eps(-0.15, 0.15);
      const Eigen::Index c1 = 3 * n / 10;
      const Eigen::Index c2 = 9 * n / 20;
      const Eigen::Index c3 = 6 * n / 10;
      const Eigen::Index c4 = 17 * n / 20;
      for (Eigen::Index i = 0; i < n; ++i) {
        double z1, z3;
        if (i < c1) {
          z1 = u01(rng);
          z3 = 0.0;
        } else if (i < c2) {
          z1 = 0.0;
          z3 = uneg(rng);
        } else if (i < c3) {
          z1 = uhalf(rng);
          z3 = -1.0;
        } else if (i < c4) {
          const double th = theta(rng);
          z1 = 0.5 + 0.5 * std::cos(th);
          z3 = -1.5 + 0.5 * std::sin(th);
        } else {
          z1 = uhalf(rng);
          z3 = -2.0;
        }
        const double x2 = z2(rng);
        const double e = eps(rng);
        pts.row(i) << z1 + e, x2, z3 + e;
      }
      break;
    }
  }

  SimData out;
  if (spec.sample < n) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::vector<Eigen::Index> picked;
    std::sample(all.begin(), all.end(), std::back_inserter(picked),
                static_cast<std::size_t>(spec.sample), rng);
    out.cloud.points.resize(spec.sample, 3);
    for (std::size_t a = 0; a < picked.size(); ++a)
      out.cloud.points.row(static_cast<Eigen::Index>(a)) =
          pts.row(picked[a]);
  } else {
    out.cloud.points = pts;
  }
  out.truth = make_truth(spec.case_id);
  return out;
}

double rmse_to_truth(const SurfaceModel& model, const GroundTruth& truth,
                     int n_eval) {
  if (n_eval < 100) fail(errc::data, "n_eval must be at least 100");
  const int side =
      std::max(2, static_cast<int>(std::sqrt(static_cast<double>(n_eval))));
  double acc = 0.0;
  for (int a = 0; a < side; ++a) {
    const double t1 = 0.05 + 0.90 * a / (side - 1);
    for (int b = 0; b < side; ++b) {
      const double t2 = 0.05 + 0.90 * b / (side - 1);
      const Eigen::Vector3d p = eval_surface(model, {t1, t2});
      const double d2 = (truth.dense_truth.rowwise() - p.transpose())
                            .rowwise()
                            .squaredNorm()
                            .minCoeff();
      acc += d2;
    }
  }
  return std::sqrt(acc / (static_cast<double>(side) * side));
}

}  // namespace psurf
