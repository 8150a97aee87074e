#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "radviz3d/dataset.hpp"
#include "radviz3d/overlap.hpp"

namespace radviz {

struct SimSpec {
  std::size_t classes = 5;
  std::size_t dims = 5;
  std::size_t rows = 500;
  double target_omega = 0.01;  // generalized overlap, in (0, 0.6]
  bool spherical = true;
  bool homogeneous = true;
  std::uint64_t seed = 0;
  // Monte-Carlo draws per direction when evaluating the overlap during
  // calibration; the evaluation seed is fixed, so the objective is a
  // deterministic function of the covariance scale.
  std::size_t calibration_draws = 100000;

  // Throws SingleClass for classes < 2 and InvalidSpec for anything else.
  void validate() const;
};

struct SimResult {
  DataSet data;                                // labels "1".."K", features "x1".."xp"
  std::vector<GaussianComponent> components;   // equal weights, calibrated covariances
  double scale = 1.0;                          // covariance multiplier found by bisection
  double achieved_omega = 0.0;                 // generalized overlap of `components`
  std::size_t iterations = 0;                  // objective evaluations spent
};

// Every covariance multiplied by c. Throws InvalidScale for c <= 0.
std::vector<GaussianComponent> rescale_components(std::vector<GaussianComponent> components, double c);

// Relative tolerance on the achieved generalized overlap.
inline constexpr double kCalibrationTolerance = 0.02;

// Draws K well-separated means in [0, 1]^p and base covariances per the
// SimSpec flags, then bisects on a common covariance scale until the
// generalized overlap hits the target, and samples labeled rows.
//
// Throws TargetUnreachable if no bracket exists up to scale 1e6, or if the
// bisection cannot land within kCalibrationTolerance.
SimResult simulate_mixture(const SimSpec& spec);

}  // namespace radviz
