#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "radviz3d/dataset.hpp"
#include "radviz3d/kernels.hpp"

namespace radviz {

struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double weight = 1.0;

  Eigen::Index dim() const noexcept { return mean.size(); }

  // Symmetric to 1e-10, Cholesky succeeds, weight in (0, 1].
  void validate() const;
};

kernels::PreparedGaussian prepare(const GaussianComponent& c);

// Returns S unchanged when it factors cleanly, otherwise S + eps * tr(S)/p * I
// with eps starting at 1e-8 and doubling until it does.
Eigen::MatrixXd regularize_covariance(const Eigen::MatrixXd& s);

struct FittedClasses {
  std::vector<std::string> classes;  // first-appearance order
  std::vector<GaussianComponent> components;
};

// Per-class sample mean, maximum-likelihood covariance (divisor n_k) and
// weight n_k / n. Throws SingleClass for fewer than two classes.
FittedClasses fit_components(const DataSet& data);

struct PairOverlap {
  double j_given_i = 0.0;  // P(draw from i is assigned to j)
  double i_given_j = 0.0;
};

// Monte-Carlo misclassification rates between two weighted Gaussians under
// the Bayes rule. Exact ties go either way with probability 1/2.
PairOverlap pairwise_overlap(const GaussianComponent& ci, const GaussianComponent& cj, std::size_t n_draws,
                             std::uint64_t seed);

struct OverlapMatrix {
  Eigen::MatrixXd omega;  // symmetric, zero diagonal, entries in [0, 2]
  std::size_t n_draws = 0;
  std::uint64_t seed = 0;

  Eigen::Index classes() const noexcept { return omega.rows(); }
};

// Sub-seed for pair (i, j), i < j, of an overlap matrix built with `seed`.
std::uint64_t pair_seed(std::uint64_t seed, std::size_t i, std::size_t j) noexcept;

// omega(i, j) = omega(j, i) = w_{j|i} + w_{i|j}. Each pair uses
// pair_seed(seed, i, j), so the result does not depend on evaluation order.
OverlapMatrix overlap_matrix(const std::vector<GaussianComponent>& components, std::size_t n_draws,
                             std::uint64_t seed);

// Throws NumericError unless omega is square, symmetric, zero-diagonal and
// has entries in [0, 2].
void check_overlap_matrix(const Eigen::MatrixXd& omega);

// (lambda_max(Omega with unit diagonal) - 1) / (K - 1).
double generalized_overlap(const Eigen::MatrixXd& omega);
inline double generalized_overlap(const OverlapMatrix& m) { return generalized_overlap(m.omega); }

struct HeatmapCell {
  std::size_t i = 0;  // row class index, i > j
  std::size_t j = 0;
  std::string class_i;
  std::string class_j;
  double omega = 0.0;
  double color = 0.0;  // omega / max_omega, 0 on a flat scale
};

struct HeatmapTable {
  std::vector<HeatmapCell> cells;  // strict lower triangle, row-major
  double max_omega = 0.0;
};

HeatmapTable heatmap_export(const OverlapMatrix& m, const std::vector<std::string>& labels);

// Overlap matrix of a component list with every covariance multiplied by a
// common factor c, evaluated on frozen Monte-Carlo draws.
//
// The draws are the same standard normals overlap_matrix would use for the
// same (n_draws, seed), so matrix(c) agrees with
// overlap_matrix(rescale(components, c), n_draws, seed) up to rounding at the
// decision boundary. Each draw is reduced to two scalars once, which makes an
// evaluation O(K^2 n_draws) with no linear algebra.
class ScaledOverlapEvaluator {
 public:
  ScaledOverlapEvaluator(const std::vector<GaussianComponent>& components, std::size_t n_draws, std::uint64_t seed);

  OverlapMatrix matrix(double scale) const;
  double generalized_overlap(double scale) const { return radviz::generalized_overlap(matrix(scale).omega); }

 private:
  struct Direction {
    double log_ratio = 0.0;   // log_norm(other) - log_norm(from), unscaled
    double offset_sq = 0.0;   // |L_other^{-1}(mean_from - mean_other)|^2
    std::vector<double> cross;     // per draw: d . B z
    std::vector<double> spread;    // per draw: |B z|^2 - |z|^2
  };

  double misclassified_fraction(const Direction& d, double scale) const;

  std::size_t k_ = 0;
  std::size_t n_draws_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Direction> directions_;  // pair-major: (j given i), then (i given j)
};

}  // namespace radviz
