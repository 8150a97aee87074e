#pragma once

// Data-parallel inner loops. The default entry points use OpenMP; the
// `serial` namespace holds the straightforward reference versions that the
// tests compare against and the benchmarks race.
//
// Both versions are bitwise-identical by construction: projection is row
// independent, and Monte-Carlo draws are produced in fixed-size chunks whose
// RNG streams are keyed on (seed, chunk index), so the thread schedule never
// changes what is drawn or how it is summed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace radviz::kernels {

inline constexpr std::size_t kDrawChunk = 4096;

// Gaussian with weight, factored for log-score evaluation:
// score(x) = log_norm - 0.5 * |L^{-1}(x - mean)|^2.
struct PreparedGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd chol;  // lower-triangular L with L L^T = covariance
  double log_norm = 0.0; // log(weight) - 0.5 * (log det + p log 2pi)
};

struct MisclassCount {
  std::uint64_t misclassified = 0;
  std::uint64_t ties = 0;
};

// Fills z (dim x count) with the standard normals of one draw chunk.
void standard_normal_chunk(std::uint64_t seed, std::size_t chunk, Eigen::Index dim, Eigen::Index count,
                           Eigen::MatrixXd& z);

// Number of chunks covering n_draws.
constexpr std::size_t chunk_count(std::size_t n_draws) noexcept { return (n_draws + kDrawChunk - 1) / kDrawChunk; }

// y_i = U x_i / sum(x_i); rows with zero sum map to the origin and are
// flagged. x is n x p, anchors is d x p, out becomes n x d.
void project_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& anchors, Eigen::MatrixXd& out,
                  std::vector<unsigned char>& degenerate);

// Draws n_draws samples from `from` and counts those that `other` scores
// strictly higher, plus exact ties resolved by a seeded fair coin.
MisclassCount count_misclassified(const PreparedGaussian& from, const PreparedGaussian& other,
                                  std::size_t n_draws, std::uint64_t seed);

namespace serial {

void project_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& anchors, Eigen::MatrixXd& out,
                  std::vector<unsigned char>& degenerate);

MisclassCount count_misclassified(const PreparedGaussian& from, const PreparedGaussian& other,
                                  std::size_t n_draws, std::uint64_t seed);

}  // namespace serial

namespace detail {

// One chunk of count_misclassified; shared by both schedules.
MisclassCount misclassified_in_chunk(const PreparedGaussian& from, const PreparedGaussian& other,
                                     std::size_t n_draws, std::uint64_t seed, std::size_t chunk);

// Row kernel shared by both schedules; returns true when the row sum is zero.
bool project_row(const Eigen::MatrixXd& x, Eigen::Index row, const Eigen::MatrixXd& anchors, Eigen::MatrixXd& out);

}  // namespace detail

}  // namespace radviz::kernels
