#include "radviz3d/kernels.hpp"

#include <algorithm>
#include <random>

#include "radviz3d/seed.hpp"

namespace radviz::kernels {

namespace {
constexpr std::uint64_t kTieStream = 0x7469650000000000ULL;
}

void standard_normal_chunk(std::uint64_t seed, std::size_t chunk, Eigen::Index dim, Eigen::Index count,
                           Eigen::MatrixXd& z) {
  std::mt19937_64 rng(derive_seed(seed, {chunk}));
  std::normal_distribution<double> normal;
  z.resize(dim, count);
  for (Eigen::Index c = 0; c < count; ++c)
    for (Eigen::Index k = 0; k < dim; ++k) z(k, c) = normal(rng);
}

namespace detail {

bool project_row(const Eigen::MatrixXd& x, Eigen::Index row, const Eigen::MatrixXd& anchors, Eigen::MatrixXd& out) {
  const double total = x.row(row).sum();
  if (total == 0.0) {
    out.row(row).setZero();
    return true;
  }
  // Normalize the weights first so that x = a e_l lands exactly on anchor l.
  const Eigen::VectorXd weights = x.row(row).transpose() / total;
  out.row(row).noalias() = (anchors * weights).transpose();
  return false;
}

MisclassCount misclassified_in_chunk(const PreparedGaussian& from, const PreparedGaussian& other,
                                     std::size_t n_draws, std::uint64_t seed, std::size_t chunk) {
  const std::size_t begin = chunk * kDrawChunk;
  const auto count = static_cast<Eigen::Index>(std::min(kDrawChunk, n_draws - begin));
  const Eigen::Index dim = from.mean.size();

  Eigen::MatrixXd z;
  standard_normal_chunk(seed, chunk, dim, count, z);
  // x = mean + L z for every draw, then whiten against both components.
  Eigen::MatrixXd x = from.chol.triangularView<Eigen::Lower>() * z;
  x.colwise() += from.mean;
  Eigen::MatrixXd own = x.colwise() - from.mean;
  Eigen::MatrixXd alt = x.colwise() - other.mean;
  from.chol.triangularView<Eigen::Lower>().solveInPlace(own);
  other.chol.triangularView<Eigen::Lower>().solveInPlace(alt);

  std::mt19937_64 coin(derive_seed(seed, {chunk, kTieStream}));
  MisclassCount out;
  for (Eigen::Index c = 0; c < count; ++c) {
    const double own_score = from.log_norm - 0.5 * own.col(c).squaredNorm();
    const double alt_score = other.log_norm - 0.5 * alt.col(c).squaredNorm();
    if (alt_score > own_score) {
      ++out.misclassified;
    } else if (alt_score == own_score) {
      ++out.ties;
      if (coin() & 1ULL) ++out.misclassified;
    }
  }
  return out;
}

}  // namespace detail

namespace serial {

void project_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& anchors, Eigen::MatrixXd& out,
                  std::vector<unsigned char>& degenerate) {
  out.resize(x.rows(), anchors.rows());
  degenerate.assign(static_cast<std::size_t>(x.rows()), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    degenerate[static_cast<std::size_t>(i)] = detail::project_row(x, i, anchors, out) ? 1 : 0;
}

MisclassCount count_misclassified(const PreparedGaussian& from, const PreparedGaussian& other,
                                  std::size_t n_draws, std::uint64_t seed) {
  MisclassCount total;
  for (std::size_t chunk = 0; chunk < chunk_count(n_draws); ++chunk) {
    const MisclassCount part = detail::misclassified_in_chunk(from, other, n_draws, seed, chunk);
    total.misclassified += part.misclassified;
    total.ties += part.ties;
  }
  return total;
}

}  // namespace serial
}  // namespace radviz::kernels
