#include "radviz3d/kernels.hpp"

namespace radviz::kernels {

void project_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& anchors, Eigen::MatrixXd& out,
                  std::vector<unsigned char>& degenerate) {
  out.resize(x.rows(), anchors.rows());
  degenerate.assign(static_cast<std::size_t>(x.rows()), 0);
  const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i)
    degenerate[static_cast<std::size_t>(i)] = detail::project_row(x, i, anchors, out) ? 1 : 0;
}

MisclassCount count_misclassified(const PreparedGaussian& from, const PreparedGaussian& other,
                                  std::size_t n_draws, std::uint64_t seed) {
  const auto chunks = static_cast<std::int64_t>(chunk_count(n_draws));
  std::uint64_t misclassified = 0;
  std::uint64_t ties = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : misclassified, ties)
  for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
    const MisclassCount part =
        detail::misclassified_in_chunk(from, other, n_draws, seed, static_cast<std::size_t>(chunk));
    misclassified += part.misclassified;
    ties += part.ties;
  }
  return {misclassified, ties};
}

}  // namespace radviz::kernels
