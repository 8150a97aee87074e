#include "radviz3d/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "radviz3d/error.hpp"
#include "radviz3d/seed.hpp"

namespace radviz {

namespace {

// Cholesky succeeded and no pivot collapsed relative to the largest variance.
bool factors_cleanly(const Eigen::MatrixXd& s, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(s);
  if (llt.info() != Eigen::Success) return false;
  const double scale = s.diagonal().maxCoeff();
  const double min_pivot = llt.matrixL().toDenseMatrix().diagonal().minCoeff();
  return scale > 0.0 && min_pivot * min_pivot > 1e-12 * scale;
}

void require_same_dim(const GaussianComponent& a, const GaussianComponent& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("components of dimension " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
}

}  // namespace

void GaussianComponent::validate() const {
  const Eigen::Index p = mean.size();
  if (p < 1) throw InputError("component has empty mean");
  if (covariance.rows() != p || covariance.cols() != p)
    throw DimensionMismatch("covariance is not " + std::to_string(p) + "x" + std::to_string(p));
  if (!mean.allFinite() || !covariance.allFinite()) throw InputError("component has non-finite parameters");
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("covariance is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw NumericError("covariance is not positive definite");
  if (!(weight > 0.0 && weight <= 1.0)) throw InputError("component weight must lie in (0, 1]");
}

kernels::PreparedGaussian prepare(const GaussianComponent& c) {
  c.validate();
  Eigen::LLT<Eigen::MatrixXd> llt(c.covariance);
  kernels::PreparedGaussian out;
  out.mean = c.mean;
  out.chol = llt.matrixL();
  const double log_det = 2.0 * out.chol.diagonal().array().log().sum();
  const auto p = static_cast<double>(c.dim());
  out.log_norm = std::log(c.weight) - 0.5 * (log_det + p * std::log(2.0 * std::numbers::pi));
  return out;
}

Eigen::MatrixXd regularize_covariance(const Eigen::MatrixXd& s) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (factors_cleanly(s, llt)) return s;
  const auto p = static_cast<double>(s.rows());
  double base = s.trace() / p;
  if (!(base > 0.0)) base = 1.0;
  for (double eps = 1e-8; eps < 1e8; eps *= 2.0) {
    Eigen::MatrixXd ridged = s;
    ridged.diagonal().array() += eps * base;
    if (factors_cleanly(ridged, llt)) return ridged;
  }
  throw NumericError("covariance could not be regularized");
}

FittedClasses fit_components(const DataSet& data) {
  data.validate(1);
  FittedClasses out;
  out.classes = data.classes();
  if (out.classes.size() < 2) throw SingleClass("overlap needs at least two classes");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < out.classes.size(); ++k) index.emplace(out.classes[k], k);
  std::vector<std::vector<Eigen::Index>> members(out.classes.size());
  for (std::size_t i = 0; i < data.rows(); ++i)
    members[index.at(data.labels[i])].push_back(static_cast<Eigen::Index>(i));

  const Eigen::Index p = data.values.cols();
  const auto n = static_cast<double>(data.rows());
  for (const auto& rows : members) {
    const auto nk = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd x(nk, p);
    for (Eigen::Index r = 0; r < nk; ++r) x.row(r) = data.values.row(rows[static_cast<std::size_t>(r)]);
    GaussianComponent c;
    c.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - c.mean.transpose();
    Eigen::MatrixXd s = (centered.transpose() * centered) / static_cast<double>(nk);
    s = 0.5 * (s + s.transpose());
    c.covariance = regularize_covariance(s);
    c.weight = static_cast<double>(nk) / n;
    out.components.push_back(std::move(c));
  }
  return out;
}

PairOverlap pairwise_overlap(const GaussianComponent& ci, const GaussianComponent& cj, std::size_t n_draws,
                             std::uint64_t seed) {
  require_same_dim(ci, cj);
  if (n_draws < 1) throw InputError("n_draws must be positive");
  const kernels::PreparedGaussian pi = prepare(ci);
  const kernels::PreparedGaussian pj = prepare(cj);
  const auto n = static_cast<double>(n_draws);
  const auto ji = kernels::count_misclassified(pi, pj, n_draws, derive_seed(seed, {0}));
  const auto ij = kernels::count_misclassified(pj, pi, n_draws, derive_seed(seed, {1}));
  return {static_cast<double>(ji.misclassified) / n, static_cast<double>(ij.misclassified) / n};
}

std::uint64_t pair_seed(std::uint64_t seed, std::size_t i, std::size_t j) noexcept {
  if (i > j) std::swap(i, j);
  return derive_seed(seed, {i, j});
}

OverlapMatrix overlap_matrix(const std::vector<GaussianComponent>& components, std::size_t n_draws,
                             std::uint64_t seed) {
  const std::size_t k = components.size();
  if (k < 2) throw SingleClass("overlap matrix needs at least two components");
  double total_weight = 0.0;
  for (const auto& c : components) {
    require_same_dim(components.front(), c);
    total_weight += c.weight;
  }
  if (std::abs(total_weight - 1.0) > 1e-9) throw InputError("component weights must sum to 1");

  OverlapMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)), n_draws,
                    seed};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const PairOverlap o = pairwise_overlap(components[i], components[j], n_draws, pair_seed(seed, i, j));
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      out.omega(a, b) = out.omega(b, a) = o.j_given_i + o.i_given_j;
    }
  }
  check_overlap_matrix(out.omega);
  return out;
}

void check_overlap_matrix(const Eigen::MatrixXd& omega) {
  if (omega.rows() != omega.cols()) throw NumericError("overlap matrix is not square");
  for (Eigen::Index i = 0; i < omega.rows(); ++i) {
    if (omega(i, i) != 0.0) throw NumericError("overlap matrix has a nonzero diagonal");
    for (Eigen::Index j = 0; j < omega.cols(); ++j) {
      if (omega(i, j) != omega(j, i)) throw NumericError("overlap matrix is not symmetric");
      if (!(omega(i, j) >= 0.0 && omega(i, j) <= 2.0)) throw NumericError("overlap entry outside [0, 2]");
    }
  }
}

double generalized_overlap(const Eigen::MatrixXd& omega) {
  if (omega.rows() != omega.cols()) throw DimensionMismatch("overlap matrix is not square");
  const Eigen::Index k = omega.rows();
  if (k < 2) throw SingleClass("generalized overlap needs at least two classes");
  Eigen::MatrixXd bar = omega;
  bar.diagonal().setOnes();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(bar, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericError("eigenvalue computation failed");
  return (eig.eigenvalues().maxCoeff() - 1.0) / static_cast<double>(k - 1);
}

HeatmapTable heatmap_export(const OverlapMatrix& m, const std::vector<std::string>& labels) {
  const auto k = static_cast<std::size_t>(m.classes());
  if (labels.size() != k) throw DimensionMismatch("need one label per class");
  HeatmapTable table;
  for (std::size_t i = 1; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double w = m.omega(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      table.cells.push_back({i, j, labels[i], labels[j], w, 0.0});
      table.max_omega = std::max(table.max_omega, w);
    }
  }
  if (table.max_omega > 0.0)
    for (auto& cell : table.cells) cell.color = cell.omega / table.max_omega;
  return table;
}

ScaledOverlapEvaluator::ScaledOverlapEvaluator(const std::vector<GaussianComponent>& components,
                                               std::size_t n_draws, std::uint64_t seed)
    : k_(components.size()), n_draws_(n_draws), seed_(seed) {
  if (k_ < 2) throw SingleClass("overlap matrix needs at least two components");
  if (n_draws < 1) throw InputError("n_draws must be positive");
  std::vector<kernels::PreparedGaussian> prepared;
  for (const auto& c : components) {
    require_same_dim(components.front(), c);
    prepared.push_back(prepare(c));
  }

  auto build = [&](const kernels::PreparedGaussian& from, const kernels::PreparedGaussian& other,
                   std::uint64_t dir_seed) {
    Direction d;
    const auto lower_other = other.chol.triangularView<Eigen::Lower>();
    const Eigen::VectorXd offset = lower_other.solve(from.mean - other.mean);
    d.log_ratio = other.log_norm - from.log_norm;
    d.offset_sq = offset.squaredNorm();
    d.cross.resize(n_draws);
    d.spread.resize(n_draws);
    const Eigen::MatrixXd mix = lower_other.solve(Eigen::MatrixXd(from.chol.triangularView<Eigen::Lower>()));
    const auto chunks = static_cast<std::int64_t>(kernels::chunk_count(n_draws));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
      const std::size_t begin = static_cast<std::size_t>(chunk) * kernels::kDrawChunk;
      const auto count = static_cast<Eigen::Index>(std::min(kernels::kDrawChunk, n_draws - begin));
      Eigen::MatrixXd z;
      kernels::standard_normal_chunk(dir_seed, static_cast<std::size_t>(chunk), from.mean.size(), count, z);
      const Eigen::MatrixXd bz = mix * z;
      for (Eigen::Index c = 0; c < count; ++c) {
        d.cross[begin + static_cast<std::size_t>(c)] = offset.dot(bz.col(c));
        d.spread[begin + static_cast<std::size_t>(c)] = bz.col(c).squaredNorm() - z.col(c).squaredNorm();
      }
    }
    return d;
  };

  for (std::size_t i = 0; i < k_; ++i) {
    for (std::size_t j = i + 1; j < k_; ++j) {
      const std::uint64_t s = pair_seed(seed, i, j);
      directions_.push_back(build(prepared[i], prepared[j], derive_seed(s, {0})));
      directions_.push_back(build(prepared[j], prepared[i], derive_seed(s, {1})));
    }
  }
}

double ScaledOverlapEvaluator::misclassified_fraction(const Direction& d, double scale) const {
  // With both covariances scaled by c the other component's whitened draw is
  // offset / sqrt(c) + B z, and the log det terms cancel.
  const double base = d.log_ratio - 0.5 * d.offset_sq / scale;
  const double inv_root = 1.0 / std::sqrt(scale);
  const auto n = static_cast<std::int64_t>(n_draws_);
  double count = 0.0;
#pragma omp parallel for reduction(+ : count) schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    const double margin = base - d.cross[static_cast<std::size_t>(t)] * inv_root - 0.5 * d.spread[static_cast<std::size_t>(t)];
    if (margin > 0.0)
      count += 1.0;
    else if (margin == 0.0)
      count += 0.5;
  }
  return count / static_cast<double>(n_draws_);
}

OverlapMatrix ScaledOverlapEvaluator::matrix(double scale) const {
  if (!(scale > 0.0)) throw InvalidScale("covariance scale must be positive");
  OverlapMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(k_)), n_draws_,
                    seed_};
  std::size_t next = 0;
  for (std::size_t i = 0; i < k_; ++i) {
    for (std::size_t j = i + 1; j < k_; ++j) {
      const double w = misclassified_fraction(directions_[next], scale) +
                       misclassified_fraction(directions_[next + 1], scale);
      next += 2;
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      out.omega(a, b) = out.omega(b, a) = w;
    }
  }
  return out;
}

}  // namespace radviz
