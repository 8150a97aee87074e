#include "radviz3d/mixture_sim.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "radviz3d/error.hpp"
#include "radviz3d/seed.hpp"

namespace radviz {

namespace {

// Stream tags below the root seed.
enum : std::uint64_t { kMeans = 1, kCovariance = 2, kEvaluation = 3, kRows = 4 };

constexpr double kMaxScale = 1e6;
constexpr double kMinScale = 1e-12;
constexpr int kMaxBisections = 60;
// Stop early once this close; the acceptance band is kCalibrationTolerance.
constexpr double kEarlyStop = 0.002;

Eigen::MatrixXd draw_means(const SimSpec& spec) {
  const auto k = static_cast<Eigen::Index>(spec.classes);
  const auto p = static_cast<Eigen::Index>(spec.dims);
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(derive_seed(spec.seed, {kMeans, attempt}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd means(k, p);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < p; ++j) means(i, j) = unit(rng);
    bool distinct = true;
    for (Eigen::Index a = 0; a < k && distinct; ++a)
      for (Eigen::Index b = a + 1; b < k && distinct; ++b)
        distinct = (means.row(a) - means.row(b)).norm() > 1e-6;
    if (distinct) return means;
  }
}

// Q diag(lambda) Q' with Q Haar-distributed and lambda uniform in [0.5, 1.5].
Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index p) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> eig(0.5, 1.5);
  Eigen::MatrixXd g(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // Sign fix so Q does not depend on the QR convention.
  const Eigen::VectorXd r_diag = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < p; ++j)
    if (r_diag[j] < 0.0) q.col(j) = -q.col(j);
  Eigen::VectorXd lambda(p);
  for (Eigen::Index j = 0; j < p; ++j) lambda[j] = eig(rng);
  Eigen::MatrixXd s = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

std::vector<Eigen::MatrixXd> draw_covariances(const SimSpec& spec) {
  const auto p = static_cast<Eigen::Index>(spec.dims);
  std::mt19937_64 rng(derive_seed(spec.seed, {kCovariance}));
  std::uniform_real_distribution<double> variance(0.5, 1.5);
  auto one = [&]() -> Eigen::MatrixXd {
    if (spec.spherical) return variance(rng) * Eigen::MatrixXd::Identity(p, p);
    return random_spd(rng, p);
  };
  std::vector<Eigen::MatrixXd> out;
  if (spec.homogeneous) {
    // Shared spherical covariance is the identity; the scale absorbs sigma^2.
    const Eigen::MatrixXd shared = spec.spherical ? Eigen::MatrixXd::Identity(p, p) : one();
    out.assign(spec.classes, shared);
  } else {
    for (std::size_t k = 0; k < spec.classes; ++k) out.push_back(one());
  }
  return out;
}

}  // namespace

void SimSpec::validate() const {
  if (classes < 2) throw SingleClass("simulation needs at least two classes");
  if (dims < 3) throw InvalidSpec("simulation needs at least 3 dimensions");
  if (!(target_omega > 0.0 && target_omega <= 0.6)) throw InvalidSpec("target overlap must lie in (0, 0.6]");
  if (rows < classes * (dims + 1))
    throw InvalidSpec("need at least K*(p+1) = " + std::to_string(classes * (dims + 1)) + " rows");
  if (calibration_draws < 1) throw InvalidSpec("calibration_draws must be positive");
}

std::vector<GaussianComponent> rescale_components(std::vector<GaussianComponent> components, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidScale("covariance scale must be positive and finite");
  for (auto& comp : components) comp.covariance *= c;
  return components;
}

SimResult simulate_mixture(const SimSpec& spec) {
  spec.validate();
  const Eigen::MatrixXd means = draw_means(spec);
  const std::vector<Eigen::MatrixXd> covs = draw_covariances(spec);
  std::vector<GaussianComponent> base;
  for (std::size_t k = 0; k < spec.classes; ++k)
    base.push_back({means.row(static_cast<Eigen::Index>(k)).transpose(), covs[k],
                    1.0 / static_cast<double>(spec.classes)});

  const std::uint64_t eval_seed = derive_seed(spec.seed, {kEvaluation});
  const ScaledOverlapEvaluator objective(base, spec.calibration_draws, eval_seed);
  const double target = spec.target_omega;
  std::size_t evaluations = 0;
  auto eval = [&](double c) {
    ++evaluations;
    return objective.generalized_overlap(c);
  };

  // Bracket [lo, hi] with f(lo) <= target <= f(hi), working in log scale.
  double lo = 1.0;
  double hi = 1.0;
  double f_lo = eval(1.0);
  double f_hi = f_lo;
  while (f_hi < target) {
    if (hi >= kMaxScale)
      throw TargetUnreachable("overlap stays below target up to covariance scale 1e6");
    lo = hi;
    f_lo = f_hi;
    hi = std::min(hi * 4.0, kMaxScale);
    f_hi = eval(hi);
  }
  while (f_lo > target) {
    if (lo <= kMinScale) throw TargetUnreachable("overlap stays above target as covariances shrink");
    hi = lo;
    f_hi = f_lo;
    lo = std::max(lo / 4.0, kMinScale);
    f_lo = eval(lo);
  }

  double best = std::abs(f_lo - target) < std::abs(f_hi - target) ? lo : hi;
  double best_err = std::min(std::abs(f_lo - target), std::abs(f_hi - target));
  for (int it = 0; it < kMaxBisections && best_err > kEarlyStop * target; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double f = eval(mid);
    if (std::abs(f - target) < best_err) {
      best_err = std::abs(f - target);
      best = mid;
    }
    (f < target ? lo : hi) = mid;
  }

  SimResult result;
  result.scale = best;
  result.iterations = evaluations;
  result.components = rescale_components(base, best);
  // Reported through the general overlap path on the same draws.
  result.achieved_omega = generalized_overlap(overlap_matrix(result.components, spec.calibration_draws, eval_seed));
  if (std::abs(result.achieved_omega - target) > kCalibrationTolerance * target)
    throw TargetUnreachable("calibration ended at overlap " + std::to_string(result.achieved_omega) +
                            " for target " + std::to_string(target));

  // Equal weights: floor(n/K) rows each, the remainder to the first classes.
  const auto p = static_cast<Eigen::Index>(spec.dims);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(spec.rows), p);
  std::vector<std::string> labels;
  labels.reserve(spec.rows);
  std::mt19937_64 rng(derive_seed(spec.seed, {kRows}));
  std::normal_distribution<double> normal;
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < spec.classes; ++k) {
    const std::size_t count = spec.rows / spec.classes + (k < spec.rows % spec.classes ? 1 : 0);
    const GaussianComponent& c = result.components[k];
    const Eigen::MatrixXd l = c.covariance.llt().matrixL();
    Eigen::VectorXd z(p);
    for (std::size_t r = 0; r < count; ++r, ++row) {
      for (Eigen::Index j = 0; j < p; ++j) z[j] = normal(rng);
      values.row(row) = (c.mean + l * z).transpose();
      labels.push_back(std::to_string(k + 1));
    }
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < spec.dims; ++j) names.push_back("x" + std::to_string(j + 1));
  result.data = make_dataset(std::move(values), std::move(names), std::move(labels));
  return result;
}

}  // namespace radviz
