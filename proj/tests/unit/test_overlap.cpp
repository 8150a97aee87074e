#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "radviz3d/error.hpp"
#include "radviz3d/mixture_sim.hpp"
#include "radviz3d/overlap.hpp"

using namespace radviz;

namespace {

// Standard normal CDF, the analytic oracle for 1D equal-variance pairs:
// the Bayes boundary sits at the midpoint, so w_{j|i} = Phi(-delta / 2).
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

GaussianComponent one_d(double mean, double var, double weight = 0.5) {
  return {Eigen::VectorXd::Constant(1, mean), Eigen::MatrixXd::Constant(1, 1, var), weight};
}

GaussianComponent random_component(std::mt19937_64& rng, Eigen::Index p, double weight) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.3, 2.0);
  Eigen::MatrixXd a(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) a(i, j) = g(rng);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  Eigen::VectorXd lambda(p);
  for (Eigen::Index j = 0; j < p; ++j) lambda[j] = u(rng);
  Eigen::MatrixXd s = q * lambda.asDiagonal() * q.transpose();
  Eigen::VectorXd mean(p);
  for (Eigen::Index j = 0; j < p; ++j) mean[j] = 2.0 * g(rng);
  return {mean, 0.5 * (s + s.transpose()), weight};
}

DataSet labeled(const Eigen::MatrixXd& values, std::vector<std::string> labels) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back("v" + std::to_string(j));
  return make_dataset(values, names, std::move(labels));
}

}  // namespace

TEST_CASE("fit: ML mean and covariance per class") {
  Eigen::MatrixXd x(8, 2);
  x << 0, 0, 1, 0, 0, 1, 1, 1, 5, 5, 6, 5, 5, 7, 6, 6;
  const FittedClasses fit = fit_components(labeled(x, {"a", "a", "a", "a", "b", "b", "b", "b"}));
  REQUIRE(fit.classes == std::vector<std::string>{"a", "b"});
  const GaussianComponent& a = fit.components[0];
  CHECK(a.mean.isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK((a.covariance - 0.25 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(a.weight == 0.5);
  CHECK(fit.components[1].weight == 0.5);
}

TEST_CASE("fit: unequal class sizes give proportional weights") {
  Eigen::MatrixXd x(6, 3);
  x << 0, 0, 1, 1, 0, 0, 0, 1, 0, 3, 3, 4, 4, 3, 3, 3, 4, 3;
  const FittedClasses fit = fit_components(labeled(x, {"p", "q", "q", "q", "q", "q"}));
  CHECK(fit.components[0].weight == doctest::Approx(1.0 / 6.0));
  CHECK(fit.components[1].weight == doctest::Approx(5.0 / 6.0));
  // "p" has a single member: zero covariance, ridged until it factors.
  CHECK_NOTHROW(prepare(fit.components[0]));
}

TEST_CASE("fit: rank-deficient class is ridge-regularized") {
  // Class "flat" lies on the plane z = 0.
  Eigen::MatrixXd x(10, 3);
  x << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 2, 1, 0, 5, 5, 5, 6, 5, 4, 5, 7, 5, 4, 6, 6, 6, 6, 5;
  const FittedClasses fit =
      fit_components(labeled(x, {"flat", "flat", "flat", "flat", "flat", "r", "r", "r", "r", "r"}));
  const Eigen::MatrixXd& s = fit.components[0].covariance;
  CHECK(s(2, 2) > 0.0);
  CHECK(s(2, 2) < 1e-6);
  CHECK_NOTHROW(prepare(fit.components[0]));
}

TEST_CASE("fit: needs two classes") {
  CHECK_THROWS_AS(fit_components(labeled(Eigen::MatrixXd::Random(5, 3), {})), SingleClass);
}

TEST_CASE("regularize_covariance leaves SPD matrices alone") {
  const Eigen::Matrix3d s = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  CHECK(regularize_covariance(s) == Eigen::MatrixXd(s));
  const Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
  const Eigen::MatrixXd fixed = regularize_covariance(singular);
  CHECK(fixed != singular);
  CHECK((fixed - singular).isDiagonal());
}

TEST_CASE("pairwise overlap: identical components split by the coin") {
  const auto c = one_d(0.0, 1.0);
  const std::size_t n = 200000;
  const PairOverlap o = pairwise_overlap(c, c, n, 1);
  const double tol = 4.0 * std::sqrt(0.25 / n);
  CHECK(std::abs(o.j_given_i - 0.5) <= tol);
  CHECK(std::abs(o.i_given_j - 0.5) <= tol);
}

TEST_CASE("pairwise overlap: 1D analytic pair") {
  const PairOverlap o = pairwise_overlap(one_d(0.0, 1.0), one_d(2.0, 1.0), 1000000, 2024);
  CHECK(std::abs(o.j_given_i - normal_cdf(-1.0)) <= 0.002);
  CHECK(std::abs(o.i_given_j - normal_cdf(-1.0)) <= 0.002);
  const PairOverlap far = pairwise_overlap(one_d(0.0, 1.0), one_d(100.0, 1.0), 100000, 3);
  CHECK(far.j_given_i <= 1e-4);
  CHECK(far.i_given_j <= 1e-4);
}

TEST_CASE("pairwise overlap: weights shift the boundary") {
  // With weights 0.8 / 0.2 the boundary moves to 1 + ln(4)/2 for N(0,1) vs N(2,1).
  const double boundary = 1.0 + std::log(4.0) / 2.0;
  const PairOverlap o = pairwise_overlap(one_d(0.0, 1.0, 0.8), one_d(2.0, 1.0, 0.2), 400000, 8);
  CHECK(std::abs(o.j_given_i - normal_cdf(-boundary)) <= 4.0 * std::sqrt(0.25 / 400000));
  CHECK(std::abs(o.i_given_j - normal_cdf(boundary - 2.0)) <= 4.0 * std::sqrt(0.25 / 400000));
}

TEST_CASE("pairwise overlap: dimension mismatch") {
  GaussianComponent two{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 0.5};
  CHECK_THROWS_AS(pairwise_overlap(one_d(0, 1), two, 10, 1), DimensionMismatch);
}

TEST_CASE("overlap matrix: MC consistency against 2 Phi(-delta/2)") {
  const std::size_t n = 1000000;
  for (double delta : {1.0, 2.0, 4.0}) {
    CAPTURE(delta);
    const OverlapMatrix m = overlap_matrix({one_d(0.0, 1.0), one_d(delta, 1.0)}, n, 77);
    CHECK(std::abs(m.omega(0, 1) - 2.0 * normal_cdf(-delta / 2.0)) <= 4.0 * std::sqrt(0.25 / n));
  }
}

TEST_CASE("overlap matrix: examples") {
  const OverlapMatrix same = overlap_matrix({one_d(1.0, 2.0), one_d(1.0, 2.0)}, 200000, 4);
  CHECK(std::abs(same.omega(0, 1) - 1.0) <= 8.0 * std::sqrt(0.25 / 200000));

  const OverlapMatrix far = overlap_matrix({one_d(0.0, 1.0, 1.0 / 3), one_d(100.0, 1.0, 1.0 / 3),
                                            one_d(-100.0, 1.0, 1.0 / 3)},
                                           100000, 4);
  CHECK(far.omega.cwiseAbs().maxCoeff() <= 1e-4);

  const OverlapMatrix pair = overlap_matrix({one_d(0.0, 1.0), one_d(2.0, 1.0)}, 1000000, 5);
  CHECK(std::abs(pair.omega(0, 1) - 2.0 * normal_cdf(-1.0)) <= 0.004);
  CHECK(pair.omega(0, 0) == 0.0);
  CHECK(pair.omega(0, 1) == pair.omega(1, 0));

  CHECK_THROWS_AS(overlap_matrix({one_d(0, 1, 1.0)}, 10, 1), SingleClass);
  CHECK_THROWS_AS(overlap_matrix({one_d(0, 1, 0.5), one_d(1, 1, 0.4)}, 10, 1), InputError);
}

TEST_CASE("overlap matrix: seed determinism and order independence") {
  std::mt19937_64 rng(13);
  std::vector<GaussianComponent> comps;
  for (int k = 0; k < 4; ++k) comps.push_back(random_component(rng, 3, 0.25));
  const OverlapMatrix a = overlap_matrix(comps, 30000, 42);
  const OverlapMatrix b = overlap_matrix(comps, 30000, 42);
  CHECK(a.omega == b.omega);
  check_overlap_matrix(a.omega);

  // Assemble pair by pair in reverse order.
  Eigen::MatrixXd rev = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 3; i >= 0; --i) {
    for (int j = 3; j > i; --j) {
      const PairOverlap o = pairwise_overlap(comps[static_cast<std::size_t>(i)], comps[static_cast<std::size_t>(j)],
                                             30000, pair_seed(42, static_cast<std::size_t>(j), static_cast<std::size_t>(i)));
      rev(i, j) = rev(j, i) = o.j_given_i + o.i_given_j;
    }
  }
  CHECK(rev == a.omega);
  CHECK(overlap_matrix(comps, 30000, 43).omega != a.omega);
}

TEST_CASE("generalized overlap identities") {
  CHECK(generalized_overlap(Eigen::MatrixXd::Zero(4, 4)) == doctest::Approx(0.0));
  for (Eigen::Index k : {2, 3, 5, 9}) {
    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(k, k);
    ones.diagonal().setZero();
    CHECK(std::abs(generalized_overlap(ones) - 1.0) <= 1e-12);
  }
  for (double w : {0.0, 1e-3, 0.123456789, 0.9}) {
    Eigen::Matrix2d m;
    m << 0, w, w, 0;
    CHECK(std::abs(generalized_overlap(m) - w) <= 1e-12);
  }
  CHECK_THROWS_AS(generalized_overlap(Eigen::MatrixXd::Zero(1, 1)), SingleClass);
}

TEST_CASE("generalized overlap stays in [0, 1] (property)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng() % 8);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j) m(i, j) = m(j, i) = u(rng);
    const double g = generalized_overlap(m);
    CHECK(g >= -1e-12);
    CHECK(g <= 1.0 + 1e-12);
  }
}

TEST_CASE("inflating covariances does not decrease the generalized overlap") {
  std::mt19937_64 rng(29);
  const std::size_t n = 20000;
  for (int instance = 0; instance < 20; ++instance) {
    std::vector<GaussianComponent> comps;
    for (int k = 0; k < 3; ++k) comps.push_back(random_component(rng, 3, 1.0 / 3.0));
    const double base = generalized_overlap(overlap_matrix(comps, n, 100 + instance));
    const double inflated = generalized_overlap(overlap_matrix(rescale_components(comps, 2.0), n, 100 + instance));
    CAPTURE(instance);
    // Statistical check: allow a few MC standard errors of slack.
    CHECK(inflated >= base - 4.0 * std::sqrt(0.25 / n));
  }
}

TEST_CASE("heatmap export") {
  OverlapMatrix m{Eigen::MatrixXd::Zero(3, 3), 10, 1};
  m.omega(1, 0) = m.omega(0, 1) = 0.1;
  m.omega(2, 0) = m.omega(0, 2) = 0.4;
  m.omega(2, 1) = m.omega(1, 2) = 0.2;
  const HeatmapTable t = heatmap_export(m, {"x", "y", "z"});
  REQUIRE(t.cells.size() == 3);
  CHECK(t.max_omega == 0.4);
  CHECK(t.cells[0].class_i == "y");
  CHECK(t.cells[0].class_j == "x");
  CHECK(t.cells[1].i == 2);
  CHECK(t.cells[1].j == 0);
  CHECK(t.cells[1].color == 1.0);
  CHECK(t.cells[2].color == doctest::Approx(0.5));

  const HeatmapTable flat = heatmap_export(OverlapMatrix{Eigen::MatrixXd::Zero(4, 4), 1, 1}, {"a", "b", "c", "d"});
  CHECK(flat.cells.size() == 6);
  CHECK(flat.max_omega == 0.0);
  for (const auto& c : flat.cells) CHECK(c.color == 0.0);
  CHECK_THROWS_AS(heatmap_export(m, {"x"}), DimensionMismatch);
}

TEST_CASE("scaled evaluator agrees with the general path") {
  std::mt19937_64 rng(31);
  std::vector<GaussianComponent> comps;
  for (int k = 0; k < 4; ++k) comps.push_back(random_component(rng, 4, 0.25));
  const std::size_t n = 20000;
  const ScaledOverlapEvaluator eval(comps, n, 9);
  for (double c : {0.05, 0.5, 1.0, 3.0}) {
    CAPTURE(c);
    const Eigen::MatrixXd fast = eval.matrix(c).omega;
    const Eigen::MatrixXd slow = overlap_matrix(rescale_components(comps, c), n, 9).omega;
    // Same draws; only rounding at the decision boundary may differ.
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 3.0 / static_cast<double>(n));
  }
  CHECK_THROWS_AS(eval.matrix(0.0), InvalidScale);
}

TEST_CASE("component validation") {
  GaussianComponent bad{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 0.5};
  bad.covariance(0, 1) = 0.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
  GaussianComponent indefinite{Eigen::Vector2d::Zero(), -Eigen::Matrix2d::Identity(), 0.5};
  CHECK_THROWS_AS(indefinite.validate(), NumericError);
  GaussianComponent heavy{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 1.5};
  CHECK_THROWS_AS(heavy.validate(), InputError);
}
