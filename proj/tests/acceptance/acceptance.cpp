// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "radviz3d/anchors.hpp"
#include "radviz3d/csv.hpp"
#include "radviz3d/mixture_sim.hpp"
#include "radviz3d/overlap.hpp"
#include "radviz3d/projection.hpp"

namespace fs = std::filesystem;
using namespace radviz;

namespace {

// Tolerances and limits, fixed here rather than tuned per run.
constexpr double kNormTol = 1e-12;
constexpr double kCentroidTol = 1e-10;
constexpr double kSpectrumTol = 1e-10;
constexpr double kPlatonicSeconds = 1.0;
constexpr double kMinAngleSeconds = 5.0;
constexpr double kScaleTol = 1e-12;
constexpr double kDistanceTol = 1e-12;
constexpr double kSpringTol = 1e-10;
constexpr double kBallTol = 1e-12;
constexpr double kOverlapTol = 0.004;
constexpr double kOverlapSeconds = 10.0;
constexpr double kOmegaIdentityTol = 1e-12;
constexpr double kCalibrationRelTol = 0.02;
constexpr double kCalibrationSeconds = 120.0;
constexpr double kWine13Max = 5e-4;
constexpr double kWine23Min = 2e-4;
constexpr double kWine23Max = 3e-3;
constexpr double kWineSeconds = 30.0;

const fs::path kData = RADVIZ3D_TEST_DATA;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// A check returns an empty string on success, otherwise the reason.
int failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& check) {
  std::string why;
  try {
    why = check();
  } catch (const std::exception& e) {
    why = std::string("exception: ") + e.what();
  }
  std::cout << (why.empty() ? "PASS " : "FAIL ") << name;
  if (!why.empty()) {
    std::cout << " (" << why << ")";
    ++failures;
  }
  std::cout << std::endl;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string platonic_fidelity() {
  const auto t0 = Clock::now();
  for (std::size_t p : {4u, 6u, 8u, 12u, 20u}) {
    const AnchorSet a = platonic_anchors(p);
    const Eigen::MatrixXd& u = a.matrix();
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if (std::abs(u.col(j).norm() - 1.0) > kNormTol) return "p=" + std::to_string(p) + " norm";
    if (u.rowwise().sum().norm() > kCentroidTol) return "p=" + std::to_string(p) + " centroid";
    // Cosines between distinct vertices take only the values of the solid.
    std::vector<double> allowed;
    const double r5 = std::sqrt(5.0);
    switch (p) {
      case 4: allowed = {-1.0 / 3.0}; break;
      case 6: allowed = {-1.0, 0.0}; break;
      case 8: allowed = {-1.0, -1.0 / 3.0, 1.0 / 3.0}; break;
      case 12: allowed = {-1.0, -1.0 / r5, 1.0 / r5}; break;
      case 20: allowed = {-1.0, -r5 / 3.0, -1.0 / 3.0, 1.0 / 3.0, r5 / 3.0}; break;
    }
    for (Eigen::Index i = 0; i < u.cols(); ++i)
      for (Eigen::Index j = i + 1; j < u.cols(); ++j) {
        const double d = u.col(i).dot(u.col(j));
        bool ok = false;
        for (double v : allowed) ok = ok || std::abs(d - v) <= kSpectrumTol;
        if (!ok) return "p=" + std::to_string(p) + " cosine " + fmt(d);
      }
  }
  const double s = seconds_since(t0);
  return s < kPlatonicSeconds ? "" : "took " + fmt(s) + " s";
}

std::string fibonacci_construction() {
  for (std::size_t p : {5u, 7u, 9u, 100u}) {
    const AnchorSet a = fibonacci_anchors(p);
    for (std::size_t j = 1; j <= p; ++j) {
      const auto col = static_cast<Eigen::Index>(j - 1);
      const double want = static_cast<double>(2 * j - 1) / static_cast<double>(p) - 1.0;
      if (a.matrix()(2, col) != want) return "p=" + std::to_string(p) + " j=" + std::to_string(j) + " z";
      if (std::abs(a.matrix().col(col).norm() - 1.0) > kNormTol) return "p=" + std::to_string(p) + " norm";
    }
  }
  return "";
}

std::string min_angle_dominance() {
  const auto t0 = Clock::now();
  for (std::size_t p = 4; p <= 100; ++p) {
    const double angle = min_pairwise_angle(default_anchors(p));
    if (!(angle > 2.0 * std::numbers::pi / static_cast<double>(p)))
      return "p=" + std::to_string(p) + " angle " + fmt(angle);
  }
  const double s = seconds_since(t0);
  return s < kMinAngleSeconds ? "" : "took " + fmt(s) + " s";
}

std::string projection_identities() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<AnchorSet> sets{platonic_anchors(4), platonic_anchors(6), platonic_anchors(8),
                                    platonic_anchors(12), platonic_anchors(20)};

  double worst_scale = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const AnchorSet& a = sets[static_cast<std::size_t>(trial) % sets.size()];
    Eigen::VectorXd x(static_cast<Eigen::Index>(a.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = u(rng);
    const Eigen::VectorXd y = project(x, a).point;
    for (double k : {0.5, 3.0, 1e-3}) worst_scale = std::max(worst_scale, (project(k * x, a).point - y).cwiseAbs().maxCoeff());
  }
  if (worst_scale > kScaleTol) return "scale invariance deviation " + fmt(worst_scale);

  for (const AnchorSet& a : sets) {
    const auto p = static_cast<Eigen::Index>(a.size());
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j) {
        const Eigen::VectorXd yi = project(Eigen::VectorXd::Unit(p, i), a).point;
        const Eigen::VectorXd yj = project(Eigen::VectorXd::Unit(p, j), a).point;
        const double want = 2.0 - 2.0 * a.matrix().col(i).dot(a.matrix().col(j));
        if (std::abs((yi - yj).squaredNorm() - want) > kDistanceTol)
          return "distance identity p=" + std::to_string(p);
      }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const AnchorSet& a = sets[static_cast<std::size_t>(trial) % sets.size()];
    Eigen::VectorXd x(static_cast<Eigen::Index>(a.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = 10.0 * u(rng);
    const Eigen::VectorXd r = spring_residual(x, project(x, a).point, a);
    if (r.norm() > kSpringTol * x.sum()) return "spring residual " + fmt(r.norm());
  }
  return "";
}

std::string unit_ball_containment() {
  std::mt19937_64 rng(7);
  std::lognormal_distribution<double> heavy(0.0, 2.0);
  const Eigen::Index n = 100000;
  const Eigen::Index p = 13;
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = heavy(rng) - 1.0;
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < p; ++j) names.push_back("f" + std::to_string(j));
  const DataSet d = make_dataset(x, names);
  for (const AnchorSet& a : {default_anchors(13), fibonacci_anchors(13)}) {
    const Projection proj = project_dataset(d, a, Normalization::MinMax);
    const double worst = proj.points.rowwise().norm().maxCoeff();
    if (worst > 1.0 + kBallTol) return "max norm " + fmt(worst);
  }
  return "";
}

std::string overlap_oracle() {
  for (double delta : {1.0, 2.0, 4.0}) {
    const auto t0 = Clock::now();
    const std::vector<GaussianComponent> pair{
        {Eigen::VectorXd::Constant(1, 0.0), Eigen::MatrixXd::Constant(1, 1, 1.0), 0.5},
        {Eigen::VectorXd::Constant(1, delta), Eigen::MatrixXd::Constant(1, 1, 1.0), 0.5}};
    const OverlapMatrix m = overlap_matrix(pair, 1000000, 0);
    const double err = std::abs(m.omega(0, 1) - 2.0 * normal_cdf(-delta / 2.0));
    const double s = seconds_since(t0);
    if (err > kOverlapTol) return "delta=" + fmt(delta) + " error " + fmt(err);
    if (s >= kOverlapSeconds) return "delta=" + fmt(delta) + " took " + fmt(s) + " s";
  }
  return "";
}

std::string generalized_identities() {
  for (Eigen::Index k : {2, 3, 5, 10}) {
    if (std::abs(generalized_overlap(Eigen::MatrixXd::Zero(k, k))) > kOmegaIdentityTol) return "zero matrix";
    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(k, k);
    ones.diagonal().setZero();
    if (std::abs(generalized_overlap(ones) - 1.0) > kOmegaIdentityTol) return "all-ones K=" + std::to_string(k);
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double w = u(rng);
    Eigen::Matrix2d m;
    m << 0.0, w, w, 0.0;
    if (std::abs(generalized_overlap(m) - w) > kOmegaIdentityTol) return "K=2 with omega " + fmt(w);
  }
  return "";
}

std::string simulation_calibration() {
  const auto t0 = Clock::now();
  for (double target : {0.001, 0.01, 0.05}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SimSpec spec;
      spec.classes = 5;
      spec.dims = 5;
      spec.rows = 500;
      spec.target_omega = target;
      spec.seed = seed;
      const SimResult r = simulate_mixture(spec);
      const double rel = std::abs(r.achieved_omega - target) / target;
      if (rel > kCalibrationRelTol)
        return "target " + fmt(target) + " seed " + std::to_string(seed) + " achieved " + fmt(r.achieved_omega);
    }
  }
  const double s = seconds_since(t0);
  return s < kCalibrationSeconds ? "" : "took " + fmt(s) + " s";
}

std::string wine_separability() {
  const auto t0 = Clock::now();
  CsvOptions opts;
  opts.label_column = "cultivar";
  const DataSet wine = load_csv(kData / "wine.csv", opts);
  if (wine.rows() != 178 || wine.features() != 13) return "unexpected wine shape";
  const FittedClasses fit = fit_components(wine);
  if (fit.classes != std::vector<std::string>{"1", "2", "3"}) return "unexpected cultivar labels";
  const OverlapMatrix m = overlap_matrix(fit.components, 1000000, 0);
  const double w13 = m.omega(0, 2);
  const double w23 = m.omega(1, 2);
  const double s = seconds_since(t0);
  std::string detail = "w13=" + fmt(w13) + " w23=" + fmt(w23);
  if (w13 > kWine13Max) return detail;
  if (w23 < kWine23Min || w23 > kWine23Max) return detail;
  if (s >= kWineSeconds) return "took " + fmt(s) + " s";
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + RADVIZ3D_CLI + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Scene JSON with the provenance timestamp blanked.
std::string without_timestamp(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  j["provenance"]["timestamp"] = "";
  return j.dump();
}

std::string cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "radviz3d_acceptance";
  fs::create_directories(dir);
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  const std::string wine = q(kData / "wine.csv");
  const fs::path out = dir / "out.txt";
  const fs::path side = dir / "side.json";
  const fs::path sim = dir / "sim.csv";
  const fs::path scene = dir / "scene.json";
  const fs::path html = dir / "scene.html";

  struct Case {
    std::string name;
    std::string args;
    std::vector<fs::path> outputs;
    bool scene_like = false;
  };
  const std::vector<Case> cases{
      {"anchors", "--seed 9 anchors -p 20 -o " + q(out), {out}},
      {"anchors json", "--seed 9 --format json --fibonacci anchors -p 17 -o " + q(out), {out}},
      {"project", "--seed 9 project -i " + wine + " --label-column cultivar -o " + q(out), {out}},
      {"project viz3d", "--seed 9 --method viz3d --format json project -i " + wine + " --label-column cultivar -o " + q(out),
       {out}},
      {"overlap", "--seed 9 overlap -i " + wine + " --label-column cultivar --draws 50000 -o " + q(out) +
                      " --heatmap " + q(side),
       {out, side}},
      {"simulate", "--seed 9 simulate --omega 0.01 --draws 50000 -o " + q(sim), {sim, fs::path(sim).replace_extension(".json")}},
      {"scene", "--seed 9 scene -i " + wine + " --label-column cultivar --with-overlap --draws 20000 -o " + q(scene),
       {scene}, true},
      {"export-html", "--seed 9 export-html --scene " + q(scene) + " -o " + q(html), {html}},
  };

  for (const Case& c : cases) {
    std::vector<std::string> first;
    for (int run = 0; run < 2; ++run) {
      for (const auto& p : c.outputs) fs::remove(p);
      if (const int code = run_cli(c.args); code != 0) return c.name + " exited " + std::to_string(code);
      for (std::size_t k = 0; k < c.outputs.size(); ++k) {
        std::string bytes = read_file(c.outputs[k]);
        if (c.scene_like) bytes = without_timestamp(bytes);
        if (run == 0)
          first.push_back(std::move(bytes));
        else if (bytes != first[k])
          return c.name + " differs on rerun (" + c.outputs[k].filename().string() + ")";
      }
    }
  }
  fs::remove_all(dir);
  return "";
}

}  // namespace

int main() {
  criterion("platonic-fidelity", platonic_fidelity);
  criterion("fibonacci-construction", fibonacci_construction);
  criterion("min-angle-dominance", min_angle_dominance);
  criterion("projection-identities", projection_identities);
  criterion("unit-ball-containment", unit_ball_containment);
  criterion("overlap-oracle", overlap_oracle);
  criterion("generalized-overlap-identities", generalized_identities);
  criterion("simulation-calibration", simulation_calibration);
  criterion("wine-separability", wine_separability);
  criterion("cli-determinism", cli_determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
