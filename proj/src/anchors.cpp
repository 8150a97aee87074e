#include "radviz3d/anchors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "radviz3d/error.hpp"

namespace radviz {

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() != 2 && coords_.size() != 3)
    throw DimensionMismatch("unit vectors live in 2 or 3 dimensions, got " + std::to_string(coords_.size()));
  if (!coords_.allFinite() || std::abs(coords_.norm() - 1.0) > kUnitNormTolerance)
    throw InputError("anchor is not a unit vector");
}

std::string_view to_string(AnchorMethod m) noexcept {
  switch (m) {
    case AnchorMethod::Platonic: return "platonic";
    case AnchorMethod::Fibonacci: return "fibonacci";
    case AnchorMethod::Circle: return "circle";
  }
  return "unknown";
}

AnchorSet::AnchorSet(std::vector<UnitVector> anchors, AnchorMethod method, std::string solid)
    : method_(method), solid_(std::move(solid)) {
  if (anchors.empty()) throw InputError("anchor set is empty");
  const Eigen::Index dim = anchors.front().dim();
  matrix_.resize(dim, static_cast<Eigen::Index>(anchors.size()));
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    if (anchors[j].dim() != dim) throw DimensionMismatch("anchors of mixed dimension");
    matrix_.col(static_cast<Eigen::Index>(j)) = anchors[j].coords();
  }
}

Eigen::MatrixXd AnchorSet::as_rows3() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(matrix_.cols(), 3);
  out.leftCols(matrix_.rows()) = matrix_.transpose();
  return out;
}

AnchorSet AnchorSet::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != size()) throw DimensionMismatch("permutation length differs from anchor count");
  std::vector<bool> seen(size(), false);
  std::vector<UnitVector> cols;
  cols.reserve(size());
  for (std::size_t k : order) {
    if (k >= size() || seen[k]) throw InputError("not a permutation");
    seen[k] = true;
    cols.emplace_back(anchor(k));
  }
  return AnchorSet(std::move(cols), method_, solid_);
}

bool is_platonic_cardinality(std::size_t p) noexcept {
  return p == 4 || p == 6 || p == 8 || p == 12 || p == 20;
}

namespace {

using Triple = std::array<double, 3>;

// Expands a row template such as (0, ±1, ±phi) into its sign variants.
// Nonzero entries flagged in `signed_mask` get both signs, + first, with the
// leftmost coordinate varying slowest.
void expand_signs(const Triple& base, std::array<bool, 3> signed_mask, double scale, std::vector<UnitVector>& out) {
  std::array<int, 3> idx{};
  int n_signed = 0;
  for (int k = 0; k < 3; ++k)
    if (signed_mask[k]) idx[n_signed++] = k;
  for (int pattern = 0; pattern < (1 << n_signed); ++pattern) {
    Eigen::VectorXd v(3);
    for (int k = 0; k < 3; ++k) v[k] = base[k] * scale;
    for (int s = 0; s < n_signed; ++s) {
      const bool negative = (pattern >> (n_signed - 1 - s)) & 1;
      if (negative) v[idx[s]] = -v[idx[s]];
    }
    out.emplace_back(std::move(v));
  }
}

constexpr double kPhi = std::numbers::phi;

}  // namespace

AnchorSet platonic_anchors(std::size_t p) {
  std::vector<UnitVector> v;
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  switch (p) {
    case 4: {
      const std::array<Triple, 4> rows{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
      for (const auto& r : rows) v.emplace_back(Eigen::Vector3d(r[0], r[1], r[2]) * inv_sqrt3);
      return AnchorSet(std::move(v), AnchorMethod::Platonic, "tetrahedron");
    }
    case 6:
      expand_signs({1, 0, 0}, {true, false, false}, 1.0, v);
      expand_signs({0, 1, 0}, {false, true, false}, 1.0, v);
      expand_signs({0, 0, 1}, {false, false, true}, 1.0, v);
      return AnchorSet(std::move(v), AnchorMethod::Platonic, "octahedron");
    case 8:
      expand_signs({1, 1, 1}, {true, true, true}, inv_sqrt3, v);
      return AnchorSet(std::move(v), AnchorMethod::Platonic, "cube");
    case 12: {
      const double s = 1.0 / std::sqrt(1.0 + kPhi * kPhi);
      expand_signs({0, 1, kPhi}, {false, true, true}, s, v);
      expand_signs({1, kPhi, 0}, {true, true, false}, s, v);
      expand_signs({kPhi, 0, 1}, {true, false, true}, s, v);
      return AnchorSet(std::move(v), AnchorMethod::Platonic, "icosahedron");
    }
    case 20: {
      const double inv_phi = 1.0 / kPhi;
      expand_signs({1, 1, 1}, {true, true, true}, inv_sqrt3, v);
      expand_signs({0, inv_phi, kPhi}, {false, true, true}, inv_sqrt3, v);
      expand_signs({inv_phi, kPhi, 0}, {true, true, false}, inv_sqrt3, v);
      expand_signs({kPhi, 0, inv_phi}, {true, false, true}, inv_sqrt3, v);
      return AnchorSet(std::move(v), AnchorMethod::Platonic, "dodecahedron");
    }
    default:
      throw UnsupportedCardinality("no Platonic solid has " + std::to_string(p) + " vertices");
  }
}

AnchorSet fibonacci_anchors(std::size_t p) {
  if (p < 4) throw UnsupportedCardinality("Fibonacci anchors need p >= 4, got " + std::to_string(p));
  const double dp = static_cast<double>(p);
  std::vector<UnitVector> v;
  v.reserve(p);
  for (std::size_t j = 1; j <= p; ++j) {
    const double z = static_cast<double>(2 * j - 1) / dp - 1.0;
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / kPhi;
    const double r = std::sqrt(1.0 - z * z);
    Eigen::VectorXd u(3);
    u << std::cos(theta) * r, std::sin(theta) * r, z;
    v.emplace_back(std::move(u));
  }
  return AnchorSet(std::move(v), AnchorMethod::Fibonacci);
}

AnchorSet circle_anchors(std::size_t p) {
  if (p < 3) throw UnsupportedCardinality("circle anchors need p >= 3, got " + std::to_string(p));
  std::vector<UnitVector> v;
  v.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(p);
    Eigen::VectorXd u(2);
    u << std::cos(t), std::sin(t);
    v.emplace_back(std::move(u));
  }
  return AnchorSet(std::move(v), AnchorMethod::Circle);
}

AnchorSet default_anchors(std::size_t p, AnchorMode mode) {
  if (p < 4) throw UnsupportedCardinality("3D anchor sets need p >= 4, got " + std::to_string(p));
  if (mode == AnchorMode::Auto && is_platonic_cardinality(p)) return platonic_anchors(p);
  return fibonacci_anchors(p);
}

double min_pairwise_angle(const AnchorSet& anchors) {
  const Eigen::MatrixXd& u = anchors.matrix();
  if (u.cols() < 2) throw InputError("need at least two anchors");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < u.cols(); ++j) {
      if ((u.col(i) - u.col(j)).norm() <= 1e-12)
        throw DegenerateSet("anchors " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      const double c = std::clamp(u.col(i).dot(u.col(j)), -1.0, 1.0);
      best = std::min(best, std::acos(c));
    }
  }
  return best;
}

}  // namespace radviz
