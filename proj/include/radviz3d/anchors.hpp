#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace radviz {

inline constexpr double kUnitNormTolerance = 1e-12;

// A direction on S^1 or S^2. Construction checks the norm; it never rescales.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);

  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index k) const { return coords_[k]; }

 private:
  Eigen::VectorXd coords_;
};

enum class AnchorMethod { Platonic, Fibonacci, Circle };

std::string_view to_string(AnchorMethod m) noexcept;

// Ordered anchor points, stored column-wise as the projection matrix U
// (dim x p). Column j is the anchor of feature j.
class AnchorSet {
 public:
  AnchorSet(std::vector<UnitVector> anchors, AnchorMethod method, std::string solid = {});

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  AnchorMethod method() const noexcept { return method_; }

  // Solid name for Platonic sets ("tetrahedron", ...), empty otherwise.
  const std::string& solid() const noexcept { return solid_; }

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::VectorXd anchor(std::size_t j) const { return matrix_.col(static_cast<Eigen::Index>(j)); }

  // Same anchors padded with zero rows up to 3 coordinates (p x 3).
  Eigen::MatrixXd as_rows3() const;

  // Copy with columns reordered: new column k is old column order[k].
  AnchorSet permuted(const std::vector<std::size_t>& order) const;

 private:
  Eigen::MatrixXd matrix_;
  AnchorMethod method_;
  std::string solid_;
};

bool is_platonic_cardinality(std::size_t p) noexcept;

// Vertices of the Platonic solid with p vertices, p in {4, 6, 8, 12, 20}.
//
// Ordering follows the vertex table row by row; within a row, sign patterns
// are enumerated lexicographically by coordinate with + before -. For p = 12
// the set is the icosahedron and for p = 20 the dodecahedron, whatever the
// table calls them.
AnchorSet platonic_anchors(std::size_t p);

// Golden-angle spiral: z_j = (2j-1)/p - 1, theta_j = 2*pi*j/phi, j = 1..p.
AnchorSet fibonacci_anchors(std::size_t p);

// Equally spaced on the unit circle starting at (1, 0).
AnchorSet circle_anchors(std::size_t p);

enum class AnchorMode { Auto, ForceFibonacci };

// Platonic set when p allows it (Auto), Fibonacci otherwise.
AnchorSet default_anchors(std::size_t p, AnchorMode mode = AnchorMode::Auto);

// Smallest angle in radians between any two anchors.
// Throws DegenerateSet if two anchors coincide.
double min_pairwise_angle(const AnchorSet& anchors);

}  // namespace radviz
