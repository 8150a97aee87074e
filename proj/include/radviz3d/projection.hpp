#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "radviz3d/anchors.hpp"
#include "radviz3d/dataset.hpp"

namespace radviz {

enum class ProjectionMethod { RadViz2D, RadViz3D, Viz3D };

// How raw columns are prepared before the radial map.
//  MinMax        per-column (x - min) / (max - min); constant columns -> 0.5
//  Compositional rows closed to unit sum; entries must be nonnegative
//  None          values used as given; entries must be nonnegative
enum class Normalization { MinMax, Compositional, None };

std::string_view to_string(ProjectionMethod m) noexcept;
std::string_view to_string(Normalization n) noexcept;
ProjectionMethod parse_projection_method(std::string_view text);
Normalization parse_normalization(std::string_view text);

struct NormalizationRecord {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
  std::vector<std::size_t> constant_columns;
};

struct Projection {
  Eigen::MatrixXd points;  // n x d, d = 2 for RadViz2D, 3 otherwise
  AnchorSet anchors;
  std::optional<NormalizationRecord> normalization;
  ProjectionMethod method;
  std::vector<std::size_t> degenerate_rows;
};

std::pair<DataSet, NormalizationRecord> minmax_normalize(const DataSet& data);

// Row closure x / sum(x); zero-sum rows stay zero. Throws NegativeInput.
Eigen::MatrixXd close_rows(const Eigen::MatrixXd& values);

// The matrix the radial map actually consumes, plus the minmax record when
// one was applied.
struct PreparedInput {
  Eigen::MatrixXd matrix;
  std::optional<NormalizationRecord> record;
};
PreparedInput prepare_input(const DataSet& data, Normalization mode);

struct ProjectedPoint {
  Eigen::VectorXd point;
  bool degenerate = false;
};

// U x / 1'x for a single nonnegative observation.
ProjectedPoint project(const Eigen::VectorXd& x, const AnchorSet& anchors);

// Row-wise radial map. The method follows the anchor dimension
// (circle anchors give RadViz2D, sphere anchors RadViz3D).
Projection project_dataset(const DataSet& data, const AnchorSet& anchors,
                           Normalization mode = Normalization::MinMax);

// RadViz2D coordinates on circle_anchors(p) plus the row mean of the
// minmax-normalized attributes as the third coordinate.
Projection viz3d_project(const DataSet& data);

// Points for an already prepared matrix. RadViz2D/RadViz3D need matching
// anchors; Viz3D needs circle anchors and appends the row mean.
Eigen::MatrixXd reproject(const Eigen::MatrixXd& prepared, const AnchorSet& anchors, ProjectionMethod method,
                          std::vector<std::size_t>* degenerate_rows = nullptr);

// Net spring force sum_j x_j (y - u_j); zero at the equilibrium y.
Eigen::VectorXd spring_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const AnchorSet& anchors);

}  // namespace radviz
