#include "radviz3d/projection.hpp"

#include <string>

#include "radviz3d/error.hpp"
#include "radviz3d/kernels.hpp"

namespace radviz {

std::string_view to_string(ProjectionMethod m) noexcept {
  switch (m) {
    case ProjectionMethod::RadViz2D: return "radviz2d";
    case ProjectionMethod::RadViz3D: return "radviz3d";
    case ProjectionMethod::Viz3D: return "viz3d";
  }
  return "unknown";
}

std::string_view to_string(Normalization n) noexcept {
  switch (n) {
    case Normalization::MinMax: return "minmax";
    case Normalization::Compositional: return "compositional";
    case Normalization::None: return "none";
  }
  return "unknown";
}

ProjectionMethod parse_projection_method(std::string_view text) {
  if (text == "radviz2d") return ProjectionMethod::RadViz2D;
  if (text == "radviz3d") return ProjectionMethod::RadViz3D;
  if (text == "viz3d") return ProjectionMethod::Viz3D;
  throw InputError("unknown projection method '" + std::string(text) + "'");
}

Normalization parse_normalization(std::string_view text) {
  if (text == "minmax") return Normalization::MinMax;
  if (text == "compositional") return Normalization::Compositional;
  if (text == "none") return Normalization::None;
  throw InputError("unknown normalization '" + std::string(text) + "'");
}

std::pair<DataSet, NormalizationRecord> minmax_normalize(const DataSet& data) {
  NormalizationRecord rec;
  rec.min = data.values.colwise().minCoeff().transpose();
  rec.max = data.values.colwise().maxCoeff().transpose();
  DataSet out = data;
  for (Eigen::Index j = 0; j < data.values.cols(); ++j) {
    const double range = rec.max[j] - rec.min[j];
    if (range == 0.0) {
      rec.constant_columns.push_back(static_cast<std::size_t>(j));
      out.values.col(j).setConstant(0.5);
    } else {
      out.values.col(j) = (data.values.col(j).array() - rec.min[j]) / range;
    }
  }
  return {std::move(out), std::move(rec)};
}

namespace {

void require_nonnegative(const Eigen::MatrixXd& values) {
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      if (values(i, j) < 0.0)
        throw NegativeInput("negative entry at row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                            "; normalize first");
}

std::vector<std::size_t> flagged_rows(const std::vector<unsigned char>& flags) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) rows.push_back(i);
  return rows;
}

}  // namespace

Eigen::MatrixXd close_rows(const Eigen::MatrixXd& values) {
  require_nonnegative(values);
  Eigen::MatrixXd out = values;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double total = out.row(i).sum();
    if (total > 0.0) out.row(i) /= total;
  }
  return out;
}

PreparedInput prepare_input(const DataSet& data, Normalization mode) {
  switch (mode) {
    case Normalization::MinMax: {
      auto [normalized, rec] = minmax_normalize(data);
      return {std::move(normalized.values), std::move(rec)};
    }
    case Normalization::Compositional:
      return {close_rows(data.values), std::nullopt};
    case Normalization::None:
      require_nonnegative(data.values);
      return {data.values, std::nullopt};
  }
  throw InputError("unknown normalization");
}

ProjectedPoint project(const Eigen::VectorXd& x, const AnchorSet& anchors) {
  if (static_cast<std::size_t>(x.size()) != anchors.size())
    throw DimensionMismatch("observation has " + std::to_string(x.size()) + " coordinates but there are " +
                            std::to_string(anchors.size()) + " anchors");
  if ((x.array() < 0.0).any()) throw NegativeInput("radial map needs nonnegative coordinates");
  Eigen::MatrixXd row = x.transpose();
  Eigen::MatrixXd out(1, anchors.dim());
  const bool degenerate = kernels::detail::project_row(row, 0, anchors.matrix(), out);
  return {out.row(0).transpose(), degenerate};
}

Eigen::MatrixXd reproject(const Eigen::MatrixXd& prepared, const AnchorSet& anchors, ProjectionMethod method,
                          std::vector<std::size_t>* degenerate_rows) {
  if (static_cast<std::size_t>(prepared.cols()) != anchors.size())
    throw DimensionMismatch("data has " + std::to_string(prepared.cols()) + " features but there are " +
                            std::to_string(anchors.size()) + " anchors");
  const bool wants_circle = method != ProjectionMethod::RadViz3D;
  if (wants_circle != (anchors.dim() == 2))
    throw DimensionMismatch(std::string(to_string(method)) + " needs " + (wants_circle ? "circle" : "sphere") +
                            " anchors");
  Eigen::MatrixXd planar;
  std::vector<unsigned char> flags;
  kernels::project_rows(prepared, anchors.matrix(), planar, flags);
  if (degenerate_rows) *degenerate_rows = flagged_rows(flags);
  if (method != ProjectionMethod::Viz3D) return planar;
  Eigen::MatrixXd points(prepared.rows(), 3);
  points.leftCols(2) = planar;
  points.col(2) = prepared.rowwise().mean();
  return points;
}

Projection project_dataset(const DataSet& data, const AnchorSet& anchors, Normalization mode) {
  if (data.features() != anchors.size())
    throw DimensionMismatch("data has " + std::to_string(data.features()) + " features but there are " +
                            std::to_string(anchors.size()) + " anchors");
  const ProjectionMethod method = anchors.dim() == 2 ? ProjectionMethod::RadViz2D : ProjectionMethod::RadViz3D;
  PreparedInput in = prepare_input(data, mode);
  std::vector<std::size_t> degenerate;
  Eigen::MatrixXd points = reproject(in.matrix, anchors, method, &degenerate);
  return Projection{std::move(points), anchors, std::move(in.record), method, std::move(degenerate)};
}

Projection viz3d_project(const DataSet& data) {
  if (data.features() < 3) throw TooFewFeatures("Viz3D needs at least 3 features");
  AnchorSet circle = circle_anchors(data.features());
  PreparedInput in = prepare_input(data, Normalization::MinMax);
  std::vector<std::size_t> degenerate;
  Eigen::MatrixXd points = reproject(in.matrix, circle, ProjectionMethod::Viz3D, &degenerate);
  return Projection{std::move(points), std::move(circle), std::move(in.record), ProjectionMethod::Viz3D,
                    std::move(degenerate)};
}

Eigen::VectorXd spring_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const AnchorSet& anchors) {
  if (static_cast<std::size_t>(x.size()) != anchors.size())
    throw DimensionMismatch("weight vector length differs from anchor count");
  if (y.size() != anchors.dim()) throw DimensionMismatch("point dimension differs from anchor dimension");
  // sum_j x_j (y - u_j) = (1'x) y - U x
  return x.sum() * y - anchors.matrix() * x;
}

}  // namespace radviz
