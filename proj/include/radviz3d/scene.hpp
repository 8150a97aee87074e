#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "radviz3d/anchors.hpp"
#include "radviz3d/dataset.hpp"
#include "radviz3d/overlap.hpp"
#include "radviz3d/projection.hpp"

namespace radviz {

inline constexpr int kSceneSchemaVersion = 1;

struct Provenance {
  std::string invocation;
  std::uint64_t seed = 0;
  std::string timestamp;  // the only field allowed to vary between identical runs
};

// Everything a viewer needs to draw, and re-project, one display.
struct Scene {
  int schema_version = kSceneSchemaVersion;
  ProjectionMethod method = ProjectionMethod::RadViz3D;
  Eigen::MatrixXd points;             // n x 3, z = 0 for RadViz2D
  Eigen::MatrixXd anchors;            // p x 3, z = 0 for circle anchors
  std::vector<std::string> feature_names;
  Eigen::MatrixXd normalized_matrix;  // n x p, the exact input of the radial map
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> class_palette;  // class -> #RRGGBB, first-appearance order
  std::vector<std::string> row_ids;
  std::optional<HeatmapTable> overlap;
  Provenance provenance;
};

// The fixed categorical palette, before the seeded shuffle.
const std::vector<std::string>& base_palette();

// Palette for `classes`: the base palette shuffled by `seed`, cycled past 12
// classes. Class k past the first cycle is drawn with marker shape k / 12,
// which viewers derive from the class_palette order.
std::vector<std::pair<std::string, std::string>> assign_palette(const std::vector<std::string>& classes,
                                                                std::uint64_t seed);

// Runs the projection pipeline and packs the result. RadViz3D needs sphere
// anchors; RadViz2D and Viz3D need circle anchors. Under Compositional or
// None the stored matrix is the row closure (same projection, entries in
// [0, 1]); Viz3D always uses minmax.
Scene build_scene(const DataSet& data, ProjectionMethod method, const AnchorSet& anchors, std::uint64_t palette_seed,
                  Normalization normalization = Normalization::MinMax);

// Shape, palette and self-consistency checks; throws SchemaError.
// Re-projecting normalized_matrix through the anchors must reproduce points
// to within 1e-9.
void check_scene(const Scene& scene);

nlohmann::ordered_json heatmap_to_json(const HeatmapTable& table);
HeatmapTable heatmap_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::ordered_json& j);

// Compact JSON text with a trailing newline.
std::string dump_scene(const Scene& scene);
Scene parse_scene(const std::string& text);

}  // namespace radviz
