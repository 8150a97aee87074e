#include "radviz3d/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "radviz3d/error.hpp"
#include "radviz3d/seed.hpp"

namespace radviz {

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kPaletteStream = 0x70616c;

const std::array<const char*, 11> kTopLevelKeys{"schema_version", "method",          "points",
                                                "anchors",        "feature_names",   "normalized_matrix",
                                                "labels",         "class_palette",   "row_ids",
                                                "overlap",        "provenance"};

bool is_hex_color(const std::string& s) {
  return s.size() == 7 && s[0] == '#' &&
         std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* key, std::optional<Eigen::Index> cols) {
  if (!j.is_array()) throw SchemaError(std::string(key) + " must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::Index width = cols.value_or(n > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0);
  Eigen::MatrixXd m(n, width);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != width)
      throw SchemaError(std::string(key) + " row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index c = 0; c < width; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw SchemaError(std::string(key) + " holds a non-number");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

std::vector<std::string> strings_from_json(const json& j, const char* key) {
  if (!j.is_array()) throw SchemaError(std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw SchemaError(std::string(key) + " holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

AnchorSet anchors_for(const Scene& scene) {
  const Eigen::Index dim = scene.method == ProjectionMethod::RadViz3D ? 3 : 2;
  std::vector<UnitVector> cols;
  for (Eigen::Index j = 0; j < scene.anchors.rows(); ++j) {
    if (dim == 2 && scene.anchors(j, 2) != 0.0) throw SchemaError("circle anchors must have z = 0");
    cols.emplace_back(Eigen::VectorXd(scene.anchors.row(j).head(dim).transpose()));
  }
  return AnchorSet(std::move(cols), dim == 2 ? AnchorMethod::Circle : AnchorMethod::Fibonacci);
}

}  // namespace

const std::vector<std::string>& base_palette() {
  static const std::vector<std::string> palette{"#1F77B4", "#FF7F0E", "#2CA02C", "#D62728", "#9467BD", "#8C564B",
                                                "#E377C2", "#7F7F7F", "#BCBD22", "#17BECF", "#393B79", "#AD494A"};
  return palette;
}

std::vector<std::pair<std::string, std::string>> assign_palette(const std::vector<std::string>& classes,
                                                                std::uint64_t seed) {
  std::vector<std::string> colors = base_palette();
  std::mt19937_64 rng(derive_seed(seed, {kPaletteStream}));
  std::shuffle(colors.begin(), colors.end(), rng);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t k = 0; k < classes.size(); ++k) out.emplace_back(classes[k], colors[k % colors.size()]);
  return out;
}

Scene build_scene(const DataSet& data, ProjectionMethod method, const AnchorSet& anchors, std::uint64_t palette_seed,
                  Normalization normalization) {
  data.validate();
  Scene scene;
  scene.method = method;
  if (method == ProjectionMethod::Viz3D) normalization = Normalization::MinMax;
  PreparedInput in = prepare_input(data, normalization);
  if (normalization == Normalization::None) in.matrix = close_rows(in.matrix);
  const Eigen::MatrixXd pts = reproject(in.matrix, anchors, method);

  scene.points = Eigen::MatrixXd::Zero(pts.rows(), 3);
  scene.points.leftCols(pts.cols()) = pts;
  scene.anchors = anchors.as_rows3();
  scene.feature_names = data.feature_names;
  scene.normalized_matrix = std::move(in.matrix);
  scene.labels = data.labels;
  scene.class_palette = assign_palette(data.classes(), palette_seed);
  scene.row_ids = data.row_ids;
  scene.provenance.seed = palette_seed;
  check_scene(scene);
  return scene;
}

void check_scene(const Scene& scene) {
  if (scene.schema_version != kSceneSchemaVersion)
    throw SchemaError("unsupported schema_version " + std::to_string(scene.schema_version));
  const Eigen::Index n = scene.points.rows();
  if (scene.points.cols() != 3) throw SchemaError("points must have 3 columns");
  if (scene.anchors.cols() != 3) throw SchemaError("anchors must have 3 columns");
  if (scene.normalized_matrix.rows() != n || static_cast<std::size_t>(scene.labels.size()) != static_cast<std::size_t>(n) ||
      static_cast<std::size_t>(scene.row_ids.size()) != static_cast<std::size_t>(n))
    throw SchemaError("points, normalized_matrix, labels and row_ids disagree on row count");
  const Eigen::Index p = scene.anchors.rows();
  if (static_cast<Eigen::Index>(scene.feature_names.size()) != p || scene.normalized_matrix.cols() != p)
    throw SchemaError("anchor count differs from feature count");
  std::set<std::string> palette_classes;
  for (const auto& [cls, color] : scene.class_palette) {
    if (!is_hex_color(color)) throw SchemaError("'" + color + "' is not a #RRGGBB color");
    palette_classes.insert(cls);
  }
  for (const auto& l : scene.labels)
    if (!palette_classes.count(l)) throw SchemaError("class '" + l + "' has no palette entry");
  if (scene.method == ProjectionMethod::RadViz2D && n > 0 && scene.points.col(2).cwiseAbs().maxCoeff() != 0.0)
    throw SchemaError("RadViz2D scenes must have z = 0");

  Eigen::MatrixXd again;
  try {
    const Eigen::MatrixXd pts = reproject(scene.normalized_matrix, anchors_for(scene), scene.method);
    again = Eigen::MatrixXd::Zero(n, 3);
    again.leftCols(pts.cols()) = pts;
  } catch (const InputError& e) {
    throw SchemaError(std::string("scene cannot be re-projected: ") + e.what());
  }
  if (n > 0 && (again - scene.points).cwiseAbs().maxCoeff() > 1e-9)
    throw SchemaError("points do not match the re-projected normalized_matrix");
}

json heatmap_to_json(const HeatmapTable& table) {
  json cells = json::array();
  for (const auto& c : table.cells)
    cells.push_back(json{{"i", c.i}, {"j", c.j}, {"class_i", c.class_i}, {"class_j", c.class_j},
                         {"omega", c.omega}, {"color", c.color}});
  return json{{"max_omega", table.max_omega}, {"cells", std::move(cells)}};
}

HeatmapTable heatmap_from_json(const json& j) {
  try {
    HeatmapTable t;
    t.max_omega = j.at("max_omega").get<double>();
    for (const auto& c : j.at("cells"))
      t.cells.push_back({c.at("i").get<std::size_t>(), c.at("j").get<std::size_t>(),
                         c.at("class_i").get<std::string>(), c.at("class_j").get<std::string>(),
                         c.at("omega").get<double>(), c.at("color").get<double>()});
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad overlap table: ") + e.what());
  }
}

json scene_to_json(const Scene& scene) {
  json palette = json::object();
  for (const auto& [cls, color] : scene.class_palette) palette[cls] = color;
  json j;
  j["schema_version"] = scene.schema_version;
  j["method"] = std::string(to_string(scene.method));
  j["points"] = matrix_to_json(scene.points);
  j["anchors"] = matrix_to_json(scene.anchors);
  j["feature_names"] = scene.feature_names;
  j["normalized_matrix"] = matrix_to_json(scene.normalized_matrix);
  j["labels"] = scene.labels;
  j["class_palette"] = std::move(palette);
  j["row_ids"] = scene.row_ids;
  j["overlap"] = scene.overlap ? heatmap_to_json(*scene.overlap) : json(nullptr);
  j["provenance"] = json{{"invocation", scene.provenance.invocation},
                         {"seed", scene.provenance.seed},
                         {"timestamp", scene.provenance.timestamp}};
  return j;
}

Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scene must be a JSON object");
  for (const char* key : kTopLevelKeys)
    if (!j.contains(key)) throw SchemaError(std::string("scene is missing '") + key + "'");
  if (j.size() != kTopLevelKeys.size()) throw SchemaError("scene has unexpected top-level keys");
  Scene s;
  try {
    s.schema_version = j.at("schema_version").get<int>();
    if (s.schema_version != kSceneSchemaVersion)
      throw SchemaError("unsupported schema_version " + std::to_string(s.schema_version));
    s.method = parse_projection_method(j.at("method").get<std::string>());
    s.points = matrix_from_json(j.at("points"), "points", 3);
    s.anchors = matrix_from_json(j.at("anchors"), "anchors", 3);
    s.feature_names = strings_from_json(j.at("feature_names"), "feature_names");
    s.normalized_matrix = matrix_from_json(j.at("normalized_matrix"), "normalized_matrix",
                                           static_cast<Eigen::Index>(s.feature_names.size()));
    s.labels = strings_from_json(j.at("labels"), "labels");
    for (const auto& [cls, color] : j.at("class_palette").items()) s.class_palette.emplace_back(cls, color.get<std::string>());
    s.row_ids = strings_from_json(j.at("row_ids"), "row_ids");
    if (!j.at("overlap").is_null()) s.overlap = heatmap_from_json(j.at("overlap"));
    const json& prov = j.at("provenance");
    s.provenance = {prov.at("invocation").get<std::string>(), prov.at("seed").get<std::uint64_t>(),
                    prov.at("timestamp").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed scene: ") + e.what());
  } catch (const SchemaError&) {
    throw;
  } catch (const InputError& e) {
    throw SchemaError(e.what());
  }
  check_scene(s);
  return s;
}

std::string dump_scene(const Scene& scene) { return scene_to_json(scene).dump() + "\n"; }

Scene parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("scene is not valid JSON: ") + e.what());
  }
  return scene_from_json(j);
}

}  // namespace radviz
