// radviz3d command-line interface.
//
// Exit codes: 0 success, 2 input error, 3 numeric or calibration failure.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radviz3d/anchors.hpp"
#include "radviz3d/csv.hpp"
#include "radviz3d/error.hpp"
#include "radviz3d/html_export.hpp"
#include "radviz3d/mixture_sim.hpp"
#include "radviz3d/overlap.hpp"
#include "radviz3d/projection.hpp"
#include "radviz3d/scene.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace radviz;

constexpr int kInputError = 2;
constexpr int kNumericError = 3;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::optional<std::string> normalize;
  std::string method = "radviz3d";
  bool fibonacci = false;
  std::vector<std::string> drop_columns;
};

struct InputOptions {
  std::string input;
  std::optional<std::string> label_column;
  std::optional<std::string> id_column;
};

void emit(const std::optional<std::string>& out, const std::string& content) {
  if (out)
    write_file_atomic(*out, content);
  else
    std::cout << content << std::flush;
}

// ISO-8601 UTC; SOURCE_DATE_EPOCH pins it for reproducible output.
std::string timestamp_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string invocation_string(int argc, char** argv) {
  std::string out = "radviz3d";
  for (int i = 1; i < argc; ++i) out += std::string(" ") + argv[i];
  return out;
}

DataSet load_input(const InputOptions& in, const GlobalOptions& g) {
  CsvOptions opts;
  opts.label_column = in.label_column;
  opts.id_column = in.id_column;
  opts.drop_columns = g.drop_columns;
  return load_csv(in.input, opts);
}

AnchorSet anchors_for(std::size_t p, ProjectionMethod method, bool fibonacci) {
  if (method == ProjectionMethod::RadViz3D)
    return default_anchors(p, fibonacci ? AnchorMode::ForceFibonacci : AnchorMode::Auto);
  return circle_anchors(p);
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string omega_csv(const OverlapMatrix& m, const std::vector<std::string>& classes) {
  std::ostringstream out;
  out << "class";
  for (const auto& c : classes) out << ',' << csv_field(c);
  out << '\n';
  for (Eigen::Index i = 0; i < m.omega.rows(); ++i) {
    out << csv_field(classes[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.omega.cols(); ++j) out << ',' << format_double(m.omega(i, j));
    out << '\n';
  }
  return out.str();
}

int run_anchors(std::size_t p, const GlobalOptions& g, const std::optional<std::string>& out) {
  const ProjectionMethod method = parse_projection_method(g.method);
  const AnchorSet a = anchors_for(p, method, g.fibonacci);
  const Eigen::MatrixXd rows = a.as_rows3();
  if (g.format == "json") {
    json j{{"method", std::string(to_string(a.method()))}, {"solid", a.solid()}, {"p", p},
           {"anchors", matrix_json(rows)}};
    emit(out, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    s << "index,x,y,z\n";
    for (Eigen::Index j = 0; j < rows.rows(); ++j)
      s << (j + 1) << ',' << format_double(rows(j, 0)) << ',' << format_double(rows(j, 1)) << ','
        << format_double(rows(j, 2)) << '\n';
    emit(out, s.str());
  }
  return 0;
}

int run_project(const InputOptions& in, const GlobalOptions& g, const std::optional<std::string>& out) {
  const DataSet data = load_input(in, g);
  const ProjectionMethod method = parse_projection_method(g.method);
  const Normalization norm = parse_normalization(g.normalize.value_or("minmax"));
  const Projection proj = method == ProjectionMethod::Viz3D
                              ? viz3d_project(data)
                              : project_dataset(data, anchors_for(data.features(), method, g.fibonacci), norm);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(proj.points.rows(), 3);
  pts.leftCols(proj.points.cols()) = proj.points;
  std::vector<bool> degenerate(data.rows(), false);
  for (std::size_t r : proj.degenerate_rows) degenerate[r] = true;

  if (g.format == "json") {
    json constant = json::array();
    if (proj.normalization)
      for (std::size_t c : proj.normalization->constant_columns) constant.push_back(data.feature_names[c]);
    json j{{"method", std::string(to_string(proj.method))},
           {"row_ids", data.row_ids},
           {"labels", data.labels},
           {"points", matrix_json(pts)},
           {"degenerate_rows", proj.degenerate_rows},
           {"constant_columns", std::move(constant)}};
    emit(out, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    s << "id,label,x,y,z,degenerate\n";
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      s << csv_field(data.row_ids[i]) << ',' << csv_field(data.labels[i]) << ',' << format_double(pts(r, 0)) << ','
        << format_double(pts(r, 1)) << ',' << format_double(pts(r, 2)) << ',' << (degenerate[i] ? 1 : 0) << '\n';
    }
    emit(out, s.str());
  }
  return 0;
}

struct OverlapResult {
  FittedClasses fit;
  OverlapMatrix omega;
};

OverlapResult compute_overlap(const DataSet& data, const GlobalOptions& g, std::size_t draws) {
  DataSet prepared = data;
  const Normalization norm = parse_normalization(g.normalize.value_or("none"));
  if (norm != Normalization::None) prepared.values = prepare_input(data, norm).matrix;
  FittedClasses fit = fit_components(prepared);
  OverlapMatrix omega = overlap_matrix(fit.components, draws, g.seed);
  return {std::move(fit), std::move(omega)};
}

int run_overlap(const InputOptions& in, const GlobalOptions& g, std::size_t draws,
                const std::optional<std::string>& out, const std::optional<std::string>& heatmap_out) {
  const DataSet data = load_input(in, g);
  const OverlapResult r = compute_overlap(data, g, draws);
  json heat = heatmap_to_json(heatmap_export(r.omega, r.fit.classes));
  heat["classes"] = r.fit.classes;
  heat["generalized_overlap"] = generalized_overlap(r.omega);
  heat["n_draws"] = r.omega.n_draws;
  heat["seed"] = r.omega.seed;
  if (g.format == "json" && !heatmap_out) {
    emit(out, heat.dump(2) + "\n");
    return 0;
  }
  emit(out, omega_csv(r.omega, r.fit.classes));
  if (heatmap_out) write_file_atomic(*heatmap_out, heat.dump(2) + "\n");
  return 0;
}

int run_simulate(SimSpec spec, const GlobalOptions& g, const std::string& out) {
  spec.seed = g.seed;
  const SimResult r = simulate_mixture(spec);
  std::ostringstream csv;
  write_csv(csv, r.data, "id", "class");
  write_file_atomic(out, csv.str());

  json comps = json::array();
  for (std::size_t k = 0; k < r.components.size(); ++k) {
    const auto& c = r.components[k];
    comps.push_back(json{{"class", std::to_string(k + 1)},
                         {"weight", c.weight},
                         {"mean", std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size())},
                         {"covariance", matrix_json(c.covariance)}});
  }
  json side{{"classes", spec.classes},
            {"dims", spec.dims},
            {"rows", spec.rows},
            {"target_omega", spec.target_omega},
            {"spherical", spec.spherical},
            {"homogeneous", spec.homogeneous},
            {"seed", spec.seed},
            {"calibration_draws", spec.calibration_draws},
            {"scale", r.scale},
            {"achieved_omega", r.achieved_omega},
            {"components", std::move(comps)}};
  std::filesystem::path sidecar(out);
  sidecar.replace_extension(".json");
  if (sidecar == std::filesystem::path(out)) sidecar += ".sidecar.json";
  write_file_atomic(sidecar, side.dump(2) + "\n");
  return 0;
}

Scene make_scene(const InputOptions& in, const GlobalOptions& g, bool with_overlap, std::size_t draws,
                 const std::string& invocation) {
  const DataSet data = load_input(in, g);
  const ProjectionMethod method = parse_projection_method(g.method);
  const Normalization norm = parse_normalization(g.normalize.value_or("minmax"));
  Scene scene = build_scene(data, method, anchors_for(data.features(), method, g.fibonacci), g.seed, norm);
  if (with_overlap) {
    GlobalOptions raw = g;
    raw.normalize.reset();
    const OverlapResult r = compute_overlap(data, raw, draws);
    scene.overlap = heatmap_export(r.omega, r.fit.classes);
  }
  scene.provenance = {invocation, g.seed, timestamp_now()};
  return scene;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-dimensional radial visualization toolkit", "radviz3d"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--normalize", g.normalize, "minmax, compositional or none")
      ->check(CLI::IsMember({"minmax", "compositional", "none"}));
  app.add_option("--method", g.method, "Projection method")
      ->check(CLI::IsMember({"radviz3d", "radviz2d", "viz3d"}))
      ->capture_default_str();
  app.add_flag("--fibonacci", g.fibonacci, "Use Fibonacci anchors even where a Platonic set exists");
  app.add_option("--drop-columns", g.drop_columns, "Comma-separated columns to ignore")->delimiter(',');

  std::optional<std::string> out;
  auto add_input = [](CLI::App* sub, InputOptions& in) {
    sub->add_option("-i,--input", in.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    sub->add_option("--label-column", in.label_column, "Column holding class labels");
    sub->add_option("--id-column", in.id_column, "Column holding row identifiers");
  };

  std::size_t p = 0;
  auto* anchors = app.add_subcommand("anchors", "Print an anchor set");
  anchors->add_option("-p,--p", p, "Number of anchors")->required();
  anchors->add_option("-o,--out", out, "Output file (default stdout)");

  InputOptions project_in;
  auto* project = app.add_subcommand("project", "Project a CSV data set into the unit ball");
  add_input(project, project_in);
  project->add_option("-o,--out", out, "Output file (default stdout)");

  InputOptions overlap_in;
  std::size_t draws = 1000000;
  std::optional<std::string> heatmap_out;
  auto* overlap = app.add_subcommand("overlap", "Monte-Carlo pairwise overlap of fitted class Gaussians");
  add_input(overlap, overlap_in);
  overlap->add_option("--draws", draws, "Draws per class pair and direction")->capture_default_str()->check(CLI::PositiveNumber);
  overlap->add_option("-o,--out", out, "Overlap matrix CSV (default stdout)");
  overlap->add_option("--heatmap", heatmap_out, "Lower-triangle heatmap table as JSON");

  SimSpec spec;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Simulate a Gaussian mixture at a target generalized overlap");
  simulate->add_option("--classes", spec.classes)->capture_default_str();
  simulate->add_option("--dims", spec.dims)->capture_default_str();
  simulate->add_option("--rows", spec.rows)->capture_default_str();
  simulate->add_option("--omega", spec.target_omega, "Target generalized overlap")->capture_default_str();
  simulate->add_flag("--spherical,!--no-spherical", spec.spherical)->capture_default_str();
  simulate->add_flag("--homogeneous,!--no-homogeneous", spec.homogeneous)->capture_default_str();
  simulate->add_option("--draws", spec.calibration_draws, "Monte-Carlo draws per calibration evaluation")
      ->capture_default_str();
  simulate->add_option("-o,--out", sim_out, "Labeled CSV; a .json sidecar is written next to it")->required();

  InputOptions scene_in;
  bool with_overlap = false;
  std::size_t scene_draws = 1000000;
  auto* scene = app.add_subcommand("scene", "Build a scene JSON for the viewer");
  add_input(scene, scene_in);
  scene->add_flag("--with-overlap", with_overlap, "Embed the overlap heatmap table");
  scene->add_option("--draws", scene_draws, "Draws for --with-overlap")->capture_default_str();
  scene->add_option("-o,--out", out, "Output file (default stdout)");

  std::string scene_path;
  std::optional<std::string> template_path;
  std::string html_out;
  auto* html = app.add_subcommand("export-html", "Write a standalone HTML page for a scene");
  html->add_option("--scene", scene_path, "Scene JSON from the scene subcommand")->required();
  html->add_option("--template", template_path, "Custom HTML template");
  html->add_option("-o,--out", html_out, "Output HTML file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*anchors) return run_anchors(p, g, out);
    if (*project) return run_project(project_in, g, out);
    if (*overlap) return run_overlap(overlap_in, g, draws, out, heatmap_out);
    if (*simulate) return run_simulate(spec, g, sim_out);
    if (*scene) {
      emit(out, dump_scene(make_scene(scene_in, g, with_overlap, scene_draws, invocation_string(argc, argv))));
      return 0;
    }
    if (*html) {
      std::optional<std::filesystem::path> tpl;
      if (template_path) tpl = *template_path;
      write_file_atomic(html_out, export_html(parse_scene(read_file(scene_path)), tpl));
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "radviz3d: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericError& e) {
    std::cerr << "radviz3d: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "radviz3d: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "radviz3d: " << e.what() << '\n';
    return kNumericError;
  }
  return kInputError;
}
