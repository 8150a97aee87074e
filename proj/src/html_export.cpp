#include "radviz3d/html_export.hpp"

#include <cstdio>

#include "radviz3d/csv.hpp"
#include "radviz3d/error.hpp"

namespace radviz {

namespace {

// Orthographic orbit view of the unit ball on a 2D canvas. No network, no
// external bundle; a richer viewer can be dropped in through a template.
constexpr const char* kBuiltinTemplate = R"HTML(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>@@TITLE@@</title>
<style>
body { font-family: sans-serif; margin: 0; display: flex; }
#view { flex: 1; }
#side { width: 260px; padding: 8px; font-size: 13px; }
#legend { list-style: none; padding: 0; }
#legend li { cursor: pointer; margin: 2px 0; }
#legend li.off { opacity: 0.3; }
#legend .swatch { display: inline-block; width: 10px; height: 10px; margin-right: 6px; }
#heatmap-panel table { border-collapse: collapse; }
#heatmap-panel td { padding: 2px 4px; border: 1px solid #ccc; }
#tip { position: absolute; background: #fff; border: 1px solid #999; padding: 2px 4px; display: none; }
</style>
</head>
<body>
<canvas id="view" width="800" height="800"></canvas>
<div id="side">
<h3>Classes</h3>
<ul id="legend">
@@LEGEND@@
</ul>
@@HEATMAP_PANEL@@
</div>
<div id="tip"></div>
<script type="application/json" id="scene-data">
@@SCENE_JSON@@
</script>
<script>
(function () {
  "use strict";
  var scene = JSON.parse(document.getElementById("scene-data").textContent);
  if (scene.schema_version !== 1) { document.body.textContent = "SchemaError: unsupported schema_version"; return; }
  var canvas = document.getElementById("view"), ctx = canvas.getContext("2d");
  var hidden = {}, yaw = 0.6, pitch = scene.method === "radviz2d" ? Math.PI / 2 : 0.4, zoom = 1;
  function rot(v) {
    var cy = Math.cos(yaw), sy = Math.sin(yaw), cp = Math.cos(pitch), sp = Math.sin(pitch);
    var x = cy * v[0] + sy * v[1], y = -sy * v[0] + cy * v[1];
    return [x, cp * v[2] - sp * y, sp * v[2] + cp * y];
  }
  function toScreen(v) {
    var r = rot(v), s = 0.42 * canvas.width * zoom;
    return [canvas.width / 2 + s * r[0], canvas.height / 2 - s * r[1], r[2]];
  }
  function draw() {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.strokeStyle = "#ddd";
    for (var ring = 0; ring < 3; ++ring) {
      ctx.beginPath();
      for (var t = 0; t <= 64; ++t) {
        var a = 2 * Math.PI * t / 64, c = Math.cos(a), s = Math.sin(a);
        var v = ring === 0 ? [c, s, 0] : ring === 1 ? [c, 0, s] : [0, c, s];
        var q = toScreen(v);
        if (t === 0) ctx.moveTo(q[0], q[1]); else ctx.lineTo(q[0], q[1]);
      }
      ctx.stroke();
    }
    scene.anchors.forEach(function (a, j) {
      var q = toScreen(a);
      ctx.fillStyle = "#000";
      ctx.fillRect(q[0] - 3, q[1] - 3, 6, 6);
      ctx.fillText(scene.feature_names[j], q[0] + 5, q[1] - 5);
    });
    var order = scene.points.map(function (p, i) { return [toScreen(p)[2], i]; });
    order.sort(function (a, b) { return a[0] - b[0]; });
    order.forEach(function (o) {
      var i = o[1], label = scene.labels[i];
      if (hidden[label]) return;
      var q = toScreen(scene.points[i]);
      ctx.fillStyle = scene.class_palette[label];
      ctx.beginPath();
      ctx.arc(q[0], q[1], 3, 0, 2 * Math.PI);
      ctx.fill();
    });
  }
  var drag = null;
  canvas.addEventListener("mousedown", function (e) { drag = [e.clientX, e.clientY]; });
  window.addEventListener("mouseup", function () { drag = null; });
  window.addEventListener("mousemove", function (e) {
    if (!drag) return;
    yaw += (e.clientX - drag[0]) * 0.01;
    pitch += (e.clientY - drag[1]) * 0.01;
    drag = [e.clientX, e.clientY];
    draw();
  });
  canvas.addEventListener("wheel", function (e) {
    e.preventDefault();
    zoom *= e.deltaY < 0 ? 1.1 : 1 / 1.1;
    draw();
  });
  document.querySelectorAll("#legend li").forEach(function (li) {
    li.addEventListener("click", function () {
      var c = li.getAttribute("data-class");
      hidden[c] = !hidden[c];
      li.classList.toggle("off", !!hidden[c]);
      draw();
    });
  });
  draw();
})();
</script>
</body>
</html>
)HTML";

void replace_all(std::string& text, std::string_view slot, const std::string& value) {
  for (std::size_t pos = text.find(slot); pos != std::string::npos; pos = text.find(slot, pos + value.size()))
    text.replace(pos, slot.size(), value);
}

std::string legend_markup(const Scene& scene) {
  std::string out;
  for (const auto& [cls, color] : scene.class_palette)
    out += "<li data-class=\"" + html_escape(cls) + "\"><span class=\"swatch\" style=\"background:" + color +
           "\"></span>" + html_escape(cls) + "</li>\n";
  return out;
}

std::string heatmap_markup(const Scene& scene) {
  if (!scene.overlap) return {};
  std::string out = "<section id=\"heatmap-panel\">\n<h3>Pairwise overlap</h3>\n<table>\n";
  for (const auto& c : scene.overlap->cells) {
    // White to red by normalized color value.
    const int shade = static_cast<int>(255.0 * (1.0 - c.color) + 0.5);
    char bg[8];
    std::snprintf(bg, sizeof bg, "#FF%02X%02X", shade, shade);
    out += "<tr><td>" + html_escape(c.class_i) + "</td><td>" + html_escape(c.class_j) +
           "</td><td style=\"background:" + bg + "\">" + format_double(c.omega) + "</td></tr>\n";
  }
  out += "</table>\n</section>";
  return out;
}

}  // namespace

const std::string& builtin_template() {
  static const std::string text = kBuiltinTemplate;
  return text;
}

std::string html_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string export_html(const Scene& scene, const std::optional<std::filesystem::path>& template_path) {
  check_scene(scene);
  std::string page;
  if (template_path) {
    if (!std::filesystem::is_regular_file(*template_path))
      throw TemplateMissing("template '" + template_path->string() + "' not found");
    page = read_file(*template_path);
  } else {
    page = builtin_template();
  }
  if (page.find(kSceneSlot) == std::string::npos)
    throw InputError("template has no " + std::string(kSceneSlot) + " slot");

  // "</" cannot appear inside a script element; "<\/" is the same JSON string.
  std::string data = dump_scene(scene);
  replace_all(data, "</", "<\\/");
  if (!data.empty() && data.back() == '\n') data.pop_back();

  replace_all(page, kTitleSlot, html_escape("radviz3d " + std::string(to_string(scene.method))));
  replace_all(page, kLegendSlot, legend_markup(scene));
  replace_all(page, kHeatmapSlot, heatmap_markup(scene));
  replace_all(page, kSceneSlot, data);
  return page;
}

}  // namespace radviz
