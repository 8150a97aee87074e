#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "radviz3d/scene.hpp"

namespace radviz {

// Placeholders a custom template may use. Only the scene slot is required.
inline constexpr std::string_view kSceneSlot = "@@SCENE_JSON@@";
inline constexpr std::string_view kLegendSlot = "@@LEGEND@@";
inline constexpr std::string_view kHeatmapSlot = "@@HEATMAP_PANEL@@";
inline constexpr std::string_view kTitleSlot = "@@TITLE@@";

const std::string& builtin_template();

// One self-contained HTML page: the scene JSON sits in a
// <script type="application/json" id="scene-data"> block, the legend and the
// overlap table are rendered as static markup, and the viewer script is
// inline. Throws TemplateMissing when `template_path` does not exist.
std::string export_html(const Scene& scene, const std::optional<std::filesystem::path>& template_path = std::nullopt);

std::string html_escape(std::string_view text);

}  // namespace radviz
