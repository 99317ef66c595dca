#pragma once

#include "spatopt/grid.hpp"
#include "spatopt/raster.hpp"
#include "spatopt/workspace.hpp"

#include <string>
#include <string_view>

namespace spatopt::svg {

/// Fill colour of an element type: gray, red, yellow, blue.
std::string_view color(ElementType t);
inline constexpr std::string_view kTargetColor = "#ff69b4";
inline constexpr std::string_view kComputedColor = "#1f1f1f";

/// Annular sectors, run-length merged along each ring.
std::string render_raster(const CrossSectionRaster& raster);

/// Top (x-y) and side (x-z) projections of the 27 workspace points;
/// an optional target is overlaid in pink.
std::string render_workspace(const Workspace& computed, const Workspace* target = nullptr);

}  // namespace spatopt::svg
