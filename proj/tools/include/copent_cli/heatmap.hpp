#pragma once

#include <string>

#include "copent/assoc.hpp"

namespace copent::cli {

inline constexpr const char* kLowColor = "#f7fbff";
inline constexpr const char* kHighColor = "#08306b";
inline constexpr const char* kMaskColor = "#d9d9d9";
inline constexpr int kCellPx = 12;

struct HeatmapOptions {
  bool mask_diagonal = true;
  bool clamp_nonneg = false;
};

// One <rect class="cell"> per matrix entry in row-major order, coloured by
// linear interpolation between kLowColor and kHighColor over the observed
// off-diagonal min/max. Sentinel entries and (by default) the diagonal are
// drawn in kMaskColor. Axis labels come from the variable names; the colour
// legend is a gradient-filled path, so cells are the only rects.
std::string render_heatmap_svg(const AssociationMatrix& m, const HeatmapOptions& options = {});

}  // namespace copent::cli
