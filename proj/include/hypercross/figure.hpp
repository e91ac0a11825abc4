#pragma once

#include <cstdint>
#include <string>

#include "hypercross/samplers.hpp"

namespace hypercross {

struct FigureOptions {
  int panels = 4;
  double zoom = 8.0;             // ratio of consecutive panel half-widths
  double outer_half_width = 1.0;  // half-width of the first panel
  int panel_pixels = 400;
};

struct FigureSummary {
  std::size_t lines = 0;
  std::size_t points = 0;
  std::uint64_t skipped = 0;
  bool hull_drawn = false;
  bool hull_contains_origin = false;
  double radius = 0.0;
};

/// One realisation of the restricted line process in the plane (lines, the
/// circle of radius R, intersection points, their hull) drawn at nested
/// scales. Deterministic in config.master_seed. Throws UnsupportedDimension
/// unless config.dim == 2.
std::string render_figure_svg(const SimConfig& config, const FigureOptions& opt,
                              FigureSummary* summary = nullptr);

FigureSummary render_figure(const SimConfig& config, const std::string& path,
                            const FigureOptions& opt = {});

}  // namespace hypercross
