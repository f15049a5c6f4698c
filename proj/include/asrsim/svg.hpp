#pragma once

#include "asrsim/output.hpp"
#include "asrsim/sweep.hpp"

#include <string>
#include <vector>

namespace asrsim {

struct SvgStyle {
    double cell_px = 14.0;
    bool reference_markers = true;  // circles at (L, t1) = (15, 45) and (30, 45)
    bool label_contours = true;
};

/// Classification heatmap (white extinct or infeasible, green guarding,
/// yellow multiple mating, grey non-converged), red ASR contours and the black
/// strategy boundary. Output depends only on the inputs.
std::string render_landscape_svg(const LandscapeGrid& grid, const SvgStyle& style, const OutputMeta& meta);

}  // namespace asrsim
