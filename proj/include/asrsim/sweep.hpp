#pragma once

#include "asrsim/contour.hpp"
#include "asrsim/integrator.hpp"
#include "asrsim/metrics.hpp"
#include "asrsim/model.hpp"
#include "asrsim/simulate.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace asrsim {

struct AxisSpec {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 2;

    std::vector<double> values() const;
};

/// Integration settings for landscapes: long horizon so that slow strategy
/// exclusion near the switch boundary reaches equilibrium.
IntegrationConfig landscape_integration_defaults();

/// ASR levels drawn on landscapes by default: 0.6, 0.7, ..., 2.0.
std::vector<double> default_asr_levels();

struct GridSpec {
    AxisSpec x{"L", 10.0, 50.0, 41};
    AxisSpec y{"t1", 30.0, 60.0, 31};
    ModelParams fixed;  // x and y fields are overwritten per cell
    InitialCondition ic;
    IntegrationConfig integration = landscape_integration_defaults();
    std::vector<double> asr_levels = default_asr_levels();
    std::size_t workers = 0;  // 0: hardware concurrency
};

/// Throws std::invalid_argument on unknown axis names or fewer than 2 steps.
void validate(const GridSpec& spec);

struct GridCell {
    double x = 0.0;
    double y = 0.0;
    bool valid = true;  // false when t1 or t2 does not exceed L/2; not simulated
    PointOutcome outcome;

    /// Empty for invalid or failed cells.
    std::optional<Classification> classification() const;
};

struct ContourLevel {
    double level = 0.0;
    std::vector<Polyline> lines;
};

struct ContourSet {
    std::vector<ContourLevel> asr;
    std::vector<Polyline> strategy_boundary;  // R = 0.5 over converged cells
};

struct LandscapeGrid {
    GridSpec spec;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<GridCell> cells;  // row-major: row = y index, col = x index
    ContourSet contours;

    std::size_t rows() const { return ys.size(); }
    std::size_t cols() const { return xs.size(); }
    const GridCell& at(std::size_t row, std::size_t col) const { return cells[row * cols() + col]; }

    /// ASR of every simulated, non-extinct cell; NaN elsewhere.
    ScalarField asr_field() const;
    /// R of converged (Guarding / MultipleMating) cells; NaN elsewhere.
    ScalarField strategy_field() const;

    std::size_t count(Classification c) const;
    std::size_t invalid_count() const;
    std::size_t error_count() const;
    /// Index of the cell whose centre is nearest to (x, y).
    std::size_t nearest_cell(double x, double y) const;
};

/// Assembles cell parameters: spec.fixed with the two axis values applied.
ModelParams cell_params(const GridSpec& spec, double x, double y);

/// One independent simulation per cell on `spec.workers` threads, then
/// contour extraction at spec.asr_levels. Cell failures are stored per cell.
LandscapeGrid run_grid(const GridSpec& spec);

ContourSet extract_contours(const LandscapeGrid& grid, const std::vector<double>& levels);

/// How closely the strategy boundary follows a single ASR level: ASR is
/// interpolated at every boundary vertex, the level is the median of those
/// values and the score is the median absolute deviation from it.
struct BoundaryAlignment {
    std::size_t vertices = 0;
    double level = 0.0;
    double median_abs_deviation = 0.0;
};

std::optional<BoundaryAlignment> boundary_alignment(const LandscapeGrid& grid);

struct BistabilityResult {
    std::vector<double> r0_values;
    std::vector<LandscapeGrid> grids;
    /// Cells whose converged classifications (Guarding vs MultipleMating)
    /// differ between R0 values.
    std::vector<bool> disagreement;
    std::size_t disagreement_count = 0;
    /// Cells whose classification label differs in any way, including
    /// NonConverged or Extinct outcomes.
    std::size_t any_label_difference = 0;
};

BistabilityResult bistability_scan(const GridSpec& spec, const std::vector<double>& r0_values);

}  // namespace asrsim
