#include "asrsim/sweep.hpp"

#include "asrsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asrsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v)
{
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + mid));
}

}  // namespace

std::vector<double> AxisSpec::values() const
{
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        out[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return out;
}

IntegrationConfig landscape_integration_defaults()
{
    IntegrationConfig cfg;
    cfg.t_max = 1e5;
    return cfg;
}

std::vector<double> default_asr_levels()
{
    std::vector<double> levels;
    for (int i = 6; i <= 20; ++i) levels.push_back(i / 10.0);
    return levels;
}

void validate(const GridSpec& spec)
{
    for (const AxisSpec* axis : {&spec.x, &spec.y}) {
        if (!find_param(axis->param)) {
            throw std::invalid_argument("grid axis: unknown parameter '" + axis->param + "'");
        }
        if (axis->steps < 2) throw std::invalid_argument("grid axis '" + axis->param + "': steps must be >= 2");
        if (!(axis->max > axis->min)) {
            throw std::invalid_argument("grid axis '" + axis->param + "': max must exceed min");
        }
    }
    if (spec.x.param == spec.y.param) throw std::invalid_argument("grid axes must differ");
    validate(spec.integration);
    validate(spec.ic);
}

std::optional<Classification> GridCell::classification() const
{
    if (!valid || !outcome.report) return std::nullopt;
    return outcome.report->classification;
}

ModelParams cell_params(const GridSpec& spec, double x, double y)
{
    ModelParams p = spec.fixed;
    p.*(find_param(spec.x.param)->field) = x;
    p.*(find_param(spec.y.param)->field) = y;
    return p;
}

ScalarField LandscapeGrid::asr_field() const
{
    ScalarField f{xs, ys, std::vector<double>(cells.size(), kNaN)};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& rep = cells[i].outcome.report;
        if (cells[i].valid && rep && rep->asr) f.values[i] = *rep->asr;
    }
    return f;
}

ScalarField LandscapeGrid::strategy_field() const
{
    ScalarField f{xs, ys, std::vector<double>(cells.size(), kNaN)};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto c = cells[i].classification();
        if (c == Classification::Guarding || c == Classification::MultipleMating) {
            f.values[i] = *cells[i].outcome.report->R;
        }
    }
    return f;
}

std::size_t LandscapeGrid::count(Classification c) const
{
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [c](const GridCell& cell) { return cell.classification() == c; }));
}

std::size_t LandscapeGrid::invalid_count() const
{
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const GridCell& cell) { return !cell.valid; }));
}

std::size_t LandscapeGrid::error_count() const
{
    return static_cast<std::size_t>(std::count_if(
        cells.begin(), cells.end(), [](const GridCell& cell) { return cell.valid && !cell.outcome.ok(); }));
}

std::size_t LandscapeGrid::nearest_cell(double x, double y) const
{
    auto nearest = [](const std::vector<double>& axis, double v) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < axis.size(); ++i) {
            if (std::abs(axis[i] - v) < std::abs(axis[best] - v)) best = i;
        }
        return best;
    };
    return nearest(ys, y) * cols() + nearest(xs, x);
}

LandscapeGrid run_grid(const GridSpec& spec)
{
    validate(spec);
    LandscapeGrid grid;
    grid.spec = spec;
    grid.xs = spec.x.values();
    grid.ys = spec.y.values();
    grid.cells.resize(grid.rows() * grid.cols());

    parallel_for(grid.cells.size(), spec.workers, [&](std::size_t i) {
        GridCell& cell = grid.cells[i];
        cell.x = grid.xs[i % grid.cols()];
        cell.y = grid.ys[i / grid.cols()];
        const ModelParams p = cell_params(spec, cell.x, cell.y);
        cell.valid = p.t1 > 0.5 * p.L && p.t2 > 0.5 * p.L;
        if (cell.valid) cell.outcome = simulate_point(p, spec.ic, spec.integration);
    });

    grid.contours = extract_contours(grid, spec.asr_levels);
    return grid;
}

ContourSet extract_contours(const LandscapeGrid& grid, const std::vector<double>& levels)
{
    ContourSet out;
    const ScalarField asr = grid.asr_field();
    for (double level : levels) {
        out.asr.push_back({level, marching_squares(asr, level)});
    }
    out.strategy_boundary = marching_squares(grid.strategy_field(), 0.5);
    return out;
}

std::optional<BoundaryAlignment> boundary_alignment(const LandscapeGrid& grid)
{
    const ScalarField asr = grid.asr_field();
    std::vector<double> values;
    for (const auto& line : grid.contours.strategy_boundary) {
        for (const auto& pt : line) {
            if (auto a = bilinear(asr, pt.x, pt.y)) values.push_back(*a);
        }
    }
    if (values.empty()) return std::nullopt;
    BoundaryAlignment res;
    res.vertices = values.size();
    res.level = median(values);
    std::vector<double> dev;
    dev.reserve(values.size());
    for (double v : values) dev.push_back(std::abs(v - res.level));
    res.median_abs_deviation = median(std::move(dev));
    return res;
}

BistabilityResult bistability_scan(const GridSpec& spec, const std::vector<double>& r0_values)
{
    if (r0_values.empty()) throw std::invalid_argument("bistability_scan: no R0 values");
    BistabilityResult res;
    res.r0_values = r0_values;
    for (double r0 : r0_values) {
        GridSpec s = spec;
        s.ic.R0 = r0;
        res.grids.push_back(run_grid(s));
    }

    const std::size_t n = res.grids.front().cells.size();
    res.disagreement.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        bool guarding = false, multiple = false, label_differs = false;
        const auto first = res.grids.front().cells[i].classification();
        for (const auto& g : res.grids) {
            const auto c = g.cells[i].classification();
            guarding |= c == Classification::Guarding;
            multiple |= c == Classification::MultipleMating;
            label_differs |= c != first;
        }
        res.disagreement[i] = guarding && multiple;
        res.disagreement_count += res.disagreement[i] ? 1 : 0;
        res.any_label_difference += label_differs ? 1 : 0;
    }
    return res;
}

}  // namespace asrsim
