#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asrsim/sweep.hpp"

#include <cmath>

using namespace asrsim;

namespace {

GridSpec small_spec()
{
    GridSpec spec;
    spec.x.steps = 9;
    spec.y.steps = 7;
    spec.workers = 1;
    return spec;
}

}  // namespace

TEST_CASE("axis values")
{
    const AxisSpec a{"L", 10, 50, 41};
    const auto v = a.values();
    REQUIRE(v.size() == 41);
    CHECK(v.front() == 10.0);
    CHECK(v.back() == 50.0);
    CHECK(v[15] == 25.0);
}

TEST_CASE("defaults describe the reference landscape")
{
    const GridSpec spec;
    CHECK(spec.x.param == "L");
    CHECK(spec.y.param == "t1");
    CHECK(spec.x.steps == 41);
    CHECK(spec.y.steps == 31);
    CHECK(spec.integration.t_max == 1e5);
    CHECK(spec.asr_levels.size() == 15);
    CHECK(spec.asr_levels.front() == doctest::Approx(0.6));
    CHECK(spec.asr_levels.back() == doctest::Approx(2.0));
}

TEST_CASE("grid validation")
{
    GridSpec spec = small_spec();
    spec.x.param = "foo";
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec = small_spec();
    spec.y.steps = 1;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec = small_spec();
    spec.y.param = "L";
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("cell parameters override only the axes")
{
    GridSpec spec = small_spec();
    spec.fixed.k = 1.2;
    const ModelParams p = cell_params(spec, 17.0, 52.0);
    CHECK(p.L == 17.0);
    CHECK(p.t1 == 52.0);
    CHECK(p.k == 1.2);
}

TEST_CASE("grid results do not depend on the worker count")
{
    GridSpec spec = small_spec();
    const LandscapeGrid serial = run_grid(spec);
    spec.workers = 3;
    const LandscapeGrid threaded = run_grid(spec);
    REQUIRE(serial.cells.size() == threaded.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        const auto& a = serial.cells[i];
        const auto& b = threaded.cells[i];
        CHECK(a.classification() == b.classification());
        REQUIRE(a.outcome.ok() == b.outcome.ok());
        if (a.outcome.ok()) CHECK(a.outcome.report->terminal_state == b.outcome.report->terminal_state);
    }
}

TEST_CASE("small reference grid has all three regions")
{
    const LandscapeGrid grid = run_grid(small_spec());
    CHECK(grid.count(Classification::Extinct) > 0);
    CHECK(grid.count(Classification::Guarding) > 0);
    CHECK(grid.count(Classification::MultipleMating) > 0);
    CHECK(grid.error_count() == 0);
    CHECK(grid.invalid_count() == 0);

    std::size_t total = grid.invalid_count() + grid.error_count();
    for (auto c : {Classification::Guarding, Classification::MultipleMating, Classification::Extinct,
                   Classification::NonConverged}) {
        total += grid.count(c);
    }
    CHECK(total == grid.cells.size());

    // top-left corner (low L, high t1) multiple mating; (L=50, t1=40) guarding
    CHECK(grid.at(grid.rows() - 1, 1).classification() == Classification::MultipleMating);
    CHECK(grid.cells[grid.nearest_cell(50, 40)].classification() == Classification::Guarding);
}

TEST_CASE("cells with an empty fertile window are marked invalid")
{
    GridSpec spec = small_spec();
    spec.y = {"t1", 10, 60, 6};
    spec.fixed.t2 = 60;
    const LandscapeGrid grid = run_grid(spec);
    for (const auto& cell : grid.cells) {
        CHECK(cell.valid == (cell.y > cell.x / 2));
        if (!cell.valid) CHECK_FALSE(cell.classification());
    }
    CHECK(grid.invalid_count() > 0);
}

TEST_CASE("nearest cell")
{
    LandscapeGrid grid;
    grid.xs = {10, 20, 30};
    grid.ys = {1, 2};
    CHECK(grid.nearest_cell(19, 1.9) == 4);
    CHECK(grid.nearest_cell(-5, 0) == 0);
}

TEST_CASE("contours are consistent with the fields they come from")
{
    const LandscapeGrid grid = run_grid(small_spec());
    const ScalarField asr = grid.asr_field();
    for (const auto& level : grid.contours.asr) {
        for (const auto& line : level.lines) {
            for (const Point& p : line) {
                const auto v = bilinear(asr, p.x, p.y);
                REQUIRE(v);
                CHECK(*v == doctest::Approx(level.level).epsilon(1e-9));
            }
        }
    }
    const ScalarField strategy = grid.strategy_field();
    for (const auto& line : grid.contours.strategy_boundary) {
        for (const Point& p : line) CHECK(*bilinear(strategy, p.x, p.y) == doctest::Approx(0.5).epsilon(1e-9));
    }
    const auto align = boundary_alignment(grid);
    REQUIRE(align);
    CHECK(align->vertices > 0);
    CHECK(align->median_abs_deviation >= 0.0);
}

TEST_CASE("without paternity theft the initial mix does not change the winner")
{
    GridSpec spec = small_spec();
    const BistabilityResult res = bistability_scan(spec, {0.1, 0.9});
    CHECK(res.grids.size() == 2);
    CHECK(res.disagreement_count == 0);
    CHECK_THROWS_AS(bistability_scan(spec, {}), std::invalid_argument);
}
