#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asrsim/metrics.hpp"
#include "asrsim/simulate.hpp"
#include "asrsim/sweep.hpp"

using namespace asrsim;

TEST_CASE("asr")
{
    const State s{100, 50, 30, 20, 40, 0, 0};
    REQUIRE(asr(s));
    CHECK(*asr(s) == doctest::Approx(0.625));
    CHECK(*asr(State{10, 0, 0, 0, 5, 3, 3}) == 0.0);
    CHECK_FALSE(asr(State{0, 4, 4, 0, 0, 1, 1}));
}

TEST_CASE("multiple-mater fraction")
{
    CHECK(*mm_fraction(State{1, 50, 30, 20, 0, 0, 0}) == doctest::Approx(0.3));
    CHECK(*mm_fraction(State{1, 250, 250, 0, 0, 0, 0}) == 0.5);
    CHECK(*mm_fraction(State{1, 5, 0, 5, 0, 0, 0}) == 0.0);
    CHECK(*mm_fraction(State{1, 0, 7, 0, 0, 0, 0}) == 1.0);
    CHECK_FALSE(mm_fraction(State{5, 0, 0, 0, 5, 0, 0}));
}

TEST_CASE("ratios are scale invariant")
{
    const State s{123, 45, 67, 8.9, 10, 11, 12};
    const double c = 3.7;
    const State t{c * s.F, c * s.G, c * s.M, c * s.FG, c * s.FM, c * s.CG, c * s.CM};
    CHECK(*asr(t) == doctest::Approx(*asr(s)).epsilon(1e-14));
    CHECK(*mm_fraction(t) == doctest::Approx(*mm_fraction(s)).epsilon(1e-14));
}

TEST_CASE("classification")
{
    const State guard{100, 98, 2, 0, 0, 0, 0};
    const State mm{100, 2, 98, 0, 0, 0, 0};
    const State tie{100, 50, 50, 0, 0, 0, 0};
    CHECK(classify(Terminal::Equilibrium, guard) == Classification::Guarding);
    CHECK(classify(Terminal::Equilibrium, mm) == Classification::MultipleMating);
    CHECK(classify(Terminal::Equilibrium, tie) == Classification::NonConverged);
    CHECK(classify(Terminal::Extinct, mm) == Classification::Extinct);
    CHECK(classify(Terminal::MaxTime, mm) == Classification::NonConverged);
    CHECK(classify(Terminal::Equilibrium, State{}) == Classification::Extinct);
}

TEST_CASE("classification names round-trip")
{
    for (auto c : {Classification::Guarding, Classification::MultipleMating, Classification::Extinct,
                   Classification::NonConverged}) {
        CHECK(classification_from_string(to_string(c)) == c);
    }
    CHECK(to_string(Classification::MultipleMating) == "multiple_mating");
    CHECK_FALSE(classification_from_string("bogus"));
}

TEST_CASE("equal fertile windows and k = 1 give an even sex ratio")
{
    for (double L : {20.0, 35.0, 50.0}) {
        ModelParams p;
        p.L = L;
        p.t1 = 60;
        p.t2 = 60;
        const PointOutcome out = simulate_point(p, {}, {});
        REQUIRE(out.ok());
        CHECK(*out.report->asr == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("deep guarding point classifies Guarding")
{
    ModelParams p;
    p.L = 35;
    p.t1 = 40;
    const PointOutcome out = simulate_point(p, {}, landscape_integration_defaults());
    REQUIRE(out.ok());
    CHECK(out.report->classification == Classification::Guarding);
}

TEST_CASE("extinct summary leaves ratios undefined")
{
    ModelParams p;
    p.L = 10;
    p.t1 = 30;
    const PointOutcome out = simulate_point(p, {}, {});
    REQUIRE(out.ok());
    CHECK(out.report->classification == Classification::Extinct);
    CHECK_FALSE(out.report->asr);
    CHECK_FALSE(out.report->R);
}

TEST_CASE("simulate_point captures failures")
{
    ModelParams p;
    p.s0 = 0.9;
    const PointOutcome out = simulate_point(p, {}, {});
    CHECK_FALSE(out.ok());
    CHECK_FALSE(out.error.empty());
}
