#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asrsim/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace asrsim;

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i] / n;
        mb += b[i] / n;
    }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Partial correlation from the inverse of the rank correlation matrix:
// r_xy|C = -P_xy / sqrt(P_xx P_yy). Gauss-Jordan with partial pivoting.
double inverse_matrix_prcc(const std::vector<std::vector<double>>& ranked)
{
    const std::size_t m = ranked.size();
    std::vector<std::vector<double>> a(m, std::vector<double>(2 * m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] = pearson(ranked[i], ranked[j]);
        a[i][m + i] = 1.0;
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        const double d = a[c][c];
        for (auto& v : a[c]) v /= d;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            for (std::size_t k = 0; k < 2 * m; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return -a[0][m + 1] / std::sqrt(a[0][m] * a[1][m + 1]);
}

std::vector<double> normal_column(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}

}  // namespace

TEST_CASE("four strata, one sample each")
{
    const auto u = latin_hypercube(4, 1, 99);
    std::vector<int> hits(4, 0);
    for (const auto& row : u) hits[static_cast<int>(row[0] * 4)]++;
    CHECK(hits == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("every column is stratified and the empirical CDF is uniform at stratum edges")
{
    const std::size_t n = 1000, d = 12;
    const auto u = latin_hypercube(n, d, 5);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> col;
        for (const auto& row : u) col.push_back(row[j]);
        std::sort(col.begin(), col.end());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(static_cast<std::size_t>(col[i] * n) == i);
        }
        for (std::size_t k = 1; k < n; k += 97) {
            const double edge = static_cast<double>(k) / n;
            const double ecdf = static_cast<double>(std::lower_bound(col.begin(), col.end(), edge) - col.begin()) / n;
            CHECK(std::abs(ecdf - edge) < 1.0 / n + 1e-12);
        }
    }
}

TEST_CASE("sampling is deterministic in the seed")
{
    LhsSpec spec;
    spec.n_samples = 50;
    CHECK(lhs_sample(spec) == lhs_sample(spec));
    LhsSpec other = spec;
    other.seed = 2;
    CHECK(lhs_sample(spec) != lhs_sample(other));
}

TEST_CASE("scaled samples respect the default ranges")
{
    LhsSpec spec;
    spec.n_samples = 200;
    CHECK(spec.range("t1").min == 40.0);
    CHECK(spec.range("rho").max == doctest::Approx(0.4));
    CHECK(spec.range("k").max == doctest::Approx(1.2));
    for (const auto& row : lhs_sample(spec)) {
        for (std::size_t j = 0; j < kLhsVariables.size(); ++j) {
            CHECK(row[j] >= spec.ranges[j].min);
            CHECK(row[j] <= spec.ranges[j].max);
        }
    }
    spec.n_samples = 5;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    CHECK_THROWS_AS(lhs_index("foo"), std::invalid_argument);
}

TEST_CASE("average ranks")
{
    const std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0};
    const auto r = average_ranks(v);
    CHECK(r == std::vector<double>{4, 1.5, 5, 1.5, 6.5, 9, 3, 8, 6.5});
}

TEST_CASE("identical columns correlate perfectly")
{
    const std::vector<double> x{0.3, 1.2, -4, 7, 2.5, 0.1};
    const auto pc = partial_rank_correlation(x, x, {});
    CHECK(pc.coefficient == doctest::Approx(1.0));
    CHECK(pc.p_value == 0.0);
}

TEST_CASE("p-value matches the closed-form t distribution")
{
    // Spearman rho = 0.8 with n = 4, df = 2: P(|T| > t) = 1 - t / sqrt(2 + t^2) = 0.2
    const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
    const auto pc = partial_rank_correlation(x, y, {});
    CHECK(pc.coefficient == doctest::Approx(0.8));
    CHECK(pc.p_value == doctest::Approx(0.2).epsilon(1e-10));

    // one control, n = 4: df = 1, P(|T| > t) = 1 - 2 atan(|t|) / pi
    const std::vector<double> c{2, 1, 4, 3};
    const auto pc1 = partial_rank_correlation(x, y, {c});
    const double r = pc1.coefficient;
    const double t = r * std::sqrt(1.0 / (1.0 - r * r));
    CHECK(pc1.p_value == doctest::Approx(1.0 - 2.0 * std::atan(std::abs(t)) / M_PI).epsilon(1e-10));
}

TEST_CASE("regression route agrees with the inverse correlation matrix")
{
    std::mt19937_64 rng(2024);
    const std::size_t n = 400;
    const auto c1 = normal_column(rng, n), c2 = normal_column(rng, n), noise = normal_column(rng, n);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::exp(c1[i] + 0.5 * noise[i]);
        y[i] = c1[i] - c2[i] + 0.7 * noise[i] + 0.3 * normal_column(rng, 1)[0];
    }
    const auto pc = partial_rank_correlation(x, y, {c1, c2});
    const double oracle =
        inverse_matrix_prcc({average_ranks(x), average_ranks(y), average_ranks(c1), average_ranks(c2)});
    CHECK(pc.coefficient == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(pc.n == n);
    CHECK(pc.controls == 2);
    CHECK_FALSE(pc.rank_deficient);
}

TEST_CASE("monotone transforms leave coefficients bitwise unchanged")
{
    std::mt19937_64 rng(8);
    const std::size_t n = 300;
    const auto a = normal_column(rng, n), b = normal_column(rng, n), c = normal_column(rng, n);
    std::vector<double> y(n), a_exp(n), c_cubed(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = a[i] + b[i] + c[i];
        a_exp[i] = std::exp(a[i]);
        c_cubed[i] = 5.0 + c[i] * c[i] * c[i];
    }
    const auto base = partial_rank_correlation(a, y, {b, c});
    const auto moved = partial_rank_correlation(a_exp, y, {b, c_cubed});
    CHECK(base.coefficient == moved.coefficient);
    CHECK(base.p_value == moved.p_value);
}

TEST_CASE("coefficient is symmetric in its two arguments")
{
    std::mt19937_64 rng(9);
    const std::size_t n = 250;
    const auto a = normal_column(rng, n), b = normal_column(rng, n), c = normal_column(rng, n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * 0.5 + c[i] + b[i] * 0.1;
    const auto xy = partial_rank_correlation(a, y, {b, c});
    const auto yx = partial_rank_correlation(y, a, {b, c});
    CHECK(xy.coefficient == doctest::Approx(yx.coefficient).epsilon(1e-13));
}

TEST_CASE("pure noise stays near zero")
{
    const std::size_t n = 2000;
    int large = 0, significant = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const auto x = normal_column(rng, n), y = normal_column(rng, n), c = normal_column(rng, n);
        const auto pc = partial_rank_correlation(x, y, {c});
        large += std::abs(pc.coefficient) >= 3.0 / std::sqrt(static_cast<double>(n)) ? 1 : 0;
        significant += pc.p_value <= 0.01 ? 1 : 0;
    }
    CHECK(large <= 1);
    CHECK(significant <= 2);
}

TEST_CASE("constant columns are degenerate; collinear controls are reported")
{
    const std::vector<double> x{1, 2, 3, 4, 5, 6}, y{2, 1, 4, 3, 6, 5}, k(6, 3.0);
    CHECK_THROWS_AS(partial_rank_correlation(k, y, {}), DegenerateColumn);
    const auto pc = partial_rank_correlation(x, y, {k});
    CHECK(pc.rank_deficient);
    CHECK_THROWS_AS(partial_rank_correlation(x, y, {x, y, x, y}), std::invalid_argument);
}

TEST_CASE("strength labels")
{
    CHECK(strength_label(0.1) == "very weak");
    CHECK(strength_label(-0.2) == "weak");
    CHECK(strength_label(0.45) == "moderate");
    CHECK(strength_label(-0.79) == "strong");
    CHECK(strength_label(0.8) == "very strong");
    CHECK(strength_label(-1.0) == "very strong");
}

TEST_CASE("ensemble flags and worker independence")
{
    LhsSpec spec;
    spec.n_samples = 40;
    spec.workers = 1;
    SampleMatrix m = lhs_sample(spec);

    // row 0: equal fertile windows and k = 1
    m[0] = {30, 0.5, 50, 50, 0.3, 1.0 / 1000, 1, 0.1, 0.1, 1, 1, 0.5};
    // row 1: deep in the extinction region
    m[1] = {10, 0.5, 40, 60, 0.25, 1.0 / 500, 0.5, 0, 0, 1, 1.2, 0.5};

    const EnsembleResult serial = run_ensemble(m, spec);
    REQUIRE(serial.records[0].asr);
    CHECK(*serial.records[0].asr == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_FALSE(serial.records[0].excluded);
    CHECK(serial.records[1].excluded);
    CHECK(serial.records[1].reason == "extinct");
    CHECK(serial.n_retained + serial.n_extinct + serial.n_out_of_range + serial.n_errors == 40);

    spec.workers = 4;
    const EnsembleResult threaded = run_ensemble(m, spec);
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(serial.records[i].asr == threaded.records[i].asr);
        CHECK(serial.records[i].R == threaded.records[i].R);
        CHECK(serial.records[i].excluded == threaded.records[i].excluded);
    }

    const SensitivityResult a = table4_report(serial.records);
    const SensitivityResult b = table4_report(threaded.records);
    CHECK(a.rows.size() == 14);
    CHECK(a.rows_without_delta_mu.size() == 12);
    CHECK(a.n_retained == serial.n_retained);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].asr.coefficient == b.rows[i].asr.coefficient);
        CHECK(a.rows[i].R.coefficient == b.rows[i].R.coefficient);
        CHECK(std::abs(a.rows[i].asr.coefficient) <= 1.0);
        CHECK(a.rows[i].R.p_value >= 0.0);
        CHECK(a.rows[i].R.p_value <= 1.0);
    }
    CHECK(a.r_vs_asr_delta_mu.controls == 2);
    CHECK(a.r_vs_asr_extended.controls == 6);
}
