#include "asrsim/sensitivity.hpp"

#include "asrsim/parallel.hpp"
#include "asrsim/simulate.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace asrsim {

std::array<Range, kLhsVariables.size()> LhsSpec::default_ranges()
{
    return {{
        {10.0, 50.0},                   // L
        {1.0 / 3.0, 2.0 / 3.0},         // s0
        {40.0, 55.0},                   // t1
        {60.0, 80.0},                   // t2
        {0.25, 0.4},                    // rho
        {1.0 / 1500.0, 1.0 / 500.0},    // nu
        {0.5, 2.0},                     // r
        {0.0, 0.225},                   // g
        {0.0, 0.25},                    // beta
        {0.5, 2.0},                     // sigma
        {1.0, 1.2},                     // k
        {0.0, 1.0},                     // R0
    }};
}

std::size_t lhs_index(std::string_view name)
{
    for (std::size_t i = 0; i < kLhsVariables.size(); ++i) {
        if (kLhsVariables[i] == name) return i;
    }
    throw std::invalid_argument("unknown sampled variable '" + std::string(name) + "'");
}

Range& LhsSpec::range(std::string_view name) { return ranges[lhs_index(name)]; }
const Range& LhsSpec::range(std::string_view name) const { return ranges[lhs_index(name)]; }

void validate(const LhsSpec& spec)
{
    if (spec.n_samples < 10) throw std::invalid_argument("lhs: n_samples must be >= 10");
    for (std::size_t i = 0; i < kLhsVariables.size(); ++i) {
        const Range& r = spec.ranges[i];
        if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.max > r.min)) {
            throw std::invalid_argument("lhs: range of '" + std::string(kLhsVariables[i]) + "' is empty");
        }
    }
    if (!(spec.asr_max > spec.asr_min) || spec.asr_min < 0.0) {
        throw std::invalid_argument("lhs: asr filter must satisfy 0 <= min < max");
    }
    validate(spec.integration);
    validate(spec.ic);
}

std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> out(n, std::vector<double>(d));
    std::vector<std::size_t> strata(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        std::shuffle(strata.begin(), strata.end(), rng);
        for (std::size_t i = 0; i < n; ++i) {
            out[i][j] = (static_cast<double>(strata[i]) + unit(rng)) / static_cast<double>(n);
        }
    }
    return out;
}

SampleMatrix lhs_sample(const LhsSpec& spec)
{
    validate(spec);
    const auto unit = latin_hypercube(spec.n_samples, kLhsVariables.size(), spec.seed);
    SampleMatrix m(spec.n_samples);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        for (std::size_t j = 0; j < kLhsVariables.size(); ++j) {
            const Range& r = spec.ranges[j];
            m[i][j] = r.min + (r.max - r.min) * unit[i][j];
        }
    }
    return m;
}

ModelParams row_params(const std::array<double, kLhsVariables.size()>& row)
{
    ModelParams p;
    for (std::size_t j = 0; j < kLhsVariables.size(); ++j) {
        if (const ParamInfo* info = find_param(kLhsVariables[j])) p.*(info->field) = row[j];
    }
    return p;
}

EnsembleResult run_ensemble(const SampleMatrix& matrix, const LhsSpec& spec)
{
    validate(spec);
    EnsembleResult res;
    res.records.resize(matrix.size());
    const std::size_t r0 = lhs_index("R0");

    parallel_for(matrix.size(), spec.workers, [&](std::size_t i) {
        EnsembleRecord& rec = res.records[i];
        rec.inputs = matrix[i];
        InitialCondition ic = spec.ic;
        ic.R0 = matrix[i][r0];
        const PointOutcome out = simulate_point(row_params(matrix[i]), ic, spec.integration);
        if (out.rates) {
            rec.delta = out.rates->delta;
            rec.mu = out.rates->mu;
        }
        if (!out.ok()) {
            rec.error = out.error;
            rec.reason = "error";
            return;
        }
        const EquilibriumReport& rep = *out.report;
        rec.asr = rep.asr;
        rec.R = rep.R;
        rec.classification = rep.classification;
        rec.converged = rep.terminal == Terminal::Equilibrium;
        if (rep.classification == Classification::Extinct || !rep.asr || !rep.R) {
            rec.reason = "extinct";
        } else if (!(*rep.asr > spec.asr_min && *rep.asr < spec.asr_max)) {
            rec.reason = "asr_out_of_range";
        } else if (!rec.converged && spec.exclude_nonconverged) {
            rec.reason = "non_converged";
        } else {
            rec.excluded = false;
        }
    });

    for (const auto& rec : res.records) {
        res.n_retained += rec.excluded ? 0 : 1;
        res.n_extinct += rec.reason == "extinct" ? 1 : 0;
        res.n_out_of_range += rec.reason == "asr_out_of_range" ? 1 : 0;
        res.n_errors += rec.reason == "error" ? 1 : 0;
        res.n_nonconverged += rec.classification && !rec.converged && rec.reason != "extinct" ? 1 : 0;
    }
    return res;
}

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j + 1);  // mean of positions i+1 .. j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

namespace {

bool constant(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

PartialCorrelation partial_correlation_of_ranks(std::span<const double> x, std::span<const double> y,
                                                const std::vector<std::vector<double>>& controls)
{
    const std::size_t n = x.size();
    const std::size_t c = controls.size();
    if (y.size() != n) throw std::invalid_argument("partial correlation: column lengths differ");
    for (const auto& col : controls) {
        if (col.size() != n) throw std::invalid_argument("partial correlation: column lengths differ");
    }
    if (n < 3 + c) throw std::invalid_argument("partial correlation: need at least 3 + controls rows");
    if (constant(x)) throw DegenerateColumn("x");
    if (constant(y)) throw DegenerateColumn("y");

    Eigen::MatrixXd Z(n, c + 1);
    Z.col(0).setOnes();
    for (std::size_t j = 0; j < c; ++j) Z.col(j + 1) = Eigen::Map<const Eigen::VectorXd>(controls[j].data(), n);
    Eigen::MatrixXd xy(n, 2);
    xy.col(0) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    xy.col(1) = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
    const Eigen::MatrixXd resid = xy - Z * qr.solve(xy);

    PartialCorrelation out;
    out.n = n;
    out.controls = c;
    out.rank_deficient = qr.rank() < static_cast<Eigen::Index>(c + 1);

    const double sxx = resid.col(0).squaredNorm();
    const double syy = resid.col(1).squaredNorm();
    if (sxx == 0.0 || syy == 0.0) {
        // fully explained by the controls
        out.coefficient = 0.0;
        out.p_value = 1.0;
        return out;
    }
    const double r = std::clamp(resid.col(0).dot(resid.col(1)) / std::sqrt(sxx * syy), -1.0, 1.0);
    out.coefficient = r;

    const double df = static_cast<double>(n) - 2.0 - static_cast<double>(c);
    if (df <= 0.0) {
        out.p_value = 1.0;
    } else if (std::abs(r) >= 1.0) {
        out.p_value = 0.0;
    } else {
        const double t = r * std::sqrt(df / (1.0 - r * r));
        const boost::math::students_t dist(df);
        out.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
    }
    return out;
}

PartialCorrelation partial_rank_correlation(std::span<const double> x, std::span<const double> y,
                                            const std::vector<std::vector<double>>& controls)
{
    std::vector<std::vector<double>> ranked;
    ranked.reserve(controls.size());
    for (const auto& col : controls) ranked.push_back(average_ranks(col));
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return partial_correlation_of_ranks(rx, ry, ranked);
}

const std::vector<double>& AnalysisTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return columns[i];
    }
    throw std::invalid_argument("analysis table: no column '" + std::string(name) + "'");
}

AnalysisTable analysis_table(const std::vector<EnsembleRecord>& records)
{
    AnalysisTable t;
    for (auto v : kAnalysisVariables) t.names.emplace_back(v);
    t.names.emplace_back("asr");
    t.names.emplace_back("R");
    t.columns.resize(t.names.size());

    for (const auto& rec : records) {
        if (rec.excluded) continue;
        std::size_t col = 0;
        for (auto v : kAnalysisVariables) {
            double value;
            if (v == "delta") {
                value = rec.delta;
            } else if (v == "mu") {
                value = rec.mu;
            } else {
                value = rec.inputs[lhs_index(v)];
            }
            t.columns[col++].push_back(value);
        }
        t.columns[col++].push_back(*rec.asr);
        t.columns[col++].push_back(*rec.R);
    }
    return t;
}

std::string_view strength_label(double coefficient)
{
    const double a = std::abs(coefficient);
    if (a < 0.2) return "very weak";
    if (a < 0.4) return "weak";
    if (a < 0.6) return "moderate";
    if (a < 0.8) return "strong";
    return "very strong";
}

const SensitivityRow& SensitivityResult::row(std::string_view variable) const
{
    for (const auto& r : rows) {
        if (r.variable == variable) return r;
    }
    throw std::invalid_argument("sensitivity: no row '" + std::string(variable) + "'");
}

namespace {

struct RankedTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> ranks;

    const std::vector<double>& operator[](std::string_view name) const
    {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return ranks[i];
        }
        throw std::invalid_argument("no column '" + std::string(name) + "'");
    }
};

PartialCorrelation prcc(const RankedTable& t, std::string_view x, std::string_view y,
                        const std::vector<std::string_view>& controls)
{
    std::vector<std::vector<double>> c;
    c.reserve(controls.size());
    for (auto name : controls) c.push_back(t[name]);
    try {
        return partial_correlation_of_ranks(t[x], t[y], c);
    } catch (const DegenerateColumn& e) {
        throw DegenerateColumn(e.name == "x" ? std::string(x) : std::string(y));
    }
}

std::vector<SensitivityRow> rows_for(const RankedTable& t, const std::vector<std::string_view>& variables)
{
    std::vector<SensitivityRow> rows;
    for (auto v : variables) {
        std::vector<std::string_view> controls;
        for (auto other : variables) {
            if (other != v) controls.push_back(other);
        }
        rows.push_back({std::string(v), prcc(t, v, "asr", controls), prcc(t, v, "R", controls)});
    }
    return rows;
}

}  // namespace

SensitivityResult table4_report(const std::vector<EnsembleRecord>& records)
{
    const AnalysisTable table = analysis_table(records);
    RankedTable ranked{table.names, {}};
    for (const auto& col : table.columns) ranked.ranks.push_back(average_ranks(col));

    SensitivityResult res;
    res.n_samples = records.size();
    res.n_retained = table.rows();

    const std::vector<std::string_view> all(kAnalysisVariables.begin(), kAnalysisVariables.end());
    std::vector<std::string_view> sampled;
    for (auto v : all) {
        if (v != "delta" && v != "mu") sampled.push_back(v);
    }
    res.rows = rows_for(ranked, all);
    res.rows_without_delta_mu = rows_for(ranked, sampled);
    res.r_vs_asr_delta_mu = prcc(ranked, "R", "asr", {"delta", "mu"});
    res.r_vs_asr_extended = prcc(ranked, "R", "asr", {"delta", "mu", "t1", "t2", "rho", "k"});
    return res;
}

}  // namespace asrsim
