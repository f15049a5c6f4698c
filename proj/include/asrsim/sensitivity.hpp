#pragma once

#include "asrsim/integrator.hpp"
#include "asrsim/metrics.hpp"
#include "asrsim/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asrsim {

/// Sampled dimensions, in matrix column order.
inline constexpr std::array<std::string_view, 12> kLhsVariables = {
    "L", "s0", "t1", "t2", "rho", "nu", "r", "g", "beta", "sigma", "k", "R0"};

/// Analysis variables: the sampled ones plus the derived delta and mu.
inline constexpr std::array<std::string_view, 14> kAnalysisVariables = {
    "L", "s0", "delta", "mu", "t1", "t2", "rho", "nu", "r", "g", "beta", "sigma", "k", "R0"};

struct Range {
    double min = 0.0;
    double max = 0.0;
};

struct LhsSpec {
    std::size_t n_samples = 10'000;
    std::uint64_t seed = 1;
    std::array<Range, kLhsVariables.size()> ranges = default_ranges();
    double asr_min = 1.0 / 3.0;  // retained rows satisfy asr_min < ASR < asr_max
    double asr_max = 3.0;
    InitialCondition ic;  // R0 is overwritten per row
    IntegrationConfig integration;
    std::size_t workers = 0;
    bool exclude_nonconverged = false;

    static std::array<Range, kLhsVariables.size()> default_ranges();
    Range& range(std::string_view name);
    const Range& range(std::string_view name) const;
};

/// Index of `name` in kLhsVariables; throws std::invalid_argument if absent.
std::size_t lhs_index(std::string_view name);

void validate(const LhsSpec& spec);

using SampleMatrix = std::vector<std::array<double, kLhsVariables.size()>>;

/// Unit hypercube design: n rows, d columns, one draw per stratum per column.
std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t d, std::uint64_t seed);

/// Design scaled to spec.ranges.
SampleMatrix lhs_sample(const LhsSpec& spec);

/// Splits a sampled row into model parameters and the initial strategy mix.
ModelParams row_params(const std::array<double, kLhsVariables.size()>& row);

struct EnsembleRecord {
    std::array<double, kLhsVariables.size()> inputs{};
    double delta = 0.0;
    double mu = 0.0;
    std::optional<double> asr;
    std::optional<double> R;
    std::optional<Classification> classification;
    bool converged = false;
    bool excluded = true;
    std::string reason;  // why the row was excluded, empty otherwise
    std::string error;
};

struct EnsembleResult {
    std::vector<EnsembleRecord> records;
    std::size_t n_retained = 0;
    std::size_t n_extinct = 0;
    std::size_t n_out_of_range = 0;
    std::size_t n_nonconverged = 0;  // MaxTime rows, retained unless excluded by policy
    std::size_t n_errors = 0;
};

EnsembleResult run_ensemble(const SampleMatrix& matrix, const LhsSpec& spec);

class DegenerateColumn : public std::runtime_error {
public:
    explicit DegenerateColumn(const std::string& column)
        : std::runtime_error("degenerate column (constant on retained records): " + column), name(column) {}
    std::string name;
};

/// Average ranks, 1-based, ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct PartialCorrelation {
    double coefficient = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t controls = 0;
    bool rank_deficient = false;  // control regression lost rank
};

/// Spearman partial rank correlation of x and y given the control columns.
PartialCorrelation partial_rank_correlation(std::span<const double> x, std::span<const double> y,
                                            const std::vector<std::vector<double>>& controls);

/// Same, but on columns that are already ranks.
PartialCorrelation partial_correlation_of_ranks(std::span<const double> x, std::span<const double> y,
                                                const std::vector<std::vector<double>>& controls);

/// Retained rows as named columns: the 14 analysis variables, then asr and R.
struct AnalysisTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(std::string_view name) const;
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

AnalysisTable analysis_table(const std::vector<EnsembleRecord>& records);

std::string_view strength_label(double coefficient);

struct SensitivityRow {
    std::string variable;
    PartialCorrelation asr;
    PartialCorrelation R;
};

struct SensitivityResult {
    std::size_t n_samples = 0;
    std::size_t n_retained = 0;
    std::vector<SensitivityRow> rows;                // all 14 variables as controls
    std::vector<SensitivityRow> rows_without_delta_mu;  // delta and mu left out
    PartialCorrelation r_vs_asr_delta_mu;            // controls: delta, mu
    PartialCorrelation r_vs_asr_extended;            // controls: delta, mu, t1, t2, rho, k

    const SensitivityRow& row(std::string_view variable) const;
};

SensitivityResult table4_report(const std::vector<EnsembleRecord>& records);

}  // namespace asrsim
