#pragma once

#include "asrsim/integrator.hpp"
#include "asrsim/model.hpp"

#include <optional>
#include <string_view>

namespace asrsim {

enum class Classification { Guarding, MultipleMating, Extinct, NonConverged };

std::string_view to_string(Classification c);
std::optional<Classification> classification_from_string(std::string_view s);

/// Fertile males over fertile females, (M + G + FG) / (F + FG + FM).
/// Empty when there are no fertile females.
std::optional<double> asr(const State& s);

/// Multiple-mater fraction R = M / (M + G + FG). Empty without fertile males.
std::optional<double> mm_fraction(const State& s);

/// Half-width of the band around R = 0.5 reported as NonConverged.
inline constexpr double kStrategyTieBand = 1e-6;

Classification classify(Terminal terminal, const State& s);
inline Classification classify(const Trajectory& t, const State& s) { return classify(t.terminal, s); }

struct EquilibriumReport {
    std::optional<double> asr;
    std::optional<double> R;
    double P = 0.0;
    Classification classification = Classification::NonConverged;
    Terminal terminal = Terminal::MaxTime;
    double final_time = 0.0;
    State terminal_state;
};

/// Summarises a finished trajectory. ASR and R are left undefined for
/// extinct populations.
EquilibriumReport summarize(const Trajectory& t);

}  // namespace asrsim
