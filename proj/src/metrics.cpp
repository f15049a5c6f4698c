#include "asrsim/metrics.hpp"

#include <cmath>

namespace asrsim {

std::string_view to_string(Classification c)
{
    switch (c) {
    case Classification::Guarding: return "guarding";
    case Classification::MultipleMating: return "multiple_mating";
    case Classification::Extinct: return "extinct";
    case Classification::NonConverged: return "non_converged";
    }
    return "non_converged";
}

std::optional<Classification> classification_from_string(std::string_view s)
{
    for (auto c : {Classification::Guarding, Classification::MultipleMating, Classification::Extinct,
                   Classification::NonConverged}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::optional<double> asr(const State& s)
{
    const double females = s.F + s.FG + s.FM;
    if (!(females > 0.0)) return std::nullopt;
    return (s.M + s.G + s.FG) / females;
}

std::optional<double> mm_fraction(const State& s)
{
    const double males = s.M + s.G + s.FG;
    if (!(males > 0.0)) return std::nullopt;
    return s.M / males;
}

Classification classify(Terminal terminal, const State& s)
{
    switch (terminal) {
    case Terminal::Extinct: return Classification::Extinct;
    case Terminal::MaxTime: return Classification::NonConverged;
    case Terminal::Equilibrium: break;
    }
    const auto R = mm_fraction(s);
    if (!R) return Classification::Extinct;
    if (std::abs(*R - 0.5) <= kStrategyTieBand) return Classification::NonConverged;
    return *R < 0.5 ? Classification::Guarding : Classification::MultipleMating;
}

EquilibriumReport summarize(const Trajectory& t)
{
    EquilibriumReport rep;
    rep.terminal_state = t.final_state();
    rep.terminal = t.terminal;
    rep.final_time = t.final_time();
    rep.P = rep.terminal_state.total_population();
    rep.classification = classify(t, rep.terminal_state);
    if (rep.classification != Classification::Extinct) {
        rep.asr = asr(rep.terminal_state);
        rep.R = mm_fraction(rep.terminal_state);
    }
    return rep;
}

}  // namespace asrsim
