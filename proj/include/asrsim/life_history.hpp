#pragma once

#include <stdexcept>
#include <string>

namespace asrsim {

/// Rates of the two-compartment juvenile/adult survival model:
///   C' = -(delta + gamma) C,   A' = gamma C - mu A,   C(0) = 1, A(0) = 0.
struct SurvivorshipParams {
    double gamma = 0.0;  // maturation, 1/yr
    double delta = 0.0;  // juvenile death, 1/yr
    double mu = 0.0;     // adult death, 1/yr
};

struct Survivorship {
    double juvenile = 0.0;  // C(t)
    double adult = 0.0;     // A(t)
    double total = 0.0;     // S(t) = C + A
};

/// Closed-form C(t), A(t) and S(t). Uses the limit gamma*t*exp(-mu t) when
/// delta + gamma and mu coincide to within 1e-12 relative.
/// Throws std::domain_error for t < 0.
Survivorship survivorship(double t, const SurvivorshipParams& sp);

/// Integral of S over [0, inf): (gamma + mu) / (mu (delta + gamma)).
double expected_lifespan(const SurvivorshipParams& sp);

/// Life expectancy at birth of males whose adult death rate is k*mu.
double male_lifespan(const SurvivorshipParams& sp, double k);

/// delta as a function of mu that makes expected_lifespan equal L exactly.
double delta_for_lifespan(double L, double mu);

struct JuvenileAdultDeathRates {
    double delta = 0.0;
    double mu = 0.0;
};

/// Raised when no (delta, mu) > 0 reproduces the requested survival fraction.
class NoSolution : public std::runtime_error {
public:
    NoSolution(const std::string& what, double bracket_lo, double bracket_hi)
        : std::runtime_error(what), lo(bracket_lo), hi(bracket_hi) {}
    double lo;
    double hi;
};

/// Recovers (delta, mu) from mean longevity L and survival s0 to age L/2, with
/// gamma = 2/L. delta is eliminated through the lifespan constraint and mu is
/// found by a bracketed Brent search on (0, gamma). Feasible iff s0 < 2/e.
JuvenileAdultDeathRates solve_delta_mu(double L, double s0);

}  // namespace asrsim
