#include "asrsim/life_history.hpp"

#include "asrsim/brent.hpp"

#include <cmath>
#include <sstream>

namespace asrsim {

Survivorship survivorship(double t, const SurvivorshipParams& sp)
{
    if (!(t >= 0.0)) {
        throw std::domain_error("survivorship: age must be non-negative");
    }
    const double leave = sp.delta + sp.gamma;
    const double juvenile = std::exp(-leave * t);
    double adult;
    if (std::abs(leave - sp.mu) < 1e-12 * (leave + sp.mu)) {
        adult = sp.gamma * t * std::exp(-sp.mu * t);
    } else {
        adult = sp.gamma * (std::exp(-sp.mu * t) - juvenile) / (leave - sp.mu);
    }
    return {juvenile, adult, juvenile + adult};
}

double expected_lifespan(const SurvivorshipParams& sp)
{
    return (sp.gamma + sp.mu) / (sp.mu * (sp.delta + sp.gamma));
}

double male_lifespan(const SurvivorshipParams& sp, double k)
{
    const double male_mu = k * sp.mu;
    return (sp.gamma + male_mu) / (male_mu * (sp.delta + sp.gamma));
}

double delta_for_lifespan(double L, double mu)
{
    const double gamma = 2.0 / L;
    return (gamma + mu) / (mu * L) - gamma;
}

JuvenileAdultDeathRates solve_delta_mu(double L, double s0)
{
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw std::domain_error("solve_delta_mu: L must be positive");
    }
    if (!(s0 > 0.0 && s0 < 1.0)) {
        throw std::domain_error("solve_delta_mu: s0 must lie in (0, 1)");
    }
    const double gamma = 2.0 / L;
    const double t0 = 0.5 * L;

    // delta > 0 requires mu < gamma; S(t0) tends to 0 as mu -> 0 and to 2/e
    // as mu -> gamma.
    auto residual = [&](double mu) {
        const SurvivorshipParams sp{gamma, delta_for_lifespan(L, mu), mu};
        return survivorship(t0, sp).total - s0;
    };

    const double hi = gamma * (1.0 - 1e-9);
    double lo = 1e-2 * gamma;
    const double floor = 1e-14 * gamma;
    const double f_hi = residual(hi);
    double f_lo = residual(lo);
    while (f_lo > 0.0 && lo > floor) {
        lo *= 0.1;
        f_lo = residual(lo);
    }
    if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
        std::ostringstream msg;
        msg << "solve_delta_mu: no (delta, mu) > 0 gives S(L/2) = " << s0 << " for L = " << L
            << "; searched mu in [" << lo << ", " << hi << "], S(L/2) range ("
            << f_lo + s0 << ", " << f_hi + s0 << ")";
        throw NoSolution(msg.str(), lo, hi);
    }

    const auto root = brent_root(residual, lo, hi, 1e-16 * gamma, 400);
    return {delta_for_lifespan(L, root.x), root.x};
}

}  // namespace asrsim
