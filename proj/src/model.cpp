#include "asrsim/model.hpp"

#include "asrsim/life_history.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace asrsim {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) throw std::invalid_argument(std::string("invalid parameter: ") + what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate(const ModelParams& p)
{
    require(finite_positive(p.L), "L must be > 0");
    require(p.s0 > 0.0 && p.s0 < 1.0, "s0 must lie in (0, 1)");
    require(std::isfinite(p.t1), "t1 must be finite");
    require(std::isfinite(p.t2), "t2 must be finite");
    require(finite_positive(p.rho), "rho must be > 0");
    require(finite_positive(p.nu), "nu must be > 0");
    require(finite_positive(p.r), "r must be > 0");
    require(p.g >= 0.0 && p.g <= 1.0, "g must lie in [0, 1]");
    require(std::isfinite(p.beta) && p.beta >= 0.0, "beta must be >= 0");
    require(finite_positive(p.sigma), "sigma must be > 0");
    require(finite_positive(p.k), "k must be > 0");
}

std::span<const ParamInfo> param_table()
{
    // k extends to 1.2, the upper male mortality modifier used in the landscapes
    static constexpr ParamInfo table[] = {
        {"L", &ModelParams::L, 10.0, 50.0, "10 to 50"},
        {"s0", &ModelParams::s0, 1.0 / 3.0, 2.0 / 3.0, "1/3 to 2/3"},
        {"t1", &ModelParams::t1, 30.0, 60.0, "30 to 60"},
        {"t2", &ModelParams::t2, 60.0, 80.0, "60 to 80"},
        {"rho", &ModelParams::rho, 0.25, 0.5, "1/4 to 1/2"},
        {"nu", &ModelParams::nu, 1.0 / 1500.0, 1.0 / 500.0, "1/1500 to 1/500"},
        {"r", &ModelParams::r, 0.5, 2.0, "1/2 to 2"},
        {"g", &ModelParams::g, 0.0, 0.225, "0 to 0.225"},
        {"beta", &ModelParams::beta, 0.0, 0.25, "0 to 1/4"},
        {"sigma", &ModelParams::sigma, 0.5, 2.0, "1/2 to 2"},
        {"k", &ModelParams::k, 0.9, 1.2, "0.9 to 1.2"},
    };
    return table;
}

const ParamInfo* find_param(std::string_view name)
{
    for (const auto& info : param_table()) {
        if (info.name == name) return &info;
    }
    return nullptr;
}

DerivedRates derive_rates(const ModelParams& p)
{
    validate(p);
    const double half_life = 0.5 * p.L;
    if (!(p.t1 > half_life)) {
        throw std::domain_error("derive_rates: t1 must exceed L/2 (female fertile window is empty)");
    }
    if (!(p.t2 > half_life)) {
        throw std::domain_error("derive_rates: t2 must exceed L/2 (male fertile window is empty)");
    }
    const auto dm = solve_delta_mu(p.L, p.s0);

    DerivedRates d;
    d.gamma = 2.0 / p.L;
    d.t0 = half_life;
    d.delta = dm.delta;
    d.mu = dm.mu;
    d.tau = 2.0 / (2.0 * p.t1 - p.L);
    d.lambda = 2.0 / (2.0 * p.t2 - p.L);
    return d;
}

StateDerivative rhs(const StateVector& y, const ModelParams& p, const DerivedRates& d)
{
    const double F = y[kF], G = y[kG], M = y[kM], FG = y[kFG], FM = y[kFM], CG = y[kCG], CM = y[kCM];
    const double P = F + G + M + 2.0 * FG + FM + CG + CM;
    const double crowd = p.nu * P;

    const double in_line = M + FG;
    const double theft = in_line > 0.0 ? p.g * M / in_line : 0.0;

    const double female_loss = d.tau + d.mu * (1.0 + crowd);
    const double male_loss = d.lambda + d.mu * (p.k + crowd);
    const double juvenile_loss = d.gamma + d.delta * (1.0 + crowd);

    StateDerivative dy;
    dy[kF] = 0.5 * d.gamma * (CG + CM) + (p.beta + male_loss) * FG + p.sigma * FM
             - (p.r * (G + M) + female_loss) * F;
    dy[kG] = 0.5 * d.gamma * CG + (p.beta + female_loss) * FG - (p.r * F + male_loss) * G;
    dy[kM] = 0.5 * d.gamma * CM - male_loss * M;
    dy[kFG] = p.r * F * G - (p.beta + d.tau + d.lambda + d.mu * (1.0 + p.k + 2.0 * crowd)) * FG;
    dy[kFM] = p.r * F * M - (p.sigma + female_loss) * FM;
    dy[kCG] = p.rho * (1.0 - theft) * FG - juvenile_loss * CG;
    dy[kCM] = p.rho * (FM + theft * FG) - juvenile_loss * CM;
    return dy;
}

Jacobian jacobian(const StateVector& y, const ModelParams& p, const DerivedRates& d)
{
    const double F = y[kF], G = y[kG], M = y[kM], FG = y[kFG], FM = y[kFM], CG = y[kCG], CM = y[kCM];
    const double P = F + G + M + 2.0 * FG + FM + CG + CM;
    const double crowd = p.nu * P;
    // dP/dy
    constexpr StateVector w{1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0};

    const double in_line = M + FG;
    double theft = 0.0, dtheft_dM = 0.0, dtheft_dFG = 0.0;
    if (in_line > 0.0) {
        theft = p.g * M / in_line;
        dtheft_dM = p.g * FG / (in_line * in_line);
        dtheft_dFG = -p.g * M / (in_line * in_line);
    }

    const double female_loss = d.tau + d.mu * (1.0 + crowd);
    const double male_loss = d.lambda + d.mu * (p.k + crowd);
    const double juvenile_loss = d.gamma + d.delta * (1.0 + crowd);
    const double pair_loss = p.beta + d.tau + d.lambda + d.mu * (1.0 + p.k + 2.0 * crowd);
    const double mu_nu = d.mu * p.nu;
    const double delta_nu = d.delta * p.nu;

    Jacobian J{};
    for (std::size_t j = 0; j < kCompartments; ++j) {
        J[kF][j] = mu_nu * w[j] * (FG - F);
        J[kG][j] = mu_nu * w[j] * (FG - G);
        J[kM][j] = -mu_nu * w[j] * M;
        J[kFG][j] = -2.0 * mu_nu * w[j] * FG;
        J[kFM][j] = -mu_nu * w[j] * FM;
        J[kCG][j] = -delta_nu * w[j] * CG;
        J[kCM][j] = -delta_nu * w[j] * CM;
    }

    J[kF][kF] -= p.r * (G + M) + female_loss;
    J[kF][kG] -= p.r * F;
    J[kF][kM] -= p.r * F;
    J[kF][kFG] += p.beta + male_loss;
    J[kF][kFM] += p.sigma;
    J[kF][kCG] += 0.5 * d.gamma;
    J[kF][kCM] += 0.5 * d.gamma;

    J[kG][kF] -= p.r * G;
    J[kG][kG] -= p.r * F + male_loss;
    J[kG][kFG] += p.beta + female_loss;
    J[kG][kCG] += 0.5 * d.gamma;

    J[kM][kM] -= male_loss;
    J[kM][kCM] += 0.5 * d.gamma;

    J[kFG][kF] += p.r * G;
    J[kFG][kG] += p.r * F;
    J[kFG][kFG] -= pair_loss;

    J[kFM][kF] += p.r * M;
    J[kFM][kM] += p.r * F;
    J[kFM][kFM] -= p.sigma + female_loss;

    J[kCG][kM] -= p.rho * FG * dtheft_dM;
    J[kCG][kFG] += p.rho * (1.0 - theft) - p.rho * FG * dtheft_dFG;
    J[kCG][kCG] -= juvenile_loss;

    J[kCM][kM] += p.rho * FG * dtheft_dM;
    J[kCM][kFG] += p.rho * theft + p.rho * FG * dtheft_dFG;
    J[kCM][kFM] += p.rho;
    J[kCM][kCM] -= juvenile_loss;
    return J;
}

void validate(const InitialCondition& ic)
{
    require(std::isfinite(ic.adult_female) && ic.adult_female >= 0.0, "adult_female must be >= 0");
    require(std::isfinite(ic.adults_male_total) && ic.adults_male_total >= 0.0,
            "adults_male_total must be >= 0");
    require(std::isfinite(ic.juvenile_total) && ic.juvenile_total >= 0.0, "juvenile_total must be >= 0");
    require(ic.R0 >= 0.0 && ic.R0 <= 1.0, "R0 must lie in [0, 1]");
}

State build_initial_state(const InitialCondition& ic, const ModelParams& p)
{
    validate(ic);
    State s;
    s.F = ic.adult_female;
    s.M = ic.adults_male_total * ic.R0;
    s.G = ic.adults_male_total * (1.0 - ic.R0);

    double cg = ic.juvenile_total * (1.0 - ic.R0) * (1.0 - p.g);
    double cm = ic.juvenile_total * ic.R0 * (1.0 + p.g);
    const double raw = cg + cm;
    if (raw > 0.0) {
        s.CG = ic.juvenile_total * cg / raw;
        s.CM = ic.juvenile_total * cm / raw;
    } else {
        // only reachable with R0 = 0 and g = 1
        s.CG = ic.juvenile_total * (1.0 - ic.R0);
        s.CM = ic.juvenile_total * ic.R0;
    }
    return s;
}

}  // namespace asrsim
