#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace asrsim {

/// Full parameter vector of one simulation. Defaults are the reference
/// landscape settings (t2 = 60, k = 1, no theft, no break-up).
struct ModelParams {
    double L = 30.0;             // mean female longevity, yr
    double s0 = 0.5;             // survival to mean maturity age L/2
    double t1 = 45.0;            // age female fertility ends, yr
    double t2 = 60.0;            // age of male retirement, yr
    double rho = 1.0 / 3.0;      // births per bonded/unreceptive female per yr
    double nu = 1.0 / 1000.0;    // crowding factor, per head
    double r = 2.0;              // couple-forming rate, per possible pair per yr
    double g = 0.0;              // paternity theft success rate
    double beta = 0.0;           // pair-bond break-up rate, per pair per yr
    double sigma = 1.0;          // return rate of unreceptive females, per yr
    double k = 1.0;              // male death-rate modifier
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const ModelParams& p);

/// Name, member and typical explored range of each ModelParams field.
struct ParamInfo {
    std::string_view name;
    double ModelParams::*field;
    double typical_min;
    double typical_max;
    std::string_view range_text;
};

std::span<const ParamInfo> param_table();
/// nullptr when the name is unknown.
const ParamInfo* find_param(std::string_view name);

/// Base rates of the compartment model, all per year.
struct DerivedRates {
    double gamma = 0.0;   // maturation
    double delta = 0.0;   // juvenile death
    double mu = 0.0;      // adult death
    double tau = 0.0;     // female retirement
    double lambda = 0.0;  // male retirement
    double t0 = 0.0;      // mean maturity age, yr
};

/// gamma = 2/L, tau = 2/(2 t1 - L), lambda = 2/(2 t2 - L) and (delta, mu)
/// from the survivorship constraints. Throws std::domain_error when t1 or t2
/// does not exceed L/2; NoSolution propagates from the (delta, mu) solve.
DerivedRates derive_rates(const ModelParams& p);

enum Compartment : std::size_t { kF = 0, kG, kM, kFG, kFM, kCG, kCM, kCompartments };

using StateVector = std::array<double, kCompartments>;
using Jacobian = std::array<StateVector, kCompartments>;

/// Head counts per compartment. FG counts guarded pairs, so each unit is two
/// individuals.
struct State {
    double F = 0.0;   // receptive females
    double G = 0.0;   // searching guarders
    double M = 0.0;   // multiple maters
    double FG = 0.0;  // guarded pairs
    double FM = 0.0;  // unreceptive females
    double CG = 0.0;  // offspring of guarders
    double CM = 0.0;  // offspring of multiple maters

    StateVector to_vector() const { return {F, G, M, FG, FM, CG, CM}; }
    static State from_vector(const StateVector& v) { return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]}; }

    double total_population() const { return F + G + M + 2.0 * FG + FM + CG + CM; }
    double fertile_adults() const { return F + G + M + 2.0 * FG + FM; }

    friend bool operator==(const State&, const State&) = default;
};

using StateDerivative = StateVector;

/// Right-hand side of the seven-compartment mating model. The theft fraction
/// g*M/(M+FG) is taken as 0 when M + FG = 0.
StateDerivative rhs(const StateVector& y, const ModelParams& p, const DerivedRates& d);
inline StateDerivative rhs(const State& s, const ModelParams& p, const DerivedRates& d)
{
    return rhs(s.to_vector(), p, d);
}

/// Analytic Jacobian of rhs; row i holds d(rhs_i)/d(y_j).
Jacobian jacobian(const StateVector& y, const ModelParams& p, const DerivedRates& d);

struct InitialCondition {
    double adult_female = 500.0;
    double adults_male_total = 500.0;
    double R0 = 0.5;  // initial multiple-mater fraction of adult males
    double juvenile_total = 1000.0;
};

void validate(const InitialCondition& ic);

/// Splits adult males by R0 and juveniles by R0 with the (1 -/+ g) theft
/// adjustment, renormalised so CG + CM equals juvenile_total.
State build_initial_state(const InitialCondition& ic, const ModelParams& p);

}  // namespace asrsim
