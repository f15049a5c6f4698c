#pragma once

#include "asrsim/model.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asrsim {

enum class StepperKind {
    Rosenbrock43,     // linearly implicit 6-stage 4(3) pair, stiff-capable
    DormandPrince54,  // explicit 5(4) pair
};

struct IntegrationConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double t_max = 5000.0;             // yr
    double equilibrium_tol = 1e-9;     // on |f|_inf / (1 + |y|_inf), 1/yr
    double extinction_threshold = 1.0; // fertile adults, heads
    std::size_t max_steps = 5'000'000; // accepted + rejected attempts
    double initial_step = 1e-2;        // yr
    StepperKind stepper = StepperKind::Rosenbrock43;
    bool record_steps = true;          // false keeps only the first and last state
};

/// Throws std::invalid_argument when a field is non-positive or non-finite.
void validate(const IntegrationConfig& cfg);

enum class Terminal { Equilibrium, Extinct, MaxTime };

std::string_view to_string(Terminal t);

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    Terminal terminal = Terminal::MaxTime;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double derivative_norm = 0.0;  // scaled, at the final state

    const State& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t, const State& s)
        : std::runtime_error(what), time(t), snapshot(s) {}
    double time;
    State snapshot;
};

class StepSizeUnderflow : public IntegrationError {
    using IntegrationError::IntegrationError;
};

class MaxStepsExceeded : public IntegrationError {
    using IntegrationError::IntegrationError;
};

/// Scaled derivative norm used for the equilibrium test.
double scaled_derivative_norm(const StateVector& y, const StateDerivative& dy);

/*
 * Adaptive integration from t = 0 until one of:
 *   - Equilibrium: |rhs|_inf / (1 + |y|_inf) < equilibrium_tol (checked first),
 *   - Extinct: F + G + M + 2 FG + FM < extinction_threshold,
 *   - MaxTime: t reached t_max.
 * After a step passes error control, components in [-abs_tol, 0) are set to
 * zero; anything below -abs_tol rejects the step and halves it.
 */
Trajectory integrate(const State& initial, const ModelParams& p, const DerivedRates& d,
                     const IntegrationConfig& cfg = {});

}  // namespace asrsim
