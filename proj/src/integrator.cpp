#include "asrsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace asrsim {

namespace {

constexpr std::size_t N = kCompartments;
constexpr double kMinStep = 1e-12;

// Dense LU with partial pivoting over a subset of the 7 indices. Rows listed
// in `fixed` are known to decouple (zero right-hand side, zero couplings to
// the remaining unknowns) and are solved as exact zeros.
class BlockLu {
public:
    BlockLu(const Jacobian& a, const std::array<bool, N>& fixed) : fixed_(fixed)
    {
        for (std::size_t i = 0; i < N; ++i) {
            if (!fixed_[i]) idx_[n_++] = i;
        }
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) lu_[r][c] = a[idx_[r]][idx_[c]];
        }
        for (std::size_t r = 0; r < n_; ++r) perm_[r] = r;
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t piv = k;
            for (std::size_t r = k + 1; r < n_; ++r) {
                if (std::abs(lu_[r][k]) > std::abs(lu_[piv][k])) piv = r;
            }
            if (lu_[piv][k] == 0.0) {
                singular_ = true;
                return;
            }
            if (piv != k) {
                std::swap(lu_[piv], lu_[k]);
                std::swap(perm_[piv], perm_[k]);
            }
            for (std::size_t r = k + 1; r < n_; ++r) {
                const double l = lu_[r][k] / lu_[k][k];
                lu_[r][k] = l;
                if (l == 0.0) continue;
                for (std::size_t c = k + 1; c < n_; ++c) lu_[r][c] -= l * lu_[k][c];
            }
        }
    }

    bool singular() const { return singular_; }

    // Returns false when b does not vanish on the fixed rows.
    bool solve(StateVector& b) const
    {
        for (std::size_t i = 0; i < N; ++i) {
            if (fixed_[i] && b[i] != 0.0) return false;
        }
        std::array<double, N> x{};
        for (std::size_t r = 0; r < n_; ++r) x[r] = b[idx_[perm_[r]]];
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = 0; c < r; ++c) x[r] -= lu_[r][c] * x[c];
        }
        for (std::size_t r = n_; r-- > 0;) {
            for (std::size_t c = r + 1; c < n_; ++c) x[r] -= lu_[r][c] * x[c];
            x[r] /= lu_[r][r];
        }
        b.fill(0.0);
        for (std::size_t r = 0; r < n_; ++r) b[idx_[r]] = x[r];
        return true;
    }

private:
    std::array<bool, N> fixed_;
    std::array<std::size_t, N> idx_{};
    std::array<std::size_t, N> perm_{};
    std::array<StateVector, N> lu_{};
    std::size_t n_ = 0;
    bool singular_ = false;
};

struct StepResult {
    StateVector y;
    StateVector err;
};

class System {
public:
    System(const ModelParams& p, const DerivedRates& d) : p_(p), d_(d) {}
    StateDerivative f(const StateVector& y) const { return rhs(y, p_, d_); }
    Jacobian jac(const StateVector& y) const { return jacobian(y, p_, d_); }

private:
    const ModelParams& p_;
    const DerivedRates& d_;
};

// Hairer & Wanner RODAS-type coefficients (the set Boost.Odeint ships as
// rosenbrock4), written for the matrix (1/(gamma h)) I - J.
struct RodasCoefficients {
    static constexpr double gamma = 0.25;
    static constexpr double c21 = -0.5668800000000000e+01;
    static constexpr double a21 = 0.1544000000000000e+01;
    static constexpr double c31 = -0.2430093356833875e+01, c32 = -0.2063599157091915e+00;
    static constexpr double a31 = 0.9466785280815826e+00, a32 = 0.2557011698983284e+00;
    static constexpr double c41 = -0.1073529058151375e+00, c42 = -0.9594562251023355e+01,
                            c43 = -0.2047028614809616e+02;
    static constexpr double a41 = 0.3314825187068521e+01, a42 = 0.2896124015972201e+01,
                            a43 = 0.9986419139977817e+00;
    static constexpr double c51 = 0.7496443313967647e+01, c52 = -0.1024680431464352e+02,
                            c53 = -0.3399990352819905e+02, c54 = 0.1170890893206160e+02;
    static constexpr double a51 = 0.1221224509226641e+01, a52 = 0.6019134481288629e+01,
                            a53 = 0.1253708332932087e+02, a54 = -0.6878860361058950e+00;
    static constexpr double c61 = 0.8083246795921522e+01, c62 = -0.7981132988064893e+01,
                            c63 = -0.3152159432874371e+02, c64 = 0.1631930543123136e+02,
                            c65 = -0.6058818238834054e+01;
};

class RosenbrockStepper {
public:
    static constexpr double error_exponent = 1.0 / 4.0;

    explicit RosenbrockStepper(const System& sys) : sys_(sys) {}

    StepResult step(const StateVector& y, const StateDerivative& dy, double h) const
    {
        using C = RodasCoefficients;
        Jacobian a = sys_.jac(y);
        for (auto& row : a) {
            for (double& v : row) v = -v;
        }
        for (std::size_t i = 0; i < N; ++i) a[i][i] += 1.0 / (C::gamma * h);

        // Rows that are exactly zero with a zero derivative and no coupling
        // into the rest stay decoupled; solving without them keeps invariant
        // zero sub-populations exactly zero.
        std::array<bool, N> fixed{};
        for (std::size_t i = 0; i < N; ++i) fixed[i] = (y[i] == 0.0 && dy[i] == 0.0);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < N; ++i) {
                if (!fixed[i]) continue;
                for (std::size_t j = 0; j < N; ++j) {
                    if (!fixed[j] && a[i][j] != 0.0) {
                        fixed[i] = false;
                        changed = true;
                        break;
                    }
                }
            }
        }
        BlockLu reduced(a, fixed);
        std::optional<BlockLu> full;
        auto solve = [&](StateVector& b) {
            if (!reduced.singular() && reduced.solve(b)) return;
            if (!full) full.emplace(a, std::array<bool, N>{});
            full->solve(b);
        };

        StateVector g1 = dy;
        solve(g1);

        StateVector tmp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + C::a21 * g1[i];
        StateVector g2 = sys_.f(tmp);
        for (std::size_t i = 0; i < N; ++i) g2[i] += C::c21 * g1[i] / h;
        solve(g2);

        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + C::a31 * g1[i] + C::a32 * g2[i];
        StateVector g3 = sys_.f(tmp);
        for (std::size_t i = 0; i < N; ++i) g3[i] += (C::c31 * g1[i] + C::c32 * g2[i]) / h;
        solve(g3);

        for (std::size_t i = 0; i < N; ++i) {
            tmp[i] = y[i] + C::a41 * g1[i] + C::a42 * g2[i] + C::a43 * g3[i];
        }
        StateVector g4 = sys_.f(tmp);
        for (std::size_t i = 0; i < N; ++i) {
            g4[i] += (C::c41 * g1[i] + C::c42 * g2[i] + C::c43 * g3[i]) / h;
        }
        solve(g4);

        for (std::size_t i = 0; i < N; ++i) {
            tmp[i] = y[i] + C::a51 * g1[i] + C::a52 * g2[i] + C::a53 * g3[i] + C::a54 * g4[i];
        }
        StateVector g5 = sys_.f(tmp);
        for (std::size_t i = 0; i < N; ++i) {
            g5[i] += (C::c51 * g1[i] + C::c52 * g2[i] + C::c53 * g3[i] + C::c54 * g4[i]) / h;
        }
        solve(g5);

        for (std::size_t i = 0; i < N; ++i) tmp[i] += g5[i];
        StateVector err = sys_.f(tmp);
        for (std::size_t i = 0; i < N; ++i) {
            err[i] += (C::c61 * g1[i] + C::c62 * g2[i] + C::c63 * g3[i] + C::c64 * g4[i] + C::c65 * g5[i]) / h;
        }
        solve(err);

        StepResult out;
        for (std::size_t i = 0; i < N; ++i) out.y[i] = tmp[i] + err[i];
        out.err = err;
        return out;
    }

private:
    const System& sys_;
};

class DormandPrinceStepper {
public:
    static constexpr double error_exponent = 1.0 / 5.0;

    explicit DormandPrinceStepper(const System& sys) : sys_(sys) {}

    StepResult step(const StateVector& y, const StateDerivative& k1, double h) const
    {
        StateVector tmp;
        auto stage = [&](std::initializer_list<std::pair<double, const StateVector*>> terms) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (const auto& [c, k] : terms) acc += c * (*k)[i];
                tmp[i] = y[i] + h * acc;
            }
            return sys_.f(tmp);
        };
        const StateVector k2 = stage({{1.0 / 5.0, &k1}});
        const StateVector k3 = stage({{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}});
        const StateVector k4 = stage({{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}});
        const StateVector k5 = stage({{19372.0 / 6561.0, &k1},
                                      {-25360.0 / 2187.0, &k2},
                                      {64448.0 / 6561.0, &k3},
                                      {-212.0 / 729.0, &k4}});
        const StateVector k6 = stage({{9017.0 / 3168.0, &k1},
                                      {-355.0 / 33.0, &k2},
                                      {46732.0 / 5247.0, &k3},
                                      {49.0 / 176.0, &k4},
                                      {-5103.0 / 18656.0, &k5}});
        StepResult out;
        for (std::size_t i = 0; i < N; ++i) {
            out.y[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] + 125.0 / 192.0 * k4[i]
                                   - 2187.0 / 6784.0 * k5[i] + 11.0 / 84.0 * k6[i]);
        }
        const StateVector k7 = sys_.f(out.y);
        // difference between the 5th- and embedded 4th-order weights
        constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
        constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
        constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
        constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
        constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
        constexpr double e7 = -1.0 / 40.0;
        for (std::size_t i = 0; i < N; ++i) {
            out.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        return out;
    }

private:
    const System& sys_;
};

double error_norm(const StateVector& y, const StateVector& y_new, const StateVector& err,
                  const IntegrationConfig& cfg)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

template <class Stepper>
Trajectory drive(const State& initial, const System& sys, const IntegrationConfig& cfg)
{
    const Stepper stepper(sys);
    Trajectory traj;
    StateVector y = initial.to_vector();
    double t = 0.0;
    StateDerivative dy = sys.f(y);

    traj.times.push_back(t);
    traj.states.push_back(initial);

    auto finish = [&](Terminal kind) {
        traj.terminal = kind;
        traj.derivative_norm = scaled_derivative_norm(y, dy);
        if (!cfg.record_steps && traj.times.back() != t) {
            traj.times.push_back(t);
            traj.states.push_back(State::from_vector(y));
        }
        return traj;
    };
    auto reached_terminal = [&]() -> std::optional<Terminal> {
        if (scaled_derivative_norm(y, dy) < cfg.equilibrium_tol) return Terminal::Equilibrium;
        if (State::from_vector(y).fertile_adults() < cfg.extinction_threshold) return Terminal::Extinct;
        return std::nullopt;
    };

    if (auto kind = reached_terminal()) return finish(*kind);

    double h = std::min(cfg.initial_step, cfg.t_max);
    std::size_t attempts = 0;
    while (t < cfg.t_max) {
        const double remaining = cfg.t_max - t;
        if (remaining <= kMinStep * std::max(1.0, t)) {
            t = cfg.t_max;
            break;
        }
        h = std::min(h, remaining);
        if (++attempts > cfg.max_steps) {
            std::ostringstream msg;
            msg << "integrate: exceeded " << cfg.max_steps << " step attempts at t = " << t;
            throw MaxStepsExceeded(msg.str(), t, State::from_vector(y));
        }
        if (h < kMinStep) {
            std::ostringstream msg;
            msg << "integrate: step size " << h << " yr below " << kMinStep << " at t = " << t;
            throw StepSizeUnderflow(msg.str(), t, State::from_vector(y));
        }

        StepResult trial = stepper.step(y, dy, h);
        const double err = error_norm(y, trial.y, trial.err, cfg);
        if (!std::isfinite(err)) {
            h *= 0.25;
            ++traj.rejected_steps;
            continue;
        }
        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -Stepper::error_exponent));
            ++traj.rejected_steps;
            continue;
        }
        bool negative = false;
        for (double& v : trial.y) {
            if (v < -cfg.abs_tol) {
                negative = true;
                break;
            }
            if (v < 0.0) v = 0.0;
        }
        if (negative) {
            h *= 0.5;
            ++traj.rejected_steps;
            continue;
        }

        t = h == remaining ? cfg.t_max : t + h;
        y = trial.y;
        dy = sys.f(y);
        ++traj.accepted_steps;
        if (cfg.record_steps) {
            traj.times.push_back(t);
            traj.states.push_back(State::from_vector(y));
        }
        if (auto kind = reached_terminal()) return finish(*kind);

        const double grow = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -Stepper::error_exponent);
        h *= std::clamp(grow, 0.2, 5.0);
    }
    return finish(Terminal::MaxTime);
}

}  // namespace

std::string_view to_string(Terminal t)
{
    switch (t) {
    case Terminal::Equilibrium: return "equilibrium";
    case Terminal::Extinct: return "extinct";
    case Terminal::MaxTime: return "max_time";
    }
    return "unknown";
}

void validate(const IntegrationConfig& cfg)
{
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(cfg.rel_tol) || !positive(cfg.abs_tol) || !positive(cfg.t_max)
        || !positive(cfg.equilibrium_tol) || !positive(cfg.extinction_threshold)
        || !positive(cfg.initial_step) || cfg.max_steps == 0) {
        throw std::invalid_argument("integration config: all tolerances, limits and step sizes must be positive");
    }
}

double scaled_derivative_norm(const StateVector& y, const StateDerivative& dy)
{
    double dmax = 0.0, ymax = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        dmax = std::max(dmax, std::abs(dy[i]));
        ymax = std::max(ymax, std::abs(y[i]));
    }
    return dmax / (1.0 + ymax);
}

Trajectory integrate(const State& initial, const ModelParams& p, const DerivedRates& d,
                     const IntegrationConfig& cfg)
{
    validate(cfg);
    const System sys(p, d);
    switch (cfg.stepper) {
    case StepperKind::DormandPrince54:
        return drive<DormandPrinceStepper>(initial, sys, cfg);
    case StepperKind::Rosenbrock43:
    default:
        return drive<RosenbrockStepper>(initial, sys, cfg);
    }
}

}  // namespace asrsim
