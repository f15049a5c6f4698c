#include "asrsim/simulate.hpp"

#include <exception>

namespace asrsim {

PointOutcome simulate_point(const ModelParams& p, const InitialCondition& ic, IntegrationConfig cfg)
{
    PointOutcome out;
    cfg.record_steps = false;
    try {
        out.rates = derive_rates(p);
        const State initial = build_initial_state(ic, p);
        const Trajectory traj = integrate(initial, p, *out.rates, cfg);
        out.report = summarize(traj);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace asrsim
