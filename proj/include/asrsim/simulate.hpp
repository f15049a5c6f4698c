#pragma once

#include "asrsim/integrator.hpp"
#include "asrsim/metrics.hpp"
#include "asrsim/model.hpp"

#include <optional>
#include <string>

namespace asrsim {

/// Outcome of derive_rates -> build_initial_state -> integrate -> summarize.
/// Failures are captured in `error` instead of thrown.
struct PointOutcome {
    std::optional<DerivedRates> rates;
    std::optional<EquilibriumReport> report;
    std::string error;

    bool ok() const { return report.has_value(); }
};

PointOutcome simulate_point(const ModelParams& p, const InitialCondition& ic, IntegrationConfig cfg);

}  // namespace asrsim
