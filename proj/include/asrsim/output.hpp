#pragma once

#include "asrsim/integrator.hpp"
#include "asrsim/life_history.hpp"
#include "asrsim/sensitivity.hpp"
#include "asrsim/simulate.hpp"
#include "asrsim/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace asrsim {

/// Self-description embedded in every output file.
struct OutputMeta {
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> defaulted;
};

/// %.17g, so that parsing the text recovers the same double.
std::string format_double(double v);

/// {"engine", "config", "defaulted"}.
nlohmann::json provenance_json(const OutputMeta& meta);

/// CSV preamble: "# engine: ...", "# config: <json>", "# defaulted: <json>".
void write_csv_header(std::ostream& os, const OutputMeta& meta);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const OutputMeta& meta);

nlohmann::json outcome_json(const PointOutcome& outcome);
nlohmann::json lifehistory_json(double L, double s0, double t1, double t2, double k);

void write_grid_csv(std::ostream& os, const LandscapeGrid& grid, const OutputMeta& meta);
nlohmann::json grid_summary_json(const LandscapeGrid& grid);
nlohmann::json bistability_json(const BistabilityResult& res);

void write_records_csv(std::ostream& os, const std::vector<EnsembleRecord>& records, const OutputMeta& meta);
/// Inverse of write_records_csv; comment lines are skipped.
std::vector<EnsembleRecord> read_records_csv(std::istream& is);

nlohmann::json sensitivity_json(const SensitivityResult& res, const EnsembleResult& ensemble);
/// Table of coefficients and p-values, one row per variable.
std::string sensitivity_markdown(const SensitivityResult& res);

}  // namespace asrsim
