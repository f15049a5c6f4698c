#include "asrsim/output.hpp"

#include "asrsim/config.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace asrsim {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

double parse_double(const std::string& s)
{
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

json state_json(const State& s)
{
    return {{"F", s.F}, {"G", s.G}, {"M", s.M}, {"FG", s.FG}, {"FM", s.FM}, {"CG", s.CG}, {"CM", s.CM}};
}

json rates_json(const DerivedRates& d)
{
    return {{"gamma", d.gamma}, {"delta", d.delta}, {"mu", d.mu}, {"tau", d.tau}, {"lambda", d.lambda}, {"t0", d.t0}};
}

json pc_json(const PartialCorrelation& pc)
{
    return {{"rho", pc.coefficient},
            {"p", pc.p_value},
            {"strength", strength_label(pc.coefficient)},
            {"rank_deficient", pc.rank_deficient}};
}

json rows_json(const std::vector<SensitivityRow>& rows)
{
    json out = json::array();
    for (const auto& r : rows) out.push_back({{"variable", r.variable}, {"asr", pc_json(r.asr)}, {"R", pc_json(r.R)}});
    return out;
}

}  // namespace

json provenance_json(const OutputMeta& meta)
{
    return {{"engine", engine_version()}, {"config", meta.config}, {"defaulted", meta.defaulted}};
}

void write_csv_header(std::ostream& os, const OutputMeta& meta)
{
    os << "# engine: " << engine_version() << "\n";
    os << "# config: " << meta.config.dump() << "\n";
    os << "# defaulted: " << json(meta.defaulted).dump() << "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const OutputMeta& meta)
{
    write_csv_header(os, meta);
    os << "t,F,G,M,FG,FM,CG,CM,P\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const State& s = traj.states[i];
        os << format_double(traj.times[i]);
        for (double v : s.to_vector()) os << ',' << format_double(v);
        os << ',' << format_double(s.total_population()) << '\n';
    }
}

json outcome_json(const PointOutcome& outcome)
{
    json j;
    if (outcome.rates) j["rates"] = rates_json(*outcome.rates);
    if (!outcome.ok()) {
        j["error"] = outcome.error;
        return j;
    }
    const EquilibriumReport& r = *outcome.report;
    j["asr"] = optional_json(r.asr);
    j["R"] = optional_json(r.R);
    j["P"] = r.P;
    j["classification"] = to_string(r.classification);
    j["terminal"] = to_string(r.terminal);
    j["final_time"] = r.final_time;
    j["state"] = state_json(r.terminal_state);
    return j;
}

json lifehistory_json(double L, double s0, double t1, double t2, double k)
{
    ModelParams p;
    p.L = L;
    p.s0 = s0;
    p.t1 = t1;
    p.t2 = t2;
    p.k = k;
    const DerivedRates d = derive_rates(p);
    const SurvivorshipParams sp{d.gamma, d.delta, d.mu};
    const Survivorship at_t0 = survivorship(d.t0, sp);
    return {{"inputs", {{"L", L}, {"s0", s0}, {"t1", t1}, {"t2", t2}, {"k", k}}},
            {"rates", rates_json(d)},
            {"check",
             {{"lifespan", expected_lifespan(sp)},
              {"survival_at_t0", at_t0.total},
              {"male_lifespan", male_lifespan(sp, k)}}}};
}

void write_grid_csv(std::ostream& os, const LandscapeGrid& grid, const OutputMeta& meta)
{
    write_csv_header(os, meta);
    os << grid.spec.x.param << ',' << grid.spec.y.param << ",valid,classification,asr,R,P,terminal,final_time,error\n";
    for (const auto& cell : grid.cells) {
        os << format_double(cell.x) << ',' << format_double(cell.y) << ',' << (cell.valid ? 1 : 0) << ',';
        const auto& rep = cell.outcome.report;
        if (rep) {
            os << to_string(rep->classification) << ',' << optional_cell(rep->asr) << ',' << optional_cell(rep->R)
               << ',' << format_double(rep->P) << ',' << to_string(rep->terminal) << ','
               << format_double(rep->final_time) << ',';
        } else {
            os << ",,,,,,";
        }
        os << quote(cell.outcome.error) << '\n';
    }
}

json grid_summary_json(const LandscapeGrid& grid)
{
    json counts;
    for (auto c : {Classification::Guarding, Classification::MultipleMating, Classification::Extinct,
                   Classification::NonConverged}) {
        counts[std::string(to_string(c))] = grid.count(c);
    }
    counts["invalid"] = grid.invalid_count();
    counts["error"] = grid.error_count();

    json contours = json::array();
    for (const auto& level : grid.contours.asr) {
        std::size_t vertices = 0;
        for (const auto& line : level.lines) vertices += line.size();
        contours.push_back({{"level", level.level}, {"polylines", level.lines.size()}, {"vertices", vertices}});
    }
    json j{{"rows", grid.rows()}, {"cols", grid.cols()}, {"counts", counts}, {"asr_contours", contours}};
    j["strategy_boundary_polylines"] = grid.contours.strategy_boundary.size();
    if (const auto a = boundary_alignment(grid)) {
        j["boundary_alignment"] = {
            {"vertices", a->vertices}, {"asr_level", a->level}, {"median_abs_deviation", a->median_abs_deviation}};
    } else {
        j["boundary_alignment"] = nullptr;
    }
    return j;
}

json bistability_json(const BistabilityResult& res)
{
    json cells = json::array();
    const LandscapeGrid& first = res.grids.front();
    for (std::size_t i = 0; i < res.disagreement.size(); ++i) {
        if (res.disagreement[i]) cells.push_back({first.cells[i].x, first.cells[i].y});
    }
    return {{"r0_values", res.r0_values},
            {"disagreement_count", res.disagreement_count},
            {"any_label_difference", res.any_label_difference},
            {"disagreement_cells", cells}};
}

void write_records_csv(std::ostream& os, const std::vector<EnsembleRecord>& records, const OutputMeta& meta)
{
    write_csv_header(os, meta);
    for (auto name : kLhsVariables) os << name << ',';
    os << "delta,mu,asr,R,classification,converged,excluded,reason,error\n";
    for (const auto& rec : records) {
        for (double v : rec.inputs) os << format_double(v) << ',';
        os << format_double(rec.delta) << ',' << format_double(rec.mu) << ',' << optional_cell(rec.asr) << ','
           << optional_cell(rec.R) << ',' << (rec.classification ? to_string(*rec.classification) : "") << ','
           << (rec.converged ? 1 : 0) << ',' << (rec.excluded ? 1 : 0) << ',' << rec.reason << ','
           << quote(rec.error) << '\n';
    }
}

std::vector<EnsembleRecord> read_records_csv(std::istream& is)
{
    constexpr std::size_t n_in = kLhsVariables.size();
    std::vector<EnsembleRecord> out;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != n_in + 9) throw std::runtime_error("records csv: wrong field count in '" + line + "'");
        EnsembleRecord rec;
        for (std::size_t j = 0; j < n_in; ++j) rec.inputs[j] = parse_double(f[j]);
        rec.delta = parse_double(f[n_in]);
        rec.mu = parse_double(f[n_in + 1]);
        if (!f[n_in + 2].empty()) rec.asr = parse_double(f[n_in + 2]);
        if (!f[n_in + 3].empty()) rec.R = parse_double(f[n_in + 3]);
        if (!f[n_in + 4].empty()) {
            rec.classification = classification_from_string(f[n_in + 4]);
            if (!rec.classification) throw std::runtime_error("records csv: bad classification '" + f[n_in + 4] + "'");
        }
        rec.converged = f[n_in + 5] == "1";
        rec.excluded = f[n_in + 6] == "1";
        rec.reason = f[n_in + 7];
        rec.error = f[n_in + 8];
        out.push_back(std::move(rec));
    }
    return out;
}

json sensitivity_json(const SensitivityResult& res, const EnsembleResult& ensemble)
{
    return {{"n_samples", res.n_samples},
            {"n_retained", res.n_retained},
            {"retention", res.n_samples ? static_cast<double>(res.n_retained) / res.n_samples : 0.0},
            {"excluded",
             {{"extinct", ensemble.n_extinct},
              {"asr_out_of_range", ensemble.n_out_of_range},
              {"error", ensemble.n_errors}}},
            {"nonconverged_rows", ensemble.n_nonconverged},
            {"prcc", rows_json(res.rows)},
            {"prcc_without_delta_mu", rows_json(res.rows_without_delta_mu)},
            {"R_vs_asr",
             {{"controls_delta_mu", pc_json(res.r_vs_asr_delta_mu)},
              {"controls_delta_mu_t1_t2_rho_k", pc_json(res.r_vs_asr_extended)}}}};
}

std::string sensitivity_markdown(const SensitivityResult& res)
{
    std::ostringstream os;
    os << "Retained " << res.n_retained << " of " << res.n_samples << " samples.\n\n";
    os << "| Variable | rho (ASR) | p (ASR) | rho (R) | p (R) |\n";
    os << "|---|---|---|---|---|\n";
    char buf[160];
    for (const auto& r : res.rows) {
        std::snprintf(buf, sizeof buf, "| %s | %.5f | %.3g | %.5f | %.3g |\n", r.variable.c_str(),
                      r.asr.coefficient, r.asr.p_value, r.R.coefficient, r.R.p_value);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "\nR vs ASR controlling for delta, mu: %.4f (p = %.3g)\n",
                  res.r_vs_asr_delta_mu.coefficient, res.r_vs_asr_delta_mu.p_value);
    os << buf;
    std::snprintf(buf, sizeof buf, "R vs ASR controlling for delta, mu, t1, t2, rho, k: %.4f (p = %.3g)\n",
                  res.r_vs_asr_extended.coefficient, res.r_vs_asr_extended.p_value);
    os << buf;
    return os.str();
}

}  // namespace asrsim
