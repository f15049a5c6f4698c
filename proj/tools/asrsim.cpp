#include "asrsim/config.hpp"
#include "asrsim/life_history.hpp"
#include "asrsim/output.hpp"
#include "asrsim/sensitivity.hpp"
#include "asrsim/simulate.hpp"
#include "asrsim/svg.hpp"
#include "asrsim/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace asrsim;
using nlohmann::json;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path prepare_output(const CommonOptions& common)
{
    fs::path dir(common.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output_dir", "cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw ConfigError("output_dir", "cannot write " + path.string());
}

template <class Writer>
void write_stream(const fs::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    writer(out);
    if (!out) throw ConfigError("output_dir", "cannot write " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_lifehistory(double L, double s0, double t1, double t2, double k)
{
    std::cout << lifehistory_json(L, s0, t1, t2, k).dump(2) << '\n';
    return 0;
}

int cmd_run(const std::string& config_path, bool strict)
{
    const RunConfig cfg = parse_run_config(load_json_file(config_path));
    strict |= cfg.common.strict;
    const OutputMeta meta{to_json(cfg), cfg.defaulted};
    const fs::path dir = prepare_output(cfg.common);

    PointOutcome outcome;
    std::optional<Trajectory> traj;
    try {
        outcome.rates = derive_rates(cfg.params);
        traj = integrate(build_initial_state(cfg.ic, cfg.params), cfg.params, *outcome.rates, cfg.integration);
        outcome.report = summarize(*traj);
    } catch (const std::exception& e) {
        outcome.error = e.what();
    }

    json report = provenance_json(meta);
    report["result"] = outcome_json(outcome);
    write_file(dir / "run.json", report.dump(2) + "\n");
    if (traj) write_stream(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, *traj, meta); });
    std::cout << report["result"].dump(2) << '\n';

    if (!outcome.ok()) {
        std::cerr << "run failed: " << outcome.error << '\n';
        return kNumericalFailure;
    }
    if (strict && outcome.report->classification == Classification::NonConverged) {
        std::cerr << "run did not reach equilibrium by t_max\n";
        return kNumericalFailure;
    }
    return 0;
}

int cmd_grid(const std::string& config_path, std::optional<std::size_t> workers, bool svg, bool strict)
{
    GridConfig cfg = parse_grid_config(load_json_file(config_path));
    strict |= cfg.common.strict;
    cfg.spec.workers = effective_workers(workers, cfg.common);
    const OutputMeta meta{to_json(cfg), cfg.defaulted};
    const fs::path dir = prepare_output(cfg.common);
    const auto start = std::chrono::steady_clock::now();

    std::vector<LandscapeGrid> grids;
    json report = provenance_json(meta);
    if (cfg.r0_values.size() >= 2) {
        BistabilityResult res = bistability_scan(cfg.spec, cfg.r0_values);
        report["bistability"] = bistability_json(res);
        grids = std::move(res.grids);
    } else {
        if (cfg.r0_values.size() == 1) cfg.spec.ic.R0 = cfg.r0_values.front();
        grids.push_back(run_grid(cfg.spec));
    }

    std::size_t errors = 0;
    report["grids"] = json::array();
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const std::string suffix = grids.size() > 1 ? "_" + std::to_string(i) : "";
        write_stream(dir / ("grid" + suffix + ".csv"), [&](std::ostream& os) { write_grid_csv(os, grids[i], meta); });
        if (svg) write_file(dir / ("landscape" + suffix + ".svg"), render_landscape_svg(grids[i], {}, meta));
        json summary = grid_summary_json(grids[i]);
        summary["R0"] = grids[i].spec.ic.R0;
        report["grids"].push_back(summary);
        errors += grids[i].error_count();
    }
    report["elapsed_seconds"] = seconds_since(start);
    write_file(dir / "grid.json", report.dump(2) + "\n");
    if (cfg.common.verbosity > 0) {
        std::cerr << "grid: " << grids.size() << " landscape(s), " << errors << " cell error(s), "
                  << report["elapsed_seconds"].get<double>() << " s, output in " << dir.string() << '\n';
    }
    if (strict && errors > 0) throw NumericalFailure(std::to_string(errors) + " grid cell(s) failed");
    return 0;
}

int cmd_lhs(const std::string& config_path, std::optional<std::size_t> workers, std::optional<std::uint64_t> seed,
            bool strict)
{
    LhsConfig cfg = parse_lhs_config(load_json_file(config_path));
    strict |= cfg.common.strict;
    cfg.spec.workers = effective_workers(workers, cfg.common);
    if (seed) cfg.spec.seed = *seed;
    const OutputMeta meta{to_json(cfg), cfg.defaulted};
    const fs::path dir = prepare_output(cfg.common);
    const auto start = std::chrono::steady_clock::now();

    const SampleMatrix matrix = lhs_sample(cfg.spec);
    const EnsembleResult ensemble = run_ensemble(matrix, cfg.spec);
    write_stream(dir / "records.csv", [&](std::ostream& os) { write_records_csv(os, ensemble.records, meta); });

    const SensitivityResult res = table4_report(ensemble.records);
    json report = provenance_json(meta);
    report["sensitivity"] = sensitivity_json(res, ensemble);
    report["elapsed_seconds"] = seconds_since(start);
    write_file(dir / "sensitivity.json", report.dump(2) + "\n");
    write_file(dir / "sensitivity.md", "<!-- " + engine_version() + " config: " + meta.config.dump() + " -->\n\n" +
                                           sensitivity_markdown(res));
    if (cfg.common.verbosity > 0) std::cerr << sensitivity_markdown(res);
    if (strict && ensemble.n_errors > 0) throw NumericalFailure(std::to_string(ensemble.n_errors) + " row(s) failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mating-strategy and adult sex ratio population simulator"};
    app.set_version_flag("--version", engine_version());
    app.require_subcommand(1);

    double L = 0, s0 = 0, t1 = 0, t2 = 0, k = 1.0;
    auto* lh = app.add_subcommand("lifehistory", "Derive base rates from life-history quantities");
    lh->add_option("--L", L, "Mean female longevity (yr)")->required();
    lh->add_option("--s0", s0, "Survival to age L/2")->required();
    lh->add_option("--t1", t1, "Age female fertility ends (yr)")->required();
    lh->add_option("--t2", t2, "Age of male retirement (yr)")->required();
    lh->add_option("--k", k, "Male death-rate modifier");

    std::string config;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;
    bool svg = false, strict = false;

    auto* run = app.add_subcommand("run", "Integrate one parameter set to equilibrium");
    run->add_option("--config", config, "JSON config")->required();
    run->add_flag("--strict", strict, "Exit 3 unless the run reaches equilibrium or extinction");

    auto* grid = app.add_subcommand("grid", "Sweep two parameters and classify each cell");
    grid->add_option("--config", config, "JSON config")->required();
    grid->add_option("--workers", workers, "Worker threads (0: all cores)");
    grid->add_flag("--svg", svg, "Also render landscape.svg");
    grid->add_flag("--strict", strict, "Exit 3 if any cell fails");

    auto* lhs = app.add_subcommand("lhs", "Latin hypercube ensemble and partial rank correlations");
    lhs->add_option("--config", config, "JSON config")->required();
    lhs->add_option("--workers", workers, "Worker threads (0: all cores)");
    lhs->add_option("--seed", seed, "Sampling seed (overrides config)");
    lhs->add_flag("--strict", strict, "Exit 3 if any row fails");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lh) return cmd_lifehistory(L, s0, t1, t2, k);
        if (*run) return cmd_run(config, strict);
        if (*grid) return cmd_grid(config, workers, svg, strict);
        if (*lhs) return cmd_lhs(config, workers, seed, strict);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NoSolution& e) {
        std::cerr << "no solution: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return 0;
}
