#pragma once

#include "asrsim/integrator.hpp"
#include "asrsim/model.hpp"
#include "asrsim/sensitivity.hpp"
#include "asrsim/sweep.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asrsim {

/// Schema, range or I/O problem in a config document. `key_path` is the
/// dotted location of the offending key, empty for whole-document errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_path(key) {}
    std::string key_path;
};

/// Fields shared by every command.
struct CommonOptions {
    std::string output_dir = ".";
    std::optional<std::size_t> workers;  // unset: environment, then hardware
    int verbosity = 1;
    bool allow_out_of_range = false;  // accept parameters outside the typical ranges
    bool strict = false;              // any per-cell / per-row hard error fails the run
};

struct RunConfig {
    CommonOptions common;
    ModelParams params;
    InitialCondition ic;
    IntegrationConfig integration;
    std::vector<std::string> defaulted;  // key paths filled from defaults
};

struct GridConfig {
    CommonOptions common;
    GridSpec spec;
    std::vector<double> r0_values;  // two or more: bistability scan
    std::vector<std::string> defaulted;
};

struct LhsConfig {
    CommonOptions common;
    LhsSpec spec;
    std::vector<std::string> defaulted;
};

nlohmann::json load_json_file(const std::filesystem::path& path);

RunConfig parse_run_config(const nlohmann::json& doc);
GridConfig parse_grid_config(const nlohmann::json& doc);
LhsConfig parse_lhs_config(const nlohmann::json& doc);

/// Fully resolved documents; parsing them again yields the same config.
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const GridConfig& c);
nlohmann::json to_json(const LhsConfig& c);

/// Default worker count from ASRSIM_WORKERS; empty when unset.
std::optional<std::size_t> workers_from_environment();

/// CLI flag, then config, then environment, then hardware (0).
std::size_t effective_workers(std::optional<std::size_t> cli, const CommonOptions& common);

std::string engine_version();

}  // namespace asrsim
