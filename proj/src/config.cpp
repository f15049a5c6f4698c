#include "asrsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace asrsim {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Walks one JSON object, recording which keys were consumed and which were
// filled from defaults. finish() rejects everything left over.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<std::string>& defaulted)
        : obj_(obj), path_(std::move(path)), defaulted_(defaulted)
    {
        if (!obj_.is_object()) throw ConfigError(path_, "expected a JSON object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    void read(const std::string& key, double& out)
    {
        if (const json* v = take(key)) {
            if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(join(path_, key), "must be finite");
        }
    }

    void read(const std::string& key, std::size_t& out)
    {
        if (const json* v = take(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0) {
                throw ConfigError(join(path_, key), "expected a non-negative integer");
            }
            out = v->get<std::size_t>();
        }
    }

    void read(const std::string& key, std::uint64_t& out, int)
    {
        if (const json* v = take(key)) {
            if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<long long>() < 0)) {
                throw ConfigError(join(path_, key), "expected a non-negative integer");
            }
            out = v->get<std::uint64_t>();
        }
    }

    void read(const std::string& key, int& out)
    {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
            out = v->get<int>();
        }
    }

    void read(const std::string& key, bool& out)
    {
        if (const json* v = take(key)) {
            if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void read(const std::string& key, std::string& out)
    {
        if (const json* v = take(key)) {
            if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void read(const std::string& key, std::vector<double>& out)
    {
        if (const json* v = take(key)) {
            if (!v->is_array()) throw ConfigError(join(path_, key), "expected an array of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw ConfigError(join(path_, key), "expected an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }

    /// Nested object, or an empty one (all defaults) when absent.
    Reader child(const std::string& key)
    {
        static const json empty = json::object();
        const json* v = take(key);
        return Reader(v ? *v : empty, join(path_, key), defaulted_);
    }

    const json& object() const { return obj_; }
    const std::string& path() const { return path_; }

    void finish() const
    {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) throw ConfigError(join(path_, key), "unknown key '" + key + "'");
        }
    }

    void mark_seen(const std::string& key) { seen_.insert(key); }

private:
    const json* take(const std::string& key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            defaulted_.push_back(join(path_, key));
            return nullptr;
        }
        return &*it;
    }

    const json& obj_;
    std::string path_;
    std::vector<std::string>& defaulted_;
    std::set<std::string> seen_;
};

void check_typical(const std::string& path, const ParamInfo& info, double value, bool allow)
{
    if (allow) return;
    const double slack = 1e-12 * std::max(1.0, std::abs(info.typical_max));
    if (value < info.typical_min - slack || value > info.typical_max + slack) {
        throw ConfigError(path, format_number(value) + " is outside the typical range " + std::string(info.range_text) +
                                    " (set allow_out_of_range to override)");
    }
}

template <class F>
void wrap_validation(F&& f)
{
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("", e.what());
    }
}

void read_common(Reader& r, CommonOptions& c)
{
    r.read("output_dir", c.output_dir);
    if (r.has("workers")) {
        std::size_t w = 0;
        r.read("workers", w);
        c.workers = w;
    } else {
        r.mark_seen("workers");
    }
    r.read("verbosity", c.verbosity);
    r.read("allow_out_of_range", c.allow_out_of_range);
    r.read("strict", c.strict);
}

json common_json(const CommonOptions& c)
{
    json j;
    j["output_dir"] = c.output_dir;
    if (c.workers) j["workers"] = *c.workers;
    j["verbosity"] = c.verbosity;
    j["allow_out_of_range"] = c.allow_out_of_range;
    j["strict"] = c.strict;
    return j;
}

// Reads model parameters; `skip` names are grid axes and not range-checked.
void read_params(Reader r, ModelParams& p, bool allow, const std::set<std::string>& skip = {})
{
    for (const auto& info : param_table()) {
        const std::string name(info.name);
        const bool present = r.has(name);
        r.read(name, p.*(info.field));
        if (present && !skip.count(name)) check_typical(join(r.path(), name), info, p.*(info.field), allow);
    }
    r.finish();
    if (skip.empty()) wrap_validation([&] { validate(p); });
}

json params_json(const ModelParams& p)
{
    json j = json::object();
    for (const auto& info : param_table()) j[std::string(info.name)] = p.*(info.field);
    return j;
}

void read_initial(Reader r, InitialCondition& ic)
{
    r.read("adult_female", ic.adult_female);
    r.read("adults_male_total", ic.adults_male_total);
    r.read("juvenile_total", ic.juvenile_total);
    r.read("R0", ic.R0);
    r.finish();
    wrap_validation([&] { validate(ic); });
}

json initial_json(const InitialCondition& ic)
{
    return {{"adult_female", ic.adult_female},
            {"adults_male_total", ic.adults_male_total},
            {"juvenile_total", ic.juvenile_total},
            {"R0", ic.R0}};
}

void read_integration(Reader r, IntegrationConfig& cfg)
{
    r.read("rel_tol", cfg.rel_tol);
    r.read("abs_tol", cfg.abs_tol);
    r.read("t_max", cfg.t_max);
    r.read("equilibrium_tol", cfg.equilibrium_tol);
    r.read("extinction_threshold", cfg.extinction_threshold);
    r.read("max_steps", cfg.max_steps);
    r.read("initial_step", cfg.initial_step);
    std::string method = cfg.stepper == StepperKind::Rosenbrock43 ? "rosenbrock43" : "dopri54";
    r.read("method", method);
    if (method == "rosenbrock43") {
        cfg.stepper = StepperKind::Rosenbrock43;
    } else if (method == "dopri54") {
        cfg.stepper = StepperKind::DormandPrince54;
    } else {
        throw ConfigError(join(r.path(), "method"), "expected \"rosenbrock43\" or \"dopri54\"");
    }
    r.finish();
    wrap_validation([&] { validate(cfg); });
}

json integration_json(const IntegrationConfig& cfg)
{
    return {{"rel_tol", cfg.rel_tol},
            {"abs_tol", cfg.abs_tol},
            {"t_max", cfg.t_max},
            {"equilibrium_tol", cfg.equilibrium_tol},
            {"extinction_threshold", cfg.extinction_threshold},
            {"max_steps", cfg.max_steps},
            {"initial_step", cfg.initial_step},
            {"method", cfg.stepper == StepperKind::Rosenbrock43 ? "rosenbrock43" : "dopri54"}};
}

void read_axis(Reader r, AxisSpec& axis, bool allow)
{
    r.read("param", axis.param);
    r.read("min", axis.min);
    r.read("max", axis.max);
    r.read("steps", axis.steps);
    r.finish();
    const ParamInfo* info = find_param(axis.param);
    if (!info) throw ConfigError(join(r.path(), "param"), "unknown parameter '" + axis.param + "'");
    check_typical(join(r.path(), "min"), *info, axis.min, allow);
    check_typical(join(r.path(), "max"), *info, axis.max, allow);
}

json axis_json(const AxisSpec& a) { return {{"param", a.param}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}}; }

}  // namespace

json load_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed JSON in " + path.string() + ": " + e.what());
    }
}

RunConfig parse_run_config(const json& doc)
{
    RunConfig c;
    Reader r(doc, "", c.defaulted);
    read_common(r, c.common);
    read_params(r.child("params"), c.params, c.common.allow_out_of_range);
    read_initial(r.child("initial"), c.ic);
    read_integration(r.child("integration"), c.integration);
    r.finish();
    return c;
}

GridConfig parse_grid_config(const json& doc)
{
    GridConfig c;
    Reader r(doc, "", c.defaulted);
    read_common(r, c.common);
    read_axis(r.child("x"), c.spec.x, c.common.allow_out_of_range);
    read_axis(r.child("y"), c.spec.y, c.common.allow_out_of_range);
    read_params(r.child("params"), c.spec.fixed, c.common.allow_out_of_range, {c.spec.x.param, c.spec.y.param});
    read_initial(r.child("initial"), c.spec.ic);
    read_integration(r.child("integration"), c.spec.integration);
    r.read("asr_levels", c.spec.asr_levels);
    r.read("r0_values", c.r0_values);
    r.finish();
    for (double v : c.r0_values) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("r0_values", "entries must lie in [0, 1]");
    }
    if (c.common.workers) c.spec.workers = *c.common.workers;
    wrap_validation([&] { validate(c.spec); });
    return c;
}

LhsConfig parse_lhs_config(const json& doc)
{
    LhsConfig c;
    Reader r(doc, "", c.defaulted);
    read_common(r, c.common);
    r.read("n_samples", c.spec.n_samples);
    r.read("seed", c.spec.seed, 0);
    r.read("exclude_nonconverged", c.spec.exclude_nonconverged);

    std::vector<double> filter{c.spec.asr_min, c.spec.asr_max};
    r.read("asr_filter", filter);
    if (filter.size() != 2) throw ConfigError("asr_filter", "expected [min, max]");
    c.spec.asr_min = filter[0];
    c.spec.asr_max = filter[1];

    {
        Reader ranges = r.child("ranges");
        for (auto name : kLhsVariables) {
            const std::string key(name);
            std::vector<double> pair{c.spec.range(name).min, c.spec.range(name).max};
            ranges.read(key, pair);
            if (pair.size() != 2) throw ConfigError(join("ranges", key), "expected [min, max]");
            c.spec.range(name) = {pair[0], pair[1]};
            if (const ParamInfo* info = find_param(name)) {
                check_typical(join("ranges", key), *info, pair[0], c.common.allow_out_of_range);
                check_typical(join("ranges", key), *info, pair[1], c.common.allow_out_of_range);
            } else if (pair[0] < 0.0 || pair[1] > 1.0) {
                throw ConfigError(join("ranges", key), "must lie within [0, 1]");
            }
        }
        ranges.finish();
    }
    read_initial(r.child("initial"), c.spec.ic);
    read_integration(r.child("integration"), c.spec.integration);
    r.finish();
    if (c.common.workers) c.spec.workers = *c.common.workers;
    wrap_validation([&] { validate(c.spec); });
    return c;
}

json to_json(const RunConfig& c)
{
    json j = common_json(c.common);
    j["params"] = params_json(c.params);
    j["initial"] = initial_json(c.ic);
    j["integration"] = integration_json(c.integration);
    return j;
}

json to_json(const GridConfig& c)
{
    json j = common_json(c.common);
    j["x"] = axis_json(c.spec.x);
    j["y"] = axis_json(c.spec.y);
    j["params"] = params_json(c.spec.fixed);
    j["initial"] = initial_json(c.spec.ic);
    j["integration"] = integration_json(c.spec.integration);
    j["asr_levels"] = c.spec.asr_levels;
    j["r0_values"] = c.r0_values;
    return j;
}

json to_json(const LhsConfig& c)
{
    json j = common_json(c.common);
    j["n_samples"] = c.spec.n_samples;
    j["seed"] = c.spec.seed;
    j["exclude_nonconverged"] = c.spec.exclude_nonconverged;
    j["asr_filter"] = {c.spec.asr_min, c.spec.asr_max};
    json ranges = json::object();
    for (auto name : kLhsVariables) ranges[std::string(name)] = {c.spec.range(name).min, c.spec.range(name).max};
    j["ranges"] = ranges;
    j["initial"] = initial_json(c.spec.ic);
    j["integration"] = integration_json(c.spec.integration);
    return j;
}

std::optional<std::size_t> workers_from_environment()
{
    const char* raw = std::getenv("ASRSIM_WORKERS");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v < 0) throw ConfigError("ASRSIM_WORKERS", "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::size_t effective_workers(std::optional<std::size_t> cli, const CommonOptions& common)
{
    if (cli) return *cli;
    if (common.workers) return *common.workers;
    return workers_from_environment().value_or(0);
}

std::string engine_version() { return std::string("asrsim ") + ASRSIM_VERSION; }

}  // namespace asrsim
