#include "fklab/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "fklab/errors.hpp"

namespace fklab {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "preset", "N", "dt_grid", "dt", "M", "T", "burn_in", "seed", "realizations",
    "integrator", "delta", "targets", "reference", "p", "methods", "output"};
const std::set<std::string> kOutputKeys = {"csv", "svg"};
const std::set<std::string> kMethodKeys = {"source", "integrator", "delta"};

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (allowed.find(key) == allowed.end())
            throw config_error("unknown key \"" + key + "\" in " + where);
    }
}

double checked_delta(double d, const std::string& key) {
    if (!(d >= 0.0 && d <= 1.0))
        throw config_error("out-of-range value for \"" + key + "\": delta must lie in [0,1]");
    return d;
}

ExperimentConfig from_json(const json& j, const std::string& where) {
    if (!j.is_object())
        throw config_error("configuration root must be a JSON object (" + where + ")");
    reject_unknown_keys(j, kTopLevelKeys, where);

    ExperimentConfig cfg;
    try {
        if (j.contains("preset"))
            cfg.preset = j.at("preset").get<std::string>();
        if (j.contains("N"))
            cfg.N = j.at("N").get<int>();
        if (j.contains("dt_grid"))
            cfg.dt_grid = j.at("dt_grid").get<std::vector<double>>();
        if (j.contains("dt"))
            cfg.dt = j.at("dt").get<double>();
        if (j.contains("M"))
            cfg.M = j.at("M").get<int>();
        if (j.contains("T"))
            cfg.T = j.at("T").get<double>();
        if (j.contains("burn_in"))
            cfg.burn_in = j.at("burn_in").get<double>();
        if (j.contains("seed"))
            cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("realizations"))
            cfg.realizations = j.at("realizations").get<int>();
        if (j.contains("integrator"))
            cfg.integrator = j.at("integrator").get<std::string>();
        if (j.contains("delta"))
            cfg.delta = j.at("delta").get<double>();
        if (j.contains("targets"))
            cfg.targets = j.at("targets").get<std::vector<std::string>>();
        if (j.contains("reference"))
            cfg.reference = j.at("reference").get<std::string>();
        if (j.contains("p"))
            cfg.p = j.at("p").get<int>();
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : j.at("methods")) {
                reject_unknown_keys(m, kMethodKeys, where + ".methods[]");
                MethodSpecConfig ms;
                if (m.contains("source"))
                    ms.source = m.at("source").get<std::string>();
                if (m.contains("integrator"))
                    ms.integrator = m.at("integrator").get<std::string>();
                if (m.contains("delta"))
                    ms.delta = m.at("delta").get<double>();
                cfg.methods.push_back(ms);
            }
        }
        if (j.contains("output")) {
            const json& out = j.at("output");
            reject_unknown_keys(out, kOutputKeys, where + ".output");
            if (out.contains("csv"))
                cfg.csv_name = out.at("csv").get<std::string>();
            if (out.contains("svg"))
                cfg.svg_name = out.at("svg").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw config_error("malformed value in " + where + ": " + e.what());
    }

    // range checks; each error names the key
    (void)preset_from_name(cfg.preset);
    (void)integrator_from_name(cfg.integrator);
    if (cfg.N < 1)
        throw config_error("out-of-range value for \"N\": must be >= 1");
    if (cfg.dt_grid.empty())
        throw config_error("out-of-range value for \"dt_grid\": must be non-empty");
    for (std::size_t i = 0; i + 1 < cfg.dt_grid.size(); ++i)
        if (!(cfg.dt_grid[i] > cfg.dt_grid[i + 1]))
            throw config_error("out-of-range value for \"dt_grid\": must be strictly decreasing");
    if (!(cfg.dt_grid.back() > 0.0))
        throw config_error("out-of-range value for \"dt_grid\": timesteps must be positive");
    if (cfg.dt < 0.0)
        throw config_error("out-of-range value for \"dt\": must be positive");
    if (cfg.M < 1)
        throw config_error("out-of-range value for \"M\": must be >= 1");
    if (!(cfg.T > 0.0))
        throw config_error("out-of-range value for \"T\": must be positive");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0))
        throw config_error("out-of-range value for \"burn_in\": must lie in [0,1)");
    if (cfg.realizations < 1)
        throw config_error("out-of-range value for \"realizations\": must be >= 1");
    checked_delta(cfg.delta, "delta");
    for (const auto& t : cfg.targets)
        (void)target_from_name(t);
    if (cfg.reference != "galerkin_dt0" && cfg.reference != "galerkin_same_dt")
        throw config_error("out-of-range value for \"reference\": expected galerkin_dt0 or "
                           "galerkin_same_dt");
    if (cfg.p != 1 && cfg.p != 2)
        throw config_error("out-of-range value for \"p\": must be 1 or 2");
    for (const auto& m : cfg.methods) {
        if (m.source != "mc" && m.source != "galerkin")
            throw config_error("out-of-range value for \"methods[].source\"");
        (void)integrator_from_name(m.integrator);
        checked_delta(m.delta, "methods[].delta");
    }
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["preset"] = cfg.preset;
    j["N"] = cfg.N;
    j["dt_grid"] = cfg.dt_grid;
    if (cfg.dt > 0.0)
        j["dt"] = cfg.dt;
    j["M"] = cfg.M;
    j["T"] = cfg.T;
    j["burn_in"] = cfg.burn_in;
    j["seed"] = cfg.seed;
    j["realizations"] = cfg.realizations;
    j["integrator"] = cfg.integrator;
    j["delta"] = cfg.delta;
    j["targets"] = cfg.targets;
    j["reference"] = cfg.reference;
    j["p"] = cfg.p;
    if (!cfg.methods.empty()) {
        json arr = json::array();
        for (const auto& m : cfg.methods)
            arr.push_back({{"source", m.source}, {"integrator", m.integrator}, {"delta", m.delta}});
        j["methods"] = arr;
    }
    json out;
    if (!cfg.csv_name.empty())
        out["csv"] = cfg.csv_name;
    if (!cfg.svg_name.empty())
        out["svg"] = cfg.svg_name;
    if (!out.empty())
        j["output"] = out;
    return j;
}

} // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open configuration file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error("malformed JSON in " + path + ": " + e.what());
    }
    return from_json(j, path);
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig apply_overrides(ExperimentConfig base,
                                 const std::vector<std::string>& overrides) {
    if (overrides.empty())
        return base;
    json j = to_json(base);
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw config_error("override must have the form key=value: " + kv);
        const std::string key = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw; // plain string
        }
        // dotted keys address nested sections
        json* node = &j;
        std::string rest = key;
        for (auto dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
            const std::string head = rest.substr(0, dot);
            rest = rest.substr(dot + 1);
            node = &(*node)[head];
        }
        (*node)[rest] = value;
    }
    return from_json(j, "overrides");
}

SmcConfig ExperimentConfig::smc_template() const {
    SmcConfig smc;
    smc.M = M;
    smc.dt = single_dt();
    smc.T = T;
    smc.burn_in_fraction = burn_in;
    smc.seed = seed;
    smc.integrator = integrator_id();
    smc.rule.delta = delta;
    smc.realizations = realizations;
    return smc;
}

SweepConfig ExperimentConfig::sweep_config(int threads) const {
    SweepConfig sc;
    sc.preset = preset_id();
    sc.dt_grid = dt_grid;
    sc.reference = reference == "galerkin_dt0" ? ReferenceKind::galerkin_dt0
                                               : ReferenceKind::galerkin_same_dt;
    sc.smc = smc_template();
    sc.N = N;
    sc.threads = threads;
    for (const auto& t : targets)
        sc.targets.push_back(target_from_name(t));
    if (methods.empty()) {
        // default: the two Galerkin weight placements
        sc.methods.push_back(Method{Source::galerkin, IntegratorKind::euler, 0.0});
        sc.methods.push_back(Method{Source::galerkin, IntegratorKind::euler, 0.5});
    } else {
        for (const auto& m : methods) {
            Method method;
            method.source = (m.source == "mc") ? Source::mc : Source::galerkin;
            method.integrator = integrator_from_name(m.integrator);
            method.delta = m.delta;
            sc.methods.push_back(method);
        }
    }
    return sc;
}

} // namespace fklab
