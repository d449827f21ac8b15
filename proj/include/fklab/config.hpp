#ifndef FKLAB_CONFIG_HPP
#define FKLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fklab/harness.hpp"

namespace fklab {

// fresh clones reproduce the shipped golden CSVs with this seed
inline constexpr std::uint64_t kDefaultSeed = 123456789;

struct MethodSpecConfig {
    std::string source = "galerkin";
    std::string integrator = "euler";
    double delta = 0.0;
};

// Validated experiment configuration with defaults applied. Unknown keys in
// the file are a hard error.
struct ExperimentConfig {
    std::string preset = "zero_potential";
    int N = 30;
    std::vector<double> dt_grid = {0.2, 0.1, 0.05, 0.025, 0.0125};
    double dt = 0.0; // 0 means "first entry of dt_grid"
    int M = 5000;
    double T = 200.0;
    double burn_in = 0.5;
    std::uint64_t seed = kDefaultSeed;
    int realizations = 8;
    std::string integrator = "euler";
    double delta = 0.5;
    std::vector<std::string> targets = {"eigenvalue", "observable_average"};
    std::string reference = "galerkin_dt0";
    int p = 1;
    std::vector<MethodSpecConfig> methods; // empty: command-dependent default
    std::string csv_name;                  // empty: <command>.csv
    std::string svg_name;                  // empty: <command>.svg

    double single_dt() const { return dt > 0.0 ? dt : dt_grid.front(); }

    Preset preset_id() const { return preset_from_name(preset); }
    IntegratorKind integrator_id() const { return integrator_from_name(integrator); }

    SmcConfig smc_template() const;
    SweepConfig sweep_config(int threads) const;
};

// Load and validate a JSON config file. Missing file, malformed JSON,
// unknown keys and out-of-range values all raise config_error naming the
// offending path/key.
ExperimentConfig parse_config(const std::string& path);

// Defaults only, no file.
ExperimentConfig default_config();

// Apply repeatable key=value overrides (dotted keys for nested sections,
// e.g. output.csv). Values are parsed as JSON scalars/arrays when possible.
ExperimentConfig apply_overrides(ExperimentConfig base,
                                 const std::vector<std::string>& overrides);

} // namespace fklab

#endif
