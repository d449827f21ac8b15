#ifndef FKLAB_HARNESS_HPP
#define FKLAB_HARNESS_HPP

#include <string>
#include <utility>
#include <vector>

#include "fklab/galerkin.hpp"
#include "fklab/smc.hpp"

namespace fklab {

enum class Source { mc, galerkin };
enum class Target { eigenvalue, observable_average, average_of_w };

std::string_view source_name(Source s);
std::string_view target_name(Target t);
Target target_from_name(std::string_view name);

struct Method {
    Source source = Source::galerkin;
    IntegratorKind integrator = IntegratorKind::euler; // ignored for galerkin
    double delta = 0.0;
};

enum class ReferenceKind { galerkin_dt0, galerkin_same_dt };

struct SweepConfig {
    Preset preset = Preset::zero_potential;
    std::vector<double> dt_grid; // strictly decreasing
    std::vector<Method> methods;
    std::vector<Target> targets;
    ReferenceKind reference = ReferenceKind::galerkin_dt0;
    SmcConfig smc; // template; dt and delta are overwritten per cell
    int N = 30;
    int threads = 1;

    void validate() const;
};

struct SweepRow {
    Method method;
    Target target = Target::eigenvalue;
    double dt = 0.0;
    double value = 0.0;
    double reference = 0.0;
    double error = 0.0;    // |value - reference|
    double stderr_ = 0.0;  // NaN for deterministic rows
    // least-squares order of the (method, target) group this row belongs to;
    // NaN when the fit had too few usable points
    double order_fit = 0.0;
    double r2 = 0.0;
    std::string error_message; // non-empty when the cell failed
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct OrderFit {
    double slope = 0.0;
    double r2 = 0.0;
};

// Least-squares slope of log(error) against log(dt). Throws on fewer than
// two usable rows.
OrderFit fit_order(const std::vector<std::pair<double, double>>& rows);

SweepResult run_sweep(const SweepConfig& config);
// same sweep on an explicit model instead of the named preset
SweepResult run_sweep(const SweepConfig& config, const ProblemSpec& spec);

// Verification of the leading timestep error term: compares empirical
// Richardson quotients (value_dt - value_0)/dt^p at dt and dt/2 against the
// coefficients predicted by leading_correction.
struct RichardsonReport {
    int p = 1;
    double delta = 0.0;
    double dt[2] = {0.0, 0.0}; // (dt, dt/2)

    double lambda0 = 0.0;
    double avg0 = 0.0;
    double theory_avg = 0.0;    // int phi f d nu_W
    double theory_lambda = 0.0; // lambda_{p+1} - lambda^{p+1}/(p+1)!

    double emp_avg[2] = {0.0, 0.0};
    double emp_lambda[2] = {0.0, 0.0};
    // |empirical - theory| / |theory|
    double avg_rel_dev[2] = {0.0, 0.0};
    double lambda_rel_dev[2] = {0.0, 0.0};
    // absolute deviations, for the degenerate case of a vanishing coefficient
    double avg_abs_dev[2] = {0.0, 0.0};
    double lambda_abs_dev[2] = {0.0, 0.0};
};

RichardsonReport richardson_check(Preset preset, int p, double delta,
                                  std::pair<double, double> dt_pair, int N = 30);

struct CompareCell {
    double dt = 0.0;
    double delta = 0.0;
    double mc_lambda = 0.0, gal_lambda = 0.0, stderr_lambda = 0.0, z_lambda = 0.0;
    double mc_phi = 0.0, gal_phi = 0.0, stderr_phi = 0.0, z_phi = 0.0;
    bool flagged = false; // |z| > 4 on either target
};

struct CompareReport {
    std::vector<CompareCell> cells;
};

// Monte Carlo against Galerkin at the same dt, z-scored by the MC standard
// error; deltas 0 and 1/2.
CompareReport compare_mc_galerkin(Preset preset, const std::vector<double>& dt_grid,
                                  const SmcConfig& smc_template, int N = 30, int threads = 1);
CompareReport compare_mc_galerkin(const ProblemSpec& spec, const std::vector<double>& dt_grid,
                                  const SmcConfig& smc_template, int N = 30, int threads = 1);

} // namespace fklab

#endif
