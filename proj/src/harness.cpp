#include "fklab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fklab/errors.hpp"

namespace fklab {

namespace {

constexpr double kDeterministicFloor = 1e-11; // errors below this are noise

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace

std::string_view source_name(Source s) { return s == Source::mc ? "mc" : "galerkin"; }

std::string_view target_name(Target t) {
    switch (t) {
    case Target::eigenvalue: return "eigenvalue";
    case Target::observable_average: return "observable_average";
    case Target::average_of_w: return "average_of_W";
    }
    return "?";
}

Target target_from_name(std::string_view name) {
    if (name == "eigenvalue")
        return Target::eigenvalue;
    if (name == "observable_average")
        return Target::observable_average;
    if (name == "average_of_W")
        return Target::average_of_w;
    throw config_error("unknown target: " + std::string(name));
}

void SweepConfig::validate() const {
    if (dt_grid.size() < 2)
        throw config_error("SweepConfig: dt_grid needs at least two points for order fitting");
    for (std::size_t i = 0; i + 1 < dt_grid.size(); ++i)
        if (!(dt_grid[i] > dt_grid[i + 1]))
            throw config_error("SweepConfig: dt_grid must be strictly decreasing");
    if (!(dt_grid.back() > 0.0))
        throw config_error("SweepConfig: timesteps must be positive");
    if (methods.empty() || targets.empty())
        throw config_error("SweepConfig: methods and targets must be non-empty");
    if (N < 1)
        throw config_error("SweepConfig: N must be >= 1");
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& rows) {
    std::vector<std::pair<double, double>> usable;
    for (const auto& [dt, err] : rows)
        if (dt > 0.0 && err > 0.0)
            usable.emplace_back(std::log(dt), std::log(err));
    if (usable.size() < 2)
        throw numerical_error("fit_order: fewer than two usable rows");

    const double n = static_cast<double>(usable.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : usable) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-300)
        throw numerical_error("fit_order: degenerate abscissae");
    OrderFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / n;
    const double intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    for (const auto& [x, y] : usable) {
        const double pred = intercept + fit.slope * x;
        ss_res += (y - pred) * (y - pred);
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

struct CellValue {
    double value = 0.0;
    double stderr_ = 0.0; // NaN for galerkin
};

CellValue evaluate_cell(const ProblemSpec& spec, const SweepConfig& cfg, const Method& method,
                        Target target, double dt) {
    CellValue out;
    if (method.source == Source::galerkin) {
        out.stderr_ = nan_value();
        const SchemeEigen se = scheme_eigen(spec, cfg.N, dt, method.delta);
        switch (target) {
        case Target::eigenvalue:
            out.value = se.lambda_dt;
            break;
        case Target::observable_average:
            out.value = observable_average(se.nu_w_dt, spec.phi);
            break;
        case Target::average_of_w:
            out.value = observable_average(se.nu_w_dt,
                                           [&spec](double q) { return spec.W.eval(q); });
            break;
        }
        return out;
    }

    SmcConfig mc = cfg.smc;
    mc.dt = dt;
    mc.integrator = method.integrator;
    mc.rule.delta = method.delta;
    const SmcEstimate est = smc_run(spec, mc, cfg.threads);
    switch (target) {
    case Target::eigenvalue:
        out.value = est.lambda_hat;
        out.stderr_ = est.stderr_lambda;
        break;
    case Target::observable_average:
        out.value = est.phi_hat;
        out.stderr_ = est.stderr_phi;
        break;
    case Target::average_of_w: {
        // re-run with W as the recorded observable
        ProblemSpec spec_w = spec;
        spec_w.phi = [&spec](double q) { return spec.W.eval(q); };
        const SmcEstimate est_w = smc_run(spec_w, mc, cfg.threads);
        out.value = est_w.phi_hat;
        out.stderr_ = est_w.stderr_phi;
        break;
    }
    }
    return out;
}

double reference_value(const ProblemSpec& spec, const SweepConfig& cfg,
                       const ContinuumReference& ref, const Method& method, Target target,
                       double dt) {
    if (cfg.reference == ReferenceKind::galerkin_dt0) {
        switch (target) {
        case Target::eigenvalue:
            return ref.lambda0;
        case Target::observable_average:
            return observable_average(ref.nu_w, spec.phi);
        case Target::average_of_w:
            // equals lambda0 in exact arithmetic; quadrature keeps them
            // independently computed
            return observable_average(ref.nu_w, [&spec](double q) { return spec.W.eval(q); });
        }
    }
    const SchemeEigen se = scheme_eigen(spec, cfg.N, dt, method.delta);
    switch (target) {
    case Target::eigenvalue:
        return se.lambda_dt;
    case Target::observable_average:
        return observable_average(se.nu_w_dt, spec.phi);
    case Target::average_of_w:
        return observable_average(se.nu_w_dt, [&spec](double q) { return spec.W.eval(q); });
    }
    throw config_error("run_sweep: unknown target");
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    return run_sweep(config, preset(config.preset));
}

SweepResult run_sweep(const SweepConfig& config, const ProblemSpec& spec) {
    config.validate();
    const ContinuumReference ref = continuum_reference(spec, config.N);

    SweepResult result;
    for (const Method& method : config.methods) {
        for (Target target : config.targets) {
            std::vector<std::size_t> group_rows;
            std::vector<std::pair<double, double>> fit_input;
            for (double dt : config.dt_grid) {
                SweepRow row;
                row.method = method;
                row.target = target;
                row.dt = dt;
                row.order_fit = nan_value();
                row.r2 = nan_value();
                try {
                    const CellValue cell = evaluate_cell(spec, config, method, target, dt);
                    row.value = cell.value;
                    row.stderr_ = cell.stderr_;
                    row.reference = reference_value(spec, config, ref, method, target, dt);
                    row.error = std::fabs(row.value - row.reference);
                    const bool stochastic = method.source == Source::mc;
                    const bool usable = stochastic
                                            ? (std::isfinite(row.stderr_) &&
                                               row.error > 10.0 * row.stderr_)
                                            : row.error > kDeterministicFloor;
                    if (usable)
                        fit_input.emplace_back(dt, row.error);
                } catch (const std::exception& e) {
                    row.value = nan_value();
                    row.reference = nan_value();
                    row.error = nan_value();
                    row.stderr_ = nan_value();
                    row.error_message = e.what();
                }
                group_rows.push_back(result.rows.size());
                result.rows.push_back(std::move(row));
            }
            if (fit_input.size() >= 2) {
                const OrderFit fit = fit_order(fit_input);
                for (std::size_t idx : group_rows) {
                    result.rows[idx].order_fit = fit.slope;
                    result.rows[idx].r2 = fit.r2;
                }
            }
        }
    }
    return result;
}

RichardsonReport richardson_check(Preset preset_id, int p, double delta,
                                  std::pair<double, double> dt_pair, int N) {
    if (!(dt_pair.first > dt_pair.second && dt_pair.second > 0.0))
        throw config_error("richardson_check: dt_pair must be decreasing and positive");

    const ProblemSpec spec = preset(preset_id);
    const LeadingCorrection corr = leading_correction(spec, N, p, delta);
    const ContinuumReference ref = continuum_reference(spec, N);

    RichardsonReport rep;
    rep.p = p;
    rep.delta = delta;
    rep.dt[0] = dt_pair.first;
    rep.dt[1] = dt_pair.second;
    rep.lambda0 = ref.lambda0;
    rep.avg0 = observable_average(ref.nu_w, spec.phi);
    rep.theory_avg = corr.correction_phi;

    double factorial_p1 = 1.0;
    for (int i = 2; i <= p + 1; ++i)
        factorial_p1 *= i;
    rep.theory_lambda = corr.lambda_p1 - std::pow(ref.lambda0, p + 1) / factorial_p1;

    for (int i = 0; i < 2; ++i) {
        const double dt = rep.dt[i];
        const SchemeEigen se = scheme_eigen(spec, N, dt, delta);
        const double avg_dt = observable_average(se.nu_w_dt, spec.phi);
        const double dtp = std::pow(dt, p);
        rep.emp_avg[i] = (avg_dt - rep.avg0) / dtp;
        rep.emp_lambda[i] = (se.lambda_dt - rep.lambda0) / dtp;
        rep.avg_abs_dev[i] = std::fabs(rep.emp_avg[i] - rep.theory_avg);
        rep.lambda_abs_dev[i] = std::fabs(rep.emp_lambda[i] - rep.theory_lambda);
        rep.avg_rel_dev[i] = rep.avg_abs_dev[i] / std::fabs(rep.theory_avg);
        rep.lambda_rel_dev[i] = rep.lambda_abs_dev[i] / std::fabs(rep.theory_lambda);
    }
    return rep;
}

CompareReport compare_mc_galerkin(Preset preset_id, const std::vector<double>& dt_grid,
                                  const SmcConfig& smc_template, int N, int threads) {
    const ProblemSpec spec = preset(preset_id);
    CompareReport rep;
    for (double dt : dt_grid) {
        for (double delta : {0.0, 0.5}) {
            CompareCell cell;
            cell.dt = dt;
            cell.delta = delta;

            const SchemeEigen se = scheme_eigen(spec, N, dt, delta);
            cell.gal_lambda = se.lambda_dt;
            cell.gal_phi = observable_average(se.nu_w_dt, spec.phi);

            SmcConfig mc = smc_template;
            mc.dt = dt;
            mc.rule.delta = delta;
            const SmcEstimate est = smc_run(spec, mc, threads);
            cell.mc_lambda = est.lambda_hat;
            cell.mc_phi = est.phi_hat;
            cell.stderr_lambda = est.stderr_lambda;
            cell.stderr_phi = est.stderr_phi;
            cell.z_lambda = (est.lambda_hat - se.lambda_dt) / est.stderr_lambda;
            cell.z_phi = (est.phi_hat - cell.gal_phi) / est.stderr_phi;
            cell.flagged = std::fabs(cell.z_lambda) > 4.0 || std::fabs(cell.z_phi) > 4.0;
            rep.cells.push_back(cell);
        }
    }
    return rep;
}

} // namespace fklab
