#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fklab/config.hpp"
#include "fklab/emit.hpp"
#include "fklab/errors.hpp"
#include "fklab/galerkin.hpp"
#include "fklab/harness.hpp"

namespace fs = std::filesystem;
using namespace fklab;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--set", opts.overrides, "override a config key, key=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "override the RNG seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--threads", opts.threads, "worker threads (0: hardware)");
}

ExperimentConfig load(const CommonOpts& opts) {
    ExperimentConfig cfg =
        opts.config_path.empty() ? default_config() : parse_config(opts.config_path);
    cfg = apply_overrides(std::move(cfg), opts.overrides);
    if (opts.seed_set)
        cfg.seed = opts.seed;
    return cfg;
}

int effective_threads(const CommonOpts& opts) {
    if (opts.threads > 0)
        return opts.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

fs::path prepare_out(const CommonOpts& opts) {
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

SweepResult compare_to_sweep_rows(const CompareReport& rep) {
    // flatten the comparison into sweep-style rows for CSV/SVG reuse
    SweepResult res;
    for (const auto& c : rep.cells) {
        SweepRow lam;
        lam.method = Method{Source::mc, IntegratorKind::euler, c.delta};
        lam.target = Target::eigenvalue;
        lam.dt = c.dt;
        lam.value = c.mc_lambda;
        lam.reference = c.gal_lambda;
        lam.error = std::fabs(c.mc_lambda - c.gal_lambda);
        lam.stderr_ = c.stderr_lambda;
        lam.order_fit = std::numeric_limits<double>::quiet_NaN();
        lam.r2 = std::numeric_limits<double>::quiet_NaN();
        res.rows.push_back(lam);

        SweepRow phi = lam;
        phi.target = Target::observable_average;
        phi.value = c.mc_phi;
        phi.reference = c.gal_phi;
        phi.error = std::fabs(c.mc_phi - c.gal_phi);
        phi.stderr_ = c.stderr_phi;
        res.rows.push_back(phi);
    }
    return res;
}

int run_command(const std::string& command, const CommonOpts& opts) {
    const ExperimentConfig cfg = load(opts);
    const fs::path out_dir = prepare_out(opts);
    const int threads = effective_threads(opts);

    if (command == "run-mc") {
        const ProblemSpec spec = preset(cfg.preset_id());
        SmcConfig smc = cfg.smc_template();
        const SmcEstimate est = smc_run(spec, smc, threads);
        std::cout << "preset " << cfg.preset << " integrator " << cfg.integrator << " delta "
                  << cfg.delta << " dt " << format_double(smc.dt) << "\n";
        std::cout << "lambda_hat " << format_double(est.lambda_hat) << " +/- "
                  << format_double(est.stderr_lambda) << "\n";
        std::cout << "phi_hat " << format_double(est.phi_hat) << " +/- "
                  << format_double(est.stderr_phi) << "\n";
        return 0;
    }

    if (command == "run-galerkin") {
        const ProblemSpec spec = preset(cfg.preset_id());
        const GalerkinReport rep = galerkin_report(spec, cfg.N, cfg.single_dt(), cfg.delta);
        std::cout << "preset " << cfg.preset << " N " << cfg.N << " dt "
                  << format_double(cfg.single_dt()) << " delta " << cfg.delta << "\n";
        std::cout << "lambda0 " << format_double(rep.lambda0) << "\n";
        std::cout << "lambda_dt " << format_double(rep.lambda_dt) << "\n";
        for (const auto& [name, value] : rep.averages)
            std::cout << name << " " << format_double(value) << "\n";
        return 0;
    }

    if (command == "sweep") {
        const SweepResult result = run_sweep(cfg.sweep_config(threads));
        for (const auto& row : result.rows)
            if (!row.error_message.empty())
                std::cerr << "{\"error\":\"numerical\",\"cell\":\"dt=" << row.dt
                          << "\",\"message\":\"" << row.error_message << "\"}\n";
        const fs::path csv = out_dir / (cfg.csv_name.empty() ? "sweep.csv" : cfg.csv_name);
        emit_csv(result, csv.string());
        std::cout << "wrote " << csv.string() << "\n";
        const fs::path svg = out_dir / (cfg.svg_name.empty() ? "sweep.svg" : cfg.svg_name);
        if (emit_svg_loglog(result, svg.string()))
            std::cout << "wrote " << svg.string() << "\n";
        else
            std::cerr << "{\"warning\":\"no plottable rows, svg skipped\"}\n";
        return 0;
    }

    if (command == "richardson") {
        const double dt = cfg.single_dt();
        const RichardsonReport rep =
            richardson_check(cfg.preset_id(), cfg.p, cfg.delta, {dt, dt / 2.0}, cfg.N);
        std::cout << "preset " << cfg.preset << " p " << rep.p << " delta " << rep.delta << "\n";
        std::cout << "lambda0 " << format_double(rep.lambda0) << " avg0 "
                  << format_double(rep.avg0) << "\n";
        std::cout << "theory_avg_coeff " << format_double(rep.theory_avg) << "\n";
        std::cout << "theory_lambda_coeff " << format_double(rep.theory_lambda) << "\n";
        for (int i = 0; i < 2; ++i) {
            std::cout << "dt " << format_double(rep.dt[i]) << " emp_avg_coeff "
                      << format_double(rep.emp_avg[i]) << " rel_dev "
                      << format_double(rep.avg_rel_dev[i]) << "\n";
            std::cout << "dt " << format_double(rep.dt[i]) << " emp_lambda_coeff "
                      << format_double(rep.emp_lambda[i]) << " rel_dev "
                      << format_double(rep.lambda_rel_dev[i]) << "\n";
        }
        return 0;
    }

    if (command == "compare") {
        SmcConfig smc = cfg.smc_template();
        const CompareReport rep =
            compare_mc_galerkin(cfg.preset_id(), cfg.dt_grid, smc, cfg.N, threads);
        bool any_flagged = false;
        for (const auto& c : rep.cells) {
            std::cout << "dt " << format_double(c.dt) << " delta " << c.delta << " z_lambda "
                      << format_double(c.z_lambda) << " z_phi " << format_double(c.z_phi)
                      << (c.flagged ? "  FLAGGED" : "") << "\n";
            any_flagged = any_flagged || c.flagged;
        }
        const fs::path csv = out_dir / (cfg.csv_name.empty() ? "compare.csv" : cfg.csv_name);
        emit_csv(compare_to_sweep_rows(rep), csv.string());
        std::cout << "wrote " << csv.string() << "\n";
        if (any_flagged)
            std::cerr << "{\"warning\":\"z-score above 4 in at least one cell\"}\n";
        return 0;
    }

    throw config_error("unknown command: " + command);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feynman-Kac semigroup laboratory: population Monte Carlo and "
                 "Fourier-Galerkin reference solutions on the 1-D torus"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"run-mc", "run-galerkin", "sweep", "richardson",
                                               "compare"};
    std::vector<CommonOpts> opts(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i)
        add_common(app.add_subcommand(commands[i]), opts[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i)
            if (app.get_subcommand(commands[i])->parsed())
                return run_command(commands[i], opts[i]);
        std::cerr << "{\"error\":\"configuration\",\"message\":\"no command given\"}\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "{\"error\":\"configuration\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "{\"error\":\"numerical\",\"message\":\"" << e.what() << "\"}\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"internal\",\"message\":\"" << e.what() << "\"}\n";
        return 1;
    }
}
