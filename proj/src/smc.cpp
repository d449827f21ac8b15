#include "fklab/smc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "fklab/errors.hpp"

namespace fklab {

namespace {

// stream roles; the third stream_key coordinate
constexpr std::uint64_t kReplicaRole = 1;
constexpr std::uint64_t kResampleRole = 2;

} // namespace

double chi(QuadratureRule rule, const ProblemSpec& spec, TorusPoint q,
           TorusPoint q_next, double dt) {
    if (!(dt > 0.0))
        throw config_error("chi: dt must be positive");
    return dt * ((1.0 - rule.delta) * spec.W.eval(q) + rule.delta * spec.W.eval(q_next));
}

long SmcConfig::n_iter() const { return static_cast<long>(std::floor(T / dt)); }

void SmcConfig::validate() const {
    if (M < 1)
        throw config_error("SmcConfig: M must be >= 1");
    if (!(dt > 0.0))
        throw config_error("SmcConfig: dt must be positive");
    if (!(T >= dt))
        throw config_error("SmcConfig: T must be >= dt");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw config_error("SmcConfig: burn_in_fraction must lie in [0,1)");
    if (!(rule.delta >= 0.0 && rule.delta <= 1.0))
        throw config_error("SmcConfig: delta must lie in [0,1]");
    if (realizations < 1)
        throw config_error("SmcConfig: realizations must be >= 1");
}

PropagateResult propagate_and_weigh(const ProblemSpec& spec, const SmcConfig& config,
                                    const Population& population,
                                    std::vector<CounterRng>& streams) {
    const int M = static_cast<int>(population.positions.size());
    PropagateResult out;
    out.proposed.resize(M);
    out.weights.resize(M);
    double sum = 0.0;
    for (int m = 0; m < M; ++m) {
        const double g = streams[m].next_normal();
        const TorusPoint next =
            step(config.integrator, spec, population.positions[m], config.dt, g);
        out.proposed[m] = next;
        const double w = std::exp(chi(config.rule, spec, population.positions[m], next, config.dt));
        out.weights[m] = w;
        sum += w;
    }
    out.mass = sum / M;
    return out;
}

std::vector<TorusPoint> resample_multinomial(const std::vector<double>& weights,
                                             const std::vector<TorusPoint>& positions,
                                             CounterRng& rng) {
    const int M = static_cast<int>(weights.size());
    std::vector<double> cumulative(M);
    double total = 0.0;
    for (int m = 0; m < M; ++m) {
        const double w = weights[m];
        if (!(w > 0.0) || !std::isfinite(w))
            throw numerical_error("resample_multinomial: invalid weight at replica " +
                                  std::to_string(m));
        total += w;
        cumulative[m] = total;
    }
    std::vector<TorusPoint> out(M);
    for (int m = 0; m < M; ++m) {
        const double u = rng.next_uniform01() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const int j = std::min<int>(static_cast<int>(it - cumulative.begin()), M - 1);
        out[m] = positions[j];
    }
    return out;
}

double estimate_lambda(const std::vector<double>& kept_masses, double dt) {
    if (kept_masses.empty())
        throw numerical_error("estimate_lambda: empty mass record");
    double s = 0.0;
    for (double p : kept_masses) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw numerical_error("estimate_lambda: non-positive step mass");
        s += p;
    }
    return std::log(s / kept_masses.size()) / dt;
}

namespace {

std::pair<double, double> run_one_realization(const ProblemSpec& spec, const SmcConfig& config,
                                              int realization, SmcTrace* trace) {
    const int M = config.M;
    const long n_iter = config.n_iter();

    std::vector<CounterRng> streams;
    streams.reserve(M);
    for (int m = 0; m < M; ++m)
        streams.emplace_back(stream_key(config.seed, static_cast<std::uint64_t>(realization),
                                        static_cast<std::uint64_t>(m), kReplicaRole));

    Population pop;
    pop.positions.resize(M);
    for (int m = 0; m < M; ++m)
        pop.positions[m] = TorusPoint{streams[m].next_uniform01()};

    std::vector<double> masses(n_iter);
    std::vector<double> observables(n_iter);

    for (long n = 0; n < n_iter; ++n) {
        PropagateResult prop = propagate_and_weigh(spec, config, pop, streams);
        CounterRng resample_rng(stream_key(config.seed, static_cast<std::uint64_t>(realization),
                                           static_cast<std::uint64_t>(n), kResampleRole));
        try {
            pop.positions = resample_multinomial(prop.weights, prop.proposed, resample_rng);
        } catch (const numerical_error& e) {
            throw numerical_error(std::string(e.what()) + " (step " + std::to_string(n) + ")");
        }
        pop.step_mass = prop.mass;
        masses[n] = prop.mass;
        double phi_sum = 0.0;
        for (const TorusPoint& q : pop.positions)
            phi_sum += spec.phi(q.q);
        observables[n] = phi_sum / M;
    }

    if (trace != nullptr) {
        trace->masses = masses;
        trace->observables = observables;
    }

    const long n_burn = static_cast<long>(std::floor(config.burn_in_fraction * n_iter));
    std::vector<double> kept_masses(masses.begin() + n_burn, masses.end());
    const double lambda = estimate_lambda(kept_masses, config.dt);
    double phi_mean = 0.0;
    for (long n = n_burn; n < n_iter; ++n)
        phi_mean += observables[n];
    phi_mean /= static_cast<double>(n_iter - n_burn);
    return {lambda, phi_mean};
}

} // namespace

SmcEstimate smc_run(const ProblemSpec& spec, const SmcConfig& config, int threads,
                    SmcTrace* trace_first_realization) {
    config.validate();
    const int R = config.realizations;

    SmcEstimate est;
    est.per_realization.resize(R);

    if (threads <= 1 || R == 1) {
        for (int r = 0; r < R; ++r)
            est.per_realization[r] = run_one_realization(
                spec, config, r, r == 0 ? trace_first_realization : nullptr);
    } else {
        // realizations are independent; results land in their own slot so the
        // reduction below is ordered and thread-count independent
        std::vector<std::future<std::pair<double, double>>> futures(R);
        for (int r = 0; r < R; ++r)
            futures[r] = std::async(std::launch::async, run_one_realization, std::cref(spec),
                                    std::cref(config), r,
                                    r == 0 ? trace_first_realization : nullptr);
        for (int r = 0; r < R; ++r)
            est.per_realization[r] = futures[r].get();
    }

    double lambda_sum = 0.0;
    double phi_sum = 0.0;
    for (const auto& [l, p] : est.per_realization) {
        lambda_sum += l;
        phi_sum += p;
    }
    est.lambda_hat = lambda_sum / R;
    est.phi_hat = phi_sum / R;

    if (R >= 2) {
        double vl = 0.0;
        double vp = 0.0;
        for (const auto& [l, p] : est.per_realization) {
            vl += (l - est.lambda_hat) * (l - est.lambda_hat);
            vp += (p - est.phi_hat) * (p - est.phi_hat);
        }
        est.stderr_lambda = std::sqrt(vl / (R - 1)) / std::sqrt(static_cast<double>(R));
        est.stderr_phi = std::sqrt(vp / (R - 1)) / std::sqrt(static_cast<double>(R));
    } else {
        est.stderr_lambda = std::numeric_limits<double>::quiet_NaN();
        est.stderr_phi = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

} // namespace fklab
