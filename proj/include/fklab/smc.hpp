#ifndef FKLAB_SMC_HPP
#define FKLAB_SMC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "fklab/integrators.hpp"
#include "fklab/model.hpp"
#include "fklab/rng.hpp"

namespace fklab {

// Quadrature rule for the time integral of W over one step:
//   chi_delta(q, q', dt) = dt * [ (1-delta) W(q) + delta W(q') ]
// delta = 0 is left-point integration, delta = 1/2 the trapezoid rule.
struct QuadratureRule {
    double delta = 0.0;
};

double chi(QuadratureRule rule, const ProblemSpec& spec, TorusPoint q,
           TorusPoint q_next, double dt);

struct SmcConfig {
    int M = 5000;                   // replica count
    double dt = 0.1;                // timestep
    double T = 200.0;               // total time; n_iter = floor(T/dt)
    double burn_in_fraction = 0.5;  // leading fraction of records discarded
    std::uint64_t seed = 0;
    IntegratorKind integrator = IntegratorKind::euler;
    QuadratureRule rule{};
    int realizations = 1;

    long n_iter() const;
    void validate() const;
};

// SMC state: replica positions plus the mean replica weight of the last step.
struct Population {
    std::vector<TorusPoint> positions;
    double step_mass = 1.0;
};

struct PropagateResult {
    std::vector<TorusPoint> proposed;
    std::vector<double> weights; // w_m = exp(chi), strictly positive for bounded W
    double mass = 0.0;           // mean weight (1/M) sum w_m
};

// Move every replica by one integrator step using an independent draw from
// its own stream, and weigh the move. streams must have size M.
PropagateResult propagate_and_weigh(const ProblemSpec& spec, const SmcConfig& config,
                                    const Population& population,
                                    std::vector<CounterRng>& streams);

// M i.i.d. categorical draws proportional to weights, by binary search on
// the cumulative weight array. Throws numerical_error on a weight <= 0 or
// non-finite.
std::vector<TorusPoint> resample_multinomial(const std::vector<double>& weights,
                                             const std::vector<TorusPoint>& positions,
                                             CounterRng& rng);

// (1/dt) log( arithmetic mean of the kept step masses )
double estimate_lambda(const std::vector<double>& kept_masses, double dt);

struct SmcEstimate {
    double lambda_hat = 0.0;
    double phi_hat = 0.0;
    std::vector<std::pair<double, double>> per_realization; // (lambda, phi)
    double stderr_lambda = 0.0; // NaN when realizations < 2
    double stderr_phi = 0.0;
};

// Per-step diagnostics of one realization (mass P^n and observable mean),
// recorded before burn-in discarding.
struct SmcTrace {
    std::vector<double> masses;
    std::vector<double> observables;
};

// Full population run: replicas start i.i.d. uniform on [0,1), every step is
// propagate / weigh / resample / record, the first burn_in fraction of the
// records is discarded, and the whole procedure is repeated for R
// realizations with decorrelated streams. Bit-identical output for a given
// (config, seed), independent of the thread count.
SmcEstimate smc_run(const ProblemSpec& spec, const SmcConfig& config, int threads = 1,
                    SmcTrace* trace_first_realization = nullptr);

} // namespace fklab

#endif
