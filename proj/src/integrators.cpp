#include "fklab/integrators.hpp"

#include <cmath>

#include "fklab/errors.hpp"

namespace fklab {

IntegratorKind integrator_from_name(std::string_view name) {
    if (name == "euler")
        return IntegratorKind::euler;
    if (name == "weak2")
        return IntegratorKind::weak2;
    throw config_error("unknown integrator: " + std::string(name));
}

std::string_view integrator_name(IntegratorKind k) {
    return k == IntegratorKind::euler ? "euler" : "weak2";
}

TorusPoint euler_step(const ProblemSpec& spec, TorusPoint q, double dt, double g) {
    if (!(dt > 0.0))
        throw config_error("euler_step: dt must be positive");
    const double b = -spec.V1.eval(q.q) + spec.gamma;
    return wrap(q.q + b * dt + spec.sigma * std::sqrt(dt) * g);
}

TorusPoint weak2_step(const ProblemSpec& spec, TorusPoint q, double dt, double g) {
    if (!(dt > 0.0))
        throw config_error("weak2_step: dt must be positive");
    const double noise = spec.sigma * std::sqrt(dt) * g;
    // interior predictor; V' is periodic so the unwrapped point is fine
    const double mid = q.q + (-spec.V1.eval(q.q) + spec.gamma) * dt / 2.0 + noise / 2.0;
    const double x = q.q - spec.V1.eval(mid) * dt + spec.gamma * dt -
                     (spec.sigma * spec.sigma / 8.0) * spec.V3.eval(q.q) * dt * dt + noise;
    return wrap(x);
}

TorusPoint step(IntegratorKind kind, const ProblemSpec& spec, TorusPoint q, double dt, double g) {
    return kind == IntegratorKind::euler ? euler_step(spec, q, dt, g)
                                         : weak2_step(spec, q, dt, g);
}

} // namespace fklab
