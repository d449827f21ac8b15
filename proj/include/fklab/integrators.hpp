#ifndef FKLAB_INTEGRATORS_HPP
#define FKLAB_INTEGRATORS_HPP

#include <string_view>

#include "fklab/model.hpp"

namespace fklab {

enum class IntegratorKind { euler, weak2 };

IntegratorKind integrator_from_name(std::string_view name);
std::string_view integrator_name(IntegratorKind k);

// One Euler-Maruyama step (weak order 1). The Gaussian draw g is passed in;
// integrators are pure functions, the RNG stream lives with the caller.
TorusPoint euler_step(const ProblemSpec& spec, TorusPoint q, double dt, double g);

// One step of the modified scheme (weak order 2):
//   q' = q - V'( q + (-V'(q)+gamma) dt/2 + sigma sqrt(dt) g / 2 ) dt
//          + gamma dt - (sigma^2/8) V'''(q) dt^2 + sigma sqrt(dt) g
// The same draw g enters the interior predictor (halved) and the final
// noise term. Reduces to euler_step whenever V = 0.
TorusPoint weak2_step(const ProblemSpec& spec, TorusPoint q, double dt, double g);

TorusPoint step(IntegratorKind kind, const ProblemSpec& spec, TorusPoint q, double dt, double g);

} // namespace fklab

#endif
