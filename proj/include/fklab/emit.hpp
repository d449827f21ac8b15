#ifndef FKLAB_EMIT_HPP
#define FKLAB_EMIT_HPP

#include <string>

#include "fklab/harness.hpp"

namespace fklab {

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// CSV with header
//   method,delta,integrator,dt,target,value,reference,error,stderr,order_fit,r2
// one row per sweep cell, deterministic order (method, then dt descending).
// NaN fields are left empty; failed cells keep their row with empty values.
void emit_csv(const SweepResult& result, const std::string& path);

// Self-contained log-log SVG: one polyline per (method, target) series plus
// dashed reference slopes 1 and 2 anchored at the largest dt. Returns false
// (and writes nothing) when no row has a positive error.
bool emit_svg_loglog(const SweepResult& result, const std::string& path);

} // namespace fklab

#endif
