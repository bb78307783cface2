#pragma once

#include <string>

#include "conjbound/bounds_lab.hpp"
#include "conjbound/circle_measures.hpp"
#include "conjbound/disk_geometry.hpp"
#include "conjbound/harmonic_eval.hpp"

namespace conjbound::io {

// All parsers throw ParseError.  Syntax errors carry "line L, column C".
//
//   boundary set: {"arcs": [[alpha, beta], ...]}
//   measure:      {"atoms": [[theta, mass], ...],
//                  "density": {"pieces": [[a, b, "const:c" | "lip:slope,offset"], ...]},
//                  "cantor": {"base": [a, b], "depth": d, "mass": m}}
//   spec:         {"alpha": A, "measure": {...}}
BoundarySet parse_boundary_set(const std::string& text);
CircleMeasure parse_measure(const std::string& text);
HarmonicSpec parse_spec(const std::string& text);

std::string to_json(const BoundarySet& e);
std::string to_json(const CircleMeasure& mu);

// {"layers": [{"k", "radius", "sup", "argmax": [r, theta], "rho"}...],
//  "constant", "verdict", ...}.  Pretty-printed with two-space indent.
std::string to_json(const VerificationReport& rep);

}  // namespace conjbound::io
