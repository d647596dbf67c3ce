#pragma once

#include <map>
#include <string>

#include "nefem/nurbs.hpp"

namespace nefem {

/// Boundary curves keyed by their file id.
using CurveSet = std::map<int, NurbsCurve>;

/// Plain-text curve file, one block per curve:
///   curve <id> degree <p> nctrl <n>
///   <n+p+1 knot values>
///   <n lines: x y w>
/// Blank lines and '#' comments are skipped. write_curves emits a
/// canonical form (shortest round-trippable doubles) so that
/// read -> write -> read -> write is byte-identical.
CurveSet read_curves(const std::string& path);
void write_curves(const CurveSet& curves, const std::string& path);

}  // namespace nefem
