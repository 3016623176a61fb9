#pragma once

#include "gapkit/types.hpp"

#include <string>

namespace gapkit {

// Minimum gap between consecutive points of the truncation.
// Errors for fewer than 2 points.
double separation(const DiscreteSet& set);

// Signed counting function: #(set ∩ [0,x]) for x >= 0, -#(set ∩ (x,0)) for
// x < 0. Errors when |x| exceeds the window radius.
long long counting_function(const DiscreteSet& set, double x);

// The set {p - x : p in set}. Generator metadata becomes explicit.
DiscreteSet translate(const DiscreteSet& set, double x);

struct SnapResult {
    DiscreteSet set;
    std::vector<double> offsets; // per point, all in (delta/2, delta)
};

// Moves every point to the smallest point of alpha*Z strictly greater than
// point + delta/2. Requires delta < separation/4 and alpha <= delta/4.
SnapResult snap_to_lattice(const DiscreteSet& set, double delta, double alpha);

// Seeded variant: offset drawn uniformly in (delta/2, delta), then rounded
// to alpha*Z inside the admissible interval.
SnapResult snap_to_lattice_random(const DiscreteSet& set, double delta, double alpha,
                                  std::uint64_t seed);

// Multiplies the weight at support s by e^{i shift s}; the transform of the
// result at x equals the original transform at x + shift.
AtomicMeasure modulate(const AtomicMeasure& measure, double shift);

// Shifts every support by `shift` (weights unchanged); |transform| is
// preserved pointwise.
AtomicMeasure translate_supports(const AtomicMeasure& measure, double shift);

// Keeps atoms with support in [-radius, radius].
AtomicMeasure restrict_supports(const AtomicMeasure& measure, double radius);

// If 0 lies on the set (within kPointTol), returns a translate moving it
// away; otherwise returns the set unchanged.
DiscreteSet avoid_origin(const DiscreteSet& set);

// --- file formats ---

// Point file: one decimal real per line, '#' comments allowed.
DiscreteSet load_points(const std::string& path);
void save_points(const DiscreteSet& set, const std::string& path);

// Measure file: "support weight_re weight_im" per line, '#' comments.
AtomicMeasure load_measure(const std::string& path);
void save_measure(const AtomicMeasure& measure, const std::string& path);

} // namespace gapkit
