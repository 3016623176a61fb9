#pragma once

#include "gapkit/types.hpp"

#include <string>

namespace gapkit {

// Set DSL accepted by the CLI and config files:
//   lattice:alpha=1[,shift=0.5]
//   lattice-minus:alpha=1,residues=0 mod 3            (removed residues)
//   lattice-minus:alpha=1,residues=0|1 mod 5
//   lattice-minus:alpha=0.5,thin=0.3,seed=0            (seeded thinning)
//   lattice-minus:alpha=1,indices=0|1|2                (removed indices)
//   file:PATH
//   explicit:0,0.3,1.0                                 (may be empty)
//   perturb:base=(lattice:alpha=1),delta=0.2,mode=snap,alpha=0.05[,seed=1]
// Parse errors carry the offending position and what was expected.
Generator parse_set_dsl(const std::string& text);

// Canonical form; parse_set_dsl(format_set_dsl(g)) reproduces g.
std::string format_set_dsl(const Generator& gen);

// Materializes a DSL spec over [-radius, radius]. `file:` specs load the
// stored truncation and error if radius exceeds it.
DiscreteSet set_from_dsl(const std::string& text, double radius);

} // namespace gapkit
