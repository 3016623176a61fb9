#pragma once

#include "gapkit/types.hpp"

#include <optional>
#include <utility>

namespace gapkit {

struct RegularityDiagnostics {
    double a = 0.0;
    // (R, value of integral over [-R, R]) at R/8, R/4, R/2, R.
    std::vector<std::pair<double, double>> partial_integrals;
    double slope = 0.0;          // fitted coefficient of ln R in the tail
    double fitted_density = 0.0; // counting average over the window
    Verdict verdict = Verdict::Inconclusive;
};

// Integral of |n(x) - a x| / (1 + x^2) over [-R, R], evaluated exactly on
// each interval between breakpoints via the closed-form antiderivative
// c*atan(x) - (a/2)*ln(1+x^2).
RegularityDiagnostics regularity_integral(const DiscreteSet& set, double a, double R);

struct RedhefferAssignment {
    double a = 0.0;
    std::vector<std::pair<double, long long>> pairs; // (lambda_k, n_k)
    std::vector<std::pair<long long, double>> partial_sums; // (count, sum)
    double total = 0.0;
    double slope = 0.0; // partial sums vs ln(count)
    Verdict verdict = Verdict::Inconclusive;
};

// Order-preserving assignment n_k = round(a*lambda_k) with a monotone repair
// pass shifting colliding indices outward; n_k are distinct nonzero integers.
RedhefferAssignment redheffer_sum(const DiscreteSet& set, double a,
                                  long long max_points = 0);

struct DensityEstimate {
    double estimate = 0.0;
    double lo = 0.0, hi = 0.0; // bracket
    std::string method;
    std::optional<double> exact;  // for periodic lattice families
    bool exact_agrees = false;    // exact value inside the bracket
    bool conclusive = true;       // false when the bracket is wider than 0.1
};

struct DensityOptions {
    double radius = 1000.0;       // truncation used for sums/integrals
    int bisection_steps = 14;
    double bracket_pad = 0.025;   // verdict dead-zone inflation
    double slope_threshold = 0.02; // Redheffer divergence threshold
};

// Bisection over a on redheffer_sum verdicts; bracket inflated by the
// verdict dead zone. Lattice families also report the exact periodic value.
DensityEstimate upper_bm_density(const DiscreteSet& set, const DensityOptions& opts = {});

// Lattice subsets use the complementarity identity against the upper density
// of the complement; other sets are snapped to a lattice first.
DensityEstimate lower_bm_density(const DiscreteSet& set, const DensityOptions& opts = {});

// Independent lower estimate: centre of the a-zone where the set itself
// passes the regularity-integral verdict.
DensityEstimate lower_bm_direct_witness(const DiscreteSet& set,
                                        const DensityOptions& opts = {});

struct ComplementarityReport {
    DensityEstimate lower;            // direct witness route on the set
    DensityEstimate upper_complement; // Redheffer route on the complement
    double alpha = 0.0;
    double residual = 0.0; // |lower + upper - 1/alpha|
};

// Checks D_low(set) + D_up(complement in alpha*Z) = 1/alpha with the two
// routes computed independently.
ComplementarityReport complementarity_check(const DiscreteSet& set,
                                            const DensityOptions& opts = {});

struct DensityReport {
    DensityEstimate upper;
    DensityEstimate lower;
};

DensityReport density_report(const DiscreteSet& set, const DensityOptions& opts = {});

// Complement of a lattice-subset generator within alpha*Z (errors otherwise).
Generator lattice_complement(const Generator& gen);

// Exact periodic density when the generator determines one.
std::optional<double> exact_density(const Generator& gen);

} // namespace gapkit
