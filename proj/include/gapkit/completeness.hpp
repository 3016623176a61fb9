#pragma once

#include "gapkit/density.hpp"
#include "gapkit/types.hpp"

namespace gapkit {

// Maximal relative least-squares residual of projecting the trial family
// {e^{i beta m t} : m = 0..M-1}, beta = a/(2M), onto span{e^{i p t}} over
// L^2(-a, a), using the n_points points of smallest modulus. Normal
// equations are ridge-regularized (1e-10).
double completeness_defect_oracle(const DiscreteSet& set, double a, int n_points,
                                  int m_trials);

struct RadiusOptions {
    int window = 64; // trend pair (window, 2*window)
    int m_trials = 16;
    DensityOptions density;
    double complete_floor = 1e-4; // residual below this counts as complete
    double complete_ratio = 1.0 / 3.0;
};

struct RadiusReport {
    double formula_value = 0.0; // pi * upper BM density
    double formula_lo = 0.0, formula_hi = 0.0;
    double defect_lo = 0.0, defect_hi = 0.0; // bisection bracket
    bool agree = false;
};

// Formula route pi * D_up plus the defect-oracle bisection cross-check.
RadiusReport radius_estimate(const DiscreteSet& set, const RadiusOptions& opts = {});

struct PerturbationCheck {
    double base_radius = 0.0;
    std::vector<double> perturbed_radii;
    double max_deviation = 0.0;
};

// Samples `trials` offset vectors uniform in (-delta, delta), recomputes the
// formula-route radius for each perturbation, and reports the worst
// deviation. Requires delta < separation/4.
PerturbationCheck perturbation_radius_check(const DiscreteSet& set, double delta,
                                            int trials, std::uint64_t seed,
                                            const RadiusOptions& opts = {});

} // namespace gapkit
