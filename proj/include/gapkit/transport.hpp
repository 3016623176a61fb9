#pragma once

#include "gapkit/gap.hpp"
#include "gapkit/types.hpp"

namespace gapkit {

struct InterlacedPair {
    DiscreteSet base;      // lambda_j
    DiscreteSet perturbed; // lambda~_j, strictly interlacing
    std::vector<double> offsets;
    double delta = 0.0;
};

// Verifies equal cardinality, delta < separation(base)/4, offsets strictly
// inside (delta/2, delta), 0 off both sets, and strict interlacing; errors
// name the first offending index.
InterlacedPair validate_interlacing(const DiscreteSet& base, const DiscreteSet& perturbed,
                                    double delta);

// Convenience: build the perturbed set from seeded offsets in (delta/2, delta).
InterlacedPair make_interlaced_pair(const DiscreteSet& base, double delta,
                                    std::uint64_t seed);

struct PhiValue {
    complex_t value{0.0, 0.0};
    double convergence_proxy = 0.0; // relative change over the last window doubling
};

// phi(z) = -prod_j (1 - z/lambda_j)/(1 - z/lambda~_j), factors paired by
// index and swept symmetrically outward in |lambda|.
PhiValue phi_eval(const InterlacedPair& pair, complex_t z);

struct HerglotzData {
    std::vector<double> c; // positive residues, indexed like pair.perturbed
    double b1 = 0.0;
    double b2 = 0.0;
    // Partial sums of c_k / lambda~_k^2 at window fractions 1/4, 1/2, 1.
    std::vector<std::pair<long long, double>> weighted_sum_partials;
    double weighted_sum_growth = 0.0; // relative growth over the last doubling
    double reconstruction_rel_err = 0.0;
};

// Residues c_k = -(residue of phi at lambda~_k) from the product with the
// k-th denominator factor removed; b1 from the top decade of phi(iy)/(iy);
// b2 from phi at a real regular point after subtracting the sum.
HerglotzData herglotz_residues(const InterlacedPair& pair);

struct TransportResult {
    std::vector<complex_t> e; // per perturbed point
    complex_t f1{0.0, 0.0}, f2{0.0, 0.0};
    double x1 = 0.0, x2 = 0.0;
    std::vector<std::pair<long long, double>> l1_partials;
    double l1_growth = 0.0; // relative growth over the last doubling
    double partial_fraction_rel_err = 0.0;
    AtomicMeasure nu; // sum e_k delta_{lambda~_k} + f1 delta_{x1} + f2 delta_{x2}
};

struct TransportOptions {
    double min_decay_exponent = 2.0; // required fit on |d_j|
    double tail_tol = 1e-12;
    bool check_partial_fractions = true;
};

// Default anchors: x1 = min(perturbed) - 0.37*d, x2 = max(window) + 0.61*d.
std::pair<double, double> default_anchors(const InterlacedPair& pair);

// e_k = c_k / ((lambda~_k - x1)(lambda~_k - x2)) * sum_j d_j/(lambda_j - lambda~_k),
// f_j = residues of psi at the anchors; validates the partial-fraction
// identity for psi at 20 off-axis points.
TransportResult transport_measure(const InterlacedPair& pair, const AtomicMeasure& mu,
                                  double x1, double x2,
                                  const TransportOptions& opts = {});

struct TransportCertificate {
    double a = 0.0;
    std::vector<std::pair<double, Verdict>> cauchy; // (b, verdict)
    double scan_sup = 0.0;
    double scan_budget = 0.0; // 1e-3 * total variation
    bool trivial = false;     // zero measure flagged, not certified
    bool pass = false;
};

// Runs cauchy_gap_test at b in {a/2, 3a/4} (or a caller-provided ladder) and
// an FT scan over (-0.9a, 0.9a); pass requires decaying verdicts and
// scan_sup below the budget.
TransportCertificate verify_transport(const AtomicMeasure& nu, double a,
                                      const std::vector<double>& b_ladder = {});

} // namespace gapkit
