#pragma once

#include "gapkit/density.hpp"
#include "gapkit/types.hpp"

#include <optional>

namespace gapkit {

// Transform convention used everywhere: mu_hat(x) = sum_l c_l e^{i x l}.
complex_t measure_fourier(const AtomicMeasure& mu, double x);

// sup over the grid of |mu_hat| on [lo, hi]. Requires
// step <= pi / (4 max|support|) (anti-aliasing bound).
double ft_gap_scan(const AtomicMeasure& mu, double lo, double hi, double step);

// Convenience: scan with the finest admissible step for a target point count.
double ft_gap_scan_auto(const AtomicMeasure& mu, double lo, double hi,
                        std::size_t min_points = 2048);

// K_mu(z) = sum_l c_l / (z - l); errors on the real axis.
complex_t cauchy_transform(const AtomicMeasure& mu, complex_t z);

struct CauchyDecayTrace {
    double b = 0.0;
    double y_max = 0.0;
    // (y, e^{b|y|} |K(iy)|) on a geometric grid, ascending |y|.
    std::vector<std::pair<double, double>> samples_pos;
    std::vector<std::pair<double, double>> samples_neg;
    Verdict verdict = Verdict::Inconclusive;
};

// Decaying when the trace falls monotonically by a factor >= 9.5 over the
// last decade on both sides; non-decaying when either side grows by >= 10.
// y_max <= 0 selects clamp(12/max(b,0.25), 12, 48).
CauchyDecayTrace cauchy_gap_test(const AtomicMeasure& mu, double b, double y_max = 0.0);

struct GramOracleResult {
    double eigenvalue = 0.0; // smallest eigenvalue of the pencil (G, W)
    double normalized = 0.0; // eigenvalue / (2a / (1+max|point|^2)^2)
    int n_points = 0;
};

// Pencil of the concentration matrix G_{kl} = 2 sin(a(p_k-p_l))/(p_k-p_l)
// against the diagonal weight W_kk = (1+p_k^2)^2, over the n_points points
// of smallest modulus. The normalized value factors out the trivial
// far-atom direction whose Rayleigh quotient is 2a/(1+max p^2)^2.
GramOracleResult gram_gap_oracle(const DiscreteSet& set, double a, int n_points);

struct GapOptions {
    int window = 256;          // oracle size (trend pair window/2, window)
    DensityOptions density;
    bool want_witness = false; // attach a constructive witness when possible
    double feasible_normalized = 1e-4;
    double feasible_ratio = 0.3;
};

struct GapReport {
    std::string set_spec;
    double density_route = 0.0; // pi * lower BM density
    double density_lo = 0.0, density_hi = 0.0;
    double oracle_lo = 0.0, oracle_hi = 0.0; // bisection bracket
    bool agree = false;                      // |routes| within 15 %
    std::optional<AtomicMeasure> witness;
    double witness_scan_sup = 0.0;
    double witness_gap = 0.0;
};

GapReport gap_characteristic_estimate(const DiscreteSet& set, const GapOptions& opts = {});

// Constructive gap measure on a full lattice alpha*Z (+shift): Fourier
// coefficients of a smooth bump vanishing on the arc matching (-a, a),
// computed with a size-4096 discrete transform; coefficients below 1e-14
// are dropped. Requires a < pi/alpha.
AtomicMeasure build_gap_measure(const DiscreteSet& lattice, double a, int m);
AtomicMeasure build_gap_measure(double alpha, double a, int m, double shift = 0.0);

// Function samples on a uniform grid over [lo, hi).
struct GridFunction {
    double lo = 0.0, hi = 0.0;
    std::vector<complex_t> samples;
    double step() const {
        return (hi - lo) / static_cast<double>(samples.empty() ? 1 : samples.size());
    }
};

struct BridgeReport {
    double orthogonality_residual = 0.0; // worst residual against E_Gamma
    long long worst_gamma = 0;
    double removed_coefficient_sup = 0.0; // |a_n| over n in Gamma
    double claimed_gap_length = 0.0;
    Verdict gap_certificate = Verdict::Inconclusive;
};

// Forward bridge: f on (0, 2a) orthogonal to {e^{i g t} : g in Gamma},
// convolved with a smooth bump on [0, eps], expanded over (0, 2pi); returns
// the measure sum_{n not in Gamma} a_n delta_n with a spectral gap of length
// at least 2pi - 2a - eps.
AtomicMeasure bridge_measure_from_function(const std::vector<long long>& gamma,
                                           const GridFunction& f, double eps,
                                           BridgeReport* report = nullptr);

// Backward bridge: samples mu_hat over (0, 2pi) for a measure on a subset of
// Z whose gap has been modulated to (0, 2a); verifies orthogonality to
// E_Gamma for Gamma in the window.
GridFunction bridge_function_from_measure(const AtomicMeasure& mu, double a,
                                          const std::vector<long long>& gamma,
                                          BridgeReport* report = nullptr);

DiscreteSet insert_point(const DiscreteSet& set, double lambda_prime);

// Multiplies weights by h(t) = (sin(eps t/m)/(eps t/m))^m, whose spectrum
// lies in [-eps, eps]; weights gain t^{-m} decay and the certified gap
// shrinks by at most eps. When source_gap > 0, requires
// eps < source_gap - target_gap.
AtomicMeasure tame_coefficients(const AtomicMeasure& mu, double eps, int m,
                                double source_gap = 0.0, double target_gap = 0.0);

// Least-squares exponent fit of |weight| against |support| on a log-log
// scale (supports >= min_support, weights above floor).
double weight_decay_exponent(const AtomicMeasure& mu, double min_support = 8.0,
                             double floor = 1e-13);

} // namespace gapkit
