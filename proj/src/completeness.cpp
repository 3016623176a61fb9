#include "gapkit/completeness.hpp"

#include "gapkit/core_sets.hpp"
#include "gapkit/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gapkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRidge = 1e-10;

double sinc_ip(double u, double v, double a) {
    const double d = u - v;
    if (d == 0.0) return 2.0 * a;
    return 2.0 * std::sin(a * d) / d;
}

} // namespace

double completeness_defect_oracle(const DiscreteSet& set, double a, int n_points,
                                  int m_trials) {
    if (a <= 0.0) throw Error("interval level a must be positive");
    if (m_trials < 1 || m_trials > 4096) throw Error("trial dimension out of range");
    if (set.empty()) return 1.0; // nothing to project onto

    std::vector<double> pts(set.points);
    std::sort(pts.begin(), pts.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });
    if (static_cast<int>(pts.size()) > n_points) pts.resize(static_cast<std::size_t>(n_points));
    std::sort(pts.begin(), pts.end());
    const int n = static_cast<int>(pts.size());

    std::vector<double> gram;
    kernels::gram_fill_parallel(pts, a, gram);
    Eigen::MatrixXd G(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            G(k, l) = gram[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) +
                           static_cast<std::size_t>(l)];
    G.diagonal().array() += kRidge;
    Eigen::LDLT<Eigen::MatrixXd> solver(G);

    const double beta = a / (2.0 * static_cast<double>(m_trials));
    double worst = 0.0;
    Eigen::VectorXd b(n);
    for (int m = 0; m < m_trials; ++m) {
        const double freq = beta * static_cast<double>(m);
        for (int k = 0; k < n; ++k) b(k) = sinc_ip(freq, pts[static_cast<std::size_t>(k)], a);
        const Eigen::VectorXd x = solver.solve(b);
        const double res2 = std::max(0.0, 2.0 * a - b.dot(x));
        worst = std::max(worst, std::sqrt(res2 / (2.0 * a)));
    }
    return worst;
}

namespace {

bool complete_at(const DiscreteSet& set, double a, const RadiusOptions& opts) {
    const double small = completeness_defect_oracle(set, a, opts.window, opts.m_trials);
    const double big = completeness_defect_oracle(set, a, 2 * opts.window, opts.m_trials);
    return big < opts.complete_floor || big <= opts.complete_ratio * small;
}

} // namespace

RadiusReport radius_estimate(const DiscreteSet& set, const RadiusOptions& opts) {
    RadiusReport rep;
    const DensityEstimate upper = upper_bm_density(set, opts.density);
    rep.formula_value = kPi * upper.estimate;
    rep.formula_lo = kPi * upper.lo;
    rep.formula_hi = kPi * upper.hi;

    if (set.size() < 8) {
        rep.agree = rep.formula_value <= kPi * 0.05;
        return rep;
    }

    const double d = separation(set);
    const Generator& g = set.generator;
    const double cap = (g.kind == GenKind::Lattice || g.kind == GenKind::LatticeMinus)
                           ? kPi / g.alpha + 1.0
                           : kPi / d + 1.0;
    double lo = 0.0, hi = cap;
    for (int step = 0; step < 11; ++step) {
        const double a = 0.5 * (lo + hi);
        if (complete_at(set, a, opts))
            lo = a;
        else
            hi = a;
    }
    rep.defect_lo = lo;
    rep.defect_hi = hi;
    const double mid = 0.5 * (lo + hi);
    rep.agree = rep.formula_value <= kPointTol
                    ? mid <= 0.2
                    : std::abs(mid - rep.formula_value) <= 0.15 * rep.formula_value;
    return rep;
}

PerturbationCheck perturbation_radius_check(const DiscreteSet& set, double delta, int trials,
                                            std::uint64_t seed, const RadiusOptions& opts) {
    if (delta < 0.0) throw Error("perturbation bound delta must be nonnegative");
    if (set.size() < 2) throw Error("perturbation check needs at least 2 points");
    const double d = separation(set);
    if (delta >= d / 4.0)
        throw Error("perturbation too large: require delta < separation/4");

    DiscreteSet base = with_radius(set, std::max(set.window_radius, opts.density.radius));
    PerturbationCheck out;
    const DensityEstimate upper = upper_bm_density(base, opts.density);
    out.base_radius = kPi * upper.estimate;

    SplitMix64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> pts(base.points);
        if (delta > 0.0)
            for (double& p : pts) p += rng.uniform(-delta, delta);
        DiscreteSet pert = make_set(std::move(pts), explicit_generator(), base.window_radius);
        const DensityEstimate u = upper_bm_density(pert, opts.density);
        out.perturbed_radii.push_back(kPi * u.estimate);
        out.max_deviation = std::max(out.max_deviation,
                                     std::abs(out.perturbed_radii.back() - out.base_radius));
    }
    return out;
}

} // namespace gapkit
