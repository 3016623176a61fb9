#include "gapkit/density.hpp"

#include "gapkit/core_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapkit {

namespace {

double fit_slope_vs_log(const std::vector<std::pair<double, double>>& xy) {
    // Least-squares slope of y against ln(x).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xy.size());
    for (const auto& [x, y] : xy) {
        const double lx = std::log(x);
        sx += lx;
        sy += y;
        sxx += lx * lx;
        sxy += lx * y;
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return 0.0;
    return (n * sxy - sx * sy) / den;
}

double counting_average(const DiscreteSet& set, double R) {
    long long count = 0;
    for (double p : set.points)
        if (std::abs(p) <= R) ++count;
    return static_cast<double>(count) / (2.0 * R);
}

// Exact integral of |c - a x| / (1 + x^2) over [u, v] where the counting
// function is constant c; splits at the root c/a when it lies inside.
double piece_integral(double c, double a, double u, double v) {
    auto anti = [&](double x) { return c * std::atan(x) - 0.5 * a * std::log1p(x * x); };
    auto signed_part = [&](double uu, double vv) {
        const double mid = 0.5 * (uu + vv);
        const double s = (c - a * mid) >= 0.0 ? 1.0 : -1.0;
        return s * (anti(vv) - anti(uu));
    };
    if (a != 0.0) {
        const double root = c / a;
        if (root > u && root < v)
            return signed_part(u, root) + signed_part(root, v);
    }
    return signed_part(u, v);
}

double regularity_value(const DiscreteSet& set, double a, double R) {
    // Breakpoints: the set's points inside (-R, R) plus the window ends.
    std::vector<double> bks;
    bks.push_back(-R);
    for (double p : set.points)
        if (p > -R && p < R) bks.push_back(p);
    bks.push_back(R);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bks.size(); ++i) {
        const double u = bks[i], v = bks[i + 1];
        if (v <= u) continue;
        const long long c = counting_function(set, 0.5 * (u + v));
        total += piece_integral(static_cast<double>(c), a, u, v);
    }
    return total;
}

} // namespace

RegularityDiagnostics regularity_integral(const DiscreteSet& set, double a, double R) {
    if (a < 0.0) throw Error("density candidate a must be nonnegative");
    if (R <= 0.0) throw Error("window radius must be positive");
    DiscreteSet s = set;
    if (R > set.window_radius + kPointTol) s = with_radius(set, R);

    RegularityDiagnostics d;
    d.a = a;
    for (double f : {8.0, 4.0, 2.0, 1.0})
        d.partial_integrals.emplace_back(R / f, regularity_value(s, a, R / f));
    d.slope = fit_slope_vs_log(d.partial_integrals);
    d.fitted_density = counting_average(s, R);

    const double unit = std::max(1.0, 2.0 * d.fitted_density);
    const double tau = 0.05 * unit;
    const double expected_rate = 2.0 * std::abs(a - d.fitted_density);
    if (expected_rate >= tau && d.slope >= 0.5 * expected_rate)
        d.verdict = Verdict::Diverging;
    else if (d.slope < tau)
        d.verdict = Verdict::Converging;
    else
        d.verdict = Verdict::Inconclusive;
    return d;
}

RedhefferAssignment redheffer_sum(const DiscreteSet& set, double a, long long max_points) {
    if (a <= 0.0) throw Error("density candidate a must be positive");
    for (double p : set.points)
        if (std::abs(p) <= kPointTol)
            throw Error("0 lies on the set: translate it away from the origin first");

    // Points ordered by |lambda|, optionally truncated.
    std::vector<double> pos, neg;
    for (double p : set.points)
        (p > 0 ? pos : neg).push_back(p);
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end(), std::greater<>());

    RedhefferAssignment r;
    r.a = a;

    // Monotone repair: walk outward on each side, forcing strictly
    // increasing (decreasing) nonzero integers.
    std::vector<std::pair<double, long long>> assigned;
    long long prev = 0;
    for (double lam : pos) {
        long long n = std::max(static_cast<long long>(std::llround(a * lam)), prev + 1);
        assigned.emplace_back(lam, n);
        prev = n;
    }
    prev = 0;
    for (double lam : neg) {
        long long n = std::min(static_cast<long long>(std::llround(a * lam)), prev - 1);
        assigned.emplace_back(lam, n);
        prev = n;
    }
    std::sort(assigned.begin(), assigned.end(),
              [](const auto& x, const auto& y) { return std::abs(x.first) < std::abs(y.first); });
    if (max_points > 0 && static_cast<long long>(assigned.size()) > max_points)
        assigned.resize(static_cast<std::size_t>(max_points));
    r.pairs = assigned;

    const std::size_t m = assigned.size();
    std::vector<double> cumulative(m, 0.0);
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& [lam, n] = assigned[i];
        const double term = std::abs(1.0 / lam - a / static_cast<double>(n));
        const double y = term - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        cumulative[i] = acc;
    }
    r.total = acc;

    if (m >= 8) {
        std::vector<std::pair<double, double>> fit;
        for (double f : {8.0, 4.0, 2.0, 1.0}) {
            const std::size_t idx = static_cast<std::size_t>(static_cast<double>(m) / f) - 1;
            r.partial_sums.emplace_back(static_cast<long long>(idx + 1), cumulative[idx]);
            fit.emplace_back(static_cast<double>(idx + 1), cumulative[idx]);
        }
        r.slope = fit_slope_vs_log(fit);
    } else if (m > 0) {
        r.partial_sums.emplace_back(static_cast<long long>(m), acc);
        r.slope = 0.0;
    }
    r.verdict = r.slope > 0.02 ? Verdict::Diverging : Verdict::Converging;
    return r;
}

std::optional<double> exact_density(const Generator& gen) {
    if (gen.kind == GenKind::Lattice) return 1.0 / gen.alpha;
    if (gen.kind == GenKind::LatticeMinus) {
        if (gen.thin_prob > 0.0) return std::nullopt;
        if (gen.modulus > 0) {
            const double kept = static_cast<double>(gen.modulus -
                                                    static_cast<long long>(gen.residues.size()));
            return kept / (static_cast<double>(gen.modulus) * gen.alpha);
        }
        return 1.0 / gen.alpha; // finitely many removals
    }
    return std::nullopt;
}

Generator lattice_complement(const Generator& gen) {
    if (gen.kind != GenKind::LatticeMinus || gen.modulus <= 0 || gen.thin_prob > 0.0 ||
        !gen.indices.empty())
        throw Error("complement generator is only periodic for residue removals");
    Generator g;
    g.kind = GenKind::LatticeMinus;
    g.alpha = gen.alpha;
    g.shift = gen.shift;
    g.modulus = gen.modulus;
    for (long long r = 0; r < gen.modulus; ++r)
        if (!std::binary_search(gen.residues.begin(), gen.residues.end(), r))
            g.residues.push_back(r);
    return g;
}

namespace {

DiscreteSet thinned_complement_set(const Generator& gen, double radius) {
    std::vector<double> pts;
    long long lo = static_cast<long long>(std::ceil((-radius - gen.shift) / gen.alpha - kPointTol));
    long long hi = static_cast<long long>(std::floor((radius - gen.shift) / gen.alpha + kPointTol));
    for (long long n = lo; n <= hi; ++n) {
        bool removed = false;
        if (gen.modulus > 0) {
            long long r = ((n % gen.modulus) + gen.modulus) % gen.modulus;
            removed = std::binary_search(gen.residues.begin(), gen.residues.end(), r);
        }
        if (!removed && !gen.indices.empty())
            removed = std::binary_search(gen.indices.begin(), gen.indices.end(), n);
        if (!removed && gen.thin_prob > 0.0)
            removed = hash_uniform(gen.thin_seed, n) < gen.thin_prob;
        if (removed) pts.push_back(gen.alpha * static_cast<double>(n) + gen.shift);
    }
    return make_set(std::move(pts), explicit_generator(), radius);
}

DensityEstimate finish_bracket(double flip, const DensityOptions& opts, std::string method) {
    DensityEstimate e;
    e.estimate = flip;
    e.lo = std::max(0.0, flip - opts.bracket_pad);
    e.hi = flip + opts.bracket_pad;
    e.method = std::move(method);
    e.conclusive = (e.hi - e.lo) <= 0.1;
    return e;
}

} // namespace

DensityEstimate upper_bm_density(const DiscreteSet& set, const DensityOptions& opts) {
    DiscreteSet s = with_radius(set, std::max(set.window_radius, opts.radius));
    if (s.size() < 2) {
        DensityEstimate e;
        e.method = "redheffer-bisection";
        e.lo = 0.0;
        e.hi = opts.bracket_pad;
        e.estimate = 0.0;
        return e;
    }
    s = avoid_origin(s);
    const double d = separation(s);
    double lo = 0.0, hi = 1.0 / d + 0.5;
    // Redheffer sums converge above the density and diverge below it.
    for (int step = 0; step < std::max(12, opts.bisection_steps); ++step) {
        const double a = 0.5 * (lo + hi);
        const auto r = redheffer_sum(s, a);
        if (r.verdict == Verdict::Diverging)
            lo = a;
        else
            hi = a;
    }
    DensityEstimate e = finish_bracket(0.5 * (lo + hi), opts, "redheffer-bisection");
    if (auto ex = exact_density(set.generator)) {
        e.exact = *ex;
        e.exact_agrees = (*ex >= e.lo - kPointTol && *ex <= e.hi + kPointTol);
    }
    return e;
}

DensityEstimate lower_bm_direct_witness(const DiscreteSet& set, const DensityOptions& opts) {
    DiscreteSet s = with_radius(set, std::max(set.window_radius, opts.radius));
    DensityEstimate e;
    e.method = "regularity-witness";
    if (s.size() < 2) {
        e.hi = opts.bracket_pad;
        return e;
    }
    const double d = separation(s);
    const double a_max = 1.0 / d + 0.5;
    // The slope of the regularity integral is V-shaped in a with its minimum
    // at the density; locate the converging zone on a coarse grid, then take
    // its centre.
    const int grid = 160;
    double best_a = 0.0, best_slope = std::numeric_limits<double>::infinity();
    double zone_lo = -1.0, zone_hi = -1.0;
    for (int i = 0; i <= grid; ++i) {
        const double a = a_max * static_cast<double>(i) / grid;
        const auto diag = regularity_integral(s, a, opts.radius);
        if (diag.slope < best_slope) {
            best_slope = diag.slope;
            best_a = a;
        }
        if (diag.verdict == Verdict::Converging) {
            if (zone_lo < 0.0) zone_lo = a;
            zone_hi = a;
        }
    }
    if (zone_lo < 0.0) {
        e.estimate = best_a;
        e.lo = std::max(0.0, best_a - opts.bracket_pad);
        e.hi = best_a + opts.bracket_pad;
        e.conclusive = false;
        return e;
    }
    e.estimate = 0.5 * (zone_lo + zone_hi);
    e.lo = std::max(0.0, zone_lo - a_max / grid);
    e.hi = zone_hi + a_max / grid;
    e.conclusive = true;
    return e;
}

DensityEstimate lower_bm_density(const DiscreteSet& set, const DensityOptions& opts) {
    const Generator& g = set.generator;
    if (g.kind == GenKind::Lattice) {
        DensityEstimate e;
        e.method = "complementarity-empty";
        e.estimate = 1.0 / g.alpha;
        e.lo = e.estimate - opts.bracket_pad;
        e.hi = e.estimate + opts.bracket_pad;
        e.exact = e.estimate;
        e.exact_agrees = true;
        return e;
    }
    if (g.kind == GenKind::LatticeMinus) {
        const double inv_alpha = 1.0 / g.alpha;
        DensityEstimate upper_c;
        if (g.modulus > 0 && g.thin_prob == 0.0 && g.indices.empty()) {
            DiscreteSet comp = materialize(lattice_complement(g), std::max(set.window_radius, opts.radius));
            upper_c = comp.size() < 2 ? DensityEstimate{} : upper_bm_density(comp, opts);
        } else {
            DiscreteSet comp = thinned_complement_set(g, std::max(set.window_radius, opts.radius));
            if (comp.size() < 2) {
                upper_c = DensityEstimate{};
                upper_c.hi = opts.bracket_pad;
            } else {
                upper_c = upper_bm_density(comp, opts);
            }
        }
        DensityEstimate e;
        e.method = "complementarity";
        e.estimate = std::max(0.0, inv_alpha - upper_c.estimate);
        e.lo = std::max(0.0, inv_alpha - upper_c.hi);
        e.hi = std::max(0.0, inv_alpha - upper_c.lo);
        if (auto ex = exact_density(g)) {
            e.exact = *ex;
            e.exact_agrees = (*ex >= e.lo - kPointTol && *ex <= e.hi + kPointTol);
        }
        // Witness sanity: the set itself should pass the regularity verdict
        // near the reported value for periodic families.
        return e;
    }
    if (set.size() < 2) {
        DensityEstimate e;
        e.method = "complementarity";
        e.hi = opts.bracket_pad;
        return e;
    }
    // Generic separated set: snap to a lattice (the snap preserves the lower
    // density), then run the lattice pipeline on the snapped subset.
    const double d = separation(set);
    const double delta = d / 8.0;
    const double alpha = delta / 4.0;
    DiscreteSet wide = with_radius(set, std::max(set.window_radius, opts.radius));
    SnapResult snapped = snap_to_lattice(wide, delta, alpha);

    // Complement of the snapped set inside alpha*Z over the window.
    std::vector<char> taken;
    const double R = wide.window_radius;
    const long long klo = static_cast<long long>(std::ceil(-R / alpha));
    const long long khi = static_cast<long long>(std::floor(R / alpha));
    taken.assign(static_cast<std::size_t>(khi - klo + 1), 0);
    for (double p : snapped.set.points) {
        const long long k = std::llround(p / alpha);
        if (k >= klo && k <= khi) taken[static_cast<std::size_t>(k - klo)] = 1;
    }
    std::vector<double> comp_pts;
    comp_pts.reserve(taken.size());
    for (long long k = klo; k <= khi; ++k)
        if (!taken[static_cast<std::size_t>(k - klo)])
            comp_pts.push_back(alpha * static_cast<double>(k));
    DiscreteSet comp = make_set(std::move(comp_pts), explicit_generator(), R);

    DensityOptions comp_opts = opts;
    DensityEstimate upper_c = upper_bm_density(comp, comp_opts);
    DensityEstimate e;
    e.method = "snap+complementarity";
    e.estimate = std::max(0.0, 1.0 / alpha - upper_c.estimate);
    e.lo = std::max(0.0, 1.0 / alpha - upper_c.hi);
    e.hi = std::max(0.0, 1.0 / alpha - upper_c.lo);
    return e;
}

ComplementarityReport complementarity_check(const DiscreteSet& set, const DensityOptions& opts) {
    const Generator& g = set.generator;
    if (g.kind != GenKind::Lattice && g.kind != GenKind::LatticeMinus)
        throw Error("complementarity check requires a lattice-subset generator");
    ComplementarityReport rep;
    rep.alpha = g.alpha;
    rep.lower = lower_bm_direct_witness(set, opts);
    if (g.kind == GenKind::Lattice) {
        rep.upper_complement = DensityEstimate{};
        rep.upper_complement.method = "empty-complement";
    } else {
        DiscreteSet comp = (g.modulus > 0 && g.thin_prob == 0.0 && g.indices.empty())
                               ? materialize(lattice_complement(g),
                                             std::max(set.window_radius, opts.radius))
                               : thinned_complement_set(g, std::max(set.window_radius, opts.radius));
        rep.upper_complement = comp.size() < 2 ? DensityEstimate{} : upper_bm_density(comp, opts);
    }
    rep.residual = std::abs(rep.lower.estimate + rep.upper_complement.estimate - 1.0 / g.alpha);
    return rep;
}

DensityReport density_report(const DiscreteSet& set, const DensityOptions& opts) {
    DensityReport r;
    r.upper = upper_bm_density(set, opts);
    r.lower = lower_bm_density(set, opts);
    return r;
}

} // namespace gapkit
