#include "gapkit/transport.hpp"

#include "gapkit/core_sets.hpp"
#include "gapkit/kernels.hpp"
#include "gapkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gapkit {

namespace {

constexpr double kPi = std::numbers::pi;

// Indices of `pts` ordered by increasing modulus.
std::vector<std::size_t> modulus_order(const std::vector<double>& pts) {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(pts[a]) < std::abs(pts[b]);
    });
    return idx;
}

complex_t product_over(const InterlacedPair& pair, complex_t z,
                       const std::vector<std::size_t>& order, std::size_t count,
                       std::size_t skip = static_cast<std::size_t>(-1)) {
    complex_t acc(1.0, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = order[i];
        if (j == skip) continue;
        const double lam = pair.base.points[j];
        const double per = pair.perturbed.points[j];
        acc *= (1.0 - z / lam) / (1.0 - z / per);
    }
    return acc;
}

} // namespace

InterlacedPair validate_interlacing(const DiscreteSet& base, const DiscreteSet& perturbed,
                                    double delta) {
    if (base.size() != perturbed.size())
        throw Error("interlacing validation: cardinalities differ within the window");
    if (base.size() < 2) throw Error("interlacing validation needs at least 2 points");
    const double d = separation(base);
    if (!(delta > 0.0) || delta >= d / 4.0)
        throw Error("perturbation too large: require delta < separation(base)/4");

    std::ostringstream violations;
    int bad = 0;
    std::vector<double> offsets(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
        const double eps = perturbed.points[j] - base.points[j];
        offsets[j] = eps;
        if (!(eps > delta / 2.0) || !(eps < delta)) {
            if (bad < 8)
                violations << " offset[" << j << "]=" << eps << " outside (delta/2, delta);";
            ++bad;
        }
        if (std::abs(base.points[j]) <= kPointTol || std::abs(perturbed.points[j]) <= kPointTol) {
            if (bad < 8) violations << " index " << j << " touches the origin;";
            ++bad;
        }
        if (j + 1 < base.size() && !(perturbed.points[j] < base.points[j + 1])) {
            if (bad < 8) violations << " interlacing fails at index " << j << ";";
            ++bad;
        }
    }
    if (bad > 0)
        throw Error("interlacing validation failed (" + std::to_string(bad) +
                    " violations):" + violations.str());
    InterlacedPair p;
    p.base = base;
    p.perturbed = perturbed;
    p.offsets = std::move(offsets);
    p.delta = delta;
    return p;
}

InterlacedPair make_interlaced_pair(const DiscreteSet& base, double delta, std::uint64_t seed) {
    const double d = separation(base);
    if (!(delta > 0.0) || delta >= d / 4.0)
        throw Error("perturbation too large: require delta < separation(base)/4");
    SplitMix64 rng(seed);
    std::vector<double> pts(base.points);
    const double margin = delta / 64.0;
    for (double& p : pts) p += rng.uniform(delta / 2.0 + margin, delta - margin);
    DiscreteSet pert = make_set(std::move(pts), explicit_generator(), base.window_radius + delta);
    return validate_interlacing(base, pert, delta);
}

PhiValue phi_eval(const InterlacedPair& pair, complex_t z) {
    const auto& per = pair.perturbed.points;
    for (std::size_t j = 0; j < per.size(); ++j)
        if (std::abs(z - complex_t(per[j], 0.0)) <= kPointTol)
            throw Error("phi evaluated at a pole of the perturbed set");
    const auto order = modulus_order(pair.base.points);
    PhiValue out;
    const complex_t half = product_over(pair, z, order, order.size() / 2);
    const complex_t full_tail = product_over(pair, z, order, order.size());
    out.value = -full_tail;
    const double denom = std::abs(full_tail);
    out.convergence_proxy = denom > 0.0 ? std::abs(full_tail - half) / denom : 0.0;
    return out;
}

HerglotzData herglotz_residues(const InterlacedPair& pair) {
    const auto& base = pair.base.points;
    const auto& per = pair.perturbed.points;
    const std::size_t n = base.size();
    const auto order = modulus_order(base);

    HerglotzData h;
    h.c.assign(n, 0.0);
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(gapkit::thread_count())
    for (long long kk = 0; kk < nn; ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        const complex_t z(per[k], 0.0);
        // (z - per_k) * phi(z) -> (1 - z/base_k) * per_k * P_k(per_k),
        // with P_k the product over j != k; c_k is minus that limit.
        const complex_t pk = product_over(pair, z, order, n, k);
        const double lim = ((1.0 - per[k] / base[k]) * per[k] * pk).real();
        h.c[k] = -lim;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!(h.c[k] > 0.0))
            throw Error("nonpositive Herglotz residue at index " + std::to_string(k) +
                        " (windowing artifact)");

    // b1 from the top decade of phi(iy)/(iy).
    {
        double acc = 0.0;
        int cnt = 0;
        for (double y : {3000.0, 5000.0, 8000.0, 10000.0}) {
            acc += (phi_eval(pair, complex_t(0.0, y)).value / complex_t(0.0, y)).real();
            ++cnt;
        }
        h.b1 = acc / cnt;
    }

    // b2 at a real regular point: midpoint of a gap between per_k and the
    // next base point, near the origin.
    {
        std::size_t k0 = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (std::abs(per[j]) < best) {
                best = std::abs(per[j]);
                k0 = j;
            }
        const double z0 = 0.5 * (per[k0] + base[k0 + 1]);
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            sum += h.c[k] * (1.0 / (per[k] - z0) - 1.0 / per[k]);
        h.b2 = phi_eval(pair, complex_t(z0, 0.0)).value.real() - h.b1 * z0 - sum;
    }

    // Partial sums of c_k / per_k^2 in modulus order.
    {
        const auto po = modulus_order(per);
        double acc = 0.0;
        std::vector<double> cum(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = po[i];
            acc += h.c[k] / (per[k] * per[k]);
            cum[i] = acc;
        }
        for (double f : {4.0, 2.0, 1.0}) {
            const std::size_t idx = static_cast<std::size_t>(static_cast<double>(n) / f) - 1;
            h.weighted_sum_partials.emplace_back(static_cast<long long>(idx + 1), cum[idx]);
        }
        const double full = cum[n - 1];
        const double halfv = cum[n / 2 - 1];
        h.weighted_sum_growth = full > 0.0 ? (full - halfv) / full : 0.0;
    }

    // Reconstruction residual at 20 off-axis points.
    {
        SplitMix64 rng(7);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double re = rng.uniform(-3.0, 3.0);
            const double im = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 3.0);
            const complex_t z(re, im);
            complex_t sum(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                sum += h.c[k] * (1.0 / (per[k] - z) - 1.0 / per[k]);
            const complex_t rec = h.b1 * z + h.b2 + sum;
            const complex_t ref = phi_eval(pair, z).value;
            worst = std::max(worst, std::abs(rec - ref) / std::abs(ref));
        }
        h.reconstruction_rel_err = worst;
    }
    return h;
}

std::pair<double, double> default_anchors(const InterlacedPair& pair) {
    const double d = separation(pair.base);
    const double x1 = pair.perturbed.points.front() - 0.37 * d;
    const double x2 = std::max(pair.base.points.back(), pair.perturbed.points.back()) + 0.61 * d;
    return {x1, x2};
}

TransportResult transport_measure(const InterlacedPair& pair, const AtomicMeasure& mu,
                                  double x1, double x2, const TransportOptions& opts) {
    const auto& base = pair.base.points;
    const auto& per = pair.perturbed.points;
    const std::size_t n = base.size();
    if (x1 == x2) throw Error("anchor collision: x1 and x2 must be distinct");
    for (double x : {x1, x2}) {
        for (double p : base)
            if (std::abs(p - x) <= kPointTol) throw Error("anchor collides with the base set");
        for (double p : per)
            if (std::abs(p - x) <= kPointTol)
                throw Error("anchor collides with the perturbed set");
    }

    // Weights must sit on the base set; build the aligned d-vector.
    std::vector<complex_t> d(n, complex_t(0.0, 0.0));
    double mu_tv = 0.0;
    for (const Atom& a : mu.atoms) {
        auto it = std::lower_bound(base.begin(), base.end(), a.support - kPointTol);
        if (it == base.end() || std::abs(*it - a.support) > kPointTol)
            throw Error("measure atom off the base set at support " +
                        std::to_string(a.support));
        d[static_cast<std::size_t>(it - base.begin())] += a.weight;
        mu_tv += std::abs(a.weight);
    }
    if (mu_tv > 0.0) {
        const double fitted = weight_decay_exponent(mu);
        if (fitted > 0.0 && fitted < opts.min_decay_exponent)
            throw Error("coefficient decay too slow: fitted exponent " +
                        std::to_string(fitted));
    }

    const HerglotzData h = herglotz_residues(pair);

    TransportResult out;
    out.x1 = x1;
    out.x2 = x2;

    std::vector<double> scale(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        scale[k] = h.c[k] / ((per[k] - x1) * (per[k] - x2));
    kernels::transport_weights_parallel(base, d, per, scale, pair.delta / 2.0, opts.tail_tol,
                                        out.e);

    // Anchor residues of psi = phi * K_mu / ((z-x1)(z-x2)).
    auto cauchy_real = [&](double x) {
        complex_t acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (d[j] != complex_t(0.0, 0.0)) acc += d[j] / (x - base[j]);
        return acc;
    };
    const auto order = modulus_order(base);
    const complex_t phi_x1 = -product_over(pair, complex_t(x1, 0.0), order, n);
    const complex_t phi_x2 = -product_over(pair, complex_t(x2, 0.0), order, n);
    out.f1 = phi_x1 * cauchy_real(x1) / (x1 - x2);
    out.f2 = phi_x2 * cauchy_real(x2) / (x2 - x1);

    // l1 partial sums in modulus order.
    {
        const auto po = modulus_order(per);
        double acc = 0.0;
        std::vector<double> cum(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            acc += std::abs(out.e[po[i]]);
            cum[i] = acc;
        }
        for (double f : {4.0, 2.0, 1.0}) {
            const std::size_t idx = static_cast<std::size_t>(static_cast<double>(n) / f) - 1;
            out.l1_partials.emplace_back(static_cast<long long>(idx + 1), cum[idx]);
        }
        const double full = cum[n - 1];
        out.l1_growth = full > 0.0 ? (full - cum[n / 2 - 1]) / full : 0.0;
    }

    // Partial-fraction identity residual at 20 off-axis points.
    if (opts.check_partial_fractions && mu_tv > 0.0) {
        SplitMix64 rng(11);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double re = rng.uniform(-3.0, 3.0);
            const double im = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 3.0);
            const complex_t z(re, im);
            complex_t kmu(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (d[j] != complex_t(0.0, 0.0)) kmu += d[j] / (z - base[j]);
            const complex_t psi =
                (-product_over(pair, z, order, n)) * kmu / ((z - x1) * (z - x2));
            complex_t pf = out.f1 / (z - x1) + out.f2 / (z - x2);
            for (std::size_t k = 0; k < n; ++k) pf += out.e[k] / (z - per[k]);
            if (std::abs(psi) > 0.0)
                worst = std::max(worst, std::abs(pf - psi) / std::abs(psi));
        }
        out.partial_fraction_rel_err = worst;
    }

    // Assemble nu.
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < n; ++k)
        if (out.e[k] != complex_t(0.0, 0.0)) atoms.push_back({per[k], out.e[k]});
    if (out.f1 != complex_t(0.0, 0.0)) atoms.push_back({x1, out.f1});
    if (out.f2 != complex_t(0.0, 0.0)) atoms.push_back({x2, out.f2});
    out.nu = make_measure(std::move(atoms));
    return out;
}

TransportCertificate verify_transport(const AtomicMeasure& nu, double a,
                                      const std::vector<double>& b_ladder) {
    if (!(a > 0.0)) throw Error("certification level a must be positive");
    TransportCertificate cert;
    cert.a = a;
    cert.scan_budget = 1e-3 * nu.total_variation;
    if (nu.empty() || nu.total_variation < 1e-250) {
        cert.trivial = true; // "trivial witness rejected"
        cert.pass = false;
        return cert;
    }
    std::vector<double> ladder = b_ladder;
    if (ladder.empty()) ladder = {0.5 * a, 0.75 * a};
    bool all_decaying = true;
    for (double b : ladder) {
        const auto tr = cauchy_gap_test(nu, b, 12.0);
        cert.cauchy.emplace_back(b, tr.verdict);
        if (tr.verdict != Verdict::Converging) all_decaying = false;
    }
    cert.scan_sup = ft_gap_scan_auto(nu, -0.9 * a, 0.9 * a, 2048);
    cert.pass = all_decaying && cert.scan_sup < cert.scan_budget;
    return cert;
}

} // namespace gapkit
