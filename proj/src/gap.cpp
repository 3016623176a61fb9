#include "gapkit/gap.hpp"

#include "gapkit/core_sets.hpp"
#include "gapkit/fft.hpp"
#include "gapkit/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gapkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kTransformSize = 4096;
constexpr double kCoefficientDrop = 1e-14;

std::vector<double> supports_of(const AtomicMeasure& mu) {
    std::vector<double> s;
    s.reserve(mu.size());
    for (const Atom& a : mu.atoms) s.push_back(a.support);
    return s;
}

std::vector<complex_t> weights_of(const AtomicMeasure& mu) {
    std::vector<complex_t> w;
    w.reserve(mu.size());
    for (const Atom& a : mu.atoms) w.push_back(a.weight);
    return w;
}

double max_abs_support(const AtomicMeasure& mu) {
    double m = 0.0;
    for (const Atom& a : mu.atoms) m = std::max(m, std::abs(a.support));
    return m;
}

} // namespace

complex_t measure_fourier(const AtomicMeasure& mu, double x) {
    // Kahan-compensated real/imaginary accumulation.
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    for (const Atom& a : mu.atoms) {
        const double ph = x * a.support;
        const complex_t term = a.weight * complex_t(std::cos(ph), std::sin(ph));
        double y = term.real() - cr;
        double t = sr + y;
        cr = (t - sr) - y;
        sr = t;
        y = term.imag() - ci;
        t = si + y;
        ci = (t - si) - y;
        si = t;
    }
    return {sr, si};
}

double ft_gap_scan(const AtomicMeasure& mu, double lo, double hi, double step) {
    if (mu.empty()) return 0.0;
    if (hi < lo) throw Error("scan interval is empty");
    const double smax = max_abs_support(mu);
    if (smax > 0.0 && step > kPi / (4.0 * smax) + kPointTol)
        throw Error("scan step too large for the measure's support (aliasing)");
    const std::size_t count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    const auto s = supports_of(mu);
    const auto w = weights_of(mu);
    return kernels::ft_scan_max_parallel(s, w, lo, step, count);
}

double ft_gap_scan_auto(const AtomicMeasure& mu, double lo, double hi, std::size_t min_points) {
    if (mu.empty()) return 0.0;
    const double smax = max_abs_support(mu);
    double step = smax > 0.0 ? kPi / (4.0 * smax) : (hi - lo) / static_cast<double>(min_points);
    step = std::min(step, (hi - lo) / static_cast<double>(min_points));
    return ft_gap_scan(mu, lo, hi, step);
}

complex_t cauchy_transform(const AtomicMeasure& mu, complex_t z) {
    if (z.imag() == 0.0) throw Error("Cauchy transform requested on the real axis");
    complex_t acc(0.0, 0.0);
    for (const Atom& a : mu.atoms) acc += a.weight / (z - a.support);
    return acc;
}

CauchyDecayTrace cauchy_gap_test(const AtomicMeasure& mu, double b, double y_max) {
    if (b < 0.0) throw Error("decay exponent b must be nonnegative");
    CauchyDecayTrace tr;
    tr.b = b;
    if (y_max <= 0.0) y_max = std::clamp(12.0 / std::max(b, 0.25), 12.0, 48.0);
    tr.y_max = y_max;

    // Geometric grid anchored at y_max, descending to 2, eight per decade.
    std::vector<double> ys;
    for (double y = y_max; y >= 2.0 * (1.0 - 1e-12); y /= std::pow(10.0, 0.125))
        ys.push_back(y);
    std::sort(ys.begin(), ys.end());

    bool all_zero = true;
    for (double y : ys) {
        const double vp = std::exp(b * y) * std::abs(cauchy_transform(mu, complex_t(0.0, y)));
        const double vn = std::exp(b * y) * std::abs(cauchy_transform(mu, complex_t(0.0, -y)));
        tr.samples_pos.emplace_back(y, vp);
        tr.samples_neg.emplace_back(y, vn);
        if (vp > 1e-300 || vn > 1e-300) all_zero = false;
    }
    if (all_zero) {
        tr.verdict = Verdict::Converging; // zero measure: trivially decaying
        return tr;
    }

    auto side_state = [](const std::vector<std::pair<double, double>>& s) {
        // Last decade: samples with y in [y_max/10, y_max].
        const double y_hi = s.back().first;
        std::size_t start = 0;
        while (start + 1 < s.size() && s[start].first < y_hi / 10.0 - 1e-9) ++start;
        bool monotone = true;
        for (std::size_t i = start + 1; i < s.size(); ++i)
            if (s[i].second > 3.0 * s[i - 1].second) monotone = false;
        const double first = std::max(s[start].second, 1e-300);
        const double last = std::max(s.back().second, 1e-300);
        const double drop = first / last;
        double grow = 0.0;
        for (const auto& [y, v] : s)
            grow = std::max(grow, v / std::max(s.front().second, 1e-300));
        struct State {
            bool decaying, growing;
        };
        return State{monotone && drop >= 9.5, grow >= 10.0};
    };
    const auto sp = side_state(tr.samples_pos);
    const auto sn = side_state(tr.samples_neg);
    if (sp.growing || sn.growing)
        tr.verdict = Verdict::Diverging; // non-decaying
    else if (sp.decaying && sn.decaying)
        tr.verdict = Verdict::Converging; // decaying
    else
        tr.verdict = Verdict::Inconclusive;
    return tr;
}

GramOracleResult gram_gap_oracle(const DiscreteSet& set, double a, int n_points) {
    if (a <= 0.0) throw Error("gap level a must be positive");
    if (n_points < 4) throw Error("gram oracle needs at least 4 points");
    // Points of smallest modulus, centred in the window.
    std::vector<double> pts(set.points);
    std::sort(pts.begin(), pts.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });
    if (static_cast<int>(pts.size()) > n_points) pts.resize(static_cast<std::size_t>(n_points));
    std::sort(pts.begin(), pts.end());
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw Error("gram oracle needs at least 4 points");

    std::vector<double> gram;
    kernels::gram_fill_parallel(pts, a, gram);

    // Symmetrically scaled pencil: W^{-1/2} G W^{-1/2} with W = (1+p^2)^2.
    Eigen::MatrixXd S(n, n);
    std::vector<double> wsqrt(static_cast<std::size_t>(n));
    double wmax = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = (1.0 + pts[static_cast<std::size_t>(k)] * pts[static_cast<std::size_t>(k)]);
        wsqrt[static_cast<std::size_t>(k)] = w;
        wmax = std::max(wmax, w * w);
    }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            S(k, l) = gram[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) +
                           static_cast<std::size_t>(l)] /
                      (wsqrt[static_cast<std::size_t>(k)] * wsqrt[static_cast<std::size_t>(l)]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    GramOracleResult r;
    r.eigenvalue = es.eigenvalues()(0);
    r.normalized = r.eigenvalue * wmax / (2.0 * a);
    r.n_points = n;
    return r;
}

namespace {

bool gap_feasible(const DiscreteSet& set, double a, const GapOptions& opts) {
    const auto small = gram_gap_oracle(set, a, opts.window / 2);
    const auto big = gram_gap_oracle(set, a, opts.window);
    const double lo_s = std::max(small.normalized, 1e-13);
    const double lo_b = std::max(big.normalized, 1e-13);
    return lo_b < opts.feasible_normalized || lo_b <= opts.feasible_ratio * lo_s;
}

} // namespace

GapReport gap_characteristic_estimate(const DiscreteSet& set, const GapOptions& opts) {
    GapReport rep;
    DensityEstimate lower = lower_bm_density(set, opts.density);
    rep.density_route = kPi * lower.estimate;
    rep.density_lo = kPi * lower.lo;
    rep.density_hi = kPi * lower.hi;

    if (set.size() < static_cast<std::size_t>(std::max(8, opts.window / 2))) {
        // Too few points for the oracle: report the density route only.
        rep.oracle_lo = 0.0;
        rep.oracle_hi = 0.0;
        rep.agree = rep.density_route <= kPointTol;
        return rep;
    }

    double d = separation(set);
    double lo = 0.0, hi = kPi / d + 0.5;
    for (int step = 0; step < 11; ++step) {
        const double a = 0.5 * (lo + hi);
        if (gap_feasible(set, a, opts))
            lo = a;
        else
            hi = a;
    }
    rep.oracle_lo = lo;
    rep.oracle_hi = hi;
    const double mid = 0.5 * (lo + hi);
    rep.agree = rep.density_route <= kPointTol
                    ? mid <= 0.2
                    : std::abs(mid - rep.density_route) <= 0.15 * rep.density_route;

    const Generator& g = set.generator;
    if (opts.want_witness && g.kind == GenKind::Lattice && rep.density_route > 0.1) {
        const double a_wit = std::min(0.9 * rep.density_route, 0.95 * kPi / g.alpha);
        rep.witness = build_gap_measure(g.alpha, a_wit, 4, g.shift);
        rep.witness_gap = a_wit;
        rep.witness_scan_sup =
            ft_gap_scan_auto(*rep.witness, -0.95 * a_wit, 0.95 * a_wit, 1024);
    }
    return rep;
}

AtomicMeasure build_gap_measure(double alpha, double a, int m, double shift) {
    if (alpha <= 0.0) throw Error("lattice spacing alpha must be positive");
    if (m < 1) throw Error("smoothness order m must be >= 1");
    const double period = 2.0 * kPi / alpha;
    if (!(a > 0.0) || a >= kPi / alpha)
        throw Error("gap exceeds lattice bound: require a < pi/alpha");

    // Smooth bump supported on the arc (a, period - a); the complement of the
    // arc is the closed gap [-a, a] modulo the period.
    std::vector<complex_t> grid(kTransformSize, complex_t(0.0, 0.0));
    const double arc_lo = a, arc_hi = period - a;
    for (std::size_t j = 0; j < kTransformSize; ++j) {
        const double x = period * static_cast<double>(j) / static_cast<double>(kTransformSize);
        const double s = (x - arc_lo) / (arc_hi - arc_lo);
        if (s > 0.0 && s < 1.0)
            grid[j] = std::exp(4.0 * static_cast<double>(m) -
                               static_cast<double>(m) / (s * (1.0 - s)));
    }
    fft(grid);

    std::vector<Atom> atoms;
    const long long half = static_cast<long long>(kTransformSize) / 2;
    for (std::size_t j = 0; j < kTransformSize; ++j) {
        const complex_t c = grid[j] / static_cast<double>(kTransformSize);
        if (std::abs(c) < kCoefficientDrop) continue;
        long long n = static_cast<long long>(j);
        if (n >= half) n -= static_cast<long long>(kTransformSize);
        atoms.push_back({alpha * static_cast<double>(n) + shift, c});
    }
    return make_measure(std::move(atoms));
}

AtomicMeasure build_gap_measure(const DiscreteSet& lattice, double a, int m) {
    const Generator& g = lattice.generator;
    const bool full_lattice =
        g.kind == GenKind::Lattice ||
        (g.kind == GenKind::LatticeMinus && g.modulus <= 0 && g.indices.empty() &&
         g.thin_prob == 0.0);
    if (!full_lattice)
        throw Error("direct construction needs the full lattice; use the bridge "
                    "for proper lattice subsets");
    return build_gap_measure(g.alpha, a, m, g.shift);
}

namespace {

// Fourier coefficients over (0, 2pi) of a grid function supported inside:
// a_n = (1/2pi) \int_0^{2pi} g(x) e^{-inx} dx via resampling on the
// transform grid.
std::vector<complex_t> circle_coefficients(const GridFunction& g) {
    std::vector<complex_t> grid(kTransformSize, complex_t(0.0, 0.0));
    const double step = 2.0 * kPi / static_cast<double>(kTransformSize);
    for (std::size_t j = 0; j < kTransformSize; ++j) {
        const double x = step * static_cast<double>(j);
        if (x < g.lo || x >= g.hi || g.samples.empty()) continue;
        // Linear interpolation on the sample grid.
        const double u = (x - g.lo) / g.step();
        const std::size_t i0 = std::min(static_cast<std::size_t>(u), g.samples.size() - 1);
        const std::size_t i1 = std::min(i0 + 1, g.samples.size() - 1);
        const double fr = u - static_cast<double>(i0);
        grid[j] = g.samples[i0] * (1.0 - fr) + g.samples[i1] * fr;
    }
    fft(grid);
    for (auto& c : grid) c /= static_cast<double>(kTransformSize);
    return grid; // index j <-> frequency n (wrapped at kTransformSize/2)
}

long long wrap_frequency(std::size_t j) {
    long long n = static_cast<long long>(j);
    if (n >= static_cast<long long>(kTransformSize) / 2)
        n -= static_cast<long long>(kTransformSize);
    return n;
}

// <f, e^{i g t}> over [lo, hi) by the trapezoid rule on the sample grid.
complex_t grid_inner_product(const GridFunction& f, double gamma) {
    const double h = f.step();
    complex_t acc(0.0, 0.0);
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
        const double x = f.lo + h * static_cast<double>(j);
        const double wq = (j == 0 || j + 1 == f.samples.size()) ? 0.5 : 1.0;
        acc += wq * f.samples[j] * complex_t(std::cos(gamma * x), -std::sin(gamma * x));
    }
    return acc * h;
}

double grid_l2_norm(const GridFunction& f) {
    const double h = f.step();
    double acc = 0.0;
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
        const double wq = (j == 0 || j + 1 == f.samples.size()) ? 0.5 : 1.0;
        acc += wq * std::norm(f.samples[j]);
    }
    return std::sqrt(acc * h);
}

} // namespace

AtomicMeasure bridge_measure_from_function(const std::vector<long long>& gamma,
                                           const GridFunction& f, double eps,
                                           BridgeReport* report) {
    if (f.samples.empty()) throw Error("trivial function rejected: empty sample grid");
    const double two_a = f.hi - f.lo;
    if (f.lo != 0.0) throw Error("forward bridge expects samples on (0, 2a)");
    if (!(eps > 0.0) || two_a + eps >= 2.0 * kPi)
        throw Error("require 2a + eps < 2pi");
    const double fnorm = grid_l2_norm(f);
    if (fnorm < 1e-12) throw Error("trivial function rejected");

    // Orthogonality residuals against E_Gamma on (0, 2a).
    double worst = 0.0;
    long long worst_g = 0;
    for (long long g : gamma) {
        const double r = std::abs(grid_inner_product(f, static_cast<double>(g))) / fnorm;
        if (r > worst) {
            worst = r;
            worst_g = g;
        }
    }
    if (report) {
        report->orthogonality_residual = worst;
        report->worst_gamma = worst_g;
    }
    if (worst >= 1e-8) {
        throw Error("orthogonality residual too large at gamma = " + std::to_string(worst_g) +
                    " (" + std::to_string(worst) + ")");
    }

    // Convolve with a unit-mass smooth bump on [0, eps].
    const double h = f.step();
    const std::size_t klen = std::max<std::size_t>(2, static_cast<std::size_t>(eps / h));
    std::vector<double> kernel(klen, 0.0);
    double ksum = 0.0;
    for (std::size_t i = 0; i < klen; ++i) {
        const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(klen);
        kernel[i] = std::exp(-1.0 / (s * (1.0 - s)));
        ksum += kernel[i];
    }
    for (double& v : kernel) v /= (ksum * h);

    GridFunction g;
    g.lo = 0.0;
    g.hi = two_a + eps;
    const std::size_t out_len = f.samples.size() + klen;
    g.samples.assign(out_len, complex_t(0.0, 0.0));
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        for (std::size_t k = 0; k < klen; ++k)
            g.samples[i + k] += f.samples[i] * kernel[k] * h;
    g.hi = g.lo + static_cast<double>(out_len) * h;

    // Expand over (0, 2pi) and keep coefficients off Gamma.
    const auto coef = circle_coefficients(g);
    std::vector<long long> sorted_gamma(gamma);
    std::sort(sorted_gamma.begin(), sorted_gamma.end());
    double removed_sup = 0.0;
    std::vector<Atom> atoms;
    for (std::size_t j = 0; j < coef.size(); ++j) {
        const long long n = wrap_frequency(j);
        const double mag = std::abs(coef[j]);
        if (std::binary_search(sorted_gamma.begin(), sorted_gamma.end(), n)) {
            removed_sup = std::max(removed_sup, mag);
            continue;
        }
        if (mag < kCoefficientDrop) continue;
        atoms.push_back({static_cast<double>(n), coef[j]});
    }
    if (report) {
        report->removed_coefficient_sup = removed_sup;
        report->claimed_gap_length = 2.0 * kPi - two_a - eps;
    }
    if (removed_sup >= 1e-6)
        throw Error("Gamma coefficients fail to vanish after expansion");

    AtomicMeasure mu = make_measure(std::move(atoms));

    if (report) {
        // Centre the vanishing interval (2a+eps, 2pi) at the origin and
        // certify with the Cauchy test.
        const double gap_len = report->claimed_gap_length;
        const double centre = 0.5 * (two_a + eps + 2.0 * kPi);
        AtomicMeasure centred = modulate(mu, centre);
        const double b = 0.75 * (gap_len / 2.0);
        report->gap_certificate = cauchy_gap_test(centred, b).verdict;
    }
    return mu;
}

GridFunction bridge_function_from_measure(const AtomicMeasure& mu, double a,
                                          const std::vector<long long>& gamma,
                                          BridgeReport* report) {
    if (mu.empty() || mu.total_variation < 1e-14)
        throw Error("nontrivial measure required");
    if (!(a > 0.0)) throw Error("gap parameter a must be positive");

    // Certify the presented gap (0, 2a) by centring it first.
    AtomicMeasure centred = modulate(mu, a);
    const auto cert = cauchy_gap_test(centred, 0.75 * a);
    if (cert.verdict != Verdict::Converging)
        throw Error("gap certificate failed for the presented gap (0, 2a)");

    GridFunction g;
    g.lo = 0.0;
    g.hi = 2.0 * kPi;
    g.samples.resize(kTransformSize);
    const double h = g.step();
    for (std::size_t j = 0; j < kTransformSize; ++j)
        g.samples[j] = measure_fourier(mu, g.lo + h * static_cast<double>(j));

    double worst = 0.0;
    long long worst_g = 0;
    const double norm = std::max(grid_l2_norm(g), 1e-300);
    for (long long gam : gamma) {
        const double r = std::abs(grid_inner_product(g, static_cast<double>(gam))) / norm;
        if (r > worst) {
            worst = r;
            worst_g = gam;
        }
    }
    if (report) {
        report->orthogonality_residual = worst;
        report->worst_gamma = worst_g;
        report->claimed_gap_length = 2.0 * kPi - 2.0 * a;
        report->gap_certificate = cert.verdict;
    }
    if (worst >= 1e-6)
        throw Error("measure transform is not orthogonal to E_Gamma (worst gamma " +
                    std::to_string(worst_g) + ")");
    return g;
}

DiscreteSet insert_point(const DiscreteSet& set, double lambda_prime) {
    for (double p : set.points)
        if (std::abs(p - lambda_prime) <= kPointTol)
            throw Error("point already lies on the set");
    std::vector<double> pts(set.points);
    pts.insert(std::upper_bound(pts.begin(), pts.end(), lambda_prime), lambda_prime);
    return make_set(std::move(pts), explicit_generator(),
                    std::max(set.window_radius, std::abs(lambda_prime)));
}

AtomicMeasure tame_coefficients(const AtomicMeasure& mu, double eps, int m,
                                double source_gap, double target_gap) {
    if (!(eps > 0.0)) throw Error("taming bandwidth eps must be positive");
    if (m < 1) throw Error("taming order m must be >= 1");
    if (source_gap > 0.0 && eps >= source_gap - target_gap)
        throw Error("eps too large: require eps < source gap - target gap");
    std::vector<Atom> atoms(mu.atoms);
    for (Atom& a : atoms) {
        const double u = eps * a.support / static_cast<double>(m);
        const double s = std::abs(u) < 1e-12 ? 1.0 : std::sin(u) / u;
        a.weight *= std::pow(s, m);
    }
    std::vector<Atom> kept;
    for (const Atom& a : atoms)
        if (std::abs(a.weight) >= kCoefficientDrop) kept.push_back(a);
    return make_measure(std::move(kept));
}

double weight_decay_exponent(const AtomicMeasure& mu, double min_support, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const Atom& a : mu.atoms) {
        const double t = std::abs(a.support);
        const double w = std::abs(a.weight);
        if (t < min_support || w < floor) continue;
        const double lx = std::log(t), ly = std::log(w);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 4) return 0.0;
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return 0.0;
    return -(n * sxy - sx * sy) / den;
}

} // namespace gapkit
