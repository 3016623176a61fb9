#include "gapkit/kernels.hpp"

#include "gapkit/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace gapkit::kernels {

namespace {

inline double abs_ft_at(std::span<const double> supports,
                        std::span<const complex_t> weights, double x) {
    // Compensated (Kahan) accumulation of sum w_j e^{i x s_j}.
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    for (std::size_t j = 0; j < supports.size(); ++j) {
        const double ph = x * supports[j];
        const complex_t term = weights[j] * complex_t(std::cos(ph), std::sin(ph));
        double y = term.real() - cr;
        double t = sr + y;
        cr = (t - sr) - y;
        sr = t;
        y = term.imag() - ci;
        t = si + y;
        ci = (t - si) - y;
        si = t;
    }
    return std::hypot(sr, si);
}

inline double gram_entry(double pk, double pl, double a) {
    const double d = pk - pl;
    if (d == 0.0) return 2.0 * a;
    return 2.0 * std::sin(a * d) / d;
}

} // namespace

double ft_scan_max_serial(std::span<const double> supports,
                          std::span<const complex_t> weights,
                          double lo, double step, std::size_t count) {
    double best = 0.0;
    for (std::size_t k = 0; k < count; ++k)
        best = std::max(best, abs_ft_at(supports, weights, lo + static_cast<double>(k) * step));
    return best;
}

double ft_scan_max_parallel(std::span<const double> supports,
                            std::span<const complex_t> weights,
                            double lo, double step, std::size_t count) {
    double best = 0.0;
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(gapkit::thread_count()) reduction(max : best)
    for (long long k = 0; k < n; ++k) {
        const double v = abs_ft_at(supports, weights, lo + static_cast<double>(k) * step);
        if (v > best) best = v;
    }
    return best;
}

void gram_fill_serial(std::span<const double> points, double a, std::vector<double>& out) {
    const std::size_t n = points.size();
    out.assign(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            out[k * n + l] = gram_entry(points[k], points[l], a);
}

void gram_fill_parallel(std::span<const double> points, double a, std::vector<double>& out) {
    const std::size_t n = points.size();
    out.assign(n * n, 0.0);
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(gapkit::thread_count())
    for (long long k = 0; k < nn; ++k)
        for (long long l = 0; l < nn; ++l)
            out[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(l)] =
                gram_entry(points[static_cast<std::size_t>(k)], points[static_cast<std::size_t>(l)], a);
}

namespace {

// suffix_tv[i] = sum of |d_j| for j >= i; one extra slot with 0.
std::vector<double> suffix_tv(std::span<const complex_t> d) {
    std::vector<double> s(d.size() + 1, 0.0);
    for (std::size_t i = d.size(); i-- > 0;) s[i] = s[i + 1] + std::abs(d[i]);
    return s;
}

complex_t transport_one(std::span<const double> base, std::span<const complex_t> d,
                        const std::vector<double>& sfx, double target,
                        double min_dist, double tail_tol) {
    const std::size_t n = base.size();
    auto it = std::lower_bound(base.begin(), base.end(), target);
    std::size_t li = static_cast<std::size_t>(it - base.begin());
    std::size_t ri = li;
    complex_t acc(0.0, 0.0);
    while (li > 0 || ri < n) {
        const bool take_left =
            ri >= n || (li > 0 && (target - base[li - 1]) <= (base[ri] - target));
        if (take_left) {
            --li;
            acc += d[li] / (base[li] - target);
        } else {
            acc += d[ri] / (base[ri] - target);
            ++ri;
        }
        const double left_tv = sfx[0] - sfx[li];   // |d| mass strictly below li
        const double right_tv = sfx[ri];           // |d| mass at/above ri
        if ((left_tv + right_tv) * (2.0 / min_dist) < tail_tol) break;
    }
    return acc;
}

} // namespace

void transport_weights_serial(std::span<const double> base, std::span<const complex_t> d,
                              std::span<const double> targets,
                              std::span<const double> scale_re, double min_dist,
                              double tail_tol, std::vector<complex_t>& out) {
    const auto sfx = suffix_tv(d);
    out.assign(targets.size(), complex_t(0.0, 0.0));
    for (std::size_t k = 0; k < targets.size(); ++k)
        out[k] = scale_re[k] * transport_one(base, d, sfx, targets[k], min_dist, tail_tol);
}

void transport_weights_parallel(std::span<const double> base, std::span<const complex_t> d,
                                std::span<const double> targets,
                                std::span<const double> scale_re, double min_dist,
                                double tail_tol, std::vector<complex_t>& out) {
    const auto sfx = suffix_tv(d);
    out.assign(targets.size(), complex_t(0.0, 0.0));
    const long long n = static_cast<long long>(targets.size());
#pragma omp parallel for schedule(static) num_threads(gapkit::thread_count())
    for (long long k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] =
            scale_re[static_cast<std::size_t>(k)] *
            transport_one(base, d, sfx, targets[static_cast<std::size_t>(k)], min_dist, tail_tol);
}

} // namespace gapkit::kernels
