#include "gapkit/core_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gapkit {

double separation(const DiscreteSet& set) {
    if (set.size() < 2) throw Error("undefined separation: need at least 2 points");
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < set.points.size(); ++i)
        d = std::min(d, set.points[i] - set.points[i - 1]);
    return d;
}

long long counting_function(const DiscreteSet& set, double x) {
    if (std::abs(x) > set.window_radius + kPointTol)
        throw Error("outside truncation: |x| exceeds the window radius");
    const auto& p = set.points;
    auto zero = std::lower_bound(p.begin(), p.end(), 0.0);
    if (x >= 0.0) {
        auto hi = std::upper_bound(p.begin(), p.end(), x);
        return static_cast<long long>(hi - zero);
    }
    auto lo = std::upper_bound(p.begin(), p.end(), x);
    return -static_cast<long long>(zero - lo);
}

DiscreteSet translate(const DiscreteSet& set, double x) {
    std::vector<double> pts(set.points);
    for (double& p : pts) p -= x;
    DiscreteSet out;
    out.points = std::move(pts);
    out.generator = explicit_generator();
    out.window_radius = set.window_radius;
    return out;
}

namespace {

long long smallest_index_above(double target, double alpha) {
    // Smallest k with alpha*k strictly greater than target, treating values
    // within 1e-9 of a lattice point as on the lattice.
    double q = target / alpha;
    double r = std::round(q);
    if (std::abs(q - r) < 1e-9) return static_cast<long long>(r) + 1;
    return static_cast<long long>(std::ceil(q));
}

void check_snap_pre(const DiscreteSet& set, double delta, double alpha) {
    const double d = separation(set);
    if (!(delta > 0.0) || delta >= d / 4.0)
        throw Error("perturbation too large: require delta < separation/4");
    if (!(alpha > 0.0) || alpha > delta / 4.0)
        throw Error("lattice too coarse: require alpha <= delta/4");
}

SnapResult finish_snap(const DiscreteSet& set, double delta, double alpha,
                       std::vector<double> pts, std::vector<double> offs,
                       bool snap_mode, std::uint64_t seed) {
    Generator g;
    g.kind = GenKind::Perturbed;
    g.base = std::make_shared<Generator>(set.generator);
    g.delta = delta;
    g.snap = snap_mode;
    g.snap_alpha = alpha;
    g.seed = seed;
    if (set.generator.kind == GenKind::Explicit) g.base = nullptr;
    SnapResult r;
    if (g.base)
        r.set = make_set(std::move(pts), std::move(g), set.window_radius);
    else
        r.set = make_set(std::move(pts), explicit_generator(), set.window_radius);
    r.offsets = std::move(offs);
    return r;
}

} // namespace

SnapResult snap_to_lattice(const DiscreteSet& set, double delta, double alpha) {
    check_snap_pre(set, delta, alpha);
    std::vector<double> pts, offs;
    pts.reserve(set.size());
    offs.reserve(set.size());
    for (double p : set.points) {
        long long k = smallest_index_above(p + delta / 2.0, alpha);
        double moved = alpha * static_cast<double>(k);
        pts.push_back(moved);
        offs.push_back(moved - p);
    }
    return finish_snap(set, delta, alpha, std::move(pts), std::move(offs), true, 0);
}

SnapResult snap_to_lattice_random(const DiscreteSet& set, double delta, double alpha,
                                  std::uint64_t seed) {
    check_snap_pre(set, delta, alpha);
    std::vector<double> pts, offs;
    pts.reserve(set.size());
    offs.reserve(set.size());
    for (double p : set.points) {
        long long klo = smallest_index_above(p + delta / 2.0, alpha);
        long long khi = smallest_index_above(p + delta, alpha) - 1;
        if (khi < klo) khi = klo;
        double u = delta / 2.0 + (delta / 2.0) * hash_uniform(seed, std::llround(p * 4096.0));
        long long k = std::clamp(static_cast<long long>(std::llround((p + u) / alpha)), klo, khi);
        double moved = alpha * static_cast<double>(k);
        pts.push_back(moved);
        offs.push_back(moved - p);
    }
    return finish_snap(set, delta, alpha, std::move(pts), std::move(offs), false, seed);
}

AtomicMeasure modulate(const AtomicMeasure& measure, double shift) {
    std::vector<Atom> atoms(measure.atoms);
    for (Atom& a : atoms) {
        const double ph = shift * a.support;
        a.weight *= complex_t(std::cos(ph), std::sin(ph));
    }
    return make_measure(std::move(atoms));
}

AtomicMeasure translate_supports(const AtomicMeasure& measure, double shift) {
    std::vector<Atom> atoms(measure.atoms);
    for (Atom& a : atoms) a.support += shift;
    return make_measure(std::move(atoms));
}

AtomicMeasure restrict_supports(const AtomicMeasure& measure, double radius) {
    std::vector<Atom> atoms;
    for (const Atom& a : measure.atoms)
        if (std::abs(a.support) <= radius) atoms.push_back(a);
    return make_measure(std::move(atoms));
}

DiscreteSet avoid_origin(const DiscreteSet& set) {
    auto on_origin = [&](const DiscreteSet& s) {
        for (double p : s.points)
            if (std::abs(p) <= kPointTol) return true;
        return false;
    };
    if (!on_origin(set)) return set;
    const double d = set.size() >= 2 ? separation(set) : 1.0;
    for (double f : {0.37, 0.41, 0.43}) {
        DiscreteSet t = translate(set, f * d);
        if (!on_origin(t)) return t;
    }
    throw Error("could not translate the set away from the origin");
}

DiscreteSet load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open point file: " + path);
    std::vector<double> pts;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double v;
        if (ls >> v) pts.push_back(v);
    }
    std::sort(pts.begin(), pts.end());
    double radius = 1.0;
    for (double p : pts) radius = std::max(radius, std::abs(p));
    return make_set(std::move(pts), explicit_generator(), radius);
}

void save_points(const DiscreteSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write point file: " + path);
    out.precision(17);
    for (double p : set.points) out << p << '\n';
}

AtomicMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open measure file: " + path);
    std::vector<Atom> atoms;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double s, re, im;
        if (ls >> s >> re >> im) atoms.push_back({s, complex_t(re, im)});
    }
    return make_measure(std::move(atoms));
}

void save_measure(const AtomicMeasure& measure, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write measure file: " + path);
    out.precision(17);
    for (const Atom& a : measure.atoms)
        out << a.support << ' ' << a.weight.real() << ' ' << a.weight.imag() << '\n';
}

} // namespace gapkit
