#include "gapkit/types.hpp"

#include <algorithm>
#include <cmath>

namespace gapkit {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Converging: return "converging";
        case Verdict::Diverging: return "diverging";
        default: return "inconclusive";
    }
}

double hash_uniform(std::uint64_t seed, long long index) {
    SplitMix64 h(seed ^ (0x5851f42d4c957f2dULL * static_cast<std::uint64_t>(index + 0x40000000LL)));
    h.next();
    return h.uniform();
}

Generator explicit_generator() { return Generator{}; }

Generator lattice_generator(double alpha, double shift) {
    if (alpha <= 0.0) throw Error("lattice spacing alpha must be positive");
    Generator g;
    g.kind = GenKind::Lattice;
    g.alpha = alpha;
    g.shift = shift;
    return g;
}

Generator lattice_minus_residues(double alpha, long long modulus,
                                 std::vector<long long> removed_residues, double shift) {
    if (alpha <= 0.0) throw Error("lattice spacing alpha must be positive");
    if (modulus <= 0) throw Error("residue modulus must be positive");
    Generator g;
    g.kind = GenKind::LatticeMinus;
    g.alpha = alpha;
    g.shift = shift;
    g.modulus = modulus;
    for (long long& r : removed_residues) r = ((r % modulus) + modulus) % modulus;
    std::sort(removed_residues.begin(), removed_residues.end());
    removed_residues.erase(std::unique(removed_residues.begin(), removed_residues.end()),
                           removed_residues.end());
    if (static_cast<long long>(removed_residues.size()) >= modulus)
        throw Error("residue removal would empty the lattice");
    g.residues = std::move(removed_residues);
    return g;
}

Generator lattice_minus_indices(double alpha, std::vector<long long> removed_indices,
                                double shift) {
    if (alpha <= 0.0) throw Error("lattice spacing alpha must be positive");
    Generator g;
    g.kind = GenKind::LatticeMinus;
    g.alpha = alpha;
    g.shift = shift;
    std::sort(removed_indices.begin(), removed_indices.end());
    removed_indices.erase(std::unique(removed_indices.begin(), removed_indices.end()),
                          removed_indices.end());
    g.indices = std::move(removed_indices);
    return g;
}

Generator lattice_thinned(double alpha, double thin_prob, std::uint64_t seed, double shift) {
    if (alpha <= 0.0) throw Error("lattice spacing alpha must be positive");
    if (thin_prob < 0.0 || thin_prob >= 1.0) throw Error("thinning probability must be in [0,1)");
    Generator g;
    g.kind = GenKind::LatticeMinus;
    g.alpha = alpha;
    g.shift = shift;
    g.thin_prob = thin_prob;
    g.thin_seed = seed;
    return g;
}

namespace {

bool lattice_index_removed(const Generator& g, long long n) {
    if (g.modulus > 0) {
        long long r = ((n % g.modulus) + g.modulus) % g.modulus;
        if (std::binary_search(g.residues.begin(), g.residues.end(), r)) return true;
    }
    if (!g.indices.empty() &&
        std::binary_search(g.indices.begin(), g.indices.end(), n))
        return true;
    if (g.thin_prob > 0.0 && hash_uniform(g.thin_seed, n) < g.thin_prob) return true;
    return false;
}

void check_points(const std::vector<double>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i] > pts[i - 1]))
            throw Error("points must be strictly increasing");
        if (pts[i] - pts[i - 1] <= 0.0)
            throw Error("separation must be positive");
    }
    for (double p : pts)
        if (!std::isfinite(p)) throw Error("points must be finite");
}

} // namespace

DiscreteSet make_set(std::vector<double> points, Generator gen, double window_radius) {
    if (window_radius <= 0.0) throw Error("window radius must be positive");
    check_points(points);
    if (gen.kind == GenKind::Lattice || gen.kind == GenKind::LatticeMinus) {
        for (double p : points) {
            double q = (p - gen.shift) / gen.alpha;
            if (std::abs(q - std::round(q)) * gen.alpha > kPointTol)
                throw Error("point is not on the declared lattice");
        }
    }
    DiscreteSet s;
    s.points = std::move(points);
    s.generator = std::move(gen);
    s.window_radius = window_radius;
    return s;
}

DiscreteSet materialize(const Generator& gen, double radius) {
    if (radius <= 0.0) throw Error("window radius must be positive");
    switch (gen.kind) {
        case GenKind::Lattice:
        case GenKind::LatticeMinus: {
            std::vector<double> pts;
            long long lo = static_cast<long long>(std::ceil((-radius - gen.shift) / gen.alpha - kPointTol));
            long long hi = static_cast<long long>(std::floor((radius - gen.shift) / gen.alpha + kPointTol));
            pts.reserve(static_cast<std::size_t>(std::max<long long>(0, hi - lo + 1)));
            for (long long n = lo; n <= hi; ++n) {
                if (gen.kind == GenKind::LatticeMinus && lattice_index_removed(gen, n)) continue;
                pts.push_back(gen.alpha * static_cast<double>(n) + gen.shift);
            }
            return make_set(std::move(pts), gen, radius);
        }
        case GenKind::Perturbed: {
            if (!gen.base) throw Error("perturbed generator without base law");
            DiscreteSet base = materialize(*gen.base, radius + 2.0 * gen.delta + 1.0);
            std::vector<double> pts;
            pts.reserve(base.points.size());
            for (double p : base.points) {
                double off;
                if (gen.snap) {
                    double target = p + gen.delta / 2.0;
                    double q = target / gen.snap_alpha;
                    double r = std::round(q);
                    long long k = (std::abs(q - r) < 1e-9) ? static_cast<long long>(r) + 1
                                                           : static_cast<long long>(std::ceil(q));
                    off = gen.snap_alpha * static_cast<double>(k) - p;
                } else {
                    // Hash on the base point itself so offsets are stable
                    // under window growth for any base law.
                    long long idx = std::llround(p * 4096.0);
                    double u = gen.delta / 2.0 + (gen.delta / 2.0) * hash_uniform(gen.seed, idx);
                    double q = (p + u) / gen.snap_alpha;
                    long long klo, khi;
                    {
                        double tlo = (p + gen.delta / 2.0) / gen.snap_alpha;
                        double rlo = std::round(tlo);
                        klo = (std::abs(tlo - rlo) < 1e-9) ? static_cast<long long>(rlo) + 1
                                                           : static_cast<long long>(std::ceil(tlo));
                        double thi = (p + gen.delta) / gen.snap_alpha;
                        double rhi = std::round(thi);
                        khi = (std::abs(thi - rhi) < 1e-9) ? static_cast<long long>(rhi) - 1
                                                           : static_cast<long long>(std::floor(thi));
                    }
                    long long k = std::clamp(static_cast<long long>(std::llround(q)), klo, khi);
                    off = gen.snap_alpha * static_cast<double>(k) - p;
                }
                double moved = p + off;
                if (std::abs(moved) <= radius) pts.push_back(moved);
            }
            return make_set(std::move(pts), gen, radius);
        }
        default:
            throw Error("explicit sets cannot be materialized from a law");
    }
}

DiscreteSet with_radius(const DiscreteSet& set, double radius) {
    if (radius <= set.window_radius + kPointTol) return set;
    if (set.generator.kind == GenKind::Explicit)
        throw Error("outside truncation: explicit set cannot be extended");
    return materialize(set.generator, radius);
}

AtomicMeasure make_measure(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.support < b.support; });
    double tv = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i].support)) throw Error("atom support must be finite");
        if (i > 0 && !(atoms[i].support > atoms[i - 1].support + 0.0))
            throw Error("atom supports must be distinct");
        tv += std::abs(atoms[i].weight);
    }
    if (!std::isfinite(tv)) throw Error("total variation must be finite");
    AtomicMeasure m;
    m.atoms = std::move(atoms);
    m.total_variation = tv;
    return m;
}

} // namespace gapkit
