#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapkit {

using complex_t = std::complex<double>;

// Absolute tolerance for point/weight comparisons throughout the library.
inline constexpr double kPointTol = 1e-12;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class GenKind { Explicit, Lattice, LatticeMinus, Perturbed };

// Describes the infinite law behind a finite truncation, so that operations
// can extend the window on demand instead of erroring at the boundary.
struct Generator {
    GenKind kind = GenKind::Explicit;

    // Lattice / LatticeMinus: points are alpha*n + shift.
    double alpha = 1.0;
    double shift = 0.0;

    // LatticeMinus removals: indices n with (n mod modulus) in `residues`,
    // explicitly listed `indices`, and/or seeded thinning with probability
    // `thin_prob` (decided per index, stable under window growth).
    long long modulus = 0;
    std::vector<long long> residues;
    std::vector<long long> indices;
    double thin_prob = 0.0;
    std::uint64_t thin_seed = 0;

    // Perturbed: base law plus per-point offsets.
    std::shared_ptr<const Generator> base;
    double delta = 0.0;
    bool snap = true; // snap-to-lattice mode; false = seeded random offsets
    double snap_alpha = 0.0;
    std::uint64_t seed = 0;
};

Generator explicit_generator();
Generator lattice_generator(double alpha, double shift = 0.0);
Generator lattice_minus_residues(double alpha, long long modulus,
                                 std::vector<long long> removed_residues,
                                 double shift = 0.0);
Generator lattice_minus_indices(double alpha, std::vector<long long> removed_indices,
                                double shift = 0.0);
Generator lattice_thinned(double alpha, double thin_prob, std::uint64_t seed,
                          double shift = 0.0);

// A separated, sorted, finite truncation of a (conceptually infinite) real
// sequence, covering [-window_radius, window_radius] of the infinite set.
struct DiscreteSet {
    std::vector<double> points;
    Generator generator;
    double window_radius = 0.0;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

// Validates strict monotonicity, positive separation, and (for lattice
// generators) membership in alpha*Z + shift within kPointTol.
DiscreteSet make_set(std::vector<double> points, Generator gen, double window_radius);

// Materializes the truncation of a generator over [-radius, radius].
DiscreteSet materialize(const Generator& gen, double radius);

// Re-materializes with a larger window where the law permits; errors for
// explicit sets asked beyond their truncation.
DiscreteSet with_radius(const DiscreteSet& set, double radius);

struct Atom {
    double support = 0.0;
    complex_t weight{0.0, 0.0};
};

// A finite complex atomic measure: distinct supports, sorted ascending.
struct AtomicMeasure {
    std::vector<Atom> atoms;
    double total_variation = 0.0;

    bool empty() const { return atoms.empty(); }
    std::size_t size() const { return atoms.size(); }
};

AtomicMeasure make_measure(std::vector<Atom> atoms);

struct Window {
    double radius = 0.0;
    long long half_count = 0;
};

enum class Verdict { Converging, Diverging, Inconclusive };

const char* to_string(Verdict v);

// Deterministic uniform double in [0,1) from a 64-bit state; used everywhere
// randomness is needed so results do not depend on the C++ standard library's
// distribution implementations.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Stateless per-index hash variant (stable under window growth).
double hash_uniform(std::uint64_t seed, long long index);

} // namespace gapkit
