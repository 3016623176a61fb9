#include "gapkit/verify.hpp"

#include "gapkit/completeness.hpp"
#include "gapkit/core_sets.hpp"
#include "gapkit/density.hpp"
#include "gapkit/dsl.hpp"
#include "gapkit/gap.hpp"
#include "gapkit/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gapkit {

namespace {

constexpr double kPi = std::numbers::pi;

VerifyCase make_case(const std::string& name, double value, double tol, bool pass,
                     std::string detail = "") {
    return VerifyCase{name, value, tol, pass, std::move(detail)};
}

json case_json(const VerifyCase& c) {
    json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

struct RemovalSpec {
    long long modulus = 2;
    std::vector<long long> residues{1};
};

RemovalSpec parse_removed(const std::string& removed) {
    RemovalSpec spec;
    if (removed.empty()) return spec; // odd integers removed: Lambda = 2Z in Z
    auto mod_at = removed.find(" mod ");
    if (mod_at == std::string::npos)
        throw Error("removal spec must look like \"0 mod 3\" or \"0|1 mod 5\"");
    spec.residues.clear();
    std::string list = removed.substr(0, mod_at);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= list.size(); ++i) {
        if (i == list.size() || list[i] == '|') {
            std::string piece = list.substr(start, i - start);
            if (!piece.empty()) spec.residues.push_back(std::stoll(piece));
            start = i + 1;
        }
    }
    spec.modulus = std::stoll(removed.substr(mod_at + 5));
    if (spec.modulus <= 0 || spec.residues.empty())
        throw Error("removal spec must name at least one residue and a positive modulus");
    return spec;
}

// --- prop21: D_low(Lambda) + D_up(complement) = 1/alpha ---

VerifyOutcome suite_prop21(const RunConfig& cfg) {
    VerifyOutcome out;
    out.suite = "prop21";
    DensityOptions opts;
    opts.radius = cfg.radius;

    struct Family {
        std::string name;
        double alpha;
        long long modulus;
        std::vector<long long> residues;
    };
    std::vector<Family> families;
    if (!cfg.removed.empty()) {
        RemovalSpec spec = parse_removed(cfg.removed);
        families.push_back({"custom", cfg.alpha, spec.modulus, spec.residues});
    } else {
        families.push_back({"2Z in Z", 1.0, 2, {1}});
        families.push_back({"n mod 3 != 0", 1.0, 3, {0}});
        families.push_back({"n mod 5 not in {0,1}", 1.0, 5, {0, 1}});
    }
    for (const auto& fam : families) {
        DiscreteSet lam = materialize(
            lattice_minus_residues(fam.alpha, fam.modulus, fam.residues), cfg.radius);
        ComplementarityReport rep = complementarity_check(lam, opts);
        std::ostringstream det;
        det << "lower=" << rep.lower.estimate << " upper(comp)=" << rep.upper_complement.estimate
            << " target=" << 1.0 / fam.alpha;
        out.cases.push_back(
            make_case("prop21 residual [" + fam.name + "]", rep.residual, 0.05,
                      rep.residual <= 0.05, det.str()));
    }
    return out;
}

// --- prop22: G(Lambda) + R(complement) = pi/alpha, plus the bridge loop ---

VerifyOutcome suite_prop22(const RunConfig& cfg) {
    VerifyOutcome out;
    out.suite = "prop22";
    DensityOptions dopts;
    dopts.radius = cfg.radius;

    RemovalSpec spec = parse_removed(cfg.removed);
    const double alpha = cfg.removed.empty() ? 1.0 : cfg.alpha;
    DiscreteSet lam =
        materialize(lattice_minus_residues(alpha, spec.modulus, spec.residues), cfg.radius);
    DiscreteSet comp = materialize(lattice_complement(lam.generator), cfg.radius);

    // Keep the two routes independent: the gap side uses the direct
    // regularity witness on Lambda, the radius side uses Redheffer on the
    // complement.
    const DensityEstimate lower = lower_bm_direct_witness(lam, dopts);
    const DensityEstimate upper_c = upper_bm_density(comp, dopts);
    const double g_est = kPi * lower.estimate;
    const double r_est = kPi * upper_c.estimate;
    const double target = kPi / alpha;
    const double residual = std::abs(g_est + r_est - target);
    {
        std::ostringstream det;
        det << "G=" << g_est << " R=" << r_est << " target=" << target;
        out.cases.push_back(make_case("prop22 identity (formula routes)", residual,
                                      0.15 * target, residual <= 0.15 * target, det.str()));
    }

    // Bridge loop closure on the canonical instance: Lambda = 2Z, Gamma = odds.
    // A gap measure on 2Z is rotated so its transform vanishes at the end of
    // the period, restricted to (0, 2a'), pushed through the forward bridge,
    // and must come back supported on the evens with the claimed gap.
    {
        const double a_gap = 1.40;
        AtomicMeasure mu0 = build_gap_measure(2.0, a_gap, 4);
        std::vector<long long> odds;
        for (long long n = -2047; n <= 2047; n += 2) odds.push_back(n);

        // Backward bridge sanity: present the gap as (0, 2a_gap).
        BridgeReport back;
        AtomicMeasure presented = modulate(mu0, -a_gap);
        GridFunction g_full = bridge_function_from_measure(presented, a_gap, odds, &back);
        out.cases.push_back(make_case("bridge backward Gamma residual",
                                      back.orthogonality_residual, 1e-6,
                                      back.orthogonality_residual < 1e-6,
                                      std::to_string(g_full.samples.size()) + " samples"));

        // Rotate so the transform vanishes on (2pi - 2 a_gap, 2pi).
        AtomicMeasure rotated = modulate(mu0, a_gap - kPi);
        const double two_a = 2.0 * kPi - 2.0 * a_gap;
        GridFunction f;
        f.lo = 0.0;
        f.hi = two_a;
        const std::size_t samples = 4096;
        f.samples.resize(samples);
        for (std::size_t j = 0; j < samples; ++j)
            f.samples[j] =
                measure_fourier(rotated, two_a * static_cast<double>(j) / samples);

        BridgeReport fwd;
        const double eps = 0.1;
        AtomicMeasure looped = bridge_measure_from_function(odds, f, eps, &fwd);
        out.cases.push_back(make_case("bridge forward orthogonality residual",
                                      fwd.orthogonality_residual, 1e-8,
                                      fwd.orthogonality_residual < 1e-8));
        out.cases.push_back(make_case("bridge loop Gamma coefficients",
                                      fwd.removed_coefficient_sup, 1e-6,
                                      fwd.removed_coefficient_sup < 1e-6));

        // Scan strictly inside the claimed centred gap.
        const double claimed_half = 0.5 * fwd.claimed_gap_length;
        AtomicMeasure centred = modulate(looped, 0.5 * (two_a + eps + 2.0 * kPi));
        const double sup =
            ft_gap_scan_auto(centred, -0.9 * claimed_half, 0.9 * claimed_half, 1024);
        out.cases.push_back(
            make_case("bridge loop gap scan", sup, 1e-5, sup < 1e-5,
                      "claimed gap length " + std::to_string(fwd.claimed_gap_length)));
        bool evens_only = true;
        for (const Atom& a : looped.atoms) {
            const long long n = std::llround(a.support);
            if (n % 2 != 0) evens_only = false;
        }
        out.cases.push_back(make_case("bridge loop support on 2Z", evens_only ? 0.0 : 1.0,
                                      0.5, evens_only));
    }
    return out;
}

// --- prop23: transport pipeline on Z + 0.5 ---

VerifyOutcome suite_prop23(const RunConfig& cfg) {
    VerifyOutcome out;
    out.suite = "prop23";
    const int window = cfg.window;
    const double radius = static_cast<double>(window) / 2.0 + 0.6;
    DiscreteSet base = materialize(lattice_generator(1.0, 0.5), radius);
    InterlacedPair pair = make_interlaced_pair(base, cfg.delta, cfg.seed);

    // Source witness: gap (-2.3, 2.3) on Z, shifted onto Z+0.5, tamed down to
    // a certified gap of (-2, 2).
    AtomicMeasure witness = build_gap_measure(1.0, 2.3, 4);
    witness = translate_supports(witness, 0.5);
    witness = restrict_supports(witness, radius);
    witness = tame_coefficients(witness, 0.3, 2, 2.3, 2.0);

    const HerglotzData h = herglotz_residues(pair);
    const double c_min = *std::min_element(h.c.begin(), h.c.end());
    out.cases.push_back(make_case("herglotz residues positive (min c_k)", c_min, 0.0,
                                  c_min > 0.0));
    const double im_phi = phi_eval(pair, complex_t(0.0, 1.0)).value.imag();
    out.cases.push_back(make_case("Im phi(i) > 0", im_phi, 0.0, im_phi > 0.0));
    double growth = 0.0;
    for (double y : {10.0, 100.0, 1000.0, 10000.0})
        growth = std::max(growth, std::abs(phi_eval(pair, complex_t(0.0, y)).value) / y);
    out.cases.push_back(make_case("|phi(iy)|/y bounded over 4 decades", growth, 1.0,
                                  growth <= 1.0));
    out.cases.push_back(make_case("herglotz reconstruction rel err",
                                  h.reconstruction_rel_err, 1e-3,
                                  h.reconstruction_rel_err < 1e-3));
    out.cases.push_back(make_case("sum c_k/lambda~_k^2 growth (last doubling)",
                                  h.weighted_sum_growth, 0.01, h.weighted_sum_growth < 0.01));

    auto [x1, x2] = default_anchors(pair);
    TransportResult tr = transport_measure(pair, witness, x1, x2);
    out.cases.push_back(make_case("partial fraction rel err", tr.partial_fraction_rel_err,
                                  1e-3, tr.partial_fraction_rel_err < 1e-3));
    out.cases.push_back(
        make_case("l1(e_k) growth (last doubling)", tr.l1_growth, 0.01, tr.l1_growth < 0.01));

    const double a = 2.0;
    TransportCertificate pass_cert = verify_transport(tr.nu, a, {1.0, 1.5});
    out.cases.push_back(make_case("verify_transport at b in {1.0, 1.5}",
                                  pass_cert.scan_sup, pass_cert.scan_budget,
                                  pass_cert.pass));
    TransportCertificate fail_cert = verify_transport(tr.nu, a, {3.0});
    const bool b3_fails =
        !fail_cert.cauchy.empty() && fail_cert.cauchy.front().second != Verdict::Converging;
    out.cases.push_back(make_case("verify_transport fails at b = 3", b3_fails ? 1.0 : 0.0,
                                  0.5, b3_fails));
    return out;
}

// --- prop24: R is stable under small perturbations ---

VerifyOutcome suite_prop24(const RunConfig& cfg) {
    VerifyOutcome out;
    out.suite = "prop24";
    RadiusOptions opts;
    opts.density.radius = cfg.radius;
    DiscreteSet z = materialize(lattice_generator(1.0), cfg.radius);
    PerturbationCheck chk = perturbation_radius_check(z, cfg.delta, 5, cfg.seed, opts);
    const double tol = 0.1 * kPi;
    std::ostringstream det;
    det << "base R=" << chk.base_radius;
    out.cases.push_back(make_case("prop24 max radius deviation (Z, delta=" +
                                      std::to_string(cfg.delta) + ")",
                                  chk.max_deviation, tol, chk.max_deviation <= tol,
                                  det.str()));
    return out;
}

// --- theorem_gap: G = pi * D_low via two routes ---

VerifyOutcome suite_theorem_gap(const RunConfig& cfg) {
    VerifyOutcome out;
    out.suite = "theorem_gap";
    GapOptions gopts;
    gopts.window = cfg.window;
    gopts.density.radius = cfg.radius;

    struct Case {
        std::string name;
        Generator gen;
        double rel_tol;
    };
    std::vector<Case> cases;
    cases.push_back({"Z", lattice_generator(1.0), 0.15});
    cases.push_back({"2Z", lattice_generator(2.0), 0.15});
    cases.push_back({"thinned 0.5Z (30%, seed 0)", lattice_thinned(0.5, 0.3, 0), 0.20});

    for (const auto& c : cases) {
        DiscreteSet set = materialize(c.gen, cfg.radius);
        GapReport rep = gap_characteristic_estimate(set, gopts);
        const double mid = 0.5 * (rep.oracle_lo + rep.oracle_hi);
        const double rel = rep.density_route > 0.0
                               ? std::abs(mid - rep.density_route) / rep.density_route
                               : mid;
        std::ostringstream det;
        det << "density route=" << rep.density_route << " oracle bracket=[" << rep.oracle_lo
            << ", " << rep.oracle_hi << "]";
        out.cases.push_back(make_case("two-route agreement [" + c.name + "]", rel, c.rel_tol,
                                      rel <= c.rel_tol, det.str()));
    }
    return out;
}

// --- lemma51: FT-scan and Cauchy-decay verdicts agree ---

VerifyOutcome suite_lemma51(const RunConfig&) {
    VerifyOutcome out;
    out.suite = "lemma51";

    struct Probe {
        std::string name;
        AtomicMeasure mu;
        std::vector<double> rungs; // b values tested
        bool has_gap;              // expected at every listed rung
    };
    std::vector<Probe> probes;
    probes.push_back({"witness Z gap 2.0", build_gap_measure(1.0, 2.0, 4), {1.0, 1.5}, true});
    probes.push_back({"witness Z gap 2.8", build_gap_measure(1.0, 2.8, 4), {1.4, 2.1}, true});
    probes.push_back({"witness 2Z gap 1.2", build_gap_measure(2.0, 1.2, 4), {0.6, 0.9}, true});
    probes.push_back({"tamed witness gap 2.0",
                      tame_coefficients(build_gap_measure(1.0, 2.3, 4), 0.3, 2, 2.3, 2.0),
                      {1.0, 1.5},
                      true});
    probes.push_back({"witness 2Z gap 0.8", build_gap_measure(2.0, 0.8, 4), {0.4, 0.6}, true});

    probes.push_back({"delta_1", make_measure({{1.0, {1.0, 0.0}}}), {0.5, 1.0}, false});
    SplitMix64 rng(3);
    for (int i = 0; i < 4; ++i) {
        const double s1 = rng.uniform(-4.0, -0.5);
        const double s2 = rng.uniform(0.5, 4.0);
        const complex_t w1(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        const complex_t w2(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        probes.push_back({"two-atom random #" + std::to_string(i + 1),
                          make_measure({{s1, w1}, {s2, w2}}),
                          {0.5, 1.0},
                          false});
    }

    for (const auto& p : probes) {
        int disagreements = 0;
        std::ostringstream det;
        for (double b : p.rungs) {
            const double sup = ft_gap_scan_auto(p.mu, -0.95 * b, 0.95 * b, 512);
            const bool scan_gap = sup < 1e-3 * p.mu.total_variation;
            const auto trace = cauchy_gap_test(p.mu, b);
            const bool cauchy_gap = trace.verdict == Verdict::Converging;
            if (scan_gap != cauchy_gap) ++disagreements;
            det << " b=" << b << ":" << (scan_gap ? "scan+" : "scan-")
                << (cauchy_gap ? "cauchy+" : "cauchy-");
            if (scan_gap != p.has_gap) ++disagreements;
        }
        out.cases.push_back(make_case("verdict agreement [" + p.name + "]",
                                      static_cast<double>(disagreements), 0.0,
                                      disagreements == 0, det.str()));
    }
    return out;
}

} // namespace

VerifyOutcome run_verify(const std::string& suite, const RunConfig& cfg) {
    VerifyOutcome out;
    if (suite == "prop21")
        out = suite_prop21(cfg);
    else if (suite == "prop22")
        out = suite_prop22(cfg);
    else if (suite == "prop23")
        out = suite_prop23(cfg);
    else if (suite == "prop24")
        out = suite_prop24(cfg);
    else if (suite == "theorem_gap")
        out = suite_theorem_gap(cfg);
    else if (suite == "lemma51")
        out = suite_lemma51(cfg);
    else
        throw Error("unknown verify suite: " + suite +
                    " (expected prop21|prop22|prop23|prop24|theorem_gap|lemma51)");

    out.pass = true;
    for (const auto& c : out.cases) out.pass = out.pass && c.pass;

    json rep = report_envelope("verify");
    rep["suite"] = out.suite;
    rep["cases"] = json::array();
    for (const auto& c : out.cases) rep["cases"].push_back(case_json(c));
    rep["pass"] = out.pass;
    out.report = std::move(rep);
    return out;
}

} // namespace gapkit
