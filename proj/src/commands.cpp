#include "gapkit/completeness.hpp"
#include "gapkit/core_sets.hpp"
#include "gapkit/density.hpp"
#include "gapkit/dsl.hpp"
#include "gapkit/gap.hpp"
#include "gapkit/transport.hpp"
#include "gapkit/verify.hpp"

#include <cmath>
#include <numbers>

namespace gapkit {

namespace {

constexpr double kPi = std::numbers::pi;

json estimate_json(const DensityEstimate& e) {
    json j;
    j["estimate"] = e.estimate;
    j["bracket"] = json::array({e.lo, e.hi});
    j["method"] = e.method;
    if (e.exact) {
        j["exact"] = *e.exact;
        j["exact_agrees"] = e.exact_agrees;
    }
    j["conclusive"] = e.conclusive;
    return j;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    if (!cfg.set_spec.empty()) j["set"] = cfg.set_spec;
    if (!cfg.suite.empty()) j["suite"] = cfg.suite;
    if (!cfg.measure_path.empty()) j["measure"] = cfg.measure_path;
    j["radius"] = cfg.radius;
    j["window"] = cfg.window;
    j["delta"] = cfg.delta;
    j["gap"] = cfg.gap;
    j["b"] = cfg.b;
    j["seed"] = cfg.seed;
    return j;
}

json run_density(const RunConfig& cfg) {
    DensityOptions opts;
    opts.radius = cfg.radius;
    DiscreteSet set = set_from_dsl(cfg.set_spec, cfg.radius);
    DensityReport rep = density_report(set, opts);

    json j = report_envelope("density");
    j["config"] = config_json(cfg);
    json result;
    result["upper"] = estimate_json(rep.upper);
    result["lower"] = estimate_json(rep.lower);
    json diag = json::array();
    for (double a : {rep.upper.estimate, rep.lower.estimate}) {
        if (a <= 0.0) continue;
        const auto d = regularity_integral(set, a, std::min(cfg.radius, set.window_radius));
        json dj;
        dj["a"] = d.a;
        dj["slope"] = d.slope;
        dj["verdict"] = to_string(d.verdict);
        json partials = json::array();
        for (const auto& [r, v] : d.partial_integrals) partials.push_back(json::array({r, v}));
        dj["partial_integrals"] = partials;
        diag.push_back(dj);
    }
    result["diagnostics"] = diag;
    j["result"] = result;
    return j;
}

json run_gap(const RunConfig& cfg, CsvSeries* csv) {
    GapOptions opts;
    opts.window = cfg.window;
    opts.density.radius = cfg.radius;
    opts.want_witness = !cfg.witness_path.empty();
    DiscreteSet set = set_from_dsl(cfg.set_spec, cfg.radius);
    GapReport rep = gap_characteristic_estimate(set, opts);

    json j = report_envelope("gap");
    j["config"] = config_json(cfg);
    json result;
    result["route_density"] = json{{"value", rep.density_route},
                                   {"bracket", json::array({rep.density_lo, rep.density_hi})}};
    result["route_oracle"] =
        json{{"bracket", json::array({rep.oracle_lo, rep.oracle_hi})}};
    result["agreement"] = rep.agree;
    if (rep.witness) {
        save_measure(*rep.witness, cfg.witness_path);
        result["witness"] = json{{"path", cfg.witness_path},
                                 {"gap", rep.witness_gap},
                                 {"scan_sup", rep.witness_scan_sup}};
        if (csv) {
            csv->header = "x,abs_ft";
            const double hi = 1.05 * rep.witness_gap;
            const int n = 800;
            for (int i = 0; i <= n; ++i) {
                const double x = -hi + 2.0 * hi * static_cast<double>(i) / n;
                csv->rows.emplace_back(x, std::abs(measure_fourier(*rep.witness, x)));
            }
        }
    }
    j["result"] = result;
    return j;
}

json run_radius(const RunConfig& cfg) {
    RadiusOptions opts;
    opts.window = std::max(16, cfg.window / 4);
    opts.density.radius = cfg.radius;
    DiscreteSet set = set_from_dsl(cfg.set_spec, cfg.radius);
    RadiusReport rep = radius_estimate(set, opts);

    json j = report_envelope("radius");
    j["config"] = config_json(cfg);
    j["result"] = json{
        {"formula", json{{"value", rep.formula_value},
                         {"bracket", json::array({rep.formula_lo, rep.formula_hi})}}},
        {"defect", json{{"bracket", json::array({rep.defect_lo, rep.defect_hi})}}},
        {"agreement", rep.agree}};
    return j;
}

json run_gaptest(const RunConfig& cfg, CsvSeries* csv) {
    if (cfg.measure_path.empty()) throw Error("gaptest requires --measure FILE");
    AtomicMeasure mu = load_measure(cfg.measure_path);
    CauchyDecayTrace tr = cauchy_gap_test(mu, cfg.b);

    json j = report_envelope("gaptest");
    j["config"] = config_json(cfg);
    json result;
    result["b"] = tr.b;
    result["y_max"] = tr.y_max;
    result["verdict"] = to_string(tr.verdict);
    json sp = json::array(), sn = json::array();
    for (const auto& [y, v] : tr.samples_pos) sp.push_back(json::array({y, v}));
    for (const auto& [y, v] : tr.samples_neg) sn.push_back(json::array({y, v}));
    result["trace_pos"] = sp;
    result["trace_neg"] = sn;
    j["result"] = result;
    if (csv) {
        csv->header = "y,decay_trace";
        for (const auto& [y, v] : tr.samples_pos) csv->rows.emplace_back(y, v);
        for (const auto& [y, v] : tr.samples_neg) csv->rows.emplace_back(-y, v);
    }
    return j;
}

json run_transport(const RunConfig& cfg) {
    const double radius = static_cast<double>(cfg.window) / 2.0 + 0.6;
    DiscreteSet base = set_from_dsl(cfg.set_spec, radius);
    InterlacedPair pair = make_interlaced_pair(base, cfg.delta, cfg.seed);

    // Source witness slightly above the requested gap, tamed down to it.
    const double a = cfg.gap;
    const double a_src = 1.15 * a;
    const Generator& g = base.generator;
    if (g.kind != GenKind::Lattice)
        throw Error("transport base must be a (possibly shifted) full lattice");
    if (a_src >= kPi / g.alpha)
        throw Error("gap exceeds lattice bound for the requested base");
    AtomicMeasure witness = build_gap_measure(g.alpha, a_src, 4, g.shift);
    witness = restrict_supports(witness, radius);
    witness = tame_coefficients(witness, 0.15 * a, 2, a_src, a);

    auto [x1, x2] = default_anchors(pair);
    const HerglotzData h = herglotz_residues(pair);
    TransportResult tr = transport_measure(pair, witness, x1, x2);
    TransportCertificate cert = verify_transport(tr.nu, a, {0.5 * a, 0.75 * a});

    json j = report_envelope("transport");
    j["config"] = config_json(cfg);
    json result;
    double c_min = h.c.empty() ? 0.0 : h.c.front();
    for (double c : h.c) c_min = std::min(c_min, c);
    json partials = json::array();
    for (const auto& [cnt, v] : h.weighted_sum_partials)
        partials.push_back(json::array({cnt, v}));
    result["herglotz"] = json{{"c_min", c_min},
                              {"b1", h.b1},
                              {"b2", h.b2},
                              {"weighted_sum_partials", partials},
                              {"reconstruction_rel_err", h.reconstruction_rel_err}};
    json l1 = json::array();
    for (const auto& [cnt, v] : tr.l1_partials) l1.push_back(json::array({cnt, v}));
    result["l1_partials"] = l1;
    result["l1_growth"] = tr.l1_growth;
    result["partial_fraction_rel_err"] = tr.partial_fraction_rel_err;
    result["anchors"] = json::array({tr.x1, tr.x2});
    json certs = json::array();
    for (const auto& [b, v] : cert.cauchy)
        certs.push_back(json{{"b", b}, {"verdict", to_string(v)}});
    result["certificates"] = certs;
    result["scan_sup"] = cert.scan_sup;
    result["scan_budget"] = cert.scan_budget;
    result["pass"] = cert.pass;
    j["result"] = result;

    if (!cfg.witness_path.empty()) save_measure(tr.nu, cfg.witness_path);
    return j;
}

} // namespace

int run_command(const RunConfig& cfg, json* out) {
    json rep;
    CsvSeries csv;
    int code = 0;
    if (cfg.command == "density") {
        rep = run_density(cfg);
    } else if (cfg.command == "gap") {
        rep = run_gap(cfg, cfg.csv_path.empty() ? nullptr : &csv);
    } else if (cfg.command == "radius") {
        rep = run_radius(cfg);
    } else if (cfg.command == "gaptest") {
        rep = run_gaptest(cfg, cfg.csv_path.empty() ? nullptr : &csv);
    } else if (cfg.command == "transport") {
        rep = run_transport(cfg);
        if (!rep["result"]["pass"].get<bool>()) code = 1;
    } else if (cfg.command == "verify") {
        VerifyOutcome v = run_verify(cfg.suite, cfg);
        rep = v.report;
        rep["config"] = config_json(cfg);
        code = v.pass ? 0 : 1;
    } else {
        throw Error("unknown command: " + cfg.command);
    }

    if (!cfg.json_path.empty()) write_json(rep, cfg.json_path);
    if (!cfg.csv_path.empty() && !csv.rows.empty()) write_csv(csv, cfg.csv_path);
    if (out) *out = std::move(rep);
    return code;
}

} // namespace gapkit
