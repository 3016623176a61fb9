#include "gapkit/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

// Config file carries the same keys as the flags; flags win.
void merge_config_file(const std::string& path, gapkit::RunConfig& cfg,
                       const std::set<std::string>& overridden) {
    std::ifstream in(path);
    if (!in) throw gapkit::Error("cannot open config file: " + path);
    gapkit::json j;
    in >> j;
    auto take = [&](const char* key, auto& field) {
        if (j.contains(key) && overridden.count(key) == 0)
            field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    take("set", cfg.set_spec);
    take("suite", cfg.suite);
    take("measure", cfg.measure_path);
    take("radius", cfg.radius);
    take("window", cfg.window);
    take("delta", cfg.delta);
    take("gap", cfg.gap);
    take("b", cfg.b);
    take("alpha", cfg.alpha);
    take("removed", cfg.removed);
    take("seed", cfg.seed);
    take("json", cfg.json_path);
    take("csv", cfg.csv_path);
    take("witness", cfg.witness_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gapkit: completeness radius, spectral gap, and BM density estimation "
                 "for separated sequences"};
    app.require_subcommand(1);

    gapkit::RunConfig cfg;
    std::string config_path;

    auto add_common = [&](CLI::App* sub, bool wants_set) {
        if (wants_set) {
            sub->add_option("--set", cfg.set_spec, "set DSL, e.g. lattice:alpha=1");
            sub->add_option("--base", cfg.set_spec, "alias for --set");
        }
        sub->add_option("--radius", cfg.radius, "truncation radius R");
        sub->add_option("--window", cfg.window, "oracle window N");
        sub->add_option("--delta", cfg.delta, "perturbation bound");
        sub->add_option("--gap", cfg.gap, "gap level a");
        sub->add_option("--b", cfg.b, "Cauchy decay exponent");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--json", cfg.json_path, "JSON report path");
        sub->add_option("--csv", cfg.csv_path, "CSV series path");
        sub->add_option("--config", config_path, "JSON config file (flags win)");
    };

    CLI::App* density = app.add_subcommand("density", "upper/lower BM density estimates");
    add_common(density, true);
    CLI::App* gap = app.add_subcommand("gap", "gap characteristic, two routes");
    add_common(gap, true);
    gap->add_option("--witness", cfg.witness_path, "write a witness measure file");
    CLI::App* radius = app.add_subcommand("radius", "completeness radius, two routes");
    add_common(radius, true);
    CLI::App* gaptest = app.add_subcommand("gaptest", "Cauchy decay test for a measure file");
    gaptest->add_option("--measure", cfg.measure_path, "measure file")->required();
    add_common(gaptest, false);
    CLI::App* transport = app.add_subcommand("transport", "gap transport across a perturbation");
    add_common(transport, true);
    transport->add_option("--witness", cfg.witness_path, "write the transported measure");
    CLI::App* verify = app.add_subcommand("verify", "identity suites with residual reports");
    verify
        ->add_option("--suite", cfg.suite,
                     "prop21|prop22|prop23|prop24|theorem_gap|lemma51")
        ->required(false);
    verify->add_option("suite", cfg.suite, "suite name (positional)");
    verify->add_option("--alpha", cfg.alpha, "lattice spacing");
    verify->add_option("--removed", cfg.removed, "removal spec, e.g. \"0 mod 3\"");
    add_common(verify, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::set<std::string> overridden;
        for (CLI::App* sub : {density, gap, radius, gaptest, transport, verify})
            if (sub->parsed())
                for (const auto* opt : sub->get_options())
                    if (opt->count() > 0)
                        overridden.insert(opt->get_name(false, true).substr(2));
        if (!config_path.empty()) merge_config_file(config_path, cfg, overridden);

        for (CLI::App* sub : {density, gap, radius, gaptest, transport, verify})
            if (sub->parsed()) cfg.command = sub->get_name();
        if (cfg.command == "verify" && cfg.suite.empty())
            throw gapkit::Error("verify requires a suite name");

        gapkit::json rep;
        const int code = gapkit::run_command(cfg, &rep);
        if (cfg.json_path.empty()) std::cout << rep.dump(2) << '\n';
        if (cfg.command == "verify") {
            for (const auto& c : rep["cases"]) {
                std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
                          << c["name"].get<std::string>() << "  value=" << c["value"].dump()
                          << " tol=" << c["tolerance"].dump() << '\n';
            }
            std::cout << (code == 0 ? "PASS" : "FAIL") << '\n';
        }
        return code;
    } catch (const gapkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
