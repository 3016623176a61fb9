#pragma once

#include "gapkit/report.hpp"
#include "gapkit/types.hpp"

#include <optional>
#include <string>

namespace gapkit {

// One executable command line, as assembled from flags and config files.
struct RunConfig {
    std::string command;  // density | gap | radius | gaptest | transport | verify
    std::string set_spec; // set DSL
    std::string suite;    // verify suite name
    std::string measure_path;
    double radius = 1000.0; // truncation radius R
    int window = 256;       // oracle window N
    double delta = 0.2;
    double gap = 2.0;   // target gap level a
    double b = 1.5;     // Cauchy exponent
    double alpha = 1.0; // verify prop21/prop22 lattice spacing
    std::string removed; // verify removal spec, e.g. "0 mod 3"
    std::uint64_t seed = 0;
    std::string json_path;
    std::string csv_path;
    std::string witness_path;
};

struct VerifyCase {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyOutcome {
    std::string suite;
    std::vector<VerifyCase> cases;
    bool pass = true;
    json report;
};

// Suites: prop21, prop22, prop23, prop24, theorem_gap, lemma51.
VerifyOutcome run_verify(const std::string& suite, const RunConfig& cfg);

// Executes a full command; returns the process exit code (0 pass, 1 fail)
// and fills `out` with the JSON report. Emits files per cfg paths.
int run_command(const RunConfig& cfg, json* out = nullptr);

} // namespace gapkit
