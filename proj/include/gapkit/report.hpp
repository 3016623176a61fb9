#pragma once

#include "gapkit/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gapkit {

// All reports use ordered JSON so identical configurations serialize to
// byte-identical files (schema "gapkit/1"; no timestamps in the body).
using json = nlohmann::ordered_json;

json report_envelope(const std::string& command);

void write_json(const json& j, const std::string& path);

struct CsvSeries {
    std::string header; // e.g. "x,abs_ft"
    std::vector<std::pair<double, double>> rows;
};

void write_csv(const CsvSeries& series, const std::string& path);

// Minimal structural validator for the bundled JSON schema (supports type,
// required, properties, items; enough to pin the report layout).
bool validate_against_schema(const json& doc, const json& schema, std::string* why = nullptr);

} // namespace gapkit
