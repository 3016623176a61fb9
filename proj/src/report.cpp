#include "gapkit/report.hpp"

#include <fstream>
#include <sstream>

namespace gapkit {

json report_envelope(const std::string& command) {
    json j;
    j["schema"] = "gapkit/1";
    j["command"] = command;
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write JSON report to " + path);
    out << j.dump(2) << '\n';
}

void write_csv(const CsvSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write CSV series to " + path);
    out << series.header << '\n';
    out.precision(17);
    for (const auto& [x, y] : series.rows) out << x << ',' << y << '\n';
}

namespace {

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return true;
}

bool validate_node(const json& doc, const json& schema, std::string path, std::string* why) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        if (!type_matches(doc, t)) {
            if (why) *why = path + ": expected type " + t;
            return false;
        }
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            const std::string k = key.get<std::string>();
            if (!doc.is_object() || !doc.contains(k)) {
                if (why) *why = path + ": missing required key \"" + k + "\"";
                return false;
            }
        }
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [k, sub] : schema["properties"].items()) {
            if (doc.contains(k) &&
                !validate_node(doc.at(k), sub, path + "/" + k, why))
                return false;
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            if (!validate_node(doc[i], schema["items"], path + "[" + std::to_string(i) + "]",
                               why))
                return false;
    }
    if (schema.contains("const")) {
        if (doc != schema["const"]) {
            if (why) *why = path + ": const mismatch";
            return false;
        }
    }
    return true;
}

} // namespace

bool validate_against_schema(const json& doc, const json& schema, std::string* why) {
    return validate_node(doc, schema, "$", why);
}

} // namespace gapkit
