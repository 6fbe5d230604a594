#pragma once

// Tabular experiment reports and their CSV / JSON serializations.
//
// CSV is RFC-4180 style: one header row, comma-separated, LF line
// endings, dot decimal separator, fields quoted only when needed.
// JSON is a single object {"metadata": {...}, "rows": [...]}.
//
// Serialization is deterministic: identical reports produce identical
// bytes. Wall-clock timing is therefore zero unless explicitly enabled
// by the caller.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qfa {

inline constexpr const char* k_version = "0.1.0";

using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

struct Report {
    std::string command;
    std::uint64_t master_seed = 0;
    std::string version = k_version;
    std::int64_t elapsed_ms = 0;
    std::vector<std::pair<std::string, std::string>> parameters;  // echo of the exact config
    std::vector<std::pair<std::string, std::string>> summary;     // aggregate results
    std::vector<std::string> warnings;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

namespace detail {

/// precision > 0: that many significant digits; precision <= 0: shortest
/// representation that round-trips.
inline std::string format_double(double v, int precision) {
    char buf[64];
    if (precision > 0) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        return buf;
    }
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

inline std::string cell_to_string(const Cell& cell, int precision) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) return v;
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, double>) return format_double(v, precision);
            else return std::to_string(v);
        },
        cell);
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

/// Doubles rounded to the requested significant digits before being
/// stored as JSON numbers, so the emitted text matches the CSV view.
inline nlohmann::json cell_to_json(const Cell& cell, int precision) {
    return std::visit(
        [&](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (precision > 0) return std::stod(format_double(v, precision));
                return v;
            } else {
                return v;
            }
        },
        cell);
}

} // namespace detail

inline std::string to_csv(const Report& report, int precision = 6) {
    std::string out;
    for (std::size_t c = 0; c < report.header.size(); ++c) {
        if (c) out += ',';
        out += detail::csv_escape(report.header[c]);
    }
    out += '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += detail::csv_escape(detail::cell_to_string(row[c], precision));
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const Report& report, int precision = 6) {
    nlohmann::json meta;
    meta["command"] = report.command;
    meta["seed"] = report.master_seed;
    meta["version"] = report.version;
    meta["elapsed_ms"] = report.elapsed_ms;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : report.parameters) params[key] = value;
    meta["parameters"] = params;
    if (!report.summary.empty()) {
        nlohmann::json summary = nlohmann::json::object();
        for (const auto& [key, value] : report.summary) summary[key] = value;
        meta["summary"] = summary;
    }
    meta["warnings"] = report.warnings;

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size() && c < report.header.size(); ++c)
            obj[report.header[c]] = detail::cell_to_json(row[c], precision);
        rows.push_back(std::move(obj));
    }

    nlohmann::json doc;
    doc["metadata"] = std::move(meta);
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

} // namespace qfa
