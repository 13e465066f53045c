#pragma once

// Row tables written as CSV or as JSON {meta, rows}. Both carry the same
// fields; doubles appear with 17 significant digits.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace ldev::cli {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string full_precision(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Display rounding: fixed decimals.
inline std::string rounded(double v, int decimals)
{
    if (!std::isfinite(v)) return full_precision(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

/// Display rounding: significant digits.
inline std::string rounded_sig(double v, int digits)
{
    if (!std::isfinite(v)) return full_precision(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c)
{
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(double d) const { return full_precision(d); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(V{}, c);
}

inline void write_csv(std::ostream& os, const OutputTable& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
        os << "\r\n";
    }
}

namespace detail {

// Doubles are emitted as raw JSON numbers with the CSV text so both formats
// agree digit for digit; non-finite values become strings.
inline void json_cell(std::string& out, const Cell& c)
{
    if (std::holds_alternative<std::monostate>(c)) {
        out += "null";
    } else if (const auto* s = std::get_if<std::string>(&c)) {
        out += nlohmann::json(*s).dump();
    } else if (const auto* d = std::get_if<double>(&c)) {
        out += std::isfinite(*d) ? full_precision(*d) : nlohmann::json(full_precision(*d)).dump();
    } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
        out += std::to_string(*i);
    } else {
        out += std::get<bool>(c) ? "true" : "false";
    }
}

} // namespace detail

inline void write_json(std::ostream& os, const OutputTable& t)
{
    std::string out = "{\n  \"meta\": " + t.meta.dump() + ",\n  \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += r ? ",\n    {" : "\n    {";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) out += ", ";
            out += nlohmann::json(t.columns[i]).dump() + ": ";
            detail::json_cell(out, i < t.rows[r].size() ? t.rows[r][i] : Cell{});
        }
        out += "}";
    }
    out += t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    os << out;
}

} // namespace ldev::cli
