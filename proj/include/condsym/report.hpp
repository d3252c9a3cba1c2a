#pragma once

/**
 * @file report.hpp
 * @brief JSON and CSV forms of residual reports.
 */

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "condsym/fields.hpp"
#include "condsym/verify.hpp"

namespace condsym {

inline nlohmann::ordered_json to_json(const Point& p) {
    return {{"t", p.t}, {"x", p.x}};
}

inline nlohmann::ordered_json to_json(const ResidualReport& r) {
    nlohmann::ordered_json j;
    j["equation"] = std::string(to_string(r.equation));
    j["field"] = r.field;
    j["points_evaluated"] = r.points_evaluated;
    j["points_excluded"] = r.points_excluded;
    j["max_abs"] = r.max_abs;
    j["max_abs_normalized"] = r.max_abs_normalized;
    j["rms"] = r.rms;
    j["worst_point"] = to_json(r.worst_point);
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    return j;
}

inline nlohmann::ordered_json to_json(const std::vector<ResidualReport>& reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

namespace detail {

/// RFC 4180 quoting when needed.
inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace detail

inline std::string csv_header() {
    return "equation,field,points_evaluated,points_excluded,max_abs,max_abs_normalized,rms,worst_t,worst_x,"
           "tolerance,pass";
}

inline std::string to_csv_row(const ResidualReport& r) {
    using detail::csv_cell;
    using detail::format_number;
    std::ostringstream os;
    os << to_string(r.equation) << ',' << csv_cell(r.field) << ',' << r.points_evaluated << ',' << r.points_excluded
       << ',' << format_number(r.max_abs) << ',' << format_number(r.max_abs_normalized) << ','
       << format_number(r.rms) << ',' << format_number(r.worst_point.t) << ','
       << csv_cell(detail::join_numbers(r.worst_point.x, ' ')) << ',' << format_number(r.tolerance) << ','
       << (r.pass ? "true" : "false");
    return os.str();
}

inline std::string to_csv(const std::vector<ResidualReport>& reports) {
    std::string out = csv_header() + '\n';
    for (const auto& r : reports) out += to_csv_row(r) + '\n';
    return out;
}

}  // namespace condsym
