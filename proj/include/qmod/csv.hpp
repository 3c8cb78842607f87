#pragma once

// report.csv: suite,check,params,lhs,rhs,margin,status with RFC 4180 quoting and LF line endings.

#include <qmod/errors.hpp>
#include <qmod/report.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qmod {

inline constexpr std::string_view kCsvHeader = "suite,check,params,lhs,rhs,margin,status";

inline std::string csv_quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

/// Full round-trip precision; identical values always print identically.
inline std::string csv_number(double v) { return format_number(v, 17); }

inline void write_csv(std::ostream& os, const VerificationReport& report) {
    os << kCsvHeader << '\n';
    for (const auto& e : report.entries) {
        os << csv_quote(e.suite) << ',' << csv_quote(e.name) << ',' << csv_quote(e.params) << ','
           << csv_number(e.lhs) << ',' << csv_number(e.rhs) << ',' << csv_number(e.margin) << ','
           << to_string(e.status) << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv_record(std::istream& is, bool& ok) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (is.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    ok = any;
    if (any) {
        fields.push_back(std::move(field));
    }
    return fields;
}

inline double parse_csv_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw ValidationError("bad number in report: '" + s + "'");
    }
    return v;
}

} // namespace detail

/// Parses a report written by write_csv. Tolerance is not stored and reads back as 0.
inline VerificationReport read_csv(std::istream& is) {
    VerificationReport report;
    bool ok = false;
    auto header = detail::split_csv_record(is, ok);
    std::string joined;
    for (std::size_t i = 0; i < header.size(); ++i) {
        joined += (i ? "," : "") + header[i];
    }
    if (!ok || joined != kCsvHeader) {
        throw ValidationError("report header mismatch");
    }
    for (;;) {
        auto rec = detail::split_csv_record(is, ok);
        if (!ok) {
            break;
        }
        if (rec.size() == 1 && rec[0].empty()) {
            continue;
        }
        if (rec.size() != 7) {
            throw ValidationError("report row has " + std::to_string(rec.size()) + " fields, expected 7");
        }
        ReportEntry e;
        e.suite = rec[0];
        e.name = rec[1];
        e.params = rec[2];
        e.lhs = detail::parse_csv_number(rec[3]);
        e.rhs = detail::parse_csv_number(rec[4]);
        e.margin = detail::parse_csv_number(rec[5]);
        if (!parse_status(rec[6], e.status)) {
            throw ValidationError("unknown status '" + rec[6] + "'");
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

} // namespace qmod
