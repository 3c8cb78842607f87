#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmod {

/// Shortest decimal form that round-trips typical parameter values ("0.5", "1e-06", "inf").
inline std::string format_number(double v, int digits = 10) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

using Param = std::pair<std::string_view, double>;

/// Canonical "key=value key=value" list in the order given.
inline std::string param_string(std::initializer_list<Param> params, std::string_view extra = {}) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) {
            out += ' ';
        }
        out += k;
        out += '=';
        out += format_number(v);
    }
    if (!extra.empty()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += extra;
    }
    return out;
}

enum class Status { pass, fail, equality, degenerate, hypothesis_not_met, info };

inline std::string_view to_string(Status s) {
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::equality: return "equality";
    case Status::degenerate: return "degenerate";
    case Status::hypothesis_not_met: return "hypothesis-not-met";
    case Status::info: return "info";
    }
    return "fail";
}

inline bool parse_status(std::string_view text, Status& out) {
    for (Status s : {Status::pass, Status::fail, Status::equality, Status::degenerate,
                     Status::hypothesis_not_met, Status::info}) {
        if (to_string(s) == text) {
            out = s;
            return true;
        }
    }
    return false;
}

/// One named inequality check. margin >= -tolerance means the check holds.
struct ReportEntry {
    std::string suite;
    std::string name;
    std::string params;  // canonical "key=value key=value"
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    Status status = Status::info;

    bool passed() const { return status != Status::fail; }
};

struct VerificationReport {
    std::vector<ReportEntry> entries;

    bool all_passed() const {
        for (const auto& e : entries) {
            if (!e.passed()) {
                return false;
            }
        }
        return true;
    }

    std::size_t count(Status s) const {
        std::size_t n = 0;
        for (const auto& e : entries) {
            n += e.status == s;
        }
        return n;
    }

    void append(const VerificationReport& other) {
        entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    }

    /// small <= big within tolerance; margin = big - small.
    /// |margin| <= tolerance is reported as equality.
    ReportEntry& dominance(std::string name, std::string params, double small, double big, double tolerance) {
        ReportEntry e{{}, std::move(name), std::move(params), small, big, big - small, tolerance, Status::fail};
        if (std::isnan(e.margin) && small == big) {
            e.margin = 0.0;
        }
        if (std::abs(e.margin) <= tolerance) {
            e.status = Status::equality;
        } else if (e.margin > tolerance) {
            e.status = Status::pass;
        }
        entries.push_back(std::move(e));
        return entries.back();
    }

    /// lhs == rhs within tolerance; margin = -|lhs - rhs|.
    ReportEntry& equality(std::string name, std::string params, double lhs, double rhs, double tolerance) {
        ReportEntry e{{}, std::move(name), std::move(params), lhs, rhs, -std::abs(lhs - rhs), tolerance, Status::fail};
        if (lhs == rhs) {
            e.margin = 0.0;
        }
        if (std::abs(e.margin) <= tolerance) {
            e.status = Status::equality;
        }
        entries.push_back(std::move(e));
        return entries.back();
    }

    /// A row that records values without asserting anything.
    ReportEntry& note(std::string name, std::string params, double lhs, double rhs, Status status) {
        const double m = (std::isfinite(lhs) && std::isfinite(rhs)) ? rhs - lhs : 0.0;
        entries.push_back({{}, std::move(name), std::move(params), lhs, rhs, m, 0.0, status});
        return entries.back();
    }

    void set_suite(const std::string& suite) {
        for (auto& e : entries) {
            e.suite = suite;
        }
    }
};

} // namespace qmod
