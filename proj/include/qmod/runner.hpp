#pragma once

/**
 * @file runner.hpp
 * @brief Batch front end: JSON config, report files, SVG plots, one-shot quantities.
 *
 * Needs nlohmann/json (single header `json.hpp`) on the include path.
 */

#include <qmod/capacity.hpp>
#include <qmod/csv.hpp>
#include <qmod/distortion.hpp>
#include <qmod/errors.hpp>
#include <qmod/modulus.hpp>
#include <qmod/report.hpp>
#include <qmod/suite.hpp>
#include <qmod/svg.hpp>
#include <qmod/test_maps.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qmod {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitIo = 3 };

// ---------------------------------------------------------------- config

/**
 * Reads a JSON config whose keys mirror SuiteConfig:
 *
 *   { "suite": "area", "p_values": [2, 3],
 *     "radii": {"min": 0.1, "max": 0.9, "count": 9, "spacing": "geometric"},
 *     "maps": [{"kind": "power", "alpha": 2}, {"kind": "identity"}],
 *     "q_spec": {"kind": "dilatation"} | {"kind": "constant", "value": 2},
 *     "tolerances": {"abs_tol": 1e-10, "rel_tol": 1e-9, "max_refinements": 24},
 *     "output_dir": "out", "seed": 42, "workers": 4 }
 *
 * Unknown keys are rejected so typos do not pass silently.
 */
inline SuiteConfig config_from_json(const nlohmann::json& j, SuiteConfig cfg = {}) {
    using nlohmann::json;
    auto expect_keys = [](const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
        if (!obj.is_object()) {
            throw ValidationError(where + " must be an object");
        }
        for (const auto& [key, _] : obj.items()) {
            bool ok = false;
            for (const char* a : allowed) {
                ok = ok || key == a;
            }
            if (!ok) {
                throw ValidationError("unknown config key '" + where + "." + key + "'");
            }
        }
    };
    try {
        expect_keys(j, {"suite", "p_values", "radii", "maps", "q_spec", "tolerances", "output_dir", "seed", "workers"},
                    "config");
        if (j.contains("suite")) {
            cfg.suite = parse_suite_name(j.at("suite").get<std::string>());
        }
        if (j.contains("p_values")) {
            cfg.p_values = j.at("p_values").get<std::vector<double>>();
        }
        if (j.contains("radii")) {
            const auto& r = j.at("radii");
            expect_keys(r, {"min", "max", "count", "spacing"}, "radii");
            cfg.radii.min = r.value("min", cfg.radii.min);
            cfg.radii.max = r.value("max", cfg.radii.max);
            cfg.radii.count = r.value("count", cfg.radii.count);
            const std::string spacing = r.value("spacing", std::string(cfg.radii.geometric ? "geometric" : "linear"));
            if (spacing != "linear" && spacing != "geometric") {
                throw ValidationError("radii.spacing must be linear or geometric");
            }
            cfg.radii.geometric = spacing == "geometric";
        }
        if (j.contains("maps")) {
            cfg.alphas.clear();
            for (const auto& m : j.at("maps")) {
                expect_keys(m, {"kind", "alpha"}, "maps[]");
                const std::string kind = m.value("kind", std::string("power"));
                if (kind == "identity") {
                    cfg.alphas.push_back(1.0);
                } else if (kind == "power") {
                    if (!m.contains("alpha")) {
                        throw ValidationError("power map needs alpha");
                    }
                    cfg.alphas.push_back(m.at("alpha").get<double>());
                } else {
                    throw ValidationError("unknown map kind '" + kind + "'");
                }
            }
        }
        if (j.contains("q_spec")) {
            const auto& q = j.at("q_spec");
            expect_keys(q, {"kind", "value"}, "q_spec");
            const std::string kind = q.value("kind", std::string("dilatation"));
            if (kind == "dilatation") {
                cfg.q_spec = {FieldChoice::Kind::dilatation, 1.0};
            } else if (kind == "constant") {
                cfg.q_spec = {FieldChoice::Kind::constant, q.value("value", 1.0)};
            } else {
                throw ValidationError("q_spec.kind must be dilatation or constant");
            }
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            expect_keys(t, {"abs_tol", "rel_tol", "max_refinements"}, "tolerances");
            cfg.tolerances.abs_tol = t.value("abs_tol", cfg.tolerances.abs_tol);
            cfg.tolerances.rel_tol = t.value("rel_tol", cfg.tolerances.rel_tol);
            cfg.tolerances.max_refinements = t.value("max_refinements", cfg.tolerances.max_refinements);
        }
        if (j.contains("output_dir")) {
            cfg.output_dir = j.at("output_dir").get<std::string>();
        }
        if (j.contains("seed")) {
            cfg.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("workers")) {
            cfg.workers = j.at("workers").get<unsigned>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline SuiteConfig config_from_file(const std::string& path, SuiteConfig cfg = {}) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j, std::move(cfg));
}

// ---------------------------------------------------------------- plots

namespace detail {

/// "p=2 r=0.5 alpha=1" -> ordered key/value pairs.
inline std::vector<std::pair<std::string, std::string>> split_params(const std::string& params) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream ss(params);
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            out.emplace_back(tok, "");
        } else {
            out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
    }
    return out;
}

inline std::optional<double> param_value(const std::string& params, const std::string& key) {
    for (const auto& [k, v] : split_params(params)) {
        if (k == key) {
            return std::strtod(v.c_str(), nullptr);
        }
    }
    return std::nullopt;
}

/// params with the listed keys removed, used as a grouping key.
inline std::string params_without(const std::string& params, std::initializer_list<const char*> drop) {
    std::string out;
    for (const auto& [k, v] : split_params(params)) {
        bool skip = false;
        for (const char* d : drop) {
            skip = skip || k == d;
        }
        if (!skip) {
            out += (out.empty() ? "" : " ") + k + (v.empty() ? "" : "=" + v);
        }
    }
    return out;
}

inline std::string file_stem(std::string text) {
    for (char& c : text) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                          c == '-';
        if (!keep) {
            c = '_';
        }
    }
    return text;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

} // namespace detail

/**
 * Writes the SVG families present in the report and returns their paths:
 * area_*.svg (image area and bound over r), capacity_*.svg (capacity and its
 * lower bounds over p, log scale) and point_ratio_*.svg (|f|/R over r, log-log).
 * An empty report writes nothing.
 */
inline std::vector<std::filesystem::path> emit_plots(const VerificationReport& report,
                                                     const std::filesystem::path& output_dir) {
    std::vector<std::filesystem::path> written;
    if (report.entries.empty()) {
        std::cerr << "warning: empty report, no plots written\n";
        return written;
    }
    using Points = std::vector<std::pair<double, double>>;

    // (a) area: group key is params minus r.
    std::map<std::string, std::pair<Points, Points>> area;
    // (b) capacity per r1: capacity and each bound over p.
    std::map<double, std::map<std::string, Points>> capacity;
    // (c) point ratios per p, one series per map.
    std::map<double, std::map<std::string, Points>> ratios;

    for (const auto& e : report.entries) {
        if (e.name == "area_theorem" && e.status != Status::degenerate) {
            const auto r = detail::param_value(e.params, "r");
            if (r) {
                auto& g = area[detail::params_without(e.params, {"r"})];
                g.first.emplace_back(*r, e.lhs);
                g.second.emplace_back(*r, e.rhs);
            }
        } else if (e.name == "perimeter_bound" || e.name == "measure_bound" || e.name == "diameter_bound") {
            const auto r1 = detail::param_value(e.params, "r1");
            const auto p = detail::param_value(e.params, "p");
            if (r1 && p) {
                auto& g = capacity[*r1];
                if (e.name == "perimeter_bound") {
                    g["capacity"].emplace_back(*p, e.rhs);
                }
                g[e.name.substr(0, e.name.find('_'))].emplace_back(*p, e.lhs);
            }
        } else if (e.name == "point_ratio") {
            const auto p = detail::param_value(e.params, "p");
            const auto r = detail::param_value(e.params, "r");
            if (p && r) {
                ratios[*p][detail::params_without(e.params, {"p", "r"})].emplace_back(*r, e.lhs);
            }
        }
    }
    if (area.empty() && capacity.empty() && ratios.empty()) {
        std::cerr << "warning: report has no plottable rows, no plots written\n";
        return written;
    }
    detail::ensure_directory(output_dir);

    auto sorted = [](Points pts) {
        std::sort(pts.begin(), pts.end());
        return pts;
    };
    auto emit = [&](const std::string& stem, const svg::LineChart& chart) {
        const auto path = output_dir / (detail::file_stem(stem) + ".svg");
        detail::write_text(path, chart.render());
        written.push_back(path);
    };

    for (const auto& [key, curves] : area) {
        svg::LineChart chart("image area vs bound, " + key, {"r", false}, {"area", false});
        chart.add({"bound", sorted(curves.second), detail::kPalette[1], true, false});
        chart.add({"actual pi rho(r)^2", sorted(curves.first), detail::kPalette[0], false, true});
        emit("area_" + key, chart);
    }
    for (const auto& [r1, series] : capacity) {
        svg::LineChart chart("capacity and lower bounds, r1=" + format_number(r1) + " r2=1", {"p", false},
                             {"value", true});
        std::size_t color = 0;
        for (const char* name : {"capacity", "perimeter", "measure", "diameter"}) {
            const auto it = series.find(name);
            if (it != series.end()) {
                chart.add({name, sorted(it->second), detail::kPalette[color % 8], color != 0, true});
            }
            ++color;
        }
        emit("capacity_r1=" + format_number(r1), chart);
    }
    for (const auto& [p, series] : ratios) {
        svg::LineChart chart("|f| / R over shrinking r, p=" + format_number(p), {"r", true}, {"ratio", true});
        std::size_t color = 0;
        for (const auto& [name, pts] : series) {
            chart.add({name, sorted(pts), detail::kPalette[color++ % 8], false, true});
        }
        emit("point_ratio_p=" + format_number(p), chart);
    }
    return written;
}

// ---------------------------------------------------------------- run

struct SuiteRun {
    VerificationReport report;
    int exit_code = kExitPass;
};

/// Runs the suites, writes report.csv and plots into cfg.output_dir.
inline SuiteRun run_suite(const SuiteConfig& cfg) {
    SuiteRun run;
    try {
        cfg.validate();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        run.exit_code = kExitUsage;
        return run;
    }
    run.report = build_report(cfg);
    try {
        const std::filesystem::path dir(cfg.output_dir);
        detail::ensure_directory(dir);
        std::ostringstream csv;
        write_csv(csv, run.report);
        detail::write_text(dir / "report.csv", csv.str());
        emit_plots(run.report, dir);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        run.exit_code = kExitIo;
        return run;
    }
    run.exit_code = run.report.all_passed() ? kExitPass : kExitFail;
    return run;
}

// ---------------------------------------------------------------- compute

struct ComputedValue {
    double value = 0.0;
    double error = 0.0;
};

inline const std::map<std::string, std::vector<std::string>>& compute_quantities() {
    static const std::map<std::string, std::vector<std::string>> required{
        {"ring_norm", {"p", "r"}},
        {"lower_modulus_bound", {"p", "r1", "r2"}},
        {"annulus_capacity", {"q", "r1", "r2"}},
        {"area_bound", {"p", "r"}},
        {"point_radius_R", {"p", "r"}},
        {"extremal_density", {"p", "x", "y"}},
    };
    return required;
}

/**
 * One-shot evaluation. `args` holds key=value pairs; the weight is Q=c
 * (constant, default 1) or alpha=a (K_p of the power map r^a on the unit disk).
 */
inline ComputedValue compute(const std::string& quantity, const std::map<std::string, std::string>& args) {
    const auto& table = compute_quantities();
    const auto it = table.find(quantity);
    if (it == table.end()) {
        std::string names;
        for (const auto& [name, _] : table) {
            names += (names.empty() ? "" : ", ") + name;
        }
        throw ValidationError("unknown quantity '" + quantity + "'; expected one of: " + names);
    }
    std::set<std::string> allowed(it->second.begin(), it->second.end());
    if (quantity != "annulus_capacity") {
        allowed.insert({"Q", "alpha", "cx", "cy"});
    }
    for (const auto& [k, _] : args) {
        if (!allowed.count(k)) {
            throw ValidationError("unexpected key '" + k + "' for " + quantity);
        }
    }
    std::string missing;
    for (const auto& key : it->second) {
        if (!args.count(key)) {
            missing += (missing.empty() ? "" : " ") + key;
        }
    }
    if (!missing.empty()) {
        std::string req;
        for (const auto& key : it->second) {
            req += " " + key + "=...";
        }
        throw ValidationError("missing keys: " + missing + "; usage: compute " + quantity + req);
    }
    auto num = [&](const std::string& key, double fallback = 0.0) {
        const auto f = args.find(key);
        if (f == args.end()) {
            return fallback;
        }
        char* end = nullptr;
        const double v = std::strtod(f->second.c_str(), &end);
        if (f->second.empty() || *end != '\0') {
            throw ValidationError("value of " + key + " is not a number: '" + f->second + "'");
        }
        return v;
    };

    if (quantity == "annulus_capacity") {
        return {annulus_capacity({{}, num("r1"), num("r2")}, num("q")), 0.0};
    }
    const ExponentP p(num("p"));
    const PlanePoint center{num("cx"), num("cy")};
    if (args.count("Q") && args.count("alpha")) {
        throw ValidationError("give either Q=c or alpha=a, not both");
    }
    QField q = QField::constant(1.0, kInf, center);
    if (args.count("Q")) {
        q = QField::constant(num("Q"), kInf, center);
    } else if (args.count("alpha")) {
        if (center.x != 0.0 || center.y != 0.0) {
            throw ValidationError("the alpha field is centered at the origin");
        }
        q = kp_field(radial_power_map(num("alpha")), p);
    }
    if (quantity == "ring_norm") {
        const auto e = ring_norm(q, center, num("r"), p);
        return {e.value, e.error};
    }
    if (quantity == "lower_modulus_bound") {
        const auto e = lower_modulus_bound(q, {center, num("r1"), num("r2")}, p);
        return {e.value, e.error};
    }
    if (quantity == "extremal_density") {
        const auto e = extremal_density(q, center, p, {num("x"), num("y")});
        return {e.value, e.error};
    }
    const auto b = quantity == "area_bound" ? area_bound({p, q, num("r")}) : point_radius_R(p, q, num("r"));
    if (b.degenerate) {
        return {0.0, 0.0};
    }
    return {b.value, b.error};
}

} // namespace qmod
