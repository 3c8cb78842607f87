// qmod command line: verify suites, compute single quantities, redraw plots.

#include <qmod/runner.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

int run_verify(const qmod::SuiteConfig& flags, const std::string& config_path, const CLI::App& cmd) {
    qmod::SuiteConfig cfg;
    if (!config_path.empty()) {
        cfg = qmod::config_from_file(config_path);
    }
    auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
    if (given("--suite")) cfg.suite = flags.suite;
    if (given("--p")) cfg.p_values = flags.p_values;
    if (given("--alpha")) cfg.alphas = flags.alphas;
    if (given("--r-min")) cfg.radii.min = flags.radii.min;
    if (given("--r-max")) cfg.radii.max = flags.radii.max;
    if (given("--r-count")) cfg.radii.count = flags.radii.count;
    if (given("--r-geom")) cfg.radii.geometric = true;
    if (given("--q")) cfg.q_spec = flags.q_spec;
    if (given("--seed")) cfg.seed = flags.seed;
    if (given("--out")) cfg.output_dir = flags.output_dir;
    if (given("--workers")) cfg.workers = flags.workers;

    const auto run = qmod::run_suite(cfg);
    if (run.exit_code == qmod::kExitUsage || run.exit_code == qmod::kExitIo) {
        return run.exit_code;
    }
    const auto& r = run.report;
    std::cout << r.entries.size() << " rows: " << r.count(qmod::Status::pass) << " pass, "
              << r.count(qmod::Status::equality) << " equality, " << r.count(qmod::Status::fail) << " fail, "
              << r.count(qmod::Status::info) << " info, " << r.count(qmod::Status::degenerate) << " degenerate, "
              << r.count(qmod::Status::hypothesis_not_met) << " hypothesis-not-met\n"
              << "report: " << cfg.output_dir << "/report.csv\n";
    for (const auto& e : r.entries) {
        if (e.status == qmod::Status::fail) {
            std::cout << "FAIL " << e.suite << ' ' << e.name << " [" << e.params << "] lhs=" << qmod::format_number(e.lhs)
                      << " rhs=" << qmod::format_number(e.rhs) << '\n';
        }
    }
    return run.exit_code;
}

int run_compute(const std::string& quantity, const std::vector<std::string>& pairs) {
    std::map<std::string, std::string> args;
    for (const auto& kv : pairs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw qmod::ValidationError("expected key=value, got '" + kv + "'");
        }
        if (!args.emplace(kv.substr(0, eq), kv.substr(eq + 1)).second) {
            throw qmod::ValidationError("duplicate key '" + kv.substr(0, eq) + "'");
        }
    }
    const auto v = qmod::compute(quantity, args);
    std::printf("%.17g\n%.3g\n", v.value, v.error);
    return qmod::kExitPass;
}

int run_plot(const std::string& from, const std::string& out) {
    std::ifstream in(from, std::ios::binary);
    if (!in) {
        throw qmod::IoError("cannot open " + from);
    }
    const auto report = qmod::read_csv(in);
    for (const auto& path : qmod::emit_plots(report, out)) {
        std::cout << path.string() << '\n';
    }
    return qmod::kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moduli, capacities and distortion bounds for Q-homeomorphisms"};
    app.require_subcommand(1);

    qmod::SuiteConfig flags;
    std::string suite = "all";
    std::string config_path;
    std::string q_text;
    auto* verify = app.add_subcommand("verify", "run verification suites and write report.csv and SVG plots");
    verify->add_option("--suite", suite, "infimum|modulus|capacity|area|point|lipschitz|all");
    verify->add_option("--config", config_path, "JSON config; flags override its values");
    verify->add_option("--p", flags.p_values, "comma-separated exponents p > 1")->delimiter(',');
    verify->add_option("--alpha", flags.alphas, "comma-separated power map exponents")->delimiter(',');
    verify->add_option("--r-min", flags.radii.min, "smallest radius");
    verify->add_option("--r-max", flags.radii.max, "largest radius");
    verify->add_option("--r-count", flags.radii.count, "number of radii");
    verify->add_flag("--r-geom", flags.radii.geometric, "geometric radius spacing");
    verify->add_option("--q", q_text, "weight for the distortion suites: kp (default) or a positive constant");
    verify->add_option("--seed", flags.seed, "seed for randomized checks")->default_val(42);
    verify->add_option("--out", flags.output_dir, "output directory")->default_val("qmod-report");
    verify->add_option("--workers", flags.workers, "worker threads, 0 for all cores");

    std::string quantity;
    std::vector<std::string> pairs;
    auto* compute = app.add_subcommand("compute", "evaluate one quantity");
    compute->add_option("quantity", quantity,
                        "ring_norm|lower_modulus_bound|annulus_capacity|area_bound|point_radius_R|extremal_density")
        ->required();
    compute->add_option("params", pairs, "key=value pairs, weight via Q=c or alpha=a");

    std::string from;
    std::string plot_out = "qmod-plots";
    auto* plot = app.add_subcommand("plot", "redraw SVG plots from an existing report.csv");
    plot->add_option("--from", from, "report.csv to read")->required();
    plot->add_option("--out", plot_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qmod::kExitUsage;
    }

    try {
        if (*verify) {
            flags.suite = qmod::parse_suite_name(suite);
            if (!q_text.empty() && q_text != "kp") {
                char* end = nullptr;
                const double c = std::strtod(q_text.c_str(), &end);
                if (*end != '\0') {
                    throw qmod::ValidationError("--q expects kp or a number");
                }
                flags.q_spec = {qmod::FieldChoice::Kind::constant, c};
            }
            return run_verify(flags, config_path, *verify);
        }
        if (*compute) {
            return run_compute(quantity, pairs);
        }
        return run_plot(from, plot_out);
    } catch (const qmod::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qmod::kExitIo;
    } catch (const qmod::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qmod::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qmod::kExitUsage;
    }
}
