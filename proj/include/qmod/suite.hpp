#pragma once

/**
 * @file suite.hpp
 * @brief Named verification suites over a parameter matrix.
 *
 * Each suite expands into independent tasks (one per map/p/case) that run
 * on a bounded worker pool; rows are concatenated in task order, so the
 * report does not depend on scheduling.
 */

#include <qmod/capacity.hpp>
#include <qmod/distortion.hpp>
#include <qmod/errors.hpp>
#include <qmod/integration.hpp>
#include <qmod/modulus.hpp>
#include <qmod/plane.hpp>
#include <qmod/report.hpp>
#include <qmod/test_maps.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace qmod {

enum class SuiteName { infimum, modulus, capacity, area, point, lipschitz, all };

inline constexpr SuiteName kAllSuites[] = {SuiteName::infimum, SuiteName::modulus, SuiteName::capacity,
                                           SuiteName::area,    SuiteName::point,   SuiteName::lipschitz};

inline std::string_view to_string(SuiteName s) {
    switch (s) {
    case SuiteName::infimum: return "infimum";
    case SuiteName::modulus: return "modulus";
    case SuiteName::capacity: return "capacity";
    case SuiteName::area: return "area";
    case SuiteName::point: return "point";
    case SuiteName::lipschitz: return "lipschitz";
    case SuiteName::all: return "all";
    }
    return "all";
}

inline SuiteName parse_suite_name(std::string_view text) {
    for (SuiteName s : {SuiteName::infimum, SuiteName::modulus, SuiteName::capacity, SuiteName::area,
                        SuiteName::point, SuiteName::lipschitz, SuiteName::all}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw ValidationError("unknown suite '" + std::string(text) + "'");
}

struct RadiusGrid {
    double min = 0.1;
    double max = 0.9;
    int count = 9;
    bool geometric = false;

    std::vector<double> values() const {
        std::vector<double> out;
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(count - 1);
            out.push_back(geometric ? min * std::pow(max / min, t) : min + t * (max - min));
        }
        out.front() = min;
        out.back() = max;
        return out;
    }
};

/// Weight used by the distortion suites: K_p of each map, or a constant.
struct FieldChoice {
    enum class Kind { dilatation, constant } kind = Kind::dilatation;
    double value = 1.0;

    QField make(const RadialMap& map, const ExponentP& p) const {
        return kind == Kind::dilatation ? kp_field(map, p) : QField::constant(value, 1.0);
    }
    std::string tag() const { return kind == Kind::dilatation ? "Q=Kp" : "Q=" + format_number(value); }
};

struct SuiteConfig {
    SuiteName suite = SuiteName::all;
    /// Empty selects per-suite defaults.
    std::vector<double> p_values;
    RadiusGrid radii;
    std::vector<double> alphas{0.5, 1.0, 2.0};
    FieldChoice q_spec;
    QuadratureSpec tolerances;
    std::string output_dir = "qmod-report";
    std::uint64_t seed = 42;
    unsigned workers = 0;  // 0: hardware concurrency

    void validate() const {
        for (double p : p_values) {
            if (!(p > 1.0) || !std::isfinite(p)) {
                throw ValidationError("every p must be finite and > 1, got " + format_number(p));
            }
        }
        if (radii.count < 2) {
            throw ValidationError("radius grid needs at least 2 points");
        }
        if (!(radii.min > 0.0 && radii.min < radii.max && radii.max < 1.0)) {
            throw ValidationError("radius grid must satisfy 0 < r-min < r-max < 1");
        }
        if (alphas.empty()) {
            throw ValidationError("at least one map is required");
        }
        for (double a : alphas) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw ValidationError("map exponent alpha must be positive, got " + format_number(a));
            }
        }
        if (q_spec.kind == FieldChoice::Kind::constant && !(q_spec.value > 0.0 && std::isfinite(q_spec.value))) {
            throw ValidationError("constant Q must be positive");
        }
        tolerances.validated();
    }
};

namespace detail {

/// Deterministic uniform doubles on [lo, hi) from a standard-specified engine.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}
    double operator()(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

using Task = std::function<VerificationReport()>;

inline VerificationReport run_tasks(const std::vector<Task>& tasks, unsigned workers) {
    std::vector<VerificationReport> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                results[i] = tasks[i]();
            } catch (const std::exception& e) {
                results[i].note("task_error", std::string("what=") + e.what(), 0.0, 0.0, Status::fail);
            }
        }
    };
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    VerificationReport out;
    for (auto& r : results) {
        out.append(r);
    }
    return out;
}

inline std::vector<double> p_or(const SuiteConfig& cfg, std::vector<double> defaults) {
    return cfg.p_values.empty() ? defaults : cfg.p_values;
}

inline double relative_tol(double scale, double rel) { return rel * std::max(std::abs(scale), 1e-300); }

// ---------------------------------------------------------------- infimum

inline void add_infimum_tasks(const SuiteConfig& cfg, std::vector<Task>& tasks) {
    const auto qs = p_or(cfg, {1.5, 2.0, 3.0});
    constexpr int kCases = 50;
    const std::uint64_t seed = cfg.seed;
    const std::string seed_tag = "seed=" + std::to_string(seed);
    for (int c = 0; c < kCases; ++c) {
        const double q = qs[static_cast<std::size_t>(c) % qs.size()];
        tasks.push_back([=] {
            Uniform rng(seed * 1000003ULL + static_cast<std::uint64_t>(c));
            const std::size_t n = 100 + static_cast<std::size_t>(rng.bits() % 901);
            DiscreteMeasureSpace space;
            for (std::size_t i = 0; i < n; ++i) {
                space.points.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(n));
                space.weights.push_back(1.0 / static_cast<double>(n));
                space.phi.push_back(rng(0.5, 2.0));
            }
            const auto closed = weighted_infimum_closed(space, q);
            const double numeric = weighted_infimum_numeric(space, q, 20000, 1e-15);
            VerificationReport r;
            const std::string params =
                param_string({{"case", static_cast<double>(c)}, {"q", q}, {"n", static_cast<double>(n)}}, seed_tag);
            r.equality("infimum_oracle", params, numeric, closed.value, 1e-6 * closed.value);

            detail::CompensatedSum mass;
            for (std::size_t i = 0; i < n; ++i) {
                mass.add(closed.alpha0[i] * space.weights[i]);
            }
            r.equality("infimum_constraint", params, mass.total(), 1.0, 1e-12);

            const double at_opt = weighted_objective(space, closed.alpha0, q);
            double worst = kInf;
            for (int k = 0; k < 5; ++k) {
                std::vector<double> d(n);
                double mean = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    d[i] = rng(-1.0, 1.0);
                    mean += d[i] * space.weights[i];
                }
                double amp = 0.0;
                double min_alpha = kInf;
                for (std::size_t i = 0; i < n; ++i) {
                    d[i] -= mean;  // total mass 1, so sum d_i mu_i = 0
                    amp = std::max(amp, std::abs(d[i]));
                    min_alpha = std::min(min_alpha, closed.alpha0[i]);
                }
                const double t = rng(0.01, 0.5) * min_alpha / amp;
                std::vector<double> a = closed.alpha0;
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] += t * d[i];
                }
                worst = std::min(worst, weighted_objective(space, a, q));
            }
            r.dominance("infimum_perturbation", params, at_opt, worst, 1e-13 * at_opt);
            return r;
        });
    }
    tasks.push_back([] {
        VerificationReport r;
        const auto one = DiscreteMeasureSpace::uniform(0.0, 1.0, 1000, [](double) { return 1.0; });
        const auto c1 = weighted_infimum_closed(one, 2.0);
        r.equality("infimum_unit_phi", param_string({{"q", 2.0}, {"n", 1000.0}}), c1.value, 1.0, 1e-12);
        const auto lin = DiscreteMeasureSpace::uniform(0.0, 1.0, 10000, [](double x) { return 1.0 + x; });
        r.equality("infimum_linear_phi", param_string({{"q", 2.0}, {"n", 10000.0}}),
                   weighted_infimum_closed(lin, 2.0).value, 1.0 / std::log(2.0), 1e-8);
        return r;
    });
}

// ---------------------------------------------------------------- modulus

inline double circle_family_closed(double r1, double r2, double p) {
    return std::pow(kTwoPi, 1.0 - p) * power_integral(r1, r2, 1.0 - p);
}

inline void add_modulus_tasks(const SuiteConfig& cfg, std::vector<Task>& tasks) {
    const auto ps = p_or(cfg, {1.5, 2.0, 3.0, 4.0});
    const QuadratureSpec spec = cfg.tolerances;
    const std::uint64_t seed = cfg.seed;
    const std::string seed_tag = "seed=" + std::to_string(seed);
    constexpr double kScale = 2.5;
    const Annulus ring{{}, 0.5, 1.0};

    for (double pv : ps) {
        tasks.push_back([=] {
            const ExponentP p(pv);
            VerificationReport r;
            const double closed = circle_family_closed(ring.r1, ring.r2, pv);
            for (double c : {1.0, kScale}) {
                const QField q = QField::constant(c);
                const auto lmb = lower_modulus_bound(q, ring, p, spec);
                r.equality("criterion_consistency", param_string({{"p", pv}, {"Q", c}, {"r1", 0.5}, {"r2", 1.0}}),
                           c * lmb.value, closed, relative_tol(closed, 1e-8));
            }
            r.equality("circle_family_modulus", param_string({{"p", pv}, {"r1", 0.5}, {"r2", 1.0}}),
                       circle_family_modulus(ring, p, spec), closed, relative_tol(closed, 1e-8));

            // Q -> cQ scales the ring norm by c, the bound by 1/c and the Jensen minimum by c^{1/(p-1)}.
            const QField one = QField::constant(1.0);
            const QField scaled = one.scaled(kScale);
            const std::string sp = param_string({{"p", pv}, {"c", kScale}});
            const double n1 = ring_norm(one, {}, 0.75, p, spec).value;
            const double nc = ring_norm(scaled, {}, 0.75, p, spec).value;
            r.equality("scaling_ring_norm", sp, nc / n1, kScale, 1e-8 * kScale);
            const double b1 = lower_modulus_bound(one, ring, p, spec).value;
            const double bc = lower_modulus_bound(scaled, ring, p, spec).value;
            r.equality("scaling_lower_bound", sp, bc / b1, 1.0 / kScale, 1e-8 / kScale);
            const double j1 = jensen_functional(one, ring, p, eta0(one, ring, p, spec), spec).value;
            const double jc = jensen_functional(scaled, ring, p, eta0(scaled, ring, p, spec), spec).value;
            const double expect = std::pow(kScale, p.lambda());
            r.equality("scaling_jensen_min", sp, jc / j1, expect, 1e-8 * expect);

            // Extremal density at |z - z0| = r equals Q / ||Q|| = (2 pi r)^{1-p} for Q = 1.
            for (double rad : {0.6, 0.9}) {
                const double rho0 = extremal_density(one, {}, p, {rad, 0.0}, spec).value;
                const double want = std::pow(kTwoPi * rad, 1.0 - pv);
                r.equality("extremal_density", param_string({{"p", pv}, {"r", rad}}), rho0, want,
                           relative_tol(want, 1e-8));
            }
            return r;
        });

        for (double c : {1.0, kScale}) {
            tasks.push_back([=] {
                const ExponentP p(pv);
                const QField q = QField::constant(c);
                VerificationReport r;
                const auto bound = lower_modulus_bound(q, ring, p, spec);
                const auto e0 = eta0(q, ring, p, spec);
                const double at_eta0 = jensen_functional(q, ring, p, e0, spec).value;
                const double expect = std::pow(bound.value, -1.0 / (pv - 1.0));
                const std::string params = param_string({{"p", pv}, {"Q", c}, {"r1", 0.5}, {"r2", 1.0}});
                r.equality("jensen_equality", params, at_eta0, expect, relative_tol(expect, 1e-6));
                r.equality("eta0_normalization", params, e0.mass(spec), 1.0, 1e-8);

                Uniform rng(seed * 7919ULL + static_cast<std::uint64_t>(pv * 1000.0) +
                            static_cast<std::uint64_t>(c * 100.0));
                for (int k = 0; k < 20; ++k) {
                    const double a = rng(-2.0, 2.0);
                    const double b = rng(-2.0, 2.0);
                    const double cc = rng(-2.0, 2.0);
                    auto eta = RadialDensity::normalized(
                        [=](double t) {
                            const double u = (t - 0.5) / 0.5;
                            return std::exp(a * u + b * u * u + cc * std::sin(3.0 * u));
                        },
                        0.5, 1.0, spec);
                    const double other = jensen_functional(q, ring, p, eta, spec).value;
                    r.dominance("jensen_minimality", params + " k=" + std::to_string(k) + " " + seed_tag, at_eta0,
                                other, relative_tol(at_eta0, 1e-8));
                }
                return r;
            });
        }
    }

    // Connecting modulus with q = p/(p-1) times I^{1/(p-1)} at Q = 1 equals 1 on round rings.
    const Annulus rings[] = {{{}, 0.1, 1.0}, {{}, 0.25, 1.0}, {{}, 0.5, 1.0}, {{}, 0.9, 1.0}, {{}, 0.3, 2.0}};
    for (double pv : ps) {
        tasks.push_back([=] {
            const ExponentP p(pv);
            const QField one = QField::constant(1.0);
            VerificationReport r;
            for (const auto& a : rings) {
                const double conn = connecting_modulus_annulus(a, p.conjugate());
                const double lmb = lower_modulus_bound(one, a, p, spec).value;
                r.equality("duality_identity", param_string({{"p", pv}, {"r1", a.r1}, {"r2", a.r2}}),
                           conn * std::pow(lmb, p.lambda()), 1.0, 1e-6);
            }
            return r;
        });
    }
}

// ---------------------------------------------------------------- capacity

inline void add_capacity_tasks(const SuiteConfig& cfg, std::vector<Task>& tasks) {
    const auto ps = p_or(cfg, {1.25, 1.5, 1.75, 2.0});
    std::vector<RingCondenser> rings;
    for (int i = 1; i <= 9; ++i) {
        rings.push_back({{}, 0.1 * i, 1.0});
    }
    for (const auto& ring : rings) {
        tasks.push_back([=] {
            VerificationReport r = check_capacity_bounds(ring, ps, 1.0, 1e-9);
            // Monotonicity: a larger outer disk lowers the capacity, a larger compact raises it.
            for (double p : ps) {
                const double cap = annulus_capacity(ring, p);
                const std::string params = param_string({{"r1", ring.inner_radius}, {"r2", 1.0}, {"p", p}});
                r.dominance("monotone_outer", params, annulus_capacity({{}, ring.inner_radius, 1.25}, p), cap, 0.0);
                r.dominance("monotone_inner", params, cap,
                            annulus_capacity({{}, ring.inner_radius + 0.05, 1.0}, p), 0.0);
                if (p == 2.0) {
                    const double dilated = annulus_capacity({{}, 3.0 * ring.inner_radius, 3.0}, p);
                    r.equality("conformal_invariance", params + " s=3", dilated, cap, 1e-10 * cap);
                }
            }
            return r;
        });
    }
    tasks.push_back([=] {
        VerificationReport r;
        for (double p : ps) {
            if (p <= 2.0) {
                const double gamma = estimate_diameter_gamma(rings, p);
                r.note("diameter_gamma_estimate", param_string({{"p", p}}), gamma, gamma, Status::info);
            }
        }
        return r;
    });
}

// ---------------------------------------------------------------- area

inline VerificationReport area_rows(const RadialMap& map, const ExponentP& p, const FieldChoice& field,
                                    const std::vector<double>& radii, const QuadratureSpec& spec) {
    const QField q = field.make(map, p);
    VerificationReport r;
    for (double rad : radii) {
        const std::string params = param_string({{"p", p.p()}, {"r", rad}}, map.label() + " " + field.tag());
        const double actual = image_disk_area(map, rad);
        const auto bound = area_bound({p, q, rad}, spec);
        if (bound.degenerate) {
            r.note("area_theorem", params, actual, 0.0, Status::degenerate);
        } else {
            r.dominance("area_theorem", params, actual, bound.value, 1e-8 * kPi);
        }
    }
    return r;
}

inline void add_area_tasks(const SuiteConfig& cfg, std::vector<Task>& tasks) {
    const auto ps = p_or(cfg, {2.0, 3.0, 4.0});
    const auto radii = cfg.radii.values();
    for (double alpha : cfg.alphas) {
        for (double pv : ps) {
            if (pv < 2.0) {
                continue;
            }
            tasks.push_back([=, field = cfg.q_spec, spec = cfg.tolerances] {
                return area_rows(radial_power_map(alpha), ExponentP(pv), field, radii, spec);
            });
        }
    }
}

// ---------------------------------------------------------------- point

inline void add_point_tasks(const SuiteConfig& cfg, std::vector<Task>& tasks) {
    const auto ps = p_or(cfg, {2.0, 3.0, 4.0});
    const auto radii = cfg.radii.values();
    const auto shrinking = geometric_grid(0.5, 0.7, 40);
    const QuadratureSpec spec = cfg.tolerances;
    const FieldChoice field = cfg.q_spec;

    for (double alpha : cfg.alphas) {
        for (double pv : ps) {
            if (pv < 2.0) {
                continue;
            }
            tasks.push_back([=] {
                const ExponentP p(pv);
                const auto map = radial_power_map(alpha);
                const QField q = field.make(map, p);
                const std::string tag = map.label() + " " + field.tag();
                VerificationReport r;
                if (field.kind == FieldChoice::Kind::dilatation) {
                    auto growth = verify_growth_inequality(map, p, radii, spec);
                    for (auto& e : growth.entries) {
                        e.params += " " + field.tag();
                    }
                    r.append(growth);
                }
                for (double rad : radii) {
                    const double big_r = point_radius_R(p, q, rad, spec).value;
                    const double bound = area_bound({p, q, rad}, spec).value;
                    r.equality("R_consistency", param_string({{"p", pv}, {"r", rad}}, tag), kPi * big_r * big_r,
                               bound, relative_tol(bound, 1e-10));
                }
                const auto scan = liminf_scan(map, p, q, shrinking, spec);
                for (std::size_t i = 0; i < scan.grid.size(); ++i) {
                    r.note("point_ratio", param_string({{"p", pv}, {"r", scan.grid[i]}}, tag), scan.ratio_at[i], 1.0,
                           Status::info);
                }
                if (field.kind == FieldChoice::Kind::dilatation) {
                    r.dominance("point_liminf", param_string({{"p", pv}}, tag), scan.liminf_estimate, 1.0, 1e-6);
                } else {
                    // A user constant need not dominate K_p, so the bound is not asserted.
                    r.note("point_liminf", param_string({{"p", pv}}, tag), scan.liminf_estimate, 1.0, Status::info);
                }
                return r;
            });
        }
    }

    for (double pv : ps) {
        if (!(pv > 2.0)) {
            continue;
        }
        tasks.push_back([=] {
            const ExponentP p(pv);
            VerificationReport r;
            const auto consts = limit_constants(p);
            r.note("limit_constant_comparison", param_string({{"p", pv}}), consts.alternative, consts.derived,
                   Status::info);
            // Identity map with Q = 1: the product is derived * (1 - r^{p-2})^{1/(p-2)} exactly.
            const auto id = radial_power_map(1.0);
            for (double rad : {0.5, 0.1, shrinking.back()}) {
                const double product = limit_product(id, QField::constant(1.0, 1.0), p, rad, spec);
                const double exact = consts.derived * std::pow(-std::expm1((pv - 2.0) * std::log(rad)), 1.0 / (pv - 2.0));
                r.equality("limit_product", param_string({{"p", pv}, {"r", rad}}, "alpha=1 Q=1"), product, exact,
                           relative_tol(exact, 1e-7));
            }
            return r;
        });
    }
}

// ---------------------------------------------------------------- lipschitz

inline void add_lipschitz_tasks(const SuiteConfig& cfg, std::vector<Task>& tasks) {
    const auto ps = p_or(cfg, {3.0, 4.0});
    const auto eps = geometric_grid(0.5, 0.7, 40);
    for (double alpha : cfg.alphas) {
        for (double pv : ps) {
            if (!(pv > 2.0)) {
                continue;
            }
            tasks.push_back([=, spec = cfg.tolerances] {
                return lipschitz_consistency(radial_power_map(alpha), ExponentP(pv), eps, spec);
            });
        }
    }
}

} // namespace detail

/// Runs the selected suites and returns their rows; no files are touched.
inline VerificationReport build_report(const SuiteConfig& cfg) {
    cfg.validate();
    VerificationReport out;
    for (SuiteName s : kAllSuites) {
        if (cfg.suite != SuiteName::all && cfg.suite != s) {
            continue;
        }
        std::vector<detail::Task> tasks;
        switch (s) {
        case SuiteName::infimum: detail::add_infimum_tasks(cfg, tasks); break;
        case SuiteName::modulus: detail::add_modulus_tasks(cfg, tasks); break;
        case SuiteName::capacity: detail::add_capacity_tasks(cfg, tasks); break;
        case SuiteName::area: detail::add_area_tasks(cfg, tasks); break;
        case SuiteName::point: detail::add_point_tasks(cfg, tasks); break;
        case SuiteName::lipschitz: detail::add_lipschitz_tasks(cfg, tasks); break;
        case SuiteName::all: break;
        }
        auto rows = detail::run_tasks(tasks, cfg.workers);
        rows.set_suite(std::string(to_string(s)));
        out.append(rows);
    }
    return out;
}

} // namespace qmod
