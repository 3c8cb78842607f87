#pragma once

/**
 * @file distortion.hpp
 * @brief Area distortion of disks, behavior at a point and finite Lipschitz checks
 *        for lower Q-homeomorphisms of the unit disk.
 *
 * With J(r) = int_r^1 dt / ||Q||_{1/(p-1)}(t) the image of B_r satisfies
 *
 *     p > 2:  m(f B_r) <= pi (1 + (2 pi)^{p-1} (p-2) J(r))^{2/(2-p)}
 *     p = 2:  m(f B_r) <= pi exp(-4 pi J(r))
 *
 * and R(r) = sqrt(bound / pi) controls liminf |f(z)| / R(|z|) <= 1.
 *
 * Limits as the radius shrinks (limsup, liminf) are replaced by extrema over
 * the last `tail` points of a geometric grid decreasing toward 0.
 */

#include <qmod/errors.hpp>
#include <qmod/integration.hpp>
#include <qmod/modulus.hpp>
#include <qmod/plane.hpp>
#include <qmod/report.hpp>
#include <qmod/test_maps.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace qmod {

struct AreaBoundParams {
    ExponentP p;
    QField q;
    double r;
};

struct BoundValue {
    double value = 0.0;
    double error = 0.0;
    /// The radial integral diverged, forcing the bound to 0.
    bool degenerate = false;
    /// J(r) = int_r^1 dt / ||Q||(t).
    double integral = 0.0;
};

namespace detail {

inline Estimate inverse_norm_integral(const QField& q, double r, const ExponentP& p, const QuadratureSpec& spec) {
    if (!(r > 0.0 && r < 1.0)) {
        throw DomainError("radius must lie in (0, 1)");
    }
    if (q.center() != PlanePoint{} || q.domain_radius() < 1.0) {
        throw DomainError("field must be defined on the unit disk around 0");
    }
    return lower_modulus_bound(q, Annulus{{}, r, 1.0}, p, spec);
}

inline void require_p_at_least_two(const ExponentP& p) {
    if (p.p() < 2.0) {
        throw DomainError("area and point estimates need p >= 2");
    }
}

} // namespace detail

inline BoundValue area_bound(const AreaBoundParams& params, const QuadratureSpec& spec = {}) {
    const ExponentP& p = params.p;
    detail::require_p_at_least_two(p);
    const auto j = detail::inverse_norm_integral(params.q, params.r, p, spec);
    BoundValue out;
    out.integral = j.value;
    if (j.diverged) {
        out.degenerate = true;
        return out;
    }
    if (p.p() == 2.0) {
        out.value = kPi * std::exp(-4.0 * kPi * j.value);
        out.error = 4.0 * kPi * out.value * j.error;
        return out;
    }
    const double k = std::pow(kTwoPi, p.p() - 1.0) * (p.p() - 2.0);
    const double base = 1.0 + k * j.value;
    if (!(base >= 1.0)) {
        throw AccuracyError("area bound base fell below 1", base, j.error);
    }
    const double e = 2.0 / (2.0 - p.p());
    out.value = kPi * std::pow(base, e);
    out.error = kPi * std::abs(e) * std::pow(base, e - 1.0) * k * j.error;
    return out;
}

/// R(r) with pi R(r)^2 equal to the area bound.
inline BoundValue point_radius_R(const ExponentP& p, const QField& q, double r, const QuadratureSpec& spec = {}) {
    detail::require_p_at_least_two(p);
    const auto j = detail::inverse_norm_integral(q, r, p, spec);
    BoundValue out;
    out.integral = j.value;
    if (j.diverged) {
        out.degenerate = true;
        return out;
    }
    if (p.p() == 2.0) {
        out.value = std::exp(-kTwoPi * j.value);
        out.error = kTwoPi * out.value * j.error;
        return out;
    }
    const double k = std::pow(kTwoPi, p.p() - 1.0) * (p.p() - 2.0);
    const double base = 1.0 + k * j.value;
    const double e = -1.0 / (p.p() - 2.0);
    out.value = std::pow(base, e);
    out.error = std::abs(e) * std::pow(base, e - 1.0) * k * j.error;
    return out;
}

/// Image area vs area bound with Q = K_p of the map, one row per radius.
inline VerificationReport verify_area_theorem(const RadialMap& map, const ExponentP& p, std::span<const double> r_grid,
                                              const QuadratureSpec& spec = {}) {
    detail::require_p_at_least_two(p);
    const QField q = kp_field(map, p);
    VerificationReport report;
    for (double r : r_grid) {
        const std::string params = param_string({{"p", p.p()}, {"r", r}}, map.label());
        const double actual = image_disk_area(map, r);
        const auto bound = area_bound({p, q, r}, spec);
        if (bound.degenerate) {
            report.note("area_theorem", params, actual, 0.0, Status::degenerate);
            continue;
        }
        report.dominance("area_theorem", params, actual, bound.value, 1e-8 * kPi);
    }
    return report;
}

/// 2^p pi^{p/2} / ||Q||(t) <= Phi'(t) / Phi(t)^{p/2} with Phi(t) = m(f B_t), Q = K_p.
inline VerificationReport verify_growth_inequality(const RadialMap& map, const ExponentP& p,
                                                   std::span<const double> t_grid, const QuadratureSpec& spec = {}) {
    const QField q = kp_field(map, p);
    VerificationReport report;
    for (double t : t_grid) {
        if (!(t > 0.0 && t < 1.0)) {
            throw DomainError("growth inequality grid must lie in (0, 1)");
        }
        const std::string params = param_string({{"p", p.p()}, {"t", t}}, map.label());
        const auto norm = ring_norm(q, PlanePoint{}, t, p, spec);
        const double lhs = norm.diverged ? 0.0 : std::pow(2.0, p.p()) * std::pow(kPi, p.p() / 2.0) / norm.value;
        const double rho = map.rho(t);
        const double phi = kPi * rho * rho;
        const double dphi = kTwoPi * rho * map.rho_prime(t);
        const double rhs = dphi / std::pow(phi, p.p() / 2.0);
        report.dominance("growth_inequality", params, lhs, rhs, 1e-8 * std::max(std::abs(lhs), std::abs(rhs)));
    }
    return report;
}

struct PointBehaviorResult {
    double liminf_estimate = 0.0;
    std::vector<double> grid;
    std::vector<double> ratio_at;
};

/// Extremum surrogate for a limit along a grid shrinking to 0.
struct TailLimit {
    double value = 0.0;
    bool infinite = false;
    /// max - min over the tail, a convergence indicator.
    double tail_spread = 0.0;
    std::vector<double> sequence;
};

inline constexpr std::size_t kDefaultTail = 8;

inline std::vector<double> geometric_grid(double start, double ratio, std::size_t count) {
    std::vector<double> g;
    g.reserve(count);
    double v = start;
    for (std::size_t i = 0; i < count; ++i) {
        g.push_back(v);
        v *= ratio;
    }
    return g;
}

namespace detail {

inline void require_shrinking(std::span<const double> grid, std::size_t tail) {
    if (grid.size() < std::max<std::size_t>(tail, 2)) {
        throw DomainError("grid is shorter than the tail window");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] < grid[i - 1]))) {
            throw DomainError("grid must be positive and strictly decreasing toward 0");
        }
    }
}

// Sustained geometric growth over the last five steps marks a divergent sequence.
inline bool sustained_growth(const std::vector<double>& seq) {
    constexpr std::size_t kSteps = 5;
    constexpr double kGrowth = 1.001;
    if (seq.size() < kSteps + 1) {
        return false;
    }
    for (std::size_t i = seq.size() - kSteps; i < seq.size(); ++i) {
        if (!(seq[i] > kGrowth * seq[i - 1])) {
            return false;
        }
    }
    return true;
}

inline TailLimit tail_max(std::vector<double> seq, std::size_t tail) {
    TailLimit out;
    const auto first = seq.end() - static_cast<std::ptrdiff_t>(tail);
    out.value = *std::max_element(first, seq.end());
    out.tail_spread = out.value - *std::min_element(first, seq.end());
    out.infinite = sustained_growth(seq) || std::isinf(out.value);
    if (out.infinite) {
        out.value = kInf;
    }
    out.sequence = std::move(seq);
    return out;
}

} // namespace detail

/// ratio rho(r) / R(r) on a grid shrinking to 0; the estimate is the tail minimum.
inline PointBehaviorResult liminf_scan(const RadialMap& map, const ExponentP& p, const QField& q,
                                       std::span<const double> r_grid, const QuadratureSpec& spec = {},
                                       std::size_t tail = kDefaultTail) {
    detail::require_shrinking(r_grid, tail);
    PointBehaviorResult out;
    out.grid.assign(r_grid.begin(), r_grid.end());
    for (double r : r_grid) {
        const auto big_r = point_radius_R(p, q, r, spec);
        out.ratio_at.push_back(big_r.degenerate ? kInf : min_modulus(map, r) / big_r.value);
    }
    out.liminf_estimate = *std::min_element(out.ratio_at.end() - static_cast<std::ptrdiff_t>(tail), out.ratio_at.end());
    return out;
}

/// Q0 surrogate: tail maximum of (mean of Q^{1/(p-1)} over B(center, eps))^{p-1}.
inline TailLimit q_zero(const QField& q, PlanePoint center, const ExponentP& p, std::span<const double> eps_grid,
                        const QuadratureSpec& spec = {}, std::size_t tail = kDefaultTail) {
    detail::require_shrinking(eps_grid, tail);
    const double e = p.lambda();
    auto g = [&q, e](PlanePoint z) { return std::pow(q(z), e); };
    std::vector<double> seq;
    for (double eps : eps_grid) {
        const auto avg = disk_average(g, center, eps, spec);
        seq.push_back(avg.diverged ? kInf : std::pow(avg.value, p.p() - 1.0));
    }
    return detail::tail_max(std::move(seq), tail);
}

/// L(0, f) surrogate: tail maximum of rho(eps) / eps.
inline TailLimit stretch_estimate(const RadialMap& map, std::span<const double> eps_grid,
                                  std::size_t tail = kDefaultTail) {
    detail::require_shrinking(eps_grid, tail);
    std::vector<double> seq;
    for (double eps : eps_grid) {
        seq.push_back(map.rho(eps) / eps);
    }
    return detail::tail_max(std::move(seq), tail);
}

/**
 * Two consequences of the finite Lipschitz estimate L(z0, f) <= lambda_p Q0^{1/(p-2)}
 * that do not need the unknown constant lambda_p:
 *  (a) a finite Q0 comes with a finite stretch estimate;
 *  (b) L / Q0^{1/(p-2)} is unchanged by f -> c f, which scales K_p by c^{p-2}.
 */
inline VerificationReport lipschitz_consistency(const RadialMap& map, const ExponentP& p,
                                                std::span<const double> eps_grid, const QuadratureSpec& spec = {},
                                                std::span<const double> scales = {}) {
    if (!(p.p() > 2.0)) {
        throw DomainError("Lipschitz consistency needs p > 2");
    }
    static constexpr double kDefaultScales[] = {0.5, 2.0, 10.0};
    if (scales.empty()) {
        scales = kDefaultScales;
    }
    // Refinement decisions must not depend on the overall scale of the integrand.
    QuadratureSpec relative = spec;
    relative.abs_tol = std::numeric_limits<double>::min();

    const double inv = 1.0 / (p.p() - 2.0);
    auto ratio_for = [&](const RadialMap& m, TailLimit& q0, TailLimit& stretch) {
        q0 = q_zero(kp_field(m, p), PlanePoint{}, p, eps_grid, relative);
        stretch = stretch_estimate(m, eps_grid);
        return stretch.value / std::pow(q0.value, inv);
    };

    VerificationReport report;
    const std::string base_params = param_string({{"p", p.p()}}, map.label());
    TailLimit q0;
    TailLimit stretch;
    const double ratio = ratio_for(map, q0, stretch);

    if (q0.infinite) {
        report.note("lipschitz_finiteness", base_params, stretch.value, q0.value, Status::hypothesis_not_met);
        for (double c : scales) {
            report.note("lipschitz_scaling", base_params + " c=" + format_number(c), kInf, kInf,
                        Status::hypothesis_not_met);
        }
        return report;
    }
    report.note("lipschitz_finiteness", base_params, stretch.value, q0.value,
                stretch.infinite ? Status::fail : Status::pass);
    for (double c : scales) {
        TailLimit q0c;
        TailLimit stretch_c;
        const double ratio_c = ratio_for(map.scaled(c), q0c, stretch_c);
        report.equality("lipschitz_scaling", base_params + " c=" + format_number(c), ratio_c, ratio,
                        1e-8 * std::abs(ratio));
    }
    return report;
}

/// Two candidates for the limit of |f(z)| (int_{|z|}^1 dt/||Q||)^{1/(p-2)} as z -> 0:
/// `derived` follows from the point estimate, `alternative` is (2 pi)^{1-p} (p-2)^{1/(2-p)}.
/// They agree only at p = 3.
struct LimitConstants {
    double derived = 0.0;
    double alternative = 0.0;
};

inline LimitConstants limit_constants(const ExponentP& p) {
    if (!(p.p() > 2.0)) {
        throw DomainError("limit constants need p > 2");
    }
    const double pp = p.p();
    return {std::pow(std::pow(kTwoPi, pp - 1.0) * (pp - 2.0), -1.0 / (pp - 2.0)),
            std::pow(kTwoPi, 1.0 - pp) * std::pow(pp - 2.0, 1.0 / (2.0 - pp))};
}

/// |f(z)| (int_{|z|}^1 dt / ||Q||(t))^{1/(p-2)} at |z| = r.
inline double limit_product(const RadialMap& map, const QField& q, const ExponentP& p, double r,
                                const QuadratureSpec& spec = {}) {
    if (!(p.p() > 2.0)) {
        throw DomainError("limit product needs p > 2");
    }
    const auto j = detail::inverse_norm_integral(q, r, p, spec);
    return map.rho(r) * std::pow(j.value, 1.0 / (p.p() - 2.0));
}

} // namespace qmod
