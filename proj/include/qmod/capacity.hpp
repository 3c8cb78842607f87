#pragma once

/**
 * @file capacity.hpp
 * @brief p-capacity of round ring condensers and three classical lower bounds.
 *
 * Capacity is taken through its identity with the modulus of the connecting
 * curve family, so for a round ring it has a closed form. The bounds:
 *
 *   perimeter  cap_p >= (inf length of separating curve)^p / area(A \ C)^{p-1},   p >= 1
 *   measure    cap_p >= 2 pi^{p/2} ((2-p)/(p-1))^{p-1} area(C)^{(2-p)/2},         1 < p < 2
 *   diameter   cap_p >= gamma d(C)^p / area(A)^{p-1},                             1 < p <= 2
 *
 * gamma in the last bound depends only on p and is not known explicitly; it is
 * a caller parameter, and estimate_diameter_gamma measures the best constant
 * a sweep of round rings allows.
 */

#include <qmod/errors.hpp>
#include <qmod/modulus.hpp>
#include <qmod/plane.hpp>
#include <qmod/report.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace qmod {

inline double annulus_capacity(const RingCondenser& cond, double q) {
    return connecting_modulus_annulus(cond.annulus(), q);
}

inline double cap_bound_perimeter(double perimeter_inf, double gap_area, double p) {
    if (!(perimeter_inf > 0.0) || !(gap_area > 0.0) || !(p >= 1.0) || !std::isfinite(p)) {
        throw DomainError("perimeter bound needs perimeter > 0, gap area > 0, p >= 1");
    }
    return std::pow(perimeter_inf, p) / std::pow(gap_area, p - 1.0);
}

inline double cap_bound_measure(double compact_area, double p) {
    if (!(p > 1.0 && p < 2.0)) {
        throw DomainError("measure bound is used only for 1 < p < 2");
    }
    if (!(compact_area >= 0.0) || !std::isfinite(compact_area)) {
        throw DomainError("compact area must be finite and nonnegative");
    }
    return 2.0 * std::pow(kPi, p / 2.0) * std::pow((2.0 - p) / (p - 1.0), p - 1.0) *
           std::pow(compact_area, (2.0 - p) / 2.0);
}

inline double cap_bound_diameter(double diameter, double open_area, double p, double gamma) {
    if (!(p > 1.0 && p <= 2.0)) {
        throw DomainError("diameter bound holds for 1 < p <= 2");
    }
    if (!(gamma > 0.0) || !(open_area > 0.0) || !(diameter >= 0.0)) {
        throw DomainError("diameter bound needs gamma > 0, open area > 0, diameter >= 0");
    }
    return gamma * std::pow(diameter, p) / std::pow(open_area, p - 1.0);
}

/// Smallest capacity * area(A)^{p-1} / d(C)^p over the given round rings.
inline double estimate_diameter_gamma(std::span<const RingCondenser> rings, double p) {
    double best = kInf;
    for (const auto& c : rings) {
        const double ratio = annulus_capacity(c, p) * std::pow(c.open_area(), p - 1.0) /
                             std::pow(c.compact_diameter(), p);
        best = std::min(best, ratio);
    }
    return best;
}

/**
 * One row per applicable (bound, p): margin = capacity - bound.
 * Measure-bound rows appear only for 1 < p < 2 and diameter-bound rows only
 * for 1 < p <= 2.
 */
inline VerificationReport check_capacity_bounds(const RingCondenser& cond, std::span<const double> p_list,
                                                double gamma = 1.0, double tolerance = 1e-9) {
    VerificationReport report;
    cond.annulus();
    for (double p : p_list) {
        if (!(p > 1.0)) {
            throw DomainError("capacity exponent must exceed 1");
        }
        const double cap = annulus_capacity(cond, p);
        const std::string params =
            param_string({{"r1", cond.inner_radius}, {"r2", cond.outer_radius}, {"p", p}});
        const double tol = tolerance * std::max(1.0, cap);
        report.dominance("perimeter_bound", params,
                         cap_bound_perimeter(cond.separating_perimeter(), cond.gap_area(), p), cap, tol);
        if (p < 2.0) {
            report.dominance("measure_bound", params, cap_bound_measure(cond.compact_area(), p), cap, tol);
        }
        if (p <= 2.0) {
            report.dominance("diameter_bound", params + " gamma=" + format_number(gamma),
                             cap_bound_diameter(cond.compact_diameter(), cond.open_area(), p, gamma), cap, tol);
        }
    }
    return report;
}

} // namespace qmod
