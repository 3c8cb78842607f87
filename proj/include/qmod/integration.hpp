#pragma once

/**
 * @file integration.hpp
 * @brief Deterministic adaptive quadrature on circles, radial segments and disks.
 *
 * circle_integral  composite Simpson in theta, halving until converged.
 * radial_integral  globally adaptive bisection with an open 5-point
 *                  Gauss-Legendre panel rule. Endpoints are never sampled,
 *                  so integrable endpoint singularities need no special case;
 *                  panels that touch an endpoint may be bisected far below
 *                  the interior depth limit.
 * disk_average     radial_integral of circle_integral, divided by the area.
 *
 * Divergence of a radial integral is reported through QuadratureResult::diverged
 * with value +-inf; failure to converge raises AccuracyError.
 */

#include <qmod/errors.hpp>
#include <qmod/plane.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace qmod {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_refinements = 24;

    const QuadratureSpec& validated() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_refinements < 1) {
            throw ValidationError("quadrature spec requires abs_tol > 0, rel_tol > 0, max_refinements >= 1");
        }
        return *this;
    }

    double tolerance_for(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool diverged = false;
    int refinements = 0;
    /// Error estimate after each accepted refinement (circle rule only).
    std::vector<double> error_history;

    bool finite() const { return !diverged && std::isfinite(value); }
};

template <typename F>
concept PlaneFunction = std::invocable<const F&, PlanePoint> &&
                        std::convertible_to<std::invoke_result_t<const F&, PlanePoint>, double>;

template <typename F>
concept RealFunction = std::invocable<const F&, double> &&
                       std::convertible_to<std::invoke_result_t<const F&, double>, double>;

/// Integral of g over the circle |z - center| = r with respect to arc length.
template <PlaneFunction G>
QuadratureResult circle_integral(const G& g, PlanePoint center, double r, const QuadratureSpec& spec = {}) {
    spec.validated();
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("circle radius must be positive and finite");
    }

    QuadratureResult out;
    std::size_t n = 8;
    bool hit_inf = false;
    auto sample_sum = [&](std::size_t count, std::size_t stride_offset, std::size_t stride) {
        double s = 0.0;
        for (std::size_t j = stride_offset; j < count; j += stride) {
            const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(count);
            const double v = static_cast<double>(g(PlanePoint::polar(center, r, theta)));
            if (std::isinf(v) && v > 0.0) {
                hit_inf = true;
            }
            s += v;
        }
        return s;
    };

    // Trapezoid sums T_n reuse all earlier nodes; Simpson is S_2n = (4 T_2n - T_n) / 3.
    double sum = sample_sum(n, 0, 1);
    double trap_prev = kTwoPi * r * sum / static_cast<double>(n);
    double simpson_prev = 0.0;
    bool have_simpson = false;

    for (int level = 0; level <= spec.max_refinements; ++level) {
        sum += sample_sum(2 * n, 1, 2);
        n *= 2;
        if (hit_inf) {
            out.value = kInf;
            out.error = kInf;
            out.diverged = true;
            return out;
        }
        const double trap = kTwoPi * r * sum / static_cast<double>(n);
        const double simpson = (4.0 * trap - trap_prev) / 3.0;
        trap_prev = trap;
        if (have_simpson) {
            const double err = std::abs(simpson - simpson_prev) / 15.0;
            out.error_history.push_back(err);
            out.value = simpson;
            out.error = err;
            out.refinements = level;
            if (err <= spec.tolerance_for(simpson)) {
                return out;
            }
        }
        simpson_prev = simpson;
        have_simpson = true;
    }
    std::ostringstream msg;
    msg << "circle integral did not converge at r=" << r << " after " << spec.max_refinements << " refinements";
    throw AccuracyError(msg.str(), out.value, out.error);
}

namespace detail {

// 5-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 5> kGaussNodes{
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
inline constexpr std::array<double, 5> kGaussWeights{
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

template <typename H>
double gauss5(const H& h, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
        s += kGaussWeights[i] * static_cast<double>(h(mid + half * kGaussNodes[i]));
    }
    return half * s;
}

struct Panel {
    double a;
    double b;
    double value;  // fine estimate (two half-panels)
    double error;  // |fine - coarse|
    int depth;
    bool at_left;
    bool at_right;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename H>
Panel make_panel(const H& h, double a, double b, int depth, bool at_left, bool at_right) {
    const double mid = 0.5 * (a + b);
    const double coarse = gauss5(h, a, b);
    const double fine = gauss5(h, a, mid) + gauss5(h, mid, b);
    double err = std::abs(fine - coarse);
    if (std::isnan(err)) {
        err = kInf;
    }
    return {a, b, fine, err, depth, at_left, at_right};
}

// Tracks the sequence of panel estimates adjacent to one endpoint. A
// non-integrable endpoint singularity shows up as estimates that stop
// shrinking under repeated bisection.
struct EndpointWatch {
    std::vector<double> magnitudes;
    double last_value = 0.0;
    double last_width = 0.0;
    /// Widths above this only show steepness near the endpoint, not a singularity at it.
    double resolution = 0.0;

    void record(double value, double width) {
        magnitudes.push_back(std::abs(value));
        last_value = value;
        last_width = width;
    }

    bool diverging() const {
        constexpr std::size_t kWindow = 8;
        if (magnitudes.size() < kWindow + 1 || last_width > resolution) {
            return false;
        }
        for (std::size_t i = magnitudes.size() - kWindow; i < magnitudes.size(); ++i) {
            if (!(magnitudes[i] >= 0.999 * magnitudes[i - 1]) || magnitudes[i] == 0.0) {
                return false;
            }
        }
        return true;
    }
};

inline double watch_resolution(double endpoint, double span) {
    const double r = 1e-9 * span;
    return endpoint == 0.0 ? r : std::min(r, 1e-6 * std::abs(endpoint));
}

} // namespace detail

/// Integral of h over (r1, r2). The endpoints are never evaluated.
template <RealFunction H>
QuadratureResult radial_integral(const H& h, double r1, double r2, const QuadratureSpec& spec = {}) {
    spec.validated();
    if (!std::isfinite(r1) || !std::isfinite(r2) || !(r1 < r2)) {
        throw DomainError("radial integral requires finite r1 < r2");
    }
    constexpr double kOverflowGuard = 1e300;
    constexpr std::size_t kMaxPanels = 200000;
    constexpr int kEndpointDepth = 1100;

    auto splittable = [&](const detail::Panel& p) {
        const double width = p.b - p.a;
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            return false;
        }
        if (p.at_left || p.at_right) {
            // Keep every Gauss node strictly inside (r1, r2) after rounding.
            const double scale = std::max(std::abs(p.a), std::abs(p.b));
            return p.depth < kEndpointDepth && width > 1024.0 * std::numeric_limits<double>::epsilon() * scale;
        }
        return p.depth < spec.max_refinements;
    };

    std::priority_queue<detail::Panel> active;
    std::vector<detail::Panel> frozen;
    detail::EndpointWatch left_watch;
    detail::EndpointWatch right_watch;
    left_watch.resolution = detail::watch_resolution(r1, r2 - r1);
    right_watch.resolution = detail::watch_resolution(r2, r2 - r1);

    auto diverged_result = [](double sign) {
        QuadratureResult d;
        d.value = sign < 0.0 ? -kInf : kInf;
        d.error = kInf;
        d.diverged = true;
        return d;
    };

    const auto root = detail::make_panel(h, r1, r2, 0, true, true);
    active.push(root);
    double running_total = root.value;
    double running_error = root.error;
    double frozen_error = 0.0;
    std::size_t panels = 1;
    int splits = 0;

    auto exact_sum = [&]() {
        std::vector<detail::Panel> all(frozen);
        auto copy = active;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
        QuadratureResult out;
        for (const auto& p : all) {
            out.value += p.value;
            out.error += p.error;
        }
        out.refinements = splits;
        return out;
    };

    for (;;) {
        if (std::isinf(running_total) || std::isnan(running_total) || std::abs(running_total) > kOverflowGuard) {
            return diverged_result(running_total);
        }
        if (left_watch.diverging()) {
            return diverged_result(left_watch.last_value);
        }
        if (right_watch.diverging()) {
            return diverged_result(right_watch.last_value);
        }

        const double tol = spec.tolerance_for(running_total);
        if (running_error <= tol) {
            auto out = exact_sum();
            if (out.error <= spec.tolerance_for(out.value)) {
                return out;
            }
            // The running sums drifted; resynchronize and keep refining.
            running_total = out.value;
            running_error = out.error;
            continue;
        }

        if (active.empty() || panels > kMaxPanels || frozen_error > tol) {
            const auto out = exact_sum();
            std::ostringstream msg;
            msg << "radial integral on (" << r1 << ", " << r2 << ") did not converge: estimate " << out.value
                << ", error bound " << out.error;
            throw AccuracyError(msg.str(), out.value, out.error);
        }

        detail::Panel worst = active.top();
        active.pop();
        if (!splittable(worst)) {
            frozen.push_back(worst);
            frozen_error += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::make_panel(h, worst.a, mid, worst.depth + 1, worst.at_left, false);
        auto right = detail::make_panel(h, mid, worst.b, worst.depth + 1, false, worst.at_right);
        if (left.at_left) {
            left_watch.record(left.value, mid - worst.a);
        }
        if (right.at_right) {
            right_watch.record(right.value, worst.b - mid);
        }
        running_total += left.value + right.value - worst.value;
        running_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        panels += 1;
        ++splits;
    }
}

/// Mean of g over the disk |z - center| < eps.
template <PlaneFunction G>
QuadratureResult disk_average(const G& g, PlanePoint center, double eps, const QuadratureSpec& spec = {}) {
    spec.validated();
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("disk radius must be positive and finite");
    }
    // r = eps s, so the outer integrand has the size of the mean and the tolerances apply to it.
    double inner_error = 0.0;
    auto ring = [&](double s) {
        const auto c = circle_integral(g, center, eps * s, spec);
        inner_error = std::max(inner_error, c.error / (kPi * eps));
        return c.value / (kPi * eps);
    };
    auto outer = radial_integral(ring, 0.0, 1.0, spec);
    outer.error += inner_error;
    return outer;
}

} // namespace qmod
