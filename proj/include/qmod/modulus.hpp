#pragma once

/**
 * @file modulus.hpp
 * @brief Ring norms, circle-family moduli and the weighted infimum behind them.
 *
 * The p-modulus of the image of the concentric-circle family of a ring is
 * bounded below by
 *
 *     I = int_{r1}^{r2} dr / ||Q||(r),   ||Q||(r) = ( int_{|z-z0|=r} Q^{1/(p-1)} |dz| )^{p-1},
 *
 * which comes from minimizing int phi alpha^q dmu under int alpha dmu = 1 on
 * each circle. Both that infimum (closed form and a projected-gradient
 * oracle) and the radial quantities built on it live here.
 */

#include <qmod/errors.hpp>
#include <qmod/integration.hpp>
#include <qmod/plane.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qmod {

using Estimate = QuadratureResult;

namespace detail {

inline auto weight_power(const QField& q, const ExponentP& p) {
    const double e = p.lambda();
    return [&q, e](PlanePoint z) { return std::pow(q(z), e); };
}

inline void check_circle_in_domain(const QField& q, PlanePoint center, double r) {
    if (center.distance(q.center()) + r > q.domain_radius() * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "circle of radius " << r << " leaves the field domain";
        throw DomainError(msg.str());
    }
}

} // namespace detail

/// ||Q||_{1/(p-1)}(r): the circle integral of Q^{1/(p-1)} raised to p-1.
inline Estimate ring_norm(const QField& q, PlanePoint center, double r, const ExponentP& p,
                          const QuadratureSpec& spec = {}) {
    if (!(r > 0.0)) {
        throw DomainError("ring norm needs r > 0");
    }
    detail::check_circle_in_domain(q, center, r);
    auto c = circle_integral(detail::weight_power(q, p), center, r, spec);
    if (c.diverged) {
        return c;
    }
    const double e = p.p() - 1.0;
    Estimate out;
    out.value = std::pow(c.value, e);
    out.error = e * std::pow(c.value, e - 1.0) * c.error;
    out.refinements = c.refinements;
    return out;
}

/// Lower bound int_{r1}^{r2} dr / ||Q||(r) for the modulus of the image circle family.
/// A ring norm of +inf contributes 0; a divergent integral is returned flagged as +inf.
inline Estimate lower_modulus_bound(const QField& q, const Annulus& annulus, const ExponentP& p,
                                    const QuadratureSpec& spec = {}) {
    validate_annulus(annulus);
    detail::check_circle_in_domain(q, annulus.center, annulus.r2);
    double inner_error = 0.0;
    auto integrand = [&](double r) {
        const auto n = ring_norm(q, annulus.center, r, p, spec);
        if (n.diverged || std::isinf(n.value)) {
            return 0.0;
        }
        inner_error = std::max(inner_error, n.error / (n.value * n.value));
        return 1.0 / n.value;
    };
    auto out = radial_integral(integrand, annulus.r1, annulus.r2, spec);
    if (!out.diverged) {
        out.error += inner_error * (annulus.r2 - annulus.r1);
    }
    return out;
}

/// Exact p-modulus of the concentric circles r1 < |z - z0| < r2: int (2 pi r)^{1-p} dr.
/// r1 == r2 is the empty family and gives 0.
inline double circle_family_modulus(double r1, double r2, const ExponentP& p, const QuadratureSpec& spec = {}) {
    if (!(r1 > 0.0) || !(r1 <= r2) || !std::isfinite(r2)) {
        throw DomainError("circle family needs 0 < r1 <= r2 < inf");
    }
    if (r1 == r2) {
        return 0.0;
    }
    const double e = 1.0 - p.p();
    return radial_integral([e](double r) { return std::pow(kTwoPi * r, e); }, r1, r2, spec).value;
}

inline double circle_family_modulus(const Annulus& a, const ExponentP& p, const QuadratureSpec& spec = {}) {
    validate_annulus(a);
    return circle_family_modulus(a.r1, a.r2, p, spec);
}

/// int_{r1}^{r2} r^s dr in a form that stays accurate as s -> -1.
inline double power_integral(double r1, double r2, double s) {
    const double k = s + 1.0;
    const double log_ratio = std::log(r2 / r1);
    if (std::abs(k * log_ratio) < 1e-300) {
        return log_ratio;
    }
    return std::pow(r1, k) * std::expm1(k * log_ratio) / k;
}

/**
 * q-modulus of the family of curves joining the two boundary circles of a
 * round annulus. The extremal density is radial, c * r^{-1/(q-1)}, with c
 * fixed by unit length along a radius; this gives
 * 2 pi (int r^{-1/(q-1)} dr)^{1-q}, i.e. 2 pi / ln(r2/r1) at q = 2.
 */
inline double connecting_modulus_annulus(const Annulus& a, double q) {
    validate_annulus(a);
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw DomainError("connecting modulus needs q > 1");
    }
    if (q == 2.0) {
        return kTwoPi / std::log(a.r2 / a.r1);
    }
    const double length = power_integral(a.r1, a.r2, -1.0 / (q - 1.0));
    const double c = 1.0 / length;
    return kTwoPi * std::pow(c, q) * length;
}

/// Finite measure space given by point masses: phi_i > 0 sampled at points_i with mass mu_i > 0.
struct DiscreteMeasureSpace {
    std::vector<double> points;
    std::vector<double> weights;
    std::vector<double> phi;

    std::size_t size() const { return weights.size(); }

    const DiscreteMeasureSpace& validated() const {
        if (weights.empty()) {
            throw DomainError("measure space is empty");
        }
        if (phi.size() != weights.size() || (!points.empty() && points.size() != weights.size())) {
            throw ValidationError("measure space arrays differ in length");
        }
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
                throw ValidationError("measure weights must be positive and finite");
            }
            if (!(phi[i] > 0.0) || !std::isfinite(phi[i])) {
                throw ValidationError("phi must be positive and finite");
            }
        }
        return *this;
    }

    /// Uniform grid x_i = a + (i + 1/2) h on [a, b] with masses h.
    template <typename F>
    static DiscreteMeasureSpace uniform(double a, double b, std::size_t n, F&& f) {
        DiscreteMeasureSpace s;
        const double h = (b - a) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = a + (static_cast<double>(i) + 0.5) * h;
            s.points.push_back(x);
            s.weights.push_back(h);
            s.phi.push_back(f(x));
        }
        return s;
    }
};

struct WeightedInfimum {
    double value = 0.0;
    std::vector<double> alpha0;
};

namespace detail {

// Neumaier-compensated sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    double total() const { return sum + carry; }
};

inline double objective(const DiscreteMeasureSpace& s, const std::vector<double>& alpha, double q) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        acc.add(s.phi[i] * std::pow(alpha[i], q) * s.weights[i]);
    }
    return acc.total();
}

// Projection onto {alpha >= 0, sum mu_i alpha_i = 1} in the mu-weighted norm:
// alpha_i = max(0, y_i - tau) with tau chosen to satisfy the constraint.
inline void project_weighted_simplex(const std::vector<double>& y, const std::vector<double>& mu,
                                     std::vector<double>& out) {
    const std::size_t n = y.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return y[a] > y[b] || (y[a] == y[b] && a < b);
    });
    double mass = 0.0;
    double moment = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        mass += mu[i];
        moment += mu[i] * y[i];
        const double candidate = (moment - 1.0) / mass;
        if (k + 1 == n || y[order[k + 1]] <= candidate) {
            tau = candidate;
            break;
        }
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::max(0.0, y[i] - tau);
    }
}

} // namespace detail

/**
 * Closed-form infimum of sum phi_i alpha_i^q mu_i over alpha >= 0 with
 * sum alpha_i mu_i = 1: value (sum phi^{-lambda} mu)^{-1/lambda} with
 * lambda = 1/(q-1), attained only at alpha0 = phi^{-lambda} / sum phi^{-lambda} mu.
 */
inline WeightedInfimum weighted_infimum_closed(const DiscreteMeasureSpace& space, double q) {
    space.validated();
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw DomainError("weighted infimum needs q > 1");
    }
    const double lambda = 1.0 / (q - 1.0);
    // Factor out min phi so phi^{-lambda} cannot overflow for large lambda.
    const double phi_min = *std::min_element(space.phi.begin(), space.phi.end());
    std::vector<double> scaled(space.size());
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < space.size(); ++i) {
        scaled[i] = std::pow(space.phi[i] / phi_min, -lambda);
        acc.add(scaled[i] * space.weights[i]);
    }
    const double s = acc.total();
    WeightedInfimum out;
    out.value = phi_min * std::pow(s, -1.0 / lambda);
    out.alpha0.resize(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        out.alpha0[i] = scaled[i] / s;
    }
    return out;
}

/// Objective sum phi_i alpha_i^q mu_i at a given alpha.
inline double weighted_objective(const DiscreteMeasureSpace& space, const std::vector<double>& alpha, double q) {
    if (alpha.size() != space.size()) {
        throw ValidationError("alpha has the wrong length");
    }
    return detail::objective(space, alpha, q);
}

/**
 * Brute-force minimization of the same problem by projected gradient descent
 * from the uniform point. Gradient steps use the mu-weighted inner product;
 * the step starts at the inverse curvature of the objective at the uniform
 * point and is halved until the projected step gives sufficient decrease.
 * Stops when the relative objective decrease falls below tol.
 */
inline double weighted_infimum_numeric(const DiscreteMeasureSpace& space, double q, int iters, double tol) {
    space.validated();
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw DomainError("weighted infimum needs q > 1");
    }
    if (iters < 1 || !(tol > 0.0)) {
        throw ValidationError("iters must be >= 1 and tol > 0");
    }
    const std::size_t n = space.size();
    const double total_mass = std::accumulate(space.weights.begin(), space.weights.end(), 0.0);
    const double phi_max = *std::max_element(space.phi.begin(), space.phi.end());

    std::vector<double> alpha(n, 1.0 / total_mass);
    std::vector<double> grad(n);
    std::vector<double> trial_point(n);
    std::vector<double> trial(n);

    const double uniform_level = 1.0 / total_mass;
    double step = 1.0 / (q * std::max(q - 1.0, 1.0) * phi_max * std::pow(uniform_level, q - 2.0));
    double value = detail::objective(space, alpha, q);
    double best = value;
    int calm = 0;

    for (int it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = q * space.phi[i] * std::pow(alpha[i], q - 1.0);
        }
        double trial_value = 0.0;
        bool accepted = false;
        for (int halvings = 0; halvings < 80; ++halvings) {
            for (std::size_t i = 0; i < n; ++i) {
                trial_point[i] = alpha[i] - step * grad[i];
            }
            detail::project_weighted_simplex(trial_point, space.weights, trial);
            detail::CompensatedSum linear;
            detail::CompensatedSum quad;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = trial[i] - alpha[i];
                linear.add(space.weights[i] * grad[i] * d);
                quad.add(space.weights[i] * d * d);
            }
            trial_value = detail::objective(space, trial, q);
            if (trial_value <= value + linear.total() + quad.total() / (2.0 * step) + 1e-15 * std::abs(value)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            break;
        }
        const double decrease = value - trial_value;
        alpha.swap(trial);
        value = trial_value;
        best = std::min(best, value);
        step *= 2.0;
        if (decrease <= tol * std::abs(value)) {
            if (++calm >= 3) {
                return best;
            }
        } else {
            calm = 0;
        }
    }
    std::ostringstream msg;
    msg << "projected gradient did not converge in " << iters << " iterations";
    throw AccuracyError(msg.str(), best, kInf);
}

/// Extremal density rho0(z) = Q(z) / ||Q||(|z - z0|) of the circle-family problem.
inline Estimate extremal_density(const QField& q, PlanePoint center, const ExponentP& p, PlanePoint z,
                                 const QuadratureSpec& spec = {}) {
    const double r = z.distance(center);
    if (!(r > 0.0)) {
        throw DomainError("extremal density is undefined at the ring center");
    }
    const auto norm = ring_norm(q, center, r, p, spec);
    const double qz = q(z);
    Estimate out;
    if (norm.diverged) {
        out.value = 0.0;
        out.error = 0.0;
        return out;
    }
    out.value = qz / norm.value;
    out.error = qz * norm.error / (norm.value * norm.value);
    return out;
}

/// Nonnegative density on (r1, r2), expected to integrate to 1.
struct RadialDensity {
    std::function<double(double)> eval;
    double r1 = 0.0;
    double r2 = 0.0;

    double operator()(double r) const { return eval(r); }

    double mass(const QuadratureSpec& spec = {}) const { return radial_integral(eval, r1, r2, spec).value; }

    /// Divides f by its integral over (r1, r2).
    static RadialDensity normalized(std::function<double(double)> f, double r1, double r2,
                                    const QuadratureSpec& spec = {}) {
        const double m = radial_integral(f, r1, r2, spec).value;
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw DomainError("density has no finite positive mass");
        }
        return {[f = std::move(f), m](double r) { return f(r) / m; }, r1, r2};
    }
};

/// eta0(t) = 1 / (I * ||Q||(t)), the density that minimizes the Jensen functional.
inline RadialDensity eta0(const QField& q, const Annulus& annulus, const ExponentP& p,
                          const QuadratureSpec& spec = {}) {
    const auto bound = lower_modulus_bound(q, annulus, p, spec);
    if (bound.diverged || std::isinf(bound.value)) {
        throw DegenerateError("I = inf: the ring norm integral diverges, no normalized eta0");
    }
    if (!(bound.value > 0.0)) {
        throw DegenerateError("I = 0: the ring norm is infinite almost everywhere, no normalized eta0");
    }
    const double inv = bound.value;
    return {[q, center = annulus.center, p, spec, inv](double t) {
                const auto n = ring_norm(q, center, t, p, spec);
                if (n.diverged) {
                    return 0.0;
                }
                return 1.0 / (inv * n.value);
            },
            annulus.r1, annulus.r2};
}

/// int_{r1}^{r2} eta(r)^{p/(p-1)} (int_{|z-z0|=r} Q^{1/(p-1)} |dz|) dr,
/// i.e. the area integral of Q^{1/(p-1)} eta^{p/(p-1)}(|z - z0|) over the ring.
inline Estimate jensen_functional(const QField& q, const Annulus& annulus, const ExponentP& p,
                                  const RadialDensity& eta, const QuadratureSpec& spec = {}) {
    validate_annulus(annulus);
    detail::check_circle_in_domain(q, annulus.center, annulus.r2);
    if (eta.r1 != annulus.r1 || eta.r2 != annulus.r2) {
        throw DomainError("density support differs from the annulus");
    }
    const double mass = eta.mass(spec);
    if (std::abs(mass - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "density is not normalized: mass " << mass;
        throw DomainError(msg.str());
    }
    const double power = p.conjugate();
    auto integrand = [&](double r) {
        const double e = eta(r);
        if (e < 0.0) {
            throw DomainError("density is negative");
        }
        if (e == 0.0) {
            return 0.0;
        }
        const auto c = circle_integral(detail::weight_power(q, p), annulus.center, r, spec);
        return std::pow(e, power) * c.value;
    };
    return radial_integral(integrand, annulus.r1, annulus.r2, spec);
}

} // namespace qmod
