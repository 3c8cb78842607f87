#pragma once

/**
 * @file plane.hpp
 * @brief Planar domain types shared by every numeric module.
 *
 * Points, the exponent p with its conjugate, round annuli and ring
 * condensers, and the weight field Q. All types are immutable after
 * construction and safe to share between threads.
 */

#include <qmod/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qmod {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;

    static PlanePoint polar(PlanePoint center, double r, double theta) {
        return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
    }

    double abs() const { return std::hypot(x, y); }
    double distance(PlanePoint other) const { return std::hypot(x - other.x, y - other.y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
    friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
    friend bool operator==(PlanePoint a, PlanePoint b) = default;
};

/// The exponent p > 1 together with q = p/(p-1) and lambda = 1/(p-1).
class ExponentP {
public:
    explicit ExponentP(double p) : p_(p) {
        if (!(std::isfinite(p) && p > 1.0)) {
            throw DomainError("exponent p must be finite and > 1, got " + std::to_string(p));
        }
    }

    double p() const noexcept { return p_; }
    double conjugate() const noexcept { return p_ / (p_ - 1.0); }
    double lambda() const noexcept { return 1.0 / (p_ - 1.0); }

private:
    double p_;
};

/// Open ring r1 < |z - center| < r2.
struct Annulus {
    PlanePoint center{};
    double r1 = 0.0;
    double r2 = 0.0;
};

inline Annulus validate_annulus(const Annulus& a) {
    if (!a.center.finite() || !std::isfinite(a.r1) || !std::isfinite(a.r2)) {
        throw ValidationError("annulus has non-finite center or radii");
    }
    if (!(a.r1 > 0.0)) {
        throw ValidationError("annulus inner radius must be positive");
    }
    if (!(a.r1 < a.r2)) {
        throw ValidationError("annulus requires r1 < r2");
    }
    return a;
}

/// Condenser (A, C) with C the closed inner disk and A the open outer disk.
struct RingCondenser {
    PlanePoint center{};
    double inner_radius = 0.0;
    double outer_radius = 0.0;

    Annulus annulus() const { return validate_annulus({center, inner_radius, outer_radius}); }

    double compact_area() const { return kPi * inner_radius * inner_radius; }
    double compact_diameter() const { return 2.0 * inner_radius; }
    double open_area() const { return kPi * outer_radius * outer_radius; }
    double gap_area() const {
        return kPi * (outer_radius - inner_radius) * (outer_radius + inner_radius);
    }
    /// Shortest smooth curve separating C from the boundary of A: the inner circle.
    double separating_perimeter() const { return kTwoPi * inner_radius; }
};

enum class CurveFamilyKind { circles, connecting };

struct CurveFamilyDescriptor {
    Annulus annulus;
    CurveFamilyKind kind = CurveFamilyKind::circles;
};

/**
 * Weight Q: D -> (0, inf] on a disk around `center`, represented by evaluation.
 *
 * Four variants: a constant, a radial profile q(|z - center|), an arbitrary
 * closure, and a polar grid interpolated bilinearly in (r, theta). A value
 * of +inf is accepted and marks a degenerate point; zero, negative and NaN
 * values raise InvalidFieldError.
 */
class QField {
public:
    struct Constant {
        double value;
    };
    struct RadialProfile {
        std::function<double(double)> profile;
    };
    struct Analytic {
        std::function<double(PlanePoint)> eval;
    };
    struct PolarGrid {
        std::vector<double> radii;    // ascending
        std::size_t angle_count = 0;  // uniform on [0, 2pi), periodic
        std::vector<double> samples;  // radii.size() x angle_count, row-major
    };
    using Variant = std::variant<Constant, RadialProfile, Analytic, PolarGrid>;

    static QField constant(double c, double domain_radius = kInf, PlanePoint center = {}) {
        if (!(c > 0.0) || std::isnan(c)) {
            throw InvalidFieldError("constant field must be positive");
        }
        return QField(Constant{c}, center, domain_radius);
    }

    static QField radial(std::function<double(double)> profile, PlanePoint center = {},
                         double domain_radius = kInf) {
        return QField(RadialProfile{std::move(profile)}, center, domain_radius);
    }

    static QField analytic(std::function<double(PlanePoint)> eval, PlanePoint center = {},
                           double domain_radius = kInf) {
        return QField(Analytic{std::move(eval)}, center, domain_radius);
    }

    static QField polar_grid(PlanePoint center, std::vector<double> radii, std::size_t angle_count,
                             std::vector<double> samples) {
        if (radii.size() < 2 || angle_count < 2 || samples.size() != radii.size() * angle_count) {
            throw ValidationError("polar grid needs >= 2 radii, >= 2 angles and matching samples");
        }
        if (!std::is_sorted(radii.begin(), radii.end()) ||
            std::adjacent_find(radii.begin(), radii.end()) != radii.end() || radii.front() < 0.0) {
            throw ValidationError("polar grid radii must be nonnegative and strictly ascending");
        }
        for (double s : samples) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw InvalidFieldError("polar grid samples must be positive and finite");
            }
        }
        const double outer = radii.back();
        return QField(PolarGrid{std::move(radii), angle_count, std::move(samples)}, center, outer);
    }

    /// Samples `source` on a polar grid with the given radii and angle count.
    static QField sample_polar(const QField& source, std::vector<double> radii, std::size_t angle_count) {
        std::vector<double> samples;
        samples.reserve(radii.size() * angle_count);
        for (double r : radii) {
            for (std::size_t j = 0; j < angle_count; ++j) {
                const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(angle_count);
                samples.push_back(source(PlanePoint::polar(source.center(), r, theta)));
            }
        }
        return polar_grid(source.center(), std::move(radii), angle_count, std::move(samples));
    }

    /// c * Q for c > 0.
    QField scaled(double c) const {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw DomainError("field scale must be positive and finite");
        }
        QField out = *this;
        out.scale_ *= c;
        return out;
    }

    PlanePoint center() const noexcept { return center_; }
    double domain_radius() const noexcept { return domain_radius_; }
    const Variant& variant() const noexcept { return *variant_; }

    bool is_constant() const noexcept { return std::holds_alternative<Constant>(*variant_); }
    bool is_rotation_invariant() const noexcept {
        return is_constant() || std::holds_alternative<RadialProfile>(*variant_);
    }

    double operator()(PlanePoint z) const {
        const double r = z.distance(center_);
        if (!z.finite() || r > domain_radius_ * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "point (" << z.x << ", " << z.y << ") outside field domain of radius " << domain_radius_;
            throw DomainError(msg.str());
        }
        const double v = scale_ * std::visit([&](const auto& alt) { return evaluate(alt, z, r); }, *variant_);
        if (std::isnan(v) || !(v > 0.0)) {
            std::ostringstream msg;
            msg << "field value " << v << " at (" << z.x << ", " << z.y << ") is not positive";
            throw InvalidFieldError(msg.str());
        }
        return v;
    }

private:
    QField(Variant v, PlanePoint center, double domain_radius)
        : variant_(std::make_shared<const Variant>(std::move(v))), center_(center), domain_radius_(domain_radius) {
        if (!center.finite()) {
            throw ValidationError("field center must be finite");
        }
        if (!(domain_radius > 0.0)) {
            throw ValidationError("field domain radius must be positive");
        }
    }

    double evaluate(const Constant& c, PlanePoint, double) const { return c.value; }
    double evaluate(const RadialProfile& q, PlanePoint, double r) const { return q.profile(r); }
    double evaluate(const Analytic& q, PlanePoint z, double) const { return q.eval(z); }

    double evaluate(const PolarGrid& g, PlanePoint z, double r) const {
        const auto& radii = g.radii;
        const double rc = std::clamp(r, radii.front(), radii.back());
        auto hi = std::upper_bound(radii.begin(), radii.end(), rc);
        if (hi == radii.end()) {
            --hi;
        }
        const std::size_t i1 = static_cast<std::size_t>(hi - radii.begin());
        const std::size_t i0 = i1 - 1;
        const double tr = (rc - radii[i0]) / (radii[i1] - radii[i0]);

        double theta = std::atan2(z.y - center_.y, z.x - center_.x);
        if (theta < 0.0) {
            theta += kTwoPi;
        }
        const double n = static_cast<double>(g.angle_count);
        const double u = theta / kTwoPi * n;
        const double cell = std::floor(u);
        const double ta = u - cell;
        const std::size_t j0 = static_cast<std::size_t>(cell) % g.angle_count;
        const std::size_t j1 = (j0 + 1) % g.angle_count;

        auto at = [&](std::size_t i, std::size_t j) { return g.samples[i * g.angle_count + j]; };
        const double lo_r = (1.0 - ta) * at(i0, j0) + ta * at(i0, j1);
        const double hi_r = (1.0 - ta) * at(i1, j0) + ta * at(i1, j1);
        return (1.0 - tr) * lo_r + tr * hi_r;
    }

    std::shared_ptr<const Variant> variant_;
    PlanePoint center_;
    double domain_radius_;
    double scale_ = 1.0;
};

inline double qfield_eval(const QField& q, PlanePoint z) { return q(z); }

} // namespace qmod
