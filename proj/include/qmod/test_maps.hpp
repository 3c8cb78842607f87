#pragma once

/**
 * @file test_maps.hpp
 * @brief Radial homeomorphisms f(z) = rho(|z|) z/|z| of the unit disk with exact derivatives.
 *
 * For a radial map the two singular values of Df at radius r are rho'(r)
 * (radial stretch) and rho(r)/r (tangential stretch), so
 *
 *     |f_z| + |f_zbar| = max(rho', rho/r),   J_f = rho' rho / r,
 *
 * and the p-dilatation is K_p = (|f_z| + |f_zbar|)^p / J_f.
 */

#include <qmod/errors.hpp>
#include <qmod/plane.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

namespace qmod {

class RadialMap {
public:
    using Profile = std::function<double(double)>;

    /// Checks rho(0) = 0 and strict monotonicity on a 1000-point grid of [0, 1).
    RadialMap(Profile profile, Profile derivative, std::string label)
        : profile_(std::make_shared<const Profile>(std::move(profile))),
          derivative_(std::make_shared<const Profile>(std::move(derivative))),
          label_(std::move(label)) {
        if ((*profile_)(0.0) != 0.0) {
            throw ValidationError("radial map must fix the origin: rho(0) != 0 for " + label_);
        }
        constexpr int kGrid = 1000;
        double prev = 0.0;
        for (int i = 1; i < kGrid; ++i) {
            const double r = static_cast<double>(i) / kGrid;
            const double v = (*profile_)(r);
            if (!std::isfinite(v) || !(v > prev)) {
                throw ValidationError("radial profile is not strictly increasing: " + label_);
            }
            prev = v;
        }
    }

    double rho(double r) const { return (*profile_)(r); }
    double rho_prime(double r) const { return (*derivative_)(r); }
    /// Canonical parameter text, e.g. "alpha=2" or "alpha=2 scale=10".
    const std::string& label() const noexcept { return label_; }

    /// The planar map itself.
    PlanePoint operator()(PlanePoint z) const {
        const double r = z.abs();
        if (r == 0.0) {
            return {};
        }
        const double s = rho(r) / r;
        return {s * z.x, s * z.y};
    }

    /// Post-composition with z -> c z.
    RadialMap scaled(double c) const {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw DomainError("scale must be positive and finite");
        }
        auto prof = profile_;
        auto deriv = derivative_;
        std::ostringstream lbl;
        lbl << label_ << " scale=" << c;
        return RadialMap([prof, c](double r) { return c * (*prof)(r); },
                         [deriv, c](double r) { return c * (*deriv)(r); }, lbl.str());
    }

private:
    std::shared_ptr<const Profile> profile_;
    std::shared_ptr<const Profile> derivative_;
    std::string label_;
};

/// rho(r) = r^alpha, a self-homeomorphism of the unit disk fixing 0.
inline RadialMap radial_power_map(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("power map exponent must be positive");
    }
    std::ostringstream lbl;
    lbl << "alpha=" << alpha;
    return RadialMap([alpha](double r) { return std::pow(r, alpha); },
                     [alpha](double r) { return alpha * std::pow(r, alpha - 1.0); }, lbl.str());
}

struct DerivativeData {
    double fz_abs_plus_fzbar_abs = 0.0;
    double jacobian = 0.0;
    double at_radius = 0.0;
};

inline DerivativeData derivative_data(const RadialMap& map, double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw DomainError("derivative data is defined for 0 < r < 1");
    }
    const double radial = map.rho_prime(r);
    const double tangential = map.rho(r) / r;
    return {std::max(radial, tangential), radial * tangential, r};
}

/// K_p(f, z) as a radial field on the unit disk; J_f = 0 gives +inf.
inline QField kp_field(const RadialMap& map, const ExponentP& p) {
    const double e = p.p();
    return QField::radial(
        [map, e](double r) {
            if (!(r > 0.0)) {
                throw DomainError("dilatation is not evaluated at the origin");
            }
            const double radial = map.rho_prime(r);
            const double tangential = map.rho(r) / r;
            const double jac = radial * tangential;
            if (!(jac > 0.0)) {
                return kInf;
            }
            return std::pow(std::max(radial, tangential), e) / jac;
        },
        PlanePoint{}, 1.0);
}

/// Area of f(B_r) = pi rho(r)^2.
inline double image_disk_area(const RadialMap& map, double r) {
    if (!(r > 0.0 && r <= 1.0)) {
        throw DomainError("image area is defined for 0 < r <= 1");
    }
    const double rho = map.rho(r);
    return kPi * rho * rho;
}

/// min over |z| = r of |f(z)|, equal to rho(r) by symmetry.
inline double min_modulus(const RadialMap& map, double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw DomainError("min modulus is defined for 0 < r < 1");
    }
    return map.rho(r);
}

} // namespace qmod
