#include <qmod/test_maps.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace qmod;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("power map basics", "[maps]") {
    const auto f = radial_power_map(2.0);
    CHECK(f.label() == "alpha=2");
    CHECK(f.rho(0.5) == 0.25);
    const auto w = f({0.3, 0.4});
    CHECK_THAT(w.abs(), WithinRel(0.25, 1e-15));
    CHECK_THAT(w.y / w.x, WithinRel(0.4 / 0.3, 1e-14));
    CHECK(f({0.0, 0.0}).abs() == 0.0);
    CHECK_THROWS_AS(radial_power_map(0.0), DomainError);
    CHECK_THROWS_AS(radial_power_map(-1.0), DomainError);
}

TEST_CASE("radial profiles are validated", "[maps]") {
    CHECK_THROWS_AS(RadialMap([](double r) { return r + 1.0; }, [](double) { return 1.0; }, "shifted"),
                    ValidationError);
    CHECK_THROWS_AS(RadialMap([](double r) { return r * (1.0 - r); }, [](double r) { return 1.0 - 2.0 * r; }, "fold"),
                    ValidationError);
}

TEST_CASE("derivative data matches finite differences of the planar map", "[maps][oracle]") {
    for (double alpha : {0.5, 1.0, 2.0, 3.5}) {
        const auto f = radial_power_map(alpha);
        for (double r : {0.2, 0.5, 0.8}) {
            const double theta = 0.7;
            const auto z = PlanePoint::polar({}, r, theta);
            const double h = 1e-6;
            // central differences of f along x and y
            const auto fxp = f({z.x + h, z.y});
            const auto fxm = f({z.x - h, z.y});
            const auto fyp = f({z.x, z.y + h});
            const auto fym = f({z.x, z.y - h});
            const double ux = (fxp.x - fxm.x) / (2 * h);
            const double vx = (fxp.y - fxm.y) / (2 * h);
            const double uy = (fyp.x - fym.x) / (2 * h);
            const double vy = (fyp.y - fym.y) / (2 * h);
            // |f_z| + |f_zbar| is the largest singular value, J the determinant
            const double fz = 0.5 * std::hypot(ux + vy, vx - uy);
            const double fzb = 0.5 * std::hypot(ux - vy, vx + uy);
            const auto d = derivative_data(f, r);
            INFO("alpha=" << alpha << " r=" << r);
            CHECK_THAT(d.fz_abs_plus_fzbar_abs, WithinRel(fz + fzb, 1e-6));
            CHECK_THAT(d.jacobian, WithinRel(ux * vy - uy * vx, 1e-6));
        }
    }
    CHECK_THROWS_AS(derivative_data(radial_power_map(2.0), 0.0), DomainError);
    CHECK_THROWS_AS(derivative_data(radial_power_map(2.0), 1.0), DomainError);
}

TEST_CASE("p-dilatation of power maps", "[maps]") {
    // K_p = max(alpha, 1)^p / alpha * r^{(p-2)(alpha-1)}
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (double p : {2.0, 3.0, 4.0}) {
            const auto q = kp_field(radial_power_map(alpha), ExponentP(p));
            for (double r : {0.1, 0.5, 0.9}) {
                const double expect = std::pow(std::max(alpha, 1.0), p) / alpha * std::pow(r, (p - 2.0) * (alpha - 1.0));
                CHECK_THAT(q({r, 0.0}), WithinRel(expect, 1e-13));
            }
        }
    }
    const auto q = kp_field(radial_power_map(2.0), ExponentP(2.0));
    CHECK_THROWS_AS(q({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(q({1.5, 0.0}), DomainError);
}

TEST_CASE("scaled maps and image quantities", "[maps]") {
    const auto f = radial_power_map(2.0).scaled(10.0);
    CHECK(f.label() == "alpha=2 scale=10");
    CHECK_THAT(f.rho(0.5), WithinRel(2.5, 1e-15));
    CHECK_THAT(f.rho_prime(0.5), WithinRel(10.0, 1e-15));
    CHECK_THAT(image_disk_area(radial_power_map(1.0), 0.5), WithinRel(kPi / 4, 1e-15));
    CHECK_THAT(min_modulus(radial_power_map(0.5), 0.25), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(image_disk_area(f, 0.0), DomainError);
}
