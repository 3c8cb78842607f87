#include <qmod/plane.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace qmod;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exponent p must exceed one", "[plane]") {
    CHECK_THROWS_AS(ExponentP(1.0), DomainError);
    CHECK_THROWS_AS(ExponentP(0.5), DomainError);
    CHECK_THROWS_AS(ExponentP(std::nan("")), DomainError);
    const ExponentP p(3.0);
    CHECK(p.conjugate() == 1.5);
    CHECK(p.lambda() == 0.5);
}

TEST_CASE("annulus validation", "[plane]") {
    CHECK_NOTHROW(validate_annulus({{}, 0.5, 1.0}));
    CHECK_THROWS_AS(validate_annulus({{}, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(validate_annulus({{}, 0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(validate_annulus({{}, 0.7, 0.3}), ValidationError);
}

TEST_CASE("ring condenser geometry", "[plane]") {
    const RingCondenser c{{}, 0.5, 1.0};
    CHECK_THAT(c.compact_area(), WithinRel(kPi / 4, 1e-15));
    CHECK_THAT(c.gap_area(), WithinRel(kPi * 0.75, 1e-15));
    CHECK_THAT(c.separating_perimeter(), WithinRel(kPi, 1e-15));
    CHECK(c.compact_diameter() == 1.0);
}

TEST_CASE("constant field domain and positivity", "[plane]") {
    CHECK_THROWS_AS(QField::constant(0.0), InvalidFieldError);
    CHECK_THROWS_AS(QField::constant(-1.0), InvalidFieldError);
    const auto q = QField::constant(2.0, 1.0);
    CHECK(q({0.3, 0.4}) == 2.0);
    CHECK_THROWS_AS(q({1.0, 1.0}), DomainError);
    CHECK(q.scaled(3.0)({0.1, 0.0}) == 6.0);
    CHECK_THROWS_AS(q.scaled(0.0), DomainError);
}

TEST_CASE("field values are checked on evaluation", "[plane]") {
    const auto bad = QField::radial([](double r) { return r - 0.5; });
    CHECK_THROWS_AS(bad({0.1, 0.0}), InvalidFieldError);
    const auto nan = QField::analytic([](PlanePoint) { return std::nan(""); });
    CHECK_THROWS_AS(nan({0.1, 0.0}), InvalidFieldError);
    const auto infinite = QField::radial([](double) { return kInf; });
    CHECK(std::isinf(infinite({0.2, 0.0})));
}

TEST_CASE("polar grid reproduces the sampled field at nodes and interpolates between", "[plane]") {
    const auto smooth = QField::analytic([](PlanePoint z) { return 1.0 + z.x * z.x + 0.5 * z.y; }, {}, 1.0);
    const auto grid = QField::sample_polar(smooth, {0.0, 0.25, 0.5, 0.75, 1.0}, 64);
    for (double r : {0.25, 0.5, 0.75}) {
        const auto z = PlanePoint::polar({}, r, 0.0);
        CHECK_THAT(grid(z), WithinRel(smooth(z), 1e-12));
    }
    const auto mid = PlanePoint::polar({}, 0.6, 1.0);
    CHECK_THAT(grid(mid), WithinAbs(smooth(mid), 2e-2));
    // periodic in the angle
    CHECK_THAT(grid(PlanePoint::polar({}, 0.5, kTwoPi - 1e-9)), WithinRel(grid(PlanePoint::polar({}, 0.5, 0.0)), 1e-6));
}

TEST_CASE("polar grid rejects malformed input", "[plane]") {
    CHECK_THROWS_AS(QField::polar_grid({}, {0.0}, 4, {1, 1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(QField::polar_grid({}, {0.5, 0.2}, 2, {1, 1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(QField::polar_grid({}, {0.2, 0.5}, 2, {1, 1, 1, -1}), InvalidFieldError);
}

TEST_CASE("plane point polar helper", "[plane]") {
    const auto z = PlanePoint::polar({1.0, 1.0}, 2.0, kPi / 2);
    CHECK_THAT(z.x, WithinAbs(1.0, 1e-15));
    CHECK_THAT(z.y, WithinAbs(3.0, 1e-15));
    CHECK_THAT(z.distance({1.0, 1.0}), WithinRel(2.0, 1e-15));
}
