#include <qmod/capacity.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace qmod;
using Catch::Matchers::WithinRel;

TEST_CASE("annulus capacity anchors", "[capacity]") {
    CHECK_THAT(annulus_capacity({{}, 0.5, 1.0}, 2.0), WithinRel(kTwoPi / std::log(2.0), 1e-13));
    CHECK_THAT(annulus_capacity({{}, 0.5, 1.0}, 1.5), WithinRel(kTwoPi, 1e-13));
    CHECK_THROWS_AS(annulus_capacity({{}, 1.0, 0.5}, 2.0), ValidationError);
}

TEST_CASE("measure bound anchor and domain", "[capacity]") {
    // p = 1.5, compact disk of radius 0.5: pi sqrt(2)
    CHECK_THAT(cap_bound_measure(kPi * 0.25, 1.5), WithinRel(kPi * std::sqrt(2.0), 1e-13));
    CHECK_THROWS_AS(cap_bound_measure(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(cap_bound_measure(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(cap_bound_measure(-1.0, 1.5), DomainError);
}

TEST_CASE("perimeter and diameter bounds", "[capacity]") {
    // p = 2, (0.5, 1): pi^2 / (3 pi / 4)
    CHECK_THAT(cap_bound_perimeter(kPi, 0.75 * kPi, 2.0), WithinRel(4.0 * kPi / 3.0, 1e-14));
    CHECK_THROWS_AS(cap_bound_perimeter(0.0, 1.0, 2.0), DomainError);
    CHECK_THAT(cap_bound_diameter(1.0, kPi, 2.0, 1.0), WithinRel(1.0 / kPi, 1e-14));
    CHECK(cap_bound_diameter(0.0, kPi, 1.5, 1.0) == 0.0);
    CHECK_THROWS_AS(cap_bound_diameter(1.0, kPi, 2.5, 1.0), DomainError);
    CHECK_THROWS_AS(cap_bound_diameter(1.0, kPi, 1.5, 0.0), DomainError);
}

TEST_CASE("bound rows on the ring grid have nonnegative margins", "[capacity]") {
    const std::vector<double> ps{1.25, 1.5, 1.75, 2.0};
    for (int i = 1; i <= 9; ++i) {
        const RingCondenser c{{}, 0.1 * i, 1.0};
        const auto report = check_capacity_bounds(c, ps);
        // perimeter rows for every p, measure rows for p < 2, diameter rows for p <= 2
        CHECK(report.entries.size() == 4 + 3 + 4);
        for (const auto& e : report.entries) {
            INFO(e.name << " " << e.params);
            CHECK(e.margin >= -1e-9);
            CHECK(e.passed());
        }
    }
}

TEST_CASE("rows outside the bound ranges are omitted", "[capacity]") {
    const std::vector<double> ps{3.0};
    const auto report = check_capacity_bounds({{}, 0.5, 1.0}, ps);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries[0].name == "perimeter_bound");
    const std::vector<double> bad{0.5};
    CHECK_THROWS_AS(check_capacity_bounds({{}, 0.5, 1.0}, bad), DomainError);
}

TEST_CASE("empirical diameter constant bounds the grid", "[capacity]") {
    std::vector<RingCondenser> rings;
    for (int i = 1; i <= 9; ++i) {
        rings.push_back({{}, 0.1 * i, 1.0});
    }
    for (double p : {1.25, 1.5, 2.0}) {
        const double gamma = estimate_diameter_gamma(rings, p);
        CHECK(gamma > 0.0);
        for (const auto& c : rings) {
            const double bound = cap_bound_diameter(c.compact_diameter(), c.open_area(), p, gamma);
            CHECK(bound <= annulus_capacity(c, p) * (1.0 + 1e-12));
        }
    }
}
