// Randomized invariants over seeded parameter draws.

#include <qmod/capacity.hpp>
#include <qmod/distortion.hpp>
#include <qmod/modulus.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace qmod;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

QField wobbly(double a, double b) {
    return QField::analytic([a, b](PlanePoint z) { return 1.0 + a * z.x * z.x + b * (1.0 + std::sin(3.0 * z.y)); });
}

} // namespace

TEST_CASE("lower bound is additive over nested rings", "[property]") {
    Draw d(101);
    for (int k = 0; k < 20; ++k) {
        const double r1 = d(0.05, 0.4);
        const double r2 = d(r1 + 0.05, 0.7);
        const double r3 = d(r2 + 0.05, 1.0);
        const ExponentP p(d(1.2, 5.0));
        const auto q = wobbly(d(0.0, 2.0), d(0.0, 1.0));
        const double whole = lower_modulus_bound(q, {{}, r1, r3}, p).value;
        const double parts = lower_modulus_bound(q, {{}, r1, r2}, p).value + lower_modulus_bound(q, {{}, r2, r3}, p).value;
        CHECK_THAT(whole, WithinRel(parts, 1e-8));
        CHECK(whole > lower_modulus_bound(q, {{}, r1, r2}, p).value);
    }
}

TEST_CASE("lower bound scales as 1/c under Q -> cQ", "[property]") {
    Draw d(202);
    for (int k = 0; k < 20; ++k) {
        const ExponentP p(d(1.2, 5.0));
        const auto q = wobbly(d(0.0, 2.0), d(0.0, 1.0));
        const double c = d(0.1, 10.0);
        const Annulus a{{}, 0.3, 0.9};
        CHECK_THAT(lower_modulus_bound(q.scaled(c), a, p).value * c,
                   WithinRel(lower_modulus_bound(q, a, p).value, 1e-8));
    }
}

TEST_CASE("bound for Q = 1 is translation and dilation covariant", "[property]") {
    Draw d(303);
    for (int k = 0; k < 20; ++k) {
        const double pv = d(1.2, 5.0);
        const ExponentP p(pv);
        const auto one = QField::constant(1.0);
        const double r1 = d(0.1, 0.5);
        const double r2 = d(r1 + 0.1, 2.0);
        const PlanePoint c{d(-3.0, 3.0), d(-3.0, 3.0)};
        const double base = lower_modulus_bound(one, {{}, r1, r2}, p).value;
        CHECK_THAT(lower_modulus_bound(QField::constant(1.0, kInf, c), {c, r1, r2}, p).value, WithinRel(base, 1e-9));
        // r -> s r multiplies int (2 pi r)^{1-p} dr by s^{2-p}
        const double s = d(0.5, 3.0);
        CHECK_THAT(lower_modulus_bound(one, {{}, s * r1, s * r2}, p).value,
                   WithinRel(base * std::pow(s, 2.0 - pv), 1e-8));
    }
}

TEST_CASE("duality holds on random round rings", "[property]") {
    Draw d(404);
    for (int k = 0; k < 25; ++k) {
        const ExponentP p(d(1.2, 6.0));
        const double r1 = d(0.01, 0.9);
        const Annulus a{{}, r1, d(r1 + 0.01, 3.0)};
        const double lmb = lower_modulus_bound(QField::constant(1.0), a, p).value;
        CHECK_THAT(connecting_modulus_annulus(a, p.conjugate()) * std::pow(lmb, p.lambda()), WithinRel(1.0, 1e-6));
    }
}

TEST_CASE("eta0 minimizes the Jensen functional for non-constant weights", "[property]") {
    Draw d(505);
    const Annulus a{{}, 0.4, 0.95};
    for (double pv : {1.5, 2.0, 3.0}) {
        const ExponentP p(pv);
        const auto q = wobbly(d(0.0, 2.0), d(0.0, 1.0));
        const double best = jensen_functional(q, a, p, eta0(q, a, p)).value;
        CHECK_THAT(best, WithinRel(std::pow(lower_modulus_bound(q, a, p).value, -p.lambda()), 1e-6));
        for (int k = 0; k < 10; ++k) {
            const double b = d(-3.0, 3.0);
            const double c = d(-3.0, 3.0);
            const auto eta = RadialDensity::normalized([b, c](double t) { return std::exp(b * t + c * t * t); }, a.r1, a.r2);
            CHECK(jensen_functional(q, a, p, eta).value >= best * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("weighted infimum is homogeneous in phi and mu", "[property]") {
    Draw d(606);
    for (int k = 0; k < 10; ++k) {
        const double q = d(1.2, 4.0);
        DiscreteMeasureSpace s;
        for (int i = 0; i < 200; ++i) {
            s.points.push_back(i);
            s.weights.push_back(d(0.1, 1.0));
            s.phi.push_back(d(0.1, 5.0));
        }
        const double base = weighted_infimum_closed(s, q).value;
        const double c = d(0.2, 5.0);
        auto scaled_phi = s;
        for (double& v : scaled_phi.phi) v *= c;
        CHECK_THAT(weighted_infimum_closed(scaled_phi, q).value, WithinRel(c * base, 1e-12));
        // mu -> c mu: the constraint rescales alpha by 1/c, so the value scales by c^{1-q}
        auto scaled_mu = s;
        for (double& v : scaled_mu.weights) v *= c;
        CHECK_THAT(weighted_infimum_closed(scaled_mu, q).value, WithinRel(std::pow(c, 1.0 - q) * base, 1e-12));
        // never above the value at the uniform feasible point
        double mass = 0.0;
        for (double w : s.weights) mass += w;
        CHECK(base <= weighted_objective(s, std::vector<double>(s.size(), 1.0 / mass), q) * (1.0 + 1e-12));
    }
}

TEST_CASE("capacity exceeds every applicable lower bound on random rings", "[property]") {
    Draw d(707);
    for (int k = 0; k < 50; ++k) {
        const double r2 = d(0.5, 3.0);
        const RingCondenser c{{}, d(0.01, 0.99) * r2, r2};
        const std::vector<double> ps{d(1.05, 1.95), 2.0, d(2.05, 6.0)};
        for (const auto& e : check_capacity_bounds(c, ps).entries) {
            INFO(e.name << " " << e.params);
            CHECK(e.passed());
        }
    }
}

TEST_CASE("area bound is increasing in r and dominates on random power maps", "[property]") {
    Draw d(808);
    for (int k = 0; k < 12; ++k) {
        const double alpha = d(0.3, 3.0);
        const ExponentP p(d(2.0, 5.0));
        const auto f = radial_power_map(alpha);
        const auto q = kp_field(f, p);
        double prev = 0.0;
        for (double r : {0.15, 0.3, 0.45, 0.6, 0.75, 0.9}) {
            const auto b = area_bound({p, q, r});
            REQUIRE_FALSE(b.degenerate);
            CHECK(b.value > prev);
            prev = b.value;
            INFO("alpha=" << alpha << " p=" << p.p() << " r=" << r);
            CHECK(image_disk_area(f, r) <= b.value * (1.0 + 1e-8));
        }
    }
}

TEST_CASE("growth inequality holds on random power maps", "[property]") {
    Draw d(909);
    const std::vector<double> ts{0.1, 0.3, 0.5, 0.7, 0.9};
    for (int k = 0; k < 12; ++k) {
        const auto f = radial_power_map(d(0.3, 3.0));
        for (const auto& e : verify_growth_inequality(f, ExponentP(d(2.0, 5.0)), ts).entries) {
            INFO(e.params);
            CHECK(e.passed());
        }
    }
}

TEST_CASE("circle integral is rotation invariant", "[property]") {
    Draw d(1001);
    for (int k = 0; k < 10; ++k) {
        const double phase = d(0.0, kTwoPi);
        auto g = [](PlanePoint z) { return std::exp(z.x) * (2.0 + std::cos(3.0 * z.y)); };
        auto rotated = [&](PlanePoint z) {
            return g({std::cos(phase) * z.x - std::sin(phase) * z.y, std::sin(phase) * z.x + std::cos(phase) * z.y});
        };
        const double r = d(0.1, 2.0);
        CHECK_THAT(circle_integral(rotated, {}, r, {}).value, WithinRel(circle_integral(g, {}, r, {}).value, 1e-9));
    }
}
