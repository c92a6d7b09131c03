#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dvrforms/hensel.hpp"
#include "testutil.hpp"

using namespace dvrforms;
using testutil::all_kinds;

namespace {

// A random unit of R with square residue: c^* c for a random unit c, the
// admissible shape for the norm-equation engines.
RingElement random_norm_target(const RingPtr& ring, std::mt19937& rng) {
    RingElement c = testutil::random_unit(ring, rng);
    return c.involute() * c;
}

RingElement skew_random(const RingPtr& ring, std::mt19937& rng) {
    RingElement a = testutil::random_element(ring, rng);
    return a - a.involute();
}

GramForm skew_form_2x2(const RingPtr& ring, const RingElement& d1, const RingElement& off,
                       const RingElement& d2) {
    RingMatrix g(ring, 2, 2);
    g.at(0, 0) = d1;
    g.at(0, 1) = off;
    g.at(1, 0) = -off.involute();
    g.at(1, 1) = d2;
    return GramForm::validate(g, -1);
}

} // namespace

TEST_CASE("hensel_sqrt on 1 + y^2 in F_3[[y]]") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 16);
    RingElement b = ring->one() + ring->uniformiser_power(2);
    RingElement s = hensel_sqrt(b);
    CHECK((s * s).payload_equal(b));
    CHECK(s.series_coeff_a(0) == 1);   // canonical residue root
    CHECK(s.series_coeff_a(2) == 2);   // 1 + 2y^2 + ... since 1/2 = 2 mod 3
    CHECK(hensel_sqrt(ring->one()).payload_equal(ring->one()));
    CHECK_THROWS_AS(hensel_sqrt(ring->nu_element()), NotASquareResidue);
}

TEST_CASE("hensel_sqrt across all instances") {
    std::mt19937 rng(31);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 12);
        for (int i = 0; i < 40; ++i) {
            RingElement c = random_norm_target(ring, rng);
            RingElement b = c.involute() * c; // fixed unit, square residue
            RingElement s = hensel_sqrt(b);
            CHECK((s * s).payload_equal(b));
            CHECK(s.involute().payload_equal(s));
        }
    }
}

TEST_CASE("solve_norm_equation: trivial involution reduces to a square root") {
    auto ring = Ring::make(RingKind::padic_trivial, 5, 8);
    RingElement b = ring->from_int(4) + ring->uniformiser();
    RingElement c = solve_norm_equation(b);
    CHECK((c * c).payload_equal(b));
    CHECK(residue_of(c).a == 2); // canonical root of 4 mod 5
    CHECK_THROWS_AS(solve_norm_equation(ring->uniformiser()), NotAUnit);
}

TEST_CASE("solve_norm_equation: unramified instances solve every unit target") {
    std::mt19937 rng(32);
    for (RingKind kind : {RingKind::series_unramified, RingKind::padic_unramified}) {
        auto ring = Ring::make(kind, 3, 12);
        // nu itself is a fixed unit with non-square residue: still solvable
        RingElement c = solve_norm_equation(ring->nu_element());
        CHECK((c.involute() * c).payload_equal(ring->nu_element()));
        for (int i = 0; i < 40; ++i) {
            RingElement u = testutil::random_unit(ring, rng);
            RingElement b = u.involute() * u;
            RingElement s = solve_norm_equation(b);
            CHECK((s.involute() * s).payload_equal(b));
        }
    }
}

TEST_CASE("solve_norm_equation rejects non-square residues over trivial/ramified instances") {
    for (RingKind kind : {RingKind::series_trivial, RingKind::series_ramified,
                          RingKind::padic_trivial, RingKind::padic_ramified}) {
        auto ring = Ring::make(kind, 3, 8);
        CHECK_THROWS_AS(solve_norm_equation(ring->nu_element()), NoResidueSolution);
    }
}

TEST_CASE("rescale_vector adjusts a unit length to the target") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 16);
    RingMatrix g(ring, 1, 1);
    g.at(0, 0) = ring->one() + ring->uniformiser();
    GramForm h = GramForm::validate(g, 1);
    RingVector u{ring->one()};
    RingVector w = rescale_vector(u, ring->one(), h);
    CHECK(h.pairing(w, w).payload_equal(ring->one()));

    // h(u,u) = nu*(1+y), target nu
    g.at(0, 0) = ring->nu_element() * (ring->one() + ring->uniformiser());
    GramForm h2 = GramForm::validate(g, 1);
    RingVector w2 = rescale_vector(u, ring->nu_element(), h2);
    CHECK(h2.pairing(w2, w2).payload_equal(ring->nu_element()));
}

TEST_CASE("solve_skew_quadratic: exact zero gamma gives t = 0") {
    auto ring = Ring::make(RingKind::series_ramified, 3, 16);
    RingElement t = solve_skew_quadratic(ring->uniformiser(), ring->one(), ring->zero());
    CHECK(t.is_exact_zero());
}

TEST_CASE("solve_skew_quadratic: worked padic-ramified example") {
    auto ring = Ring::make(RingKind::padic_ramified, 5, 16);
    RingElement y = ring->uniformiser();
    RingElement alpha = y, beta = ring->one(), gamma = y;
    // first iterate t_1 = -y/2: the residual has valuation 3
    RingElement half = ring->from_int(2).invert();
    RingElement t1 = -(half * gamma);
    RingElement resid1 =
        alpha * t1.involute() * t1 + beta * t1 - t1.involute() * beta.involute() + gamma;
    REQUIRE(resid1.valuation().is_finite());
    CHECK(resid1.valuation().value == 3);

    RingElement t = solve_skew_quadratic(alpha, beta, gamma);
    RingElement resid =
        alpha * t.involute() * t + beta * t - t.involute() * beta.involute() + gamma;
    CHECK(resid.payload_zero());
}

TEST_CASE("solve_skew_quadratic: series-ramified example converges") {
    auto ring = Ring::make(RingKind::series_ramified, 3, 16);
    RingElement y = ring->uniformiser();
    RingElement alpha = y * y * y;
    RingElement beta = ring->one() + y * y;
    RingElement gamma = y;
    RingElement t = solve_skew_quadratic(alpha, beta, gamma);
    RingElement resid =
        alpha * t.involute() * t + beta * t - t.involute() * beta.involute() + gamma;
    CHECK(resid.payload_zero());
}

TEST_CASE("solve_skew_quadratic convergence certificate") {
    // the k-th partial sum leaves a residual of valuation >= k
    std::mt19937 rng(33);
    for (RingKind kind : {RingKind::series_ramified, RingKind::padic_ramified}) {
        auto ring = Ring::make(kind, 3, 16);
        for (int iter = 0; iter < 20; ++iter) {
            RingElement alpha = skew_random(ring, rng);
            RingElement beta = testutil::random_unit(ring, rng);
            RingElement gamma = skew_random(ring, rng);
            if (gamma.payload_zero()) continue;

            RingElement half = ring->from_int(2).invert();
            RingElement quarter = half * half;
            RingElement t = ring->zero();
            RingElement g = gamma, bet = beta;
            for (int k = 1; k <= ring->precision() && !g.payload_zero(); ++k) {
                t = t - half * g * bet.invert();
                RingElement bconj = bet.involute();
                RingElement next_g = -(alpha * g * g) * (quarter * (bconj * bet).invert());
                bet = bet + alpha * g * (half * bconj.invert());
                g = next_g;
                RingElement resid =
                    alpha * t.involute() * t + beta * t - t.involute() * beta.involute() + gamma;
                CHECK(resid.valuation().at_least_certified(k));
            }
            RingElement t_lib = solve_skew_quadratic(alpha, beta, gamma);
            RingElement resid = alpha * t_lib.involute() * t_lib + beta * t_lib -
                                t_lib.involute() * beta.involute() + gamma;
            CHECK(resid.payload_zero());
        }
    }
}

TEST_CASE("make_symplectic_pair leaves a symplectic pair unchanged in effect") {
    auto ring = Ring::make(RingKind::series_ramified, 3, 16);
    GramForm h = skew_form_2x2(ring, ring->zero(), ring->one(), ring->zero());
    RingVector u{ring->one(), ring->zero()};
    RingVector v{ring->zero(), ring->one()};
    auto [u1, v1] = make_symplectic_pair(u, v, h);
    CHECK(h.pairing(u1, u1).payload_zero());
    CHECK(h.pairing(v1, v1).payload_zero());
    CHECK(h.pairing(u1, v1).payload_equal(ring->one()));
    CHECK(u1[0].payload_equal(ring->one())); // b = 0 leaves u in place
}

TEST_CASE("make_symplectic_pair on the completed counterexample matrix") {
    // [[y, 1], [-1, y]] over the completion of Z[sqrt(5)] at sqrt(5): the
    // symplectic pair exists here although it provably does not before
    // completion
    auto ring = Ring::make(RingKind::padic_ramified, 5, 32);
    RingElement y = ring->uniformiser();
    GramForm h = skew_form_2x2(ring, y, ring->one(), y);
    RingVector u{ring->one(), ring->zero()};
    RingVector v{ring->zero(), ring->one()};
    auto [u1, v1] = make_symplectic_pair(u, v, h);
    CHECK(h.pairing(u1, u1).payload_zero());
    CHECK(h.pairing(v1, v1).payload_zero());
    CHECK(h.pairing(u1, v1).payload_equal(ring->one()));
    CHECK(h.pairing(v1, u1).payload_equal(-ring->one()));
}

TEST_CASE("make_symplectic_pair on a series-ramified form") {
    auto ring = Ring::make(RingKind::series_ramified, 3, 16);
    RingElement y = ring->uniformiser();
    GramForm h = skew_form_2x2(ring, y * y * y, ring->one() + y * y, y);
    RingVector u{ring->one(), ring->zero()};
    RingVector v{ring->zero(), ring->one()};
    auto [u1, v1] = make_symplectic_pair(u, v, h);
    CHECK(h.pairing(u1, u1).payload_zero());
    CHECK(h.pairing(v1, v1).payload_zero());
    CHECK(h.pairing(u1, v1).payload_equal(ring->one()));
}

TEST_CASE("make_symplectic_pair requires a unit pairing") {
    auto ring = Ring::make(RingKind::series_ramified, 3, 16);
    RingElement y = ring->uniformiser();
    GramForm h = skew_form_2x2(ring, ring->zero(), y, ring->zero());
    RingVector u{ring->one(), ring->zero()};
    RingVector v{ring->zero(), ring->one()};
    CHECK_THROWS_AS(make_symplectic_pair(u, v, h), NotAUnitPairing);
}

TEST_CASE("make_symplectic_pair spans the same submodule") {
    std::mt19937 rng(34);
    for (RingKind kind : {RingKind::series_ramified, RingKind::padic_ramified,
                          RingKind::series_trivial, RingKind::padic_trivial}) {
        auto ring = Ring::make(kind, 5, 12);
        for (int iter = 0; iter < 10; ++iter) {
            RingElement d1 = ring->involution_trivial() ? ring->zero() : skew_random(ring, rng);
            RingElement d2 = ring->involution_trivial() ? ring->zero() : skew_random(ring, rng);
            RingElement off = testutil::random_unit(ring, rng);
            GramForm h = skew_form_2x2(ring, d1, off, d2);
            RingVector u{ring->one(), ring->zero()};
            RingVector v{ring->zero(), ring->one()};
            auto [u1, v1] = make_symplectic_pair(u, v, h);
            // the 2x2 change of basis [u1 v1] must be invertible over A
            RingElement det = u1[0] * v1[1] - v1[0] * u1[1];
            REQUIRE(det.valuation().is_finite());
            CHECK(det.valuation().value == 0);
        }
    }
}
