#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dvrforms/ring.hpp"
#include "testutil.hpp"

using namespace dvrforms;
using testutil::all_kinds;
using testutil::random_element;

TEST_CASE("make_ring picks the least quadratic non-residue") {
    CHECK(Ring::make(RingKind::series_ramified, 3, 16)->nu() == 2);
    CHECK(Ring::make(RingKind::padic_trivial, 5, 8)->nu() == 2);
    CHECK(Ring::make(RingKind::padic_unramified, 7, 8)->nu() == 3);
}

TEST_CASE("make_ring rejects bad parameters") {
    CHECK_THROWS_AS(Ring::make(RingKind::series_trivial, 2, 16), Error);
    CHECK_THROWS_AS(Ring::make(RingKind::series_trivial, 9, 16), Error);
    CHECK_THROWS_AS(Ring::make(RingKind::padic_trivial, 5, 1), Error);
}

TEST_CASE("uniformiser squares to p in padic-ramified") {
    auto ring = Ring::make(RingKind::padic_ramified, 5, 8);
    RingElement y = ring->uniformiser();
    CHECK((y * y).payload_equal(ring->from_int(5)));
    CHECK((y * y).valuation().value == 2);
}

TEST_CASE("skew unit squares to nu in the unramified instances") {
    for (RingKind kind : {RingKind::series_unramified, RingKind::padic_unramified}) {
        auto ring = Ring::make(kind, 3, 8);
        RingElement t = ring->skew_unit();
        CHECK((t * t).payload_equal(ring->nu_element()));
        CHECK(t.involute().payload_equal(-t));
    }
}

TEST_CASE("a - a is the exact zero") {
    std::mt19937 rng(7);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 8);
        for (int i = 0; i < 20; ++i) {
            RingElement a = random_element(ring, rng);
            RingElement z = a + (-a);
            CHECK(z.is_exact_zero());
            CHECK(z.valuation().is_infinite());
        }
    }
}

TEST_CASE("zero times anything is the exact zero") {
    std::mt19937 rng(8);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 3, 8);
        RingElement a = random_element(ring, rng);
        CHECK((ring->zero() * a).is_exact_zero());
        CHECK((a * ring->zero()).is_exact_zero());
    }
}

TEST_CASE("valuation basics") {
    auto sring = Ring::make(RingKind::series_trivial, 3, 16);
    CHECK(sring->zero().valuation().is_infinite());
    CHECK((sring->one() + sring->uniformiser()).valuation().value == 0);
    CHECK(sring->uniformiser_power(3).valuation().value == 3);

    auto pring = Ring::make(RingKind::padic_ramified, 5, 8);
    CHECK(pring->from_int(5).valuation().value == 2); // p = y^2

    auto uring = Ring::make(RingKind::padic_unramified, 5, 8);
    // y = t*p has valuation 1 in the p-power count
    CHECK(uring->uniformiser().valuation().value == 1);
    CHECK(uring->skew_unit().valuation().value == 0);
}

TEST_CASE("valuation is additive under multiplication") {
    std::mt19937 rng(9);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 3, 12);
        for (int i = 0; i < 50; ++i) {
            RingElement a = random_element(ring, rng);
            RingElement b = random_element(ring, rng);
            Valuation va = a.valuation(), vb = b.valuation(), vab = (a * b).valuation();
            if (va.is_finite() && vb.is_finite() && va.value + vb.value < ring->precision()) {
                REQUIRE(vab.is_finite());
                CHECK(vab.value == va.value + vb.value);
            }
        }
    }
}

TEST_CASE("invert: geometric series and errors") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 16);
    RingElement x = ring->one() + ring->uniformiser();
    RingElement inv = x.invert();
    CHECK((x * inv).payload_equal(ring->one()));
    // alternating signs: 1 - y + y^2 - ... with -1 = 2 mod 3
    CHECK(inv.series_coeff_a(0) == 1);
    CHECK(inv.series_coeff_a(1) == 2);
    CHECK(inv.series_coeff_a(2) == 1);
    CHECK(ring->one().invert().payload_equal(ring->one()));
    CHECK_THROWS_AS(ring->uniformiser().invert(), NotAUnit);
    CHECK_THROWS_AS(ring->zero().invert(), NotAUnit);
}

TEST_CASE("invert across all instances") {
    std::mt19937 rng(10);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 10);
        for (int i = 0; i < 25; ++i) {
            RingElement u = testutil::random_unit(ring, rng);
            CHECK((u * u.invert()).payload_equal(ring->one()));
        }
    }
}

TEST_CASE("divide_by_uniformiser") {
    auto ring = Ring::make(RingKind::series_ramified, 3, 16);
    RingElement y3 = ring->uniformiser_power(3);
    CHECK(y3.divide_by_uniformiser(2).payload_equal(ring->uniformiser()));
    CHECK_THROWS_AS(ring->uniformiser().divide_by_uniformiser(2), InsufficientValuation);

    auto pring = Ring::make(RingKind::padic_trivial, 5, 8);
    RingElement pu = pring->from_int(5 * 7);
    CHECK(pu.divide_by_uniformiser(1).payload_equal(pring->from_int(7)));

    // round trip through every instance, including the twisted ones
    std::mt19937 rng(11);
    for (RingKind kind : all_kinds) {
        auto r = Ring::make(kind, 3, 12);
        for (int i = 0; i < 20; ++i) {
            RingElement a = random_element(r, rng);
            for (int k : {1, 2, 3}) {
                RingElement shifted = a.times_uniformiser(k);
                if (!shifted.valuation().at_least_certified(k)) continue;
                CHECK(shifted.divide_by_uniformiser(k).payload_equal(a));
            }
        }
    }
}

TEST_CASE("involution is a ring automorphism of order two") {
    std::mt19937 rng(12);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 10);
        for (int i = 0; i < 30; ++i) {
            RingElement a = random_element(ring, rng);
            RingElement b = random_element(ring, rng);
            CHECK(a.involute().involute().payload_equal(a));
            CHECK((a + b).involute().payload_equal(a.involute() + b.involute()));
            CHECK((a * b).involute().payload_equal(a.involute() * b.involute()));
        }
    }
}

TEST_CASE("involution fixes or negates the uniformiser as the instance dictates") {
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 3, 8);
        RingElement y = ring->uniformiser();
        if (ring->involution_trivial()) {
            CHECK(y.involute().payload_equal(y));
        } else {
            CHECK(y.involute().payload_equal(-y));
        }
    }
}

TEST_CASE("symmetric/skew split recovers the element") {
    std::mt19937 rng(13);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 10);
        for (int i = 0; i < 20; ++i) {
            RingElement a = random_element(ring, rng);
            RingElement s = a.symmetric_part(), k = a.skew_part();
            CHECK(s.involute().payload_equal(s));
            CHECK(k.involute().payload_equal(-k));
            CHECK((s + k).payload_equal(a));
        }
    }
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937 rng(14);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 3, 10);
        for (int i = 0; i < 30; ++i) {
            RingElement a = random_element(ring, rng);
            RingElement b = random_element(ring, rng);
            RingElement c = random_element(ring, rng);
            CHECK(((a + b) + c).payload_equal(a + (b + c)));
            CHECK((a + b).payload_equal(b + a));
            CHECK(((a * b) * c).payload_equal(a * (b * c)));
            CHECK((a * b).payload_equal(b * a));
            CHECK((a * (b + c)).payload_equal(a * b + a * c));
        }
    }
}

TEST_CASE("descriptor mismatch is rejected") {
    auto r1 = Ring::make(RingKind::series_trivial, 3, 8);
    auto r2 = Ring::make(RingKind::series_trivial, 5, 8);
    CHECK_THROWS_AS(r1->one() + r2->one(), DescriptorMismatch);
}

TEST_CASE("precision change round-trips exact elements") {
    std::mt19937 rng(15);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 8);
        auto big = ring->with_precision(16);
        for (int i = 0; i < 20; ++i) {
            RingElement a = random_element(ring, rng);
            if (!a.is_exact()) continue;
            RingElement up = a.change_ring(big);
            CHECK(up.is_exact());
            CHECK(up.change_ring(ring).payload_equal(a));
        }
    }
}
