#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dvrforms/decompose.hpp"
#include "dvrforms/form.hpp"
#include "testutil.hpp"

using namespace dvrforms;
using testutil::all_kinds;

TEST_CASE("validate accepts and rejects the expected shapes") {
    auto tring = Ring::make(RingKind::series_trivial, 3, 8);
    RingMatrix j(tring, 2, 2);
    j.at(0, 1) = tring->one();
    j.at(1, 0) = -tring->one();
    CHECK_NOTHROW(GramForm::validate(j, -1));

    auto pring = Ring::make(RingKind::padic_ramified, 5, 16);
    RingMatrix m(pring, 2, 2);
    m.at(0, 0) = pring->uniformiser();
    m.at(0, 1) = pring->one();
    m.at(1, 0) = -pring->one();
    m.at(1, 1) = pring->uniformiser();
    CHECK_NOTHROW(GramForm::validate(m, -1)); // diagonal y is skew

    RingMatrix bad(tring, 2, 2);
    bad.at(0, 0) = tring->one();
    bad.at(0, 1) = tring->one();
    bad.at(1, 1) = tring->one();
    try {
        GramForm::validate(bad, 1);
        FAIL("expected NotEpsilonHermitian");
    } catch (const NotEpsilonHermitian& e) {
        CHECK(e.row == 1);
        CHECK(e.col == 0);
    }
}

TEST_CASE("level_type table") {
    auto tring = Ring::make(RingKind::series_trivial, 3, 8);
    auto rring = Ring::make(RingKind::series_ramified, 3, 8);
    auto uring = Ring::make(RingKind::series_unramified, 3, 8);
    for (int i = 0; i < 4; ++i) CHECK(level_type(i, 1, *tring) == FormType::symmetric);
    for (int i = 0; i < 4; ++i) CHECK(level_type(i, -1, *tring) == FormType::alternating);
    CHECK(level_type(0, -1, *rring) == FormType::alternating);
    CHECK(level_type(1, -1, *rring) == FormType::symmetric);
    CHECK(level_type(0, 1, *rring) == FormType::symmetric);
    CHECK(level_type(1, 1, *rring) == FormType::alternating);
    CHECK(level_type(0, 1, *uring) == FormType::hermitian);
    CHECK(level_type(1, 1, *uring) == FormType::skew_hermitian);
    CHECK(level_type(1, -1, *uring) == FormType::hermitian);
}

TEST_CASE("profile of the exact zero matrix is pure radical") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 8);
    RingMatrix z(ring, 3, 3);
    GramForm f = GramForm::validate(z, 1);
    InvariantProfile profile = invariant_profile(f);
    CHECK(profile.d.empty());
    CHECK(profile.d_inf == 3);
    CHECK(radical_basis(f).size() == 3);
}

TEST_CASE("profile of the identity") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 8);
    GramForm f = GramForm::validate(RingMatrix::identity(ring, 2), 1);
    InvariantProfile profile = invariant_profile(f);
    CHECK(profile.d_at(0) == 2);
    CHECK(profile.d_inf == 0);
    CHECK(profile.level_data.at(0).disc == DiscClass::square);
}

TEST_CASE("profile of diag(1, y, y^2 nu) over F_5[[y]]") {
    auto ring = Ring::make(RingKind::padic_trivial, 5, 8);
    // same structure in the p-adic instance: diag(1, p, p^2 nu)
    RingMatrix m(ring, 3, 3);
    m.at(0, 0) = ring->one();
    m.at(1, 1) = ring->uniformiser();
    m.at(2, 2) = ring->uniformiser_power(2) * ring->nu_element();
    GramForm f = GramForm::validate(m, 1);
    InvariantProfile profile = invariant_profile(f);
    CHECK(profile.d_at(0) == 1);
    CHECK(profile.d_at(1) == 1);
    CHECK(profile.d_at(2) == 1);
    CHECK(profile.level_data.at(0).disc == DiscClass::square);
    CHECK(profile.level_data.at(1).disc == DiscClass::square);
    CHECK(profile.level_data.at(2).disc == DiscClass::nonsquare);
    CHECK(profile.d_inf == 0);
}

TEST_CASE("profile is invariant under congruence") {
    std::mt19937 rng(41);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 3, 12);
        for (int eps : {1, -1}) {
            for (int iter = 0; iter < 12; ++iter) {
                GramForm f = testutil::random_gram(ring, eps, 3, rng);
                RingMatrix x = testutil::random_invertible(ring, 3, rng);
                GramForm g = testutil::conjugate_form(f, x);
                InvariantProfile pf = invariant_profile(f);
                InvariantProfile pg = invariant_profile(g);
                CHECK(pf.d == pg.d);
                CHECK(pf.d_inf == pg.d_inf);
                CHECK(pf.level_data.size() == pg.level_data.size());
                for (const auto& [lvl, data] : pf.level_data)
                    CHECK(data == pg.level_data.at(lvl));
            }
        }
    }
}

TEST_CASE("profile sizes sum to the dimension") {
    std::mt19937 rng(42);
    for (RingKind kind : all_kinds) {
        auto ring = Ring::make(kind, 5, 12);
        for (int iter = 0; iter < 10; ++iter) {
            GramForm f = testutil::random_gram(ring, 1, 4, rng);
            InvariantProfile profile = invariant_profile(f);
            std::size_t total = profile.d_inf;
            for (const auto& [lvl, sz] : profile.d) total += sz;
            CHECK(total == 4);
        }
    }
}

TEST_CASE("nondegenerate forms have d_0 = m") {
    std::mt19937 rng(43);
    auto ring = Ring::make(RingKind::series_ramified, 3, 12);
    for (int iter = 0; iter < 10; ++iter) {
        // invertible unit form: X'* X is congruent to the identity
        RingMatrix x = testutil::random_invertible(ring, 3, rng);
        GramForm f = GramForm::validate(x.conj_transpose() * x, 1);
        InvariantProfile profile = invariant_profile(f);
        CHECK(profile.d_at(0) == 3);
        CHECK(profile.d_inf == 0);
    }
}

TEST_CASE("degenerate block with exact zeros classifies; truncated zeros do not") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 8);
    RingMatrix m(ring, 2, 2);
    m.at(0, 0) = ring->one();
    GramForm f = GramForm::validate(m, 1);
    InvariantProfile profile = invariant_profile(f);
    CHECK(profile.d_at(0) == 1);
    CHECK(profile.d_inf == 1);
    auto rad = radical_basis(f);
    REQUIRE(rad.size() == 1);
    CHECK(f.pairing(rad[0], rad[0]).payload_zero());

    // an entry that vanishes at precision without being exact: honest failure
    RingMatrix bad(ring, 2, 2);
    bad.at(0, 0) = ring->one();
    RingElement u = ring->one() + ring->uniformiser();
    bad.at(1, 1) = u.invert() * u - ring->one(); // payload-zero, inexact
    REQUIRE(bad.at(1, 1).payload_zero());
    REQUIRE(!bad.at(1, 1).is_exact_zero());
    GramForm g = GramForm::validate(bad, 1);
    CHECK_THROWS_AS(invariant_profile(g), PrecisionExhausted);
}

TEST_CASE("rank-one degenerate integer matrix classifies through exact cancellation") {
    auto ring = Ring::make(RingKind::padic_trivial, 5, 8);
    RingMatrix m(ring, 2, 2);
    m.at(0, 0) = ring->from_int(2);
    m.at(0, 1) = ring->from_int(2);
    m.at(1, 0) = ring->from_int(2);
    m.at(1, 1) = ring->from_int(2);
    GramForm f = GramForm::validate(m, 1);
    InvariantProfile profile = invariant_profile(f);
    CHECK(profile.d_at(0) == 1);
    CHECK(profile.d_inf == 1);
}
