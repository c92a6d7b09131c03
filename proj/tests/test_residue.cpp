#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dvrforms/residue.hpp"
#include "testutil.hpp"

using namespace dvrforms;

namespace {

// Exhaustive-search oracle over GL_n(F_p) (or GL_n(F_{p^2})): is there an
// invertible X with X'^* M X = N? Independent of the library's witness
// machinery; only usable for tiny n and p.
bool brute_force_residue_congruent(const ResidueMatrix& m, const ResidueMatrix& n) {
    const RingPtr& ring = m.ring();
    const std::int64_t p = ring->p();
    const bool quadratic = ring->unramified();
    const std::size_t sz = m.size();
    REQUIRE(sz == 2);
    std::vector<ResidueElement> elems;
    for (std::int64_t a = 0; a < p; ++a) {
        if (quadratic) {
            for (std::int64_t b = 0; b < p; ++b) elems.push_back(residue_make(ring, a, b));
        } else {
            elems.push_back(residue_make(ring, a));
        }
    }
    for (const auto& x00 : elems)
        for (const auto& x01 : elems)
            for (const auto& x10 : elems)
                for (const auto& x11 : elems) {
                    ResidueMatrix x(ring, 2);
                    x.at(0, 0) = x00;
                    x.at(0, 1) = x01;
                    x.at(1, 0) = x10;
                    x.at(1, 1) = x11;
                    if (!x.invertible()) continue;
                    if (x.conj_transpose() * m * x == n) return true;
                }
    return false;
}

ResidueMatrix diag2(const RingPtr& ring, std::int64_t a, std::int64_t b) {
    ResidueMatrix m(ring, 2);
    m.at(0, 0) = residue_make(ring, a);
    m.at(1, 1) = residue_make(ring, b);
    return m;
}

} // namespace

TEST_CASE("residue_of and lift") {
    auto ring = Ring::make(RingKind::series_trivial, 3, 8);
    CHECK(residue_of(ring->one() + ring->uniformiser()).a == 1);
    CHECK(residue_of(ring->uniformiser()).is_zero());

    auto pring = Ring::make(RingKind::padic_trivial, 5, 8);
    CHECK(residue_of(pring->from_int(3 + 5 * 7)).a == 3);

    for (RingKind kind : testutil::all_kinds) {
        auto r = Ring::make(kind, 5, 8);
        for (std::int64_t v : {0, 1, 2, 4}) {
            ResidueElement e = residue_make(r, v);
            CHECK(residue_of(lift(e)) == e);
        }
    }
}

TEST_CASE("square_class by Euler criterion") {
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    CHECK(square_class(residue_make(r3, 1)) == SquareClass::square);
    CHECK(square_class(residue_make(r3, 2)) == SquareClass::nonsquare);
    CHECK(square_class(residue_make(r3, 0)) == SquareClass::zero);
    auto r5 = Ring::make(RingKind::padic_trivial, 5, 8);
    CHECK(square_class(residue_make(r5, 4)) == SquareClass::square);
}

TEST_CASE("sqrt_residue returns the least root") {
    auto r5 = Ring::make(RingKind::padic_trivial, 5, 8);
    CHECK(sqrt_residue(residue_make(r5, 4)).a == 2);
    CHECK(sqrt_residue(residue_make(r5, 1)).a == 1);
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    CHECK_THROWS_AS(sqrt_residue(residue_make(r3, 2)), NotASquare);
}

TEST_CASE("solve_norm hits every unit target") {
    for (RingKind kind : {RingKind::series_unramified, RingKind::padic_unramified}) {
        for (std::int64_t p : {3, 5, 7}) {
            auto ring = Ring::make(kind, p, 8);
            for (std::int64_t c = 1; c < p; ++c) {
                ResidueElement target = residue_make(ring, c);
                ResidueElement a = solve_norm(target);
                CHECK(residue_norm(a) == target);
            }
        }
    }
    auto ring = Ring::make(RingKind::series_unramified, 3, 8);
    CHECK_THROWS_AS(solve_norm(residue_make(ring, 0)), NoSolution);
}

TEST_CASE("solve_norm finds a norm for the non-residue (p=3)") {
    auto ring = Ring::make(RingKind::series_unramified, 3, 8);
    ResidueElement a = solve_norm(residue_make(ring, 2));
    CHECK(residue_norm(a) == residue_make(ring, 2));
}

TEST_CASE("classify_residue_form across types") {
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    // [[0,1],[1,0]]: det = -1 = 2, a non-square mod 3
    ResidueMatrix hyp(r3, 2);
    hyp.at(0, 1) = residue_make(r3, 1);
    hyp.at(1, 0) = residue_make(r3, 1);
    ResidueClassification c = classify_residue_form(hyp, FormType::symmetric);
    CHECK(c.rank == 2);
    CHECK(c.disc == DiscClass::nonsquare);

    ResidueMatrix j(r3, 2);
    j.at(0, 1) = residue_make(r3, 1);
    j.at(1, 0) = residue_make(r3, -1);
    ResidueClassification ca = classify_residue_form(j, FormType::alternating);
    CHECK(ca.rank == 2);
    CHECK(ca.disc == DiscClass::not_applicable);

    auto r9 = Ring::make(RingKind::series_unramified, 3, 8);
    ResidueMatrix id3(r9, 3);
    for (int i = 0; i < 3; ++i) id3.at(i, i) = residue_make(r9, 1);
    ResidueClassification ch = classify_residue_form(id3, FormType::hermitian);
    CHECK(ch.rank == 3);
    CHECK(ch.disc == DiscClass::not_applicable);

    CHECK_THROWS_AS(classify_residue_form(hyp, FormType::alternating), TypeMismatch);
    ResidueMatrix zero(r3, 2);
    CHECK_THROWS_AS(classify_residue_form(zero, FormType::symmetric), Degenerate);
}

TEST_CASE("residue witness: diag(nu,nu) ~ diag(1,1) over F_3") {
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    ResidueMatrix m = diag2(r3, 2, 2);
    ResidueMatrix n = diag2(r3, 1, 1);
    ResidueMatrix x = residue_congruence_witness(m, n, FormType::symmetric);
    CHECK(x.conj_transpose() * m * x == n);
    CHECK(brute_force_residue_congruent(m, n));
}

TEST_CASE("residue witness: diag(1,1) !~ diag(1,nu) over F_3, matching the oracle") {
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    ResidueMatrix m = diag2(r3, 1, 1);
    ResidueMatrix n = diag2(r3, 1, 2);
    CHECK_THROWS_AS(residue_congruence_witness(m, n, FormType::symmetric), NotCongruent);
    CHECK_FALSE(brute_force_residue_congruent(m, n));
}

TEST_CASE("hyperbolic plane is congruent to diag(1,-1) over F_3") {
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    ResidueMatrix hyp(r3, 2);
    hyp.at(0, 1) = residue_make(r3, 1);
    hyp.at(1, 0) = residue_make(r3, 1);
    ResidueMatrix n = diag2(r3, 1, -1);
    ResidueMatrix x = residue_congruence_witness(hyp, n, FormType::symmetric);
    CHECK(x.conj_transpose() * hyp * x == n);
}

TEST_CASE("residue classification agrees with the exhaustive oracle on all 2x2 symmetric forms (F_3)") {
    auto r3 = Ring::make(RingKind::series_trivial, 3, 8);
    std::vector<ResidueMatrix> forms;
    for (std::int64_t a = 0; a < 3; ++a)
        for (std::int64_t b = 0; b < 3; ++b)
            for (std::int64_t d = 0; d < 3; ++d) {
                ResidueMatrix m(r3, 2);
                m.at(0, 0) = residue_make(r3, a);
                m.at(0, 1) = residue_make(r3, b);
                m.at(1, 0) = residue_make(r3, b);
                m.at(1, 1) = residue_make(r3, d);
                if (m.invertible()) forms.push_back(m);
            }
    for (const auto& m : forms)
        for (const auto& n : forms) {
            bool oracle = brute_force_residue_congruent(m, n);
            bool classified = classify_residue_form(m, FormType::symmetric) ==
                              classify_residue_form(n, FormType::symmetric);
            CHECK(oracle == classified);
        }
}

TEST_CASE("classification is invariant under congruence and witnesses verify") {
    std::mt19937 rng(21);
    for (RingKind kind : testutil::all_kinds) {
        auto ring = Ring::make(kind, 5, 8);
        const bool quadratic = ring->unramified();
        FormType type = quadratic ? FormType::hermitian : FormType::symmetric;
        std::uniform_int_distribution<std::int64_t> coeff(0, 4);
        for (int iter = 0; iter < 30; ++iter) {
            // random invertible matrix of the declared type, size 3
            ResidueMatrix m(ring, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    ResidueElement e = quadratic
                                           ? residue_make(ring, coeff(rng), j > i ? coeff(rng) : 0)
                                           : residue_make(ring, coeff(rng));
                    m.at(i, j) = e;
                    m.at(j, i) = residue_conj(e);
                }
            if (!m.invertible()) continue;
            // random invertible X
            ResidueMatrix x(ring, 3);
            do {
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        x.at(i, j) = residue_make(ring, coeff(rng), quadratic ? coeff(rng) : 0);
            } while (!x.invertible());
            ResidueMatrix n = x.conj_transpose() * m * x;
            CHECK(classify_residue_form(m, type) == classify_residue_form(n, type));
            ResidueMatrix w = residue_congruence_witness(m, n, type);
            CHECK(w.conj_transpose() * m * w == n);
        }
    }
}

TEST_CASE("skew-hermitian residue forms over F_9 are rank-classified") {
    auto ring = Ring::make(RingKind::series_unramified, 3, 8);
    // diag(t, t) and diag(t, 2t) are both skew hermitian and congruent
    ResidueMatrix m(ring, 2), n(ring, 2);
    m.at(0, 0) = residue_make(ring, 0, 1);
    m.at(1, 1) = residue_make(ring, 0, 1);
    n.at(0, 0) = residue_make(ring, 0, 1);
    n.at(1, 1) = residue_make(ring, 0, 2);
    CHECK(classify_residue_form(m, FormType::skew_hermitian) ==
          classify_residue_form(n, FormType::skew_hermitian));
    ResidueMatrix x = residue_congruence_witness(m, n, FormType::skew_hermitian);
    CHECK(x.conj_transpose() * m * x == n);
}
