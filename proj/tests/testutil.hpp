#pragma once

#include <random>
#include <vector>

#include "dvrforms/form.hpp"
#include "dvrforms/matrix.hpp"
#include "dvrforms/ring.hpp"

namespace testutil {

using namespace dvrforms;

inline const std::vector<RingKind> all_kinds = {
    RingKind::series_trivial,   RingKind::series_ramified, RingKind::series_unramified,
    RingKind::padic_trivial,    RingKind::padic_ramified,  RingKind::padic_unramified,
};

// Random element with a handful of low-order terms; exact by construction.
// Supports stay small so that products remain exactly representable at the
// working precision.
inline RingElement random_element(const RingPtr& ring, std::mt19937& rng, int max_terms = 3) {
    std::uniform_int_distribution<std::int64_t> coeff(0, ring->p() - 1);
    std::uniform_int_distribution<int> nterms(1, max_terms);
    RingElement acc = ring->zero();
    int terms = nterms(rng);
    for (int k = 0; k < terms; ++k)
        acc = acc + ring->from_int(coeff(rng)) * ring->uniformiser_power(k) +
              (ring->unramified() ? ring->skew_unit() * ring->from_int(coeff(rng)) *
                                        ring->uniformiser_power(k)
                                  : ring->zero());
    return acc;
}

// Random unit (valuation zero) of small support.
inline RingElement random_unit(const RingPtr& ring, std::mt19937& rng) {
    for (;;) {
        RingElement e = random_element(ring, rng, 2);
        Valuation v = e.valuation();
        if (v.is_finite() && v.value == 0) return e;
    }
}

// Random epsilon-hermitian matrix: W + eps W'^* with valuation-shifted
// rows/columns, so entry valuations stay <= 2*max_shift.
inline GramForm random_gram(const RingPtr& ring, int epsilon, std::size_t m, std::mt19937& rng,
                            int max_shift = 2) {
    std::uniform_int_distribution<int> shift(0, max_shift);
    for (;;) {
        RingMatrix w(ring, m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) w.at(i, j) = random_element(ring, rng, 3);
        RingMatrix wh = w.conj_transpose();
        RingMatrix g(ring, m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                RingElement e = w.at(i, j) + (epsilon == 1 ? wh.at(i, j) : -wh.at(i, j));
                g.at(i, j) = e;
            }
        // scale rows and columns by uniformiser powers, hermitian-symmetrically
        std::vector<int> shifts(m);
        for (auto& s : shifts) s = shift(rng);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                g.at(i, j) = g.at(i, j).times_uniformiser(shifts[i] + shifts[j]);
        try {
            return GramForm::validate(g, epsilon);
        } catch (const Error&) {
            continue; // retry on the rare degenerate draw
        }
    }
}

// Random invertible matrix: L * U with unit diagonals plus a permutation.
inline RingMatrix random_invertible(const RingPtr& ring, std::size_t m, std::mt19937& rng) {
    std::uniform_int_distribution<std::int64_t> coeff(0, ring->p() - 1);
    RingMatrix l = RingMatrix::identity(ring, m);
    RingMatrix u = RingMatrix::identity(ring, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i > j) l.at(i, j) = random_element(ring, rng, 2);
            if (i < j) u.at(i, j) = random_element(ring, rng, 2);
        }
    for (std::size_t i = 0; i < m; ++i) u.at(i, i) = random_unit(ring, rng);
    RingMatrix perm(ring, m, m);
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < m; ++i) perm.at(order[i], i) = ring->one();
    return l * u * perm;
}

// X'^* G X as a validated form.
inline GramForm conjugate_form(const GramForm& g, const RingMatrix& x) {
    return GramForm::validate(x.conj_transpose() * g.matrix() * x, g.epsilon());
}

} // namespace testutil
