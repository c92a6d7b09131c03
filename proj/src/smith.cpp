#include "dvrforms/smith.hpp"

#include <algorithm>

namespace dvrforms {

namespace {

// Certified valuation of an entry for pivot selection: finite values only;
// -1 encodes "no certified finite valuation" (exact zero or vanishing at
// precision).
int pivot_val(const RingElement& e) {
    Valuation v = e.valuation();
    return v.is_finite() ? v.value : -1;
}

// Size of an exact entry: payload degree for the series kinds, balanced
// digit length for the padic kinds. Controls how much extra precision the
// exact-cancellation discovery needs.
int entry_size(const RingElement& e) {
    const Ring& r = *e.ring();
    if (r.is_series()) {
        int d = 0;
        for (int i = 0; i < r.precision(); ++i)
            if (e.series_coeff_a(i) != 0 || e.series_coeff_b(i) != 0) d = i;
        return d + 1;
    }
    Int bound = r.balanced_bound();
    auto digits = [&](Int v) {
        if (v > bound) v = r.p_to_k() - v;
        int k = 0;
        while (v > 0) {
            v /= r.p();
            ++k;
        }
        return k;
    };
    return std::max(digits(e.padic_a()), digits(e.padic_b())) + 1;
}

SmithForm smith_form_at(const RingMatrix& m_in, int internal_precision);

} // namespace

SmithForm smith_form(const RingMatrix& m_in) {
    if (m_in.rows() != m_in.cols()) throw ShapeMismatch("smith_form: square input required");
    const int user_prec = m_in.ring()->precision();
    try {
        return smith_form_at(m_in, 2 * user_prec);
    } catch (const PrecisionExhausted&) {
        // The cleared entries cancel exactly as long as the working
        // precision outruns the degree growth of the elimination; retry
        // with room for it before giving up.
        int size = 2;
        for (std::size_t i = 0; i < m_in.rows(); ++i)
            for (std::size_t j = 0; j < m_in.cols(); ++j)
                size = std::max(size, entry_size(m_in.at(i, j)));
        long long grown = (2LL << std::min<std::size_t>(m_in.rows(), 10)) * (size + 2) +
                          2LL * user_prec;
        if (grown > 8192) throw;
        return smith_form_at(m_in, (int)grown);
    }
}

namespace {

SmithForm smith_form_at(const RingMatrix& m_in, int internal_precision) {
    const std::size_t n = m_in.rows();
    const RingPtr user_ring = m_in.ring();
    const int user_prec = user_ring->precision();

    // Work at raised precision so exact division by uniformiser powers
    // cannot erode the certified digits of the output.
    RingPtr ring = user_ring->with_precision(internal_precision);
    RingMatrix w = m_in.change_ring(ring);
    RingMatrix p = RingMatrix::identity(ring, n);
    RingMatrix q = RingMatrix::identity(ring, n);

    std::vector<int> vals;
    std::size_t k = 0;
    for (; k < n; ++k) {
        // minimal certified valuation in the trailing block, row-major
        std::size_t bi = n, bj = n;
        int best = -1;
        bool saw_uncertified = false;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                const RingElement& e = w.at(i, j);
                if (e.is_exact_zero()) continue;
                int v = pivot_val(e);
                if (v < 0) {
                    saw_uncertified = true;
                    continue;
                }
                if (best < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best < 0) {
            if (saw_uncertified)
                throw PrecisionExhausted(
                    "smith_form: trailing entries vanish at the working precision without "
                    "being exact zeros; raise the precision",
                    internal_precision + 1);
            break; // trailing block exactly zero
        }
        const int d = best;
        if (bi != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w.at(bi, j), w.at(k, j));
                std::swap(p.at(bi, j), p.at(k, j));
            }
        if (bj != k)
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(w.at(i, bj), w.at(i, k));
                std::swap(q.at(i, bj), q.at(i, k));
            }
        // pivot = u * y^d with u the exact-division unit part
        RingElement u = w.at(k, k).divide_by_uniformiser(d);
        // clear the column: row_i <- u*row_i - (w(i,k)/y^d)*row_k, an exact
        // identity that keeps cancellations exactly zero
        for (std::size_t i = k + 1; i < n; ++i) {
            if (w.at(i, k).is_exact_zero()) continue;
            RingElement f = w.at(i, k).divide_by_uniformiser(d);
            for (std::size_t j = 0; j < n; ++j) {
                w.at(i, j) = u * w.at(i, j) - f * w.at(k, j);
                p.at(i, j) = u * p.at(i, j) - f * p.at(k, j);
            }
        }
        // clear the row: col_j <- u*col_j - (w(k,j)/y^d)*col_k
        for (std::size_t j = k + 1; j < n; ++j) {
            if (w.at(k, j).is_exact_zero()) continue;
            RingElement f = w.at(k, j).divide_by_uniformiser(d);
            for (std::size_t i = 0; i < n; ++i) {
                w.at(i, j) = u * w.at(i, j) - f * w.at(i, k);
                q.at(i, j) = u * q.at(i, j) - f * q.at(i, k);
            }
        }
        // strip the unit so the invariant factor is the pure power y^d
        RingElement uinv = u.invert();
        for (std::size_t j = 0; j < n; ++j) {
            w.at(k, j) = uinv * w.at(k, j);
            p.at(k, j) = uinv * p.at(k, j);
        }
        vals.push_back(d);
    }

    SmithForm out;
    out.valuations = vals;
    out.corank = n - k;
    out.p = p.change_ring(user_ring);
    out.q = q.change_ring(user_ring);
    out.diagonal = RingMatrix::zero(user_ring, n, n);
    for (std::size_t i = 0; i < vals.size(); ++i)
        out.diagonal.at(i, i) = user_ring->uniformiser_power(vals[i]);
    if (!(out.p * m_in * out.q).payload_equal(out.diagonal))
        throw std::logic_error("smith_form: P M Q failed to verify at the working precision");
    return out;
}

} // namespace

bool congruent_by_invariant_factors(const GramForm& f, const GramForm& g) {
    if (!f.ring()->unramified())
        throw WrongInstance(
            "congruent_by_invariant_factors requires an unramified instance; the norm map of "
            "the residue extension must be onto (use decide_congruent instead)");
    if (!f.ring()->same_ring(*g.ring())) throw ShapeMismatch("forms over different rings");
    if (f.epsilon() != g.epsilon()) throw ShapeMismatch("forms of different epsilon");
    if (f.size() != g.size()) throw ShapeMismatch("forms of different size");
    SmithForm sf = smith_form(f.matrix());
    SmithForm sg = smith_form(g.matrix());
    return sf.valuations == sg.valuations && sf.corank == sg.corank;
}

} // namespace dvrforms
