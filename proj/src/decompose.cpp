#include "dvrforms/decompose.hpp"

#include <algorithm>
#include <optional>

#include "dvrforms/smith.hpp"

namespace dvrforms {

namespace {

int certified_val(const RingElement& e) {
    Valuation v = e.valuation();
    return v.is_finite() ? v.value : -1;
}

bool is_unit(const RingElement& e) { return certified_val(e) == 0; }

int effective_epsilon(int eps, int level, const Ring& ring) {
    if (ring.involution_trivial()) return eps;
    return level % 2 == 0 ? eps : -eps;
}

RingMatrix exact_j_block(const RingPtr& ring) {
    RingMatrix j(ring, 2, 2);
    j.at(0, 1) = ring->one();
    j.at(1, 0) = -ring->one();
    return j;
}

// Canonical unit block of the given residue type.
RingMatrix canonical_block(FormType type, std::size_t size, DiscClass disc, const RingPtr& ring) {
    switch (type) {
        case FormType::symmetric: {
            RingMatrix c(ring, size, size);
            for (std::size_t i = 0; i < size; ++i) c.at(i, i) = ring->one();
            if (disc == DiscClass::nonsquare) c.at(size - 1, size - 1) = ring->nu_element();
            return c;
        }
        case FormType::alternating: {
            if (size % 2 != 0) throw Error("alternating block of odd size is not realisable");
            RingMatrix c(ring, 0, 0);
            RingMatrix j = exact_j_block(ring);
            for (std::size_t i = 0; i < size / 2; ++i) c = c.direct_sum(j);
            return c;
        }
        case FormType::hermitian:
            return RingMatrix::identity(ring, size);
        case FormType::skew_hermitian: {
            RingMatrix c(ring, size, size);
            for (std::size_t i = 0; i < size; ++i) c.at(i, i) = ring->skew_unit();
            return c;
        }
    }
    throw Error("unknown form type");
}

struct SplitOne {
    std::vector<RingVector> basis; // [w, w_2, ..., w_m]
    RingMatrix complement_gram;    // Schur complement, (m-1) x (m-1)
    RingMatrix complement_num;     // h(w,w) * complement: stays exact
    RingElement pivot_value;       // h(w, w)
};

// Splits off the rank-one submodule A*w: h(w, w) must be a unit. The Schur
// complement is evaluated numerator-first so exact cancellations stay
// exactly zero.
SplitOne split_one_worker(const GramForm& f, const RingVector& w) {
    const RingPtr& ring = f.ring();
    const std::size_t m = f.size();
    RingElement g_ww = f.pairing(w, w);
    if (!is_unit(g_ww)) throw NotAUnitLength("split_unit_vector: h(u,u) is not a unit");
    RingElement g_inv = g_ww.invert();

    // h(v_i, w) and h(w, v_j)
    RingVector col(m, ring->zero()), row(m, ring->zero());
    for (std::size_t i = 0; i < m; ++i) {
        RingElement c = ring->zero(), r = ring->zero();
        for (std::size_t j = 0; j < m; ++j) {
            c = c + f.at(i, j) * w[j];
            r = r + w[j].involute() * f.at(j, i);
        }
        col[i] = c;
        row[i] = r;
    }

    // w replaces the first basis vector on which it has a unit coordinate
    std::size_t drop = m;
    for (std::size_t i = 0; i < m; ++i)
        if (is_unit(w[i])) {
            drop = i;
            break;
        }
    if (drop == m)
        throw NotAUnitLength("split_unit_vector: vector has no unit coordinate");

    SplitOne out{{}, RingMatrix(ring, m - 1, m - 1), RingMatrix(ring, m - 1, m - 1), g_ww};
    out.basis.push_back(w);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m; ++i)
        if (i != drop) keep.push_back(i);
    for (std::size_t i : keep) {
        RingVector wi(m, ring->zero());
        RingElement c = row[i] * g_inv;
        for (std::size_t r = 0; r < m; ++r) {
            wi[r] = (r == i ? ring->one() : ring->zero()) - c * w[r];
        }
        out.basis.push_back(wi);
    }
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b) {
            std::size_t i = keep[a], j = keep[b];
            RingElement num = f.at(i, j) * g_ww - col[i] * row[j];
            out.complement_num.at(a, b) = num;
            out.complement_gram.at(a, b) = num * g_inv;
        }
    return out;
}

struct SplitTwo {
    std::vector<RingVector> basis; // [u, v, w_3, ..., w_m]
    RingMatrix complement_gram;
    RingMatrix complement_num; // det(pair Gram) * complement: stays exact
    RingMatrix pair_gram;      // 2x2 Gram of (u, v)
    RingElement pair_det;
};

// Splits off the rank-two submodule A*u + A*v: the Gram matrix of (u, v)
// must be invertible, which in the residue-trivial skew case follows from
// h(u, v) being a unit.
SplitTwo split_two_worker(const GramForm& f, const RingVector& u, const RingVector& v) {
    const RingPtr& ring = f.ring();
    const std::size_t m = f.size();
    // skew forms over a trivial involution have h(x,x) = -h(x,x), so every
    // self-pairing is exactly zero; record that so radicals stay certifiable
    const bool trivial_skew = ring->involution_trivial() && f.epsilon() == -1;
    RingElement puu = trivial_skew ? ring->zero() : f.pairing(u, u);
    RingElement pvv = trivial_skew ? ring->zero() : f.pairing(v, v);
    RingElement puv = f.pairing(u, v);
    RingElement pvu = f.pairing(v, u);
    if (!is_unit(puv)) throw NotAUnitPairing("split_rank_two: h(u,v) is not a unit");
    RingElement det = puu * pvv - puv * pvu;
    if (!is_unit(det))
        throw NotAUnitPairing("split_rank_two: the rank-two Gram matrix is not invertible");
    RingElement det_inv = det.invert();

    // coordinates replaced by u and v
    std::size_t j1 = m;
    for (std::size_t i = 0; i < m; ++i)
        if (is_unit(u[i])) {
            j1 = i;
            break;
        }
    if (j1 == m) throw NotAUnitPairing("split_rank_two: u has no unit coordinate");
    RingElement ratio = u[j1].invert();
    std::size_t j2 = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == j1) continue;
        RingElement vi = v[i] - v[j1] * ratio * u[i];
        if (is_unit(vi)) {
            j2 = i;
            break;
        }
    }
    if (j2 == m) throw NotAUnitPairing("split_rank_two: u, v do not extend to a basis");

    // h(u, e_i) and h(v, e_i), and the mirrored pairings
    RingVector cu(m, ring->zero()), cv(m, ring->zero());
    RingVector ucol(m, ring->zero()), vcol(m, ring->zero());
    for (std::size_t i = 0; i < m; ++i) {
        RingElement a = ring->zero(), b = ring->zero(), c = ring->zero(), d = ring->zero();
        for (std::size_t j = 0; j < m; ++j) {
            a = a + u[j].involute() * f.at(j, i);
            b = b + v[j].involute() * f.at(j, i);
            c = c + f.at(i, j) * u[j];
            d = d + f.at(i, j) * v[j];
        }
        cu[i] = a;  // h(u, v_i)
        cv[i] = b;  // h(v, v_i)
        ucol[i] = c; // h(v_i, u)
        vcol[i] = d; // h(v_i, v)
    }

    SplitTwo out{{},
                 RingMatrix(ring, m - 2, m - 2),
                 RingMatrix(ring, m - 2, m - 2),
                 RingMatrix(ring, 2, 2),
                 det};
    out.pair_gram.at(0, 0) = puu;
    out.pair_gram.at(0, 1) = puv;
    out.pair_gram.at(1, 0) = pvu;
    out.pair_gram.at(1, 1) = pvv;
    out.basis.push_back(u);
    out.basis.push_back(v);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m; ++i)
        if (i != j1 && i != j2) keep.push_back(i);
    // (a_i, b_i) solves the 2x2 unit system: h(u, a u + b v) = h(u, v_i),
    // h(v, a u + b v) = h(v, v_i); adjugate form keeps numerators exact.
    RingVector anum(m, ring->zero()), bnum(m, ring->zero());
    for (std::size_t i : keep) {
        anum[i] = pvv * cu[i] - puv * cv[i];
        bnum[i] = puu * cv[i] - pvu * cu[i];
        RingElement ai = anum[i] * det_inv, bi = bnum[i] * det_inv;
        RingVector wi(m, ring->zero());
        for (std::size_t r = 0; r < m; ++r) {
            RingElement base = (r == i) ? ring->one() : ring->zero();
            wi[r] = base - ai * u[r] - bi * v[r];
        }
        out.basis.push_back(wi);
    }
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b) {
            if (trivial_skew && a == b) continue; // diagonal stays the exact zero
            std::size_t i = keep[a], j = keep[b];
            RingElement num = f.at(i, j) * det - ucol[i] * anum[j] - vcol[i] * bnum[j];
            out.complement_num.at(a, b) = num;
            out.complement_gram.at(a, b) = num * det_inv;
        }
    return out;
}

// Exact-lift variant of the unit-length search used inside the
// decomposition: tries u, v, then u + lift(lambda) v over the residue
// constants, so the returned vector has exactly known coordinates and the
// fraction-free Schur chain stays exact. A nondegenerate non-alternating
// pair always admits such a vector.
RingVector find_unit_length_lifted(const GramForm& f, std::size_t i, std::size_t j) {
    const RingPtr& ring = f.ring();
    const std::size_t m = f.size();
    RingVector u = unit_vector(ring, m, i);
    if (is_unit(f.at(i, i))) return u;
    RingVector v = unit_vector(ring, m, j);
    if (is_unit(f.at(j, j))) return v;
    const std::int64_t p = ring->p();
    const bool quadratic = ring->unramified();
    for (std::int64_t a = 0; a < p; ++a)
        for (std::int64_t b = 0; b < (quadratic ? p : 1); ++b) {
            if (a == 0 && b == 0) continue;
            RingElement lam = lift(residue_make(ring, a, b));
            RingVector w = u;
            w[j] = lam;
            if (is_unit(f.pairing(w, w))) return w;
        }
    throw std::logic_error("find_unit_length_lifted: no unit length in the pivot plane");
}

struct PivotPos {
    std::size_t i, j;
};

// Deterministic pivot: among unit entries the diagonal wins, then the
// first in row-major order.
std::optional<PivotPos> find_unit_pivot(const RingMatrix& g) {
    const std::size_t n = g.rows();
    for (std::size_t k = 0; k < n; ++k)
        if (is_unit(g.at(k, k))) return PivotPos{k, k};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (is_unit(g.at(i, j))) return PivotPos{i, j};
    return std::nullopt;
}

RingVector unit_vector(const RingPtr& ring, std::size_t m, std::size_t k) {
    RingVector e(m, ring->zero());
    e[k] = ring->one();
    return e;
}

// Raw decomposition data at the raised working precision.
struct RawDecomposition {
    RingPtr ring; // raised
    std::vector<OMearaDecomposition::Block> blocks;
    std::size_t zero_rank = 0;
    RingMatrix witness;
};

RawDecomposition decompose_raised(const GramForm& f_user) {
    const RingPtr user_ring = f_user.ring();
    const int user_prec = user_ring->precision();
    RingPtr ring = user_ring->with_precision(2 * user_prec);
    const std::size_t m = f_user.size();
    const int eps = f_user.epsilon();

    GramForm f = f_user.change_ring(ring);
    RingMatrix basis = RingMatrix::identity(ring, m);
    RingMatrix gram = f.matrix();

    RawDecomposition raw{ring, {}, 0, RingMatrix(ring, m, m)};
    std::vector<RingVector> block_cols;
    std::vector<RingVector> zero_cols;

    while (gram.rows() > 0) {
        const std::size_t r = gram.rows();
        if (gram.all_exact_zero()) {
            for (std::size_t j = 0; j < r; ++j) zero_cols.push_back(basis.column(j));
            break;
        }
        // minimal certified valuation over the block
        int d = -1;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                const RingElement& e = gram.at(i, j);
                if (e.is_exact_zero()) continue;
                int v = certified_val(e);
                if (v < 0) continue;
                if (d < 0 || v < d) d = v;
            }
        if (d < 0) {
            throw PrecisionExhausted(
                "omeara_decompose: remaining entries vanish at the working precision without "
                "being exact zeros; raise the precision or mark entries as exact zeros",
                2 * user_prec + 1);
        }
        if (d >= user_prec)
            throw PrecisionExhausted("omeara_decompose: block exponent " + std::to_string(d) +
                                         " reaches the working precision " +
                                         std::to_string(user_prec),
                                     d + 1);

        RingMatrix g1(ring, r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                g1.at(i, j) = gram.at(i, j).divide_by_uniformiser(d);
        int eps_eff = effective_epsilon(eps, d, *ring);
        GramForm g1_form = unchecked_gram(g1, eps_eff);
        bool alternating_route = ring->residue_involution_trivial() && eps_eff == -1;

        auto pivot = find_unit_pivot(g1);
        if (!pivot) throw std::logic_error("omeara_decompose: no unit entry after rescaling");

        if (alternating_route) {
            auto [u1, v1] = make_symplectic_pair(unit_vector(ring, r, pivot->i),
                                                 unit_vector(ring, r, pivot->j), g1_form);
            SplitTwo st = split_two_worker(g1_form, u1, v1);
            block_cols.push_back(basis.apply(u1));
            block_cols.push_back(basis.apply(v1));
            if (!raw.blocks.empty() && raw.blocks.back().exponent == d) {
                raw.blocks.back().unit_block =
                    raw.blocks.back().unit_block.direct_sum(exact_j_block(ring));
            } else {
                raw.blocks.push_back({d, exact_j_block(ring)});
            }
            RingMatrix next_basis(ring, m, r - 2);
            for (std::size_t c = 2; c < st.basis.size(); ++c)
                next_basis.set_column(c - 2, basis.apply(st.basis[c]));
            basis = next_basis;
            gram = RingMatrix(ring, r - 2, r - 2);
            for (std::size_t i = 0; i < r - 2; ++i)
                for (std::size_t j = 0; j < r - 2; ++j)
                    gram.at(i, j) = st.complement_gram.at(i, j).times_uniformiser(d);
        } else {
            RingVector w = (pivot->i == pivot->j)
                               ? unit_vector(ring, r, pivot->i)
                               : find_unit_length(g1_form, unit_vector(ring, r, pivot->i),
                                                  unit_vector(ring, r, pivot->j));
            SplitOne st = split_one_worker(g1_form, w);
            block_cols.push_back(basis.apply(w));
            RingMatrix piece(ring, 1, 1);
            piece.at(0, 0) = st.pivot_value;
            if (!raw.blocks.empty() && raw.blocks.back().exponent == d) {
                raw.blocks.back().unit_block = raw.blocks.back().unit_block.direct_sum(piece);
            } else {
                raw.blocks.push_back({d, piece});
            }
            RingMatrix next_basis(ring, m, r - 1);
            for (std::size_t c = 1; c < st.basis.size(); ++c)
                next_basis.set_column(c - 1, basis.apply(st.basis[c]));
            basis = next_basis;
            gram = RingMatrix(ring, r - 1, r - 1);
            for (std::size_t i = 0; i < r - 1; ++i)
                for (std::size_t j = 0; j < r - 1; ++j)
                    gram.at(i, j) = st.complement_gram.at(i, j).times_uniformiser(d);
        }
    }

    raw.zero_rank = zero_cols.size();
    std::size_t col = 0;
    for (const auto& v : block_cols) raw.witness.set_column(col++, v);
    for (const auto& v : zero_cols) raw.witness.set_column(col++, v);
    return raw;
}

} // namespace

bool Witness::verify() const {
    return (x.conj_transpose() * source.matrix() * x).payload_equal(target.matrix());
}

RingMatrix OMearaDecomposition::assembled() const {
    RingMatrix out(ring, size(), size());
    std::size_t pos = 0;
    for (const auto& block : blocks) {
        for (std::size_t i = 0; i < block.unit_block.rows(); ++i)
            for (std::size_t j = 0; j < block.unit_block.cols(); ++j)
                out.at(pos + i, pos + j) = block.unit_block.at(i, j).times_uniformiser(block.exponent);
        pos += block.unit_block.rows();
    }
    return out;
}

std::size_t OMearaDecomposition::size() const {
    std::size_t s = zero_rank;
    for (const auto& block : blocks) s += block.unit_block.rows();
    return s;
}

std::vector<RingVector> split_unit_vector(const GramForm& f, const RingVector& u) {
    if (u.size() != f.size()) throw ShapeMismatch("split_unit_vector: vector size mismatch");
    return split_one_worker(f, u).basis;
}

std::vector<RingVector> split_rank_two(const GramForm& f, const RingVector& u,
                                       const RingVector& v) {
    if (u.size() != f.size() || v.size() != f.size())
        throw ShapeMismatch("split_rank_two: vector size mismatch");
    if (!f.ring()->residue_involution_trivial() || f.epsilon() != -1)
        throw WrongInstance(
            "split_rank_two applies to skew hermitian forms over residue-trivial involutions");
    return split_two_worker(f, u, v).basis;
}

RingVector find_unit_length(const GramForm& f, const RingVector& u, const RingVector& v) {
    const RingPtr& ring = f.ring();
    if (ring->residue_involution_trivial() && f.epsilon() == -1)
        throw TypeMismatch(
            "find_unit_length: skew forms over residue-trivial involutions have no unit lengths");
    RingElement huv = f.pairing(u, v);
    if (!is_unit(huv)) throw NotAUnitPairing("find_unit_length: h(u,v) is not a unit");
    // normalise the pairing of the (possibly b-twisted) hermitian form to 1
    RingElement scale = huv;
    if (f.epsilon() == -1) scale = ring->skew_unit() * huv;
    RingVector vn = vector_scale(scale.invert(), v);
    if (is_unit(f.pairing(u, u))) return u;
    if (is_unit(f.pairing(vn, vn))) return vn;
    RingVector w = vector_add(u, vn);
    if (is_unit(f.pairing(w, w))) return w;
    throw std::logic_error("find_unit_length: no unit length among u, v, u+v");
}

OMearaDecomposition omeara_decompose(const GramForm& f) {
    const RingPtr& user_ring = f.ring();
    RawDecomposition raw = decompose_raised(f);

    OMearaDecomposition dec;
    dec.ring = user_ring;
    dec.epsilon = f.epsilon();
    dec.zero_rank = raw.zero_rank;
    for (const auto& block : raw.blocks)
        dec.blocks.push_back({block.exponent, block.unit_block.change_ring(user_ring)});
    dec.witness = raw.witness.change_ring(user_ring);

    RingMatrix target = dec.assembled();
    RingMatrix check = dec.witness.conj_transpose() * f.matrix() * dec.witness;
    if (!check.payload_equal(target))
        throw std::logic_error("omeara_decompose: witness failed to verify at precision");
    return dec;
}

namespace {

// T with T'^* C T diagonal with unit diagonal; C an invertible hermitian
// unit form (effective epsilon +1).
RingMatrix diagonalise_unit_form(const GramForm& c) {
    const RingPtr& ring = c.ring();
    const std::size_t m = c.size();
    RingMatrix current = c.matrix();
    std::vector<RingVector> done_cols;
    RingMatrix basis = RingMatrix::identity(ring, m);
    GramForm cur_form = unchecked_gram(current, c.epsilon());
    while (current.rows() > 0) {
        auto pivot = find_unit_pivot(current);
        if (!pivot) throw Degenerate("diagonalise_unit_form: no unit entry in the form");
        RingVector w = (pivot->i == pivot->j)
                           ? unit_vector(ring, current.rows(), pivot->i)
                           : find_unit_length(cur_form, unit_vector(ring, current.rows(), pivot->i),
                                              unit_vector(ring, current.rows(), pivot->j));
        SplitOne st = split_one_worker(cur_form, w);
        done_cols.push_back(basis.apply(w));
        RingMatrix next_basis(ring, m, current.rows() - 1);
        for (std::size_t col = 1; col < st.basis.size(); ++col)
            next_basis.set_column(col - 1, basis.apply(st.basis[col]));
        basis = next_basis;
        current = st.complement_gram;
        cur_form = unchecked_gram(current, c.epsilon());
    }
    RingMatrix t(ring, m, m);
    for (std::size_t j = 0; j < done_cols.size(); ++j) t.set_column(j, done_cols[j]);
    return t;
}

// Y with Y'^* c Y = d for unit forms that agree modulo the maximal ideal,
// hermitian or symmetric type. The inductive step of the lifting theorem:
// rescale the leading vector by a norm-equation solution, orthogonalise,
// recurse.
RingMatrix hensel_congruence(const GramForm& c, const GramForm& d) {
    const RingPtr& ring = c.ring();
    const std::size_t m = c.size();
    RingMatrix t = diagonalise_unit_form(c);
    RingMatrix mdiag = (t.conj_transpose() * c.matrix()) * t;
    RingMatrix dprime = (t.conj_transpose() * d.matrix()) * t;

    // build s with s'^* dprime s = mdiag column by column
    RingMatrix s = RingMatrix::identity(ring, m);
    GramForm dform = unchecked_gram(dprime, d.epsilon());
    for (std::size_t k = 0; k < m; ++k) {
        RingVector wk = s.column(k);
        wk = rescale_vector(wk, mdiag.at(k, k), dform);
        s.set_column(k, wk);
        RingElement pivot_inv = dform.pairing(wk, wk).invert();
        for (std::size_t j = k + 1; j < m; ++j) {
            RingVector wj = s.column(j);
            RingElement coef = dform.pairing(wk, wj) * pivot_inv;
            wj = vector_sub(wj, vector_scale(coef, wk));
            s.set_column(j, wj);
        }
    }
    if (!((s.conj_transpose() * dprime) * s).payload_equal(mdiag))
        throw std::logic_error("hensel_congruence: diagonal matching failed to verify");
    return t * s.inverse() * t.inverse();
}

} // namespace

Witness symplectic_basis(const GramForm& f) {
    const RingPtr& ring = f.ring();
    if (!ring->residue_involution_trivial() || f.epsilon() != -1)
        throw WrongInstance(
            "symplectic_basis applies to skew hermitian forms over residue-trivial involutions");
    if (!residue_of_matrix(f.matrix()).invertible())
        throw Degenerate("symplectic_basis: form is degenerate");
    const std::size_t m = f.size();

    RingMatrix basis = RingMatrix::identity(ring, m);
    RingMatrix gram = f.matrix();
    std::vector<RingVector> cols;
    while (gram.rows() > 0) {
        auto pivot = find_unit_pivot(gram);
        if (!pivot || pivot->i == pivot->j)
            throw Degenerate("symplectic_basis: no unit pairing found");
        GramForm gform = unchecked_gram(gram, -1);
        auto [u1, v1] = make_symplectic_pair(unit_vector(ring, gram.rows(), pivot->i),
                                             unit_vector(ring, gram.rows(), pivot->j), gform);
        SplitTwo st = split_two_worker(gform, u1, v1);
        cols.push_back(basis.apply(u1));
        cols.push_back(basis.apply(v1));
        RingMatrix next_basis(ring, m, gram.rows() - 2);
        for (std::size_t c = 2; c < st.basis.size(); ++c)
            next_basis.set_column(c - 2, basis.apply(st.basis[c]));
        basis = next_basis;
        gram = st.complement_gram;
    }

    RingMatrix x(ring, m, m);
    for (std::size_t j = 0; j < m; ++j) x.set_column(j, cols[j]);
    RingMatrix target(ring, 0, 0);
    RingMatrix j_block = exact_j_block(ring);
    for (std::size_t i = 0; i < m / 2; ++i) target = target.direct_sum(j_block);
    Witness w{x, f, unchecked_gram(target, -1)};
    if (!w.verify()) throw std::logic_error("symplectic_basis: witness failed to verify");
    return w;
}

Witness lift_residue_congruence(const GramForm& m, const GramForm& n, const ResidueMatrix& xbar) {
    const RingPtr& ring = m.ring();
    if (!ring->same_ring(*n.ring()) || m.epsilon() != n.epsilon() || m.size() != n.size())
        throw ShapeMismatch("lift_residue_congruence: mismatched forms");
    ResidueMatrix mbar = residue_of_matrix(m.matrix());
    ResidueMatrix nbar = residue_of_matrix(n.matrix());
    if (!mbar.invertible() || !nbar.invertible())
        throw Degenerate("lift_residue_congruence: forms must be invertible unit blocks");
    if (xbar.size() != m.size() || !xbar.invertible() ||
        !(xbar.conj_transpose() * mbar * xbar == nbar))
        throw ResidueWitnessInvalid("residue witness does not conjugate Mbar to Nbar");

    const bool alternating = ring->residue_involution_trivial() && m.epsilon() == -1;
    RingMatrix x(ring, 0, 0);
    if (alternating) {
        Witness wm = symplectic_basis(m);
        Witness wn = symplectic_basis(n);
        x = wm.x * wn.x.inverse();
    } else if (ring->unramified() && m.epsilon() == -1) {
        // twist by the skew unit: b*M and b*N are hermitian and the same
        // residue witness applies
        RingElement b = ring->skew_unit();
        GramForm mh = unchecked_gram(m.matrix().scaled(b), 1);
        GramForm nh = unchecked_gram(n.matrix().scaled(b), 1);
        RingMatrix lifted = xbar.lift_matrix();
        GramForm mprime = unchecked_gram((lifted.conj_transpose() * mh.matrix()) * lifted, 1);
        x = lifted * hensel_congruence(mprime, nh);
    } else {
        RingMatrix lifted = xbar.lift_matrix();
        GramForm mprime =
            unchecked_gram((lifted.conj_transpose() * m.matrix()) * lifted, m.epsilon());
        x = lifted * hensel_congruence(mprime, n);
    }
    Witness w{x, m, n};
    if (!w.verify())
        throw std::logic_error("lift_residue_congruence: witness failed to verify at precision");
    return w;
}

NormalForm normal_form(const GramForm& f) {
    const RingPtr& user_ring = f.ring();
    const std::size_t m = f.size();
    RawDecomposition raw = decompose_raised(f);
    const RingPtr& ring = raw.ring; // raised precision

    InvariantProfile profile;
    profile.ring = user_ring;
    profile.epsilon = f.epsilon();
    profile.dimension = m;
    profile.d_inf = raw.zero_rank;

    RingMatrix block_witness(ring, 0, 0);
    RingMatrix canonical_raised(ring, m, m);
    std::size_t pos = 0;
    for (const auto& block : raw.blocks) {
        const int level = block.exponent;
        const std::size_t size = block.unit_block.rows();
        int eps_eff = effective_epsilon(f.epsilon(), level, *ring);
        FormType type = level_type(level, f.epsilon(), *ring);
        ResidueClassification cls = classify_residue_form(residue_of_matrix(block.unit_block), type);
        profile.d[level] = size;
        profile.level_data[level] = cls;

        RingMatrix cblock = canonical_block(type, size, cls.disc, ring);
        GramForm bform = unchecked_gram(block.unit_block, eps_eff);
        GramForm cform = unchecked_gram(cblock, eps_eff);
        ResidueMatrix rb = residue_of_matrix(block.unit_block);
        ResidueMatrix rc = residue_of_matrix(cblock);
        ResidueMatrix xbar = residue_congruence_witness(rb, rc, type);
        Witness wb = lift_residue_congruence(bform, cform, xbar);
        block_witness = block_witness.direct_sum(wb.x);

        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                canonical_raised.at(pos + i, pos + j) = cblock.at(i, j).times_uniformiser(level);
        pos += size;
    }
    block_witness = block_witness.direct_sum(RingMatrix::identity(ring, raw.zero_rank));

    RingMatrix x_raised = raw.witness * block_witness;
    RingMatrix x = x_raised.change_ring(user_ring);
    GramForm canonical = unchecked_gram(canonical_raised.change_ring(user_ring), f.epsilon());

    // cross-check the level multiset against the Smith invariant factors
    SmithForm smith = smith_form(f.matrix());
    std::vector<int> from_blocks;
    for (const auto& block : raw.blocks)
        from_blocks.insert(from_blocks.end(), block.unit_block.rows(), block.exponent);
    if (from_blocks != smith.valuations || profile.d_inf != smith.corank)
        throw std::logic_error("normal_form: O'Meara exponents disagree with Smith valuations");

    NormalForm out{canonical, Witness{x, f, canonical}, profile};
    if (!out.witness.verify())
        throw std::logic_error("normal_form: witness failed to verify at precision");
    return out;
}

CongruenceVerdict decide_congruent(const GramForm& f, const GramForm& g) {
    if (!f.ring()->same_ring(*g.ring()))
        throw ShapeMismatch("decide_congruent: forms over different rings");
    if (f.epsilon() != g.epsilon()) throw ShapeMismatch("decide_congruent: epsilon mismatch");
    if (f.size() != g.size()) throw ShapeMismatch("decide_congruent: size mismatch");
    InvariantProfile pf = invariant_profile(f);
    InvariantProfile pg = invariant_profile(g);

    std::vector<int> levels;
    for (const auto& [level, size] : pf.d) levels.push_back(level);
    for (const auto& [level, size] : pg.d)
        if (!pf.d.count(level)) levels.push_back(level);
    std::sort(levels.begin(), levels.end());

    for (int level : levels) {
        std::size_t a = pf.d_at(level), b = pg.d_at(level);
        if (a != b)
            return {false, "level " + std::to_string(level) + ": size " + std::to_string(a) +
                               " != " + std::to_string(b)};
        FormType type = level_type(level, f.epsilon(), *f.ring());
        if (type == FormType::symmetric) {
            DiscClass da = pf.level_data.at(level).disc;
            DiscClass db = pg.level_data.at(level).disc;
            if (da != db)
                return {false, "level " + std::to_string(level) + ": disc " +
                                   disc_class_name(da) + " != " + disc_class_name(db)};
        }
    }
    if (pf.d_inf != pg.d_inf)
        return {false, "level inf: size " + std::to_string(pf.d_inf) + " != " +
                           std::to_string(pg.d_inf)};
    return {true, ""};
}

Witness congruence_witness(const GramForm& f, const GramForm& g) {
    CongruenceVerdict verdict = decide_congruent(f, g);
    if (!verdict.congruent) throw NotCongruent("forms are not congruent: " + verdict.reason);
    NormalForm nf = normal_form(f);
    NormalForm ng = normal_form(g);
    if (!nf.canonical.matrix().payload_equal(ng.canonical.matrix()))
        throw std::logic_error("congruence_witness: equal profiles gave different canonicals");
    RingMatrix x = nf.witness.x * ng.witness.x.inverse();
    Witness w{x, f, g};
    if (!w.verify())
        throw std::logic_error("congruence_witness: witness failed to verify at precision");
    return w;
}

bool realisable(const std::map<int, std::size_t>& d, int epsilon, const Ring& ring) {
    for (const auto& [level, size] : d) {
        if (level < 0) throw Error("realisable: negative level");
        if (size == 0) continue;
        if (level_type(level, epsilon, ring) == FormType::alternating && size % 2 != 0)
            return false;
    }
    return true;
}

GramForm canonical_from_profile(const std::map<int, std::size_t>& d, std::size_t d_inf,
                                int epsilon, const RingPtr& ring) {
    if (!realisable(d, epsilon, *ring)) throw Error("profile is not realisable");
    RingMatrix out(ring, 0, 0);
    for (const auto& [level, size] : d) {
        if (size == 0) continue;
        FormType type = level_type(level, epsilon, *ring);
        RingMatrix block = canonical_block(type, size, DiscClass::square, ring);
        RingMatrix shifted(ring, size, size);
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                shifted.at(i, j) = block.at(i, j).times_uniformiser(level);
        out = out.direct_sum(shifted);
    }
    out = out.direct_sum(RingMatrix::zero(ring, d_inf, d_inf));
    if (out.rows() == 0) throw Error("empty profile");
    return GramForm::validate(out, epsilon);
}

} // namespace dvrforms
