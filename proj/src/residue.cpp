#include "dvrforms/residue.hpp"

#include <algorithm>

namespace dvrforms {

namespace {

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t p) {
    std::int64_t r = 1;
    base = mod_p(base, p);
    while (exp > 0) {
        if (exp & 1) r = r * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) { return pow_mod(a, p - 2, p); }

bool field_is_quadratic(const Ring& r) { return r.unramified(); }

} // namespace

ResidueElement residue_make(const RingPtr& ring, std::int64_t a, std::int64_t b) {
    if (b != 0 && !field_is_quadratic(*ring))
        throw TypeMismatch("residue field of this instance is the prime field");
    return ResidueElement{ring, mod_p(a, ring->p()), mod_p(b, ring->p())};
}

ResidueElement residue_add(const ResidueElement& x, const ResidueElement& y) {
    return ResidueElement{x.ring, mod_p(x.a + y.a, x.ring->p()), mod_p(x.b + y.b, x.ring->p())};
}

ResidueElement residue_sub(const ResidueElement& x, const ResidueElement& y) {
    return ResidueElement{x.ring, mod_p(x.a - y.a, x.ring->p()), mod_p(x.b - y.b, x.ring->p())};
}

ResidueElement residue_mul(const ResidueElement& x, const ResidueElement& y) {
    const std::int64_t p = x.ring->p(), nu = x.ring->nu();
    return ResidueElement{x.ring, mod_p(x.a * y.a % p + nu * (x.b * y.b % p), p),
                          mod_p(x.a * y.b + x.b * y.a, p)};
}

ResidueElement residue_neg(const ResidueElement& x) {
    return ResidueElement{x.ring, mod_p(-x.a, x.ring->p()), mod_p(-x.b, x.ring->p())};
}

ResidueElement residue_inv(const ResidueElement& x) {
    const std::int64_t p = x.ring->p(), nu = x.ring->nu();
    if (x.is_zero()) throw NotAUnit("residue inverse of zero");
    std::int64_t n = mod_p(x.a * x.a - nu * (x.b * x.b % p), p);
    std::int64_t ni = inv_mod(n, p);
    return ResidueElement{x.ring, mod_p(x.a * ni, p), mod_p(-x.b * ni, p)};
}

ResidueElement residue_conj(const ResidueElement& x) {
    if (!field_is_quadratic(*x.ring)) return x;
    return ResidueElement{x.ring, x.a, mod_p(-x.b, x.ring->p())};
}

ResidueElement residue_norm(const ResidueElement& x) { return residue_mul(residue_conj(x), x); }

ResidueElement residue_of(const RingElement& x) {
    const Ring& R = *x.ring();
    switch (R.kind()) {
        case RingKind::series_trivial:
        case RingKind::series_ramified:
            return ResidueElement{x.ring(), x.series_coeff_a(0), 0};
        case RingKind::series_unramified:
            return ResidueElement{x.ring(), x.series_coeff_a(0), x.series_coeff_b(0)};
        case RingKind::padic_trivial:
        case RingKind::padic_ramified:
            return ResidueElement{x.ring(), (x.padic_a() % R.p()).convert_to<std::int64_t>(), 0};
        default:
            return ResidueElement{x.ring(), (x.padic_a() % R.p()).convert_to<std::int64_t>(),
                                  (x.padic_b() % R.p()).convert_to<std::int64_t>()};
    }
}

RingElement lift(const ResidueElement& r) {
    const Ring& R = *r.ring;
    switch (R.kind()) {
        case RingKind::series_trivial:
        case RingKind::series_ramified:
            return R.from_series({r.a});
        case RingKind::series_unramified:
            return R.from_series_pairs({{r.a, r.b}});
        case RingKind::padic_trivial:
        case RingKind::padic_ramified:
            return R.from_int(r.a);
        default:
            return R.from_pair(Int(r.a), Int(r.b));
    }
}

SquareClass square_class(const ResidueElement& r) {
    if (!r.in_prime_field())
        throw TypeMismatch("square_class requires an element of the fixed prime field");
    if (r.a == 0) return SquareClass::zero;
    std::int64_t e = pow_mod(r.a, (r.ring->p() - 1) / 2, r.ring->p());
    return e == 1 ? SquareClass::square : SquareClass::nonsquare;
}

ResidueElement sqrt_residue(const ResidueElement& r) {
    const std::int64_t p = r.ring->p();
    if (r.in_prime_field()) {
        for (std::int64_t s = 0; s < p; ++s)
            if (s * s % p == r.a) return ResidueElement{r.ring, s, 0};
        if (!field_is_quadratic(*r.ring)) throw NotASquare("not a square in F_p");
    }
    if (field_is_quadratic(*r.ring)) {
        for (std::int64_t x = 0; x < p; ++x)
            for (std::int64_t y = 0; y < p; ++y) {
                ResidueElement s{r.ring, x, y};
                if (residue_mul(s, s) == r) return s;
            }
    }
    throw NotASquare("not a square in the residue field");
}

ResidueElement solve_norm(const ResidueElement& c) {
    const Ring& R = *c.ring;
    if (!R.unramified()) throw WrongInstance("solve_norm requires an unramified instance");
    if (!c.in_prime_field()) throw TypeMismatch("solve_norm target must lie in the fixed field F_p");
    if (c.is_zero()) throw NoSolution("solve_norm: 0 is not a unit norm target");
    const std::int64_t p = R.p();
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y) {
            ResidueElement a{c.ring, x, y};
            if (residue_norm(a) == c) return a;
        }
    throw NoSolution("norm equation unsolvable"); // unreachable: finite-field norm is onto
}

const char* form_type_name(FormType t) {
    switch (t) {
        case FormType::symmetric: return "symmetric";
        case FormType::alternating: return "alternating";
        case FormType::hermitian: return "hermitian";
        case FormType::skew_hermitian: return "skew-hermitian";
    }
    return "?";
}

const char* disc_class_name(DiscClass d) {
    switch (d) {
        case DiscClass::square: return "square";
        case DiscClass::nonsquare: return "nonsquare";
        case DiscClass::not_applicable: return "n/a";
    }
    return "?";
}

// --- ResidueMatrix ---

ResidueMatrix::ResidueMatrix(RingPtr ring, std::size_t n) : ring_(std::move(ring)), n_(n) {
    e_.assign(n_ * n_, ResidueElement{ring_, 0, 0});
}

ResidueMatrix ResidueMatrix::identity(const RingPtr& ring, std::size_t n) {
    ResidueMatrix m(ring, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ResidueElement{ring, 1, 0};
    return m;
}

ResidueMatrix ResidueMatrix::operator*(const ResidueMatrix& other) const {
    ResidueMatrix r(ring_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            ResidueElement acc{ring_, 0, 0};
            for (std::size_t k = 0; k < n_; ++k)
                acc = residue_add(acc, residue_mul(at(i, k), other.at(k, j)));
            r.at(i, j) = acc;
        }
    return r;
}

ResidueMatrix ResidueMatrix::conj_transpose() const {
    ResidueMatrix r(ring_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r.at(j, i) = residue_conj(at(i, j));
    return r;
}

ResidueElement ResidueMatrix::det() const {
    // elimination over the field
    ResidueMatrix a = *this;
    ResidueElement d{ring_, 1, 0};
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t piv = n_;
        for (std::size_t i = col; i < n_; ++i)
            if (!a.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n_) return ResidueElement{ring_, 0, 0};
        if (piv != col) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(a.at(piv, j), a.at(col, j));
            d = residue_neg(d);
        }
        d = residue_mul(d, a.at(col, col));
        ResidueElement pinv = residue_inv(a.at(col, col));
        for (std::size_t i = col + 1; i < n_; ++i) {
            ResidueElement f = residue_mul(a.at(i, col), pinv);
            for (std::size_t j = col; j < n_; ++j)
                a.at(i, j) = residue_sub(a.at(i, j), residue_mul(f, a.at(col, j)));
        }
    }
    return d;
}

bool ResidueMatrix::invertible() const { return !det().is_zero(); }

ResidueMatrix ResidueMatrix::inverse() const {
    ResidueMatrix a = *this;
    ResidueMatrix inv = identity(ring_, n_);
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t piv = n_;
        for (std::size_t i = col; i < n_; ++i)
            if (!a.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n_) throw Degenerate("residue matrix not invertible");
        if (piv != col)
            for (std::size_t j = 0; j < n_; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        ResidueElement pinv = residue_inv(a.at(col, col));
        for (std::size_t j = 0; j < n_; ++j) {
            a.at(col, j) = residue_mul(pinv, a.at(col, j));
            inv.at(col, j) = residue_mul(pinv, inv.at(col, j));
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == col || a.at(i, col).is_zero()) continue;
            ResidueElement f = a.at(i, col);
            for (std::size_t j = 0; j < n_; ++j) {
                a.at(i, j) = residue_sub(a.at(i, j), residue_mul(f, a.at(col, j)));
                inv.at(i, j) = residue_sub(inv.at(i, j), residue_mul(f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

bool ResidueMatrix::operator==(const ResidueMatrix& other) const {
    if (n_ != other.n_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] != other.e_[i]) return false;
    return true;
}

RingMatrix ResidueMatrix::lift_matrix() const {
    RingMatrix m(ring_, n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m.at(i, j) = lift(at(i, j));
    return m;
}

ResidueMatrix residue_of_matrix(const RingMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeMismatch("residue_of_matrix: square input required");
    ResidueMatrix r(m.ring(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = residue_of(m.at(i, j));
    return r;
}

namespace {

void check_form_type(const ResidueMatrix& mbar, FormType type) {
    const std::size_t n = mbar.size();
    const bool quadratic = field_is_quadratic(*mbar.ring());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ResidueElement& x = mbar.at(i, j);
            const ResidueElement& y = mbar.at(j, i);
            switch (type) {
                case FormType::symmetric:
                case FormType::alternating:
                    if (quadratic || !x.in_prime_field())
                        throw TypeMismatch("symmetric/alternating forms live over F_p");
                    if (type == FormType::symmetric && y != x)
                        throw TypeMismatch("matrix is not symmetric");
                    if (type == FormType::alternating && y != residue_neg(x))
                        throw TypeMismatch("matrix is not alternating");
                    break;
                case FormType::hermitian:
                    if (!quadratic) throw TypeMismatch("hermitian residue forms live over F_{p^2}");
                    if (y != residue_conj(x)) throw TypeMismatch("matrix is not hermitian");
                    break;
                case FormType::skew_hermitian:
                    if (!quadratic)
                        throw TypeMismatch("skew-hermitian residue forms live over F_{p^2}");
                    if (y != residue_neg(residue_conj(x)))
                        throw TypeMismatch("matrix is not skew-hermitian");
                    break;
            }
        }
}

// phi(x_k, x_l) for the columns of T, i.e. (T'^* M T)(k, l).
ResidueMatrix gram_of(const ResidueMatrix& m, const ResidueMatrix& t) {
    return t.conj_transpose() * m * t;
}

// Diagonalises a symmetric (over F_p) or hermitian (over F_{p^2})
// invertible form: returns T with T'^* M T diagonal.
ResidueMatrix diagonalise_residue(const ResidueMatrix& m, bool hermitian) {
    const std::size_t n = m.size();
    const RingPtr& ring = m.ring();
    ResidueMatrix t = ResidueMatrix::identity(ring, n);
    for (std::size_t k = 0; k < n; ++k) {
        ResidueMatrix g = gram_of(m, t);
        // pivot: first diagonal entry != 0 at or after k
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (!g.at(i, i).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) {
            // all remaining diagonal entries vanish; mix two columns
            std::size_t bi = n, bj = n;
            for (std::size_t i = k; i < n && bi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!g.at(i, j).is_zero()) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi == n) throw Degenerate("residue form is degenerate");
            // v = e_i + c e_j with phi(v, v) != 0; c = 1 works over F_p,
            // over F_{p^2} one of c = 1, t has nonzero trace pairing
            ResidueElement c{ring, 1, 0};
            if (hermitian) {
                ResidueElement z = residue_mul(c, g.at(bi, bj));
                if (residue_add(z, residue_conj(z)).is_zero()) c = ResidueElement{ring, 0, 1};
            }
            for (std::size_t r = 0; r < n; ++r)
                t.at(r, bi) = residue_add(t.at(r, bi), residue_mul(c, t.at(r, bj)));
            g = gram_of(m, t);
            piv = bi;
        }
        if (piv != k)
            for (std::size_t r = 0; r < n; ++r) std::swap(t.at(r, piv), t.at(r, k));
        g = gram_of(m, t);
        ResidueElement dinv = residue_inv(g.at(k, k));
        for (std::size_t j = k + 1; j < n; ++j) {
            ResidueElement f = residue_mul(g.at(k, j), dinv);
            if (f.is_zero()) continue;
            for (std::size_t r = 0; r < n; ++r)
                t.at(r, j) = residue_sub(t.at(r, j), residue_mul(f, t.at(r, k)));
        }
    }
    return t;
}

// Symplectic reduction of an invertible alternating form over F_p:
// returns T with T'^* M T = J + J + ... + J.
ResidueMatrix symplectic_residue(const ResidueMatrix& m) {
    const std::size_t n = m.size();
    const RingPtr& ring = m.ring();
    if (n % 2 != 0) throw Degenerate("alternating form of odd rank is degenerate");
    ResidueMatrix t = ResidueMatrix::identity(ring, n);
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        ResidueMatrix g = gram_of(m, t);
        std::size_t bi = n, bj = n;
        for (std::size_t i = k; i < n && bi == n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!g.at(i, j).is_zero()) {
                    bi = i;
                    bj = j;
                    break;
                }
        if (bi == n) throw Degenerate("residue form is degenerate");
        if (bi != k)
            for (std::size_t r = 0; r < n; ++r) std::swap(t.at(r, bi), t.at(r, k));
        if (bj != k + 1)
            for (std::size_t r = 0; r < n; ++r) std::swap(t.at(r, bj), t.at(r, k + 1));
        g = gram_of(m, t);
        // scale second vector so the pairing is 1
        ResidueElement s = residue_inv(g.at(k, k + 1));
        for (std::size_t r = 0; r < n; ++r) t.at(r, k + 1) = residue_mul(s, t.at(r, k + 1));
        g = gram_of(m, t);
        for (std::size_t l = k + 2; l < n; ++l) {
            ResidueElement a = g.at(k, l), b = g.at(k + 1, l);
            for (std::size_t r = 0; r < n; ++r) {
                ResidueElement v = t.at(r, l);
                v = residue_sub(v, residue_mul(a, t.at(r, k + 1)));
                v = residue_add(v, residue_mul(b, t.at(r, k)));
                t.at(r, l) = v;
            }
        }
    }
    return t;
}

// Finds (alpha, gamma) over F_p with alpha^2 + gamma^2 = target. Every
// element of F_p is a sum of two squares; ascending scan keeps the 2x2
// pair-merge witness deterministic.
std::pair<std::int64_t, std::int64_t> sum_of_two_squares(std::int64_t target, std::int64_t p) {
    for (std::int64_t x = 0; x < p; ++x) {
        std::int64_t rest = mod_p(target - x * x, p);
        for (std::int64_t y = 0; y < p; ++y)
            if (y * y % p == rest) return {x, y};
    }
    throw NoSolution("sum of two squares not found"); // unreachable
}

// Canonicalises an invertible residue form of the given type:
// X'^* M X = C with C the canonical residue matrix of the class.
std::pair<ResidueMatrix, ResidueMatrix> canonicalise_residue(const ResidueMatrix& m,
                                                             FormType type) {
    const std::size_t n = m.size();
    const RingPtr& ring = m.ring();
    const std::int64_t p = ring->p(), nu = ring->nu();

    if (type == FormType::alternating) {
        ResidueMatrix t = symplectic_residue(m);
        return {t, gram_of(m, t)};
    }

    if (type == FormType::skew_hermitian) {
        // b*M is hermitian for the residue skew unit b = t; canonicalise it
        // to nu*I, which pulls back to the canonical b*I for M itself.
        ResidueElement bt{ring, 0, 1};
        ResidueMatrix mh(ring, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mh.at(i, j) = residue_mul(bt, m.at(i, j));
        ResidueMatrix x0 = canonicalise_residue(mh, FormType::hermitian).first;
        // rescale every column by c with N(c) = nu: I -> nu*I
        ResidueElement c = solve_norm(ResidueElement{ring, mod_p(nu, p), 0});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) x0.at(i, j) = residue_mul(x0.at(i, j), c);
        return {x0, gram_of(m, x0)};
    }

    const bool hermitian = (type == FormType::hermitian);
    ResidueMatrix t = diagonalise_residue(m, hermitian);
    ResidueMatrix g = gram_of(m, t);

    if (hermitian) {
        // every diagonal value is a unit of F_p; scale to 1 by a norm
        for (std::size_t k = 0; k < n; ++k) {
            ResidueElement d = g.at(k, k);
            ResidueElement c = solve_norm(residue_inv(d));
            for (std::size_t r = 0; r < n; ++r) t.at(r, k) = residue_mul(c, t.at(r, k));
        }
        return {t, gram_of(m, t)};
    }

    // symmetric over F_p: normalise the diagonal into {1, nu}
    std::vector<std::size_t> ones, nus;
    for (std::size_t k = 0; k < n; ++k) {
        ResidueElement d = g.at(k, k);
        ResidueElement scale{ring, 1, 0};
        if (square_class(d) == SquareClass::square) {
            scale = residue_inv(sqrt_residue(d));
            ones.push_back(k);
        } else {
            ResidueElement dn = residue_mul(d, residue_inv(ResidueElement{ring, nu, 0}));
            scale = residue_inv(sqrt_residue(dn));
            nus.push_back(k);
        }
        for (std::size_t r = 0; r < n; ++r) t.at(r, k) = residue_mul(scale, t.at(r, k));
    }
    // merge pairs of nu's into pairs of ones: P'^* diag(nu, nu) P = I_2
    if (nus.size() >= 2) {
        auto [al, ga] = sum_of_two_squares(inv_mod(nu, p), p);
        // P = [[al, -ga], [ga, al]]
        std::size_t merged = 0;
        for (; merged + 1 < nus.size(); merged += 2) {
            std::size_t c1 = nus[merged], c2 = nus[merged + 1];
            for (std::size_t r = 0; r < n; ++r) {
                ResidueElement v1 = t.at(r, c1), v2 = t.at(r, c2);
                t.at(r, c1) = residue_add(residue_mul(ResidueElement{ring, al, 0}, v1),
                                          residue_mul(ResidueElement{ring, ga, 0}, v2));
                t.at(r, c2) = residue_add(residue_mul(ResidueElement{ring, mod_p(-ga, p), 0}, v1),
                                          residue_mul(ResidueElement{ring, al, 0}, v2));
            }
            ones.push_back(c1);
            ones.push_back(c2);
        }
        nus.erase(nus.begin(), nus.begin() + merged);
    }
    // permute columns: ones first, then the surviving nu (if any)
    std::sort(ones.begin(), ones.end());
    std::vector<std::size_t> order = ones;
    order.insert(order.end(), nus.begin(), nus.end());
    ResidueMatrix perm(ring, n);
    for (std::size_t newpos = 0; newpos < n; ++newpos)
        perm.at(order[newpos], newpos) = ResidueElement{ring, 1, 0};
    t = t * perm;
    return {t, gram_of(m, t)};
}

} // namespace

ResidueClassification classify_residue_form(const ResidueMatrix& mbar, FormType type) {
    check_form_type(mbar, type);
    ResidueElement d = mbar.det();
    if (d.is_zero()) throw Degenerate("residue form is degenerate");
    ResidueClassification c;
    c.rank = mbar.size();
    if (type == FormType::symmetric) {
        c.disc = square_class(d) == SquareClass::square ? DiscClass::square : DiscClass::nonsquare;
    } else {
        c.disc = DiscClass::not_applicable;
        if (type == FormType::alternating && c.rank % 2 != 0)
            throw Degenerate("alternating form of odd rank is degenerate");
    }
    return c;
}

ResidueMatrix residue_congruence_witness(const ResidueMatrix& mbar, const ResidueMatrix& nbar,
                                         FormType type) {
    if (mbar.size() != nbar.size()) throw NotCongruent("residue forms of different sizes");
    ResidueClassification cm = classify_residue_form(mbar, type);
    ResidueClassification cn = classify_residue_form(nbar, type);
    if (cm != cn)
        throw NotCongruent(std::string("residue forms are inequivalent (") +
                           (cm.rank != cn.rank ? "rank" : "discriminant class") + " differs)");
    auto [xm, cmat] = canonicalise_residue(mbar, type);
    auto [xn, cmat2] = canonicalise_residue(nbar, type);
    if (!(cmat == cmat2))
        throw std::logic_error("canonical residue forms disagree for equal classifications");
    ResidueMatrix x = xm * xn.inverse();
    if (!(gram_of(mbar, x) == nbar))
        throw std::logic_error("residue congruence witness failed to verify");
    return x;
}

} // namespace dvrforms
