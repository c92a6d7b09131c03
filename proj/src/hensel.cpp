#include "dvrforms/hensel.hpp"

namespace dvrforms {

RingElement hensel_sqrt(const RingElement& b) {
    const RingPtr& ring = b.ring();
    Valuation v = b.valuation();
    if (!v.is_finite() || v.value != 0) throw NotAUnit("hensel_sqrt: operand must be a unit");
    if (!b.is_symmetric()) throw TypeMismatch("hensel_sqrt: operand must satisfy b^* = b");
    ResidueElement r0 = residue_of(b);
    if (!r0.in_prime_field())
        throw NotASquareResidue("hensel_sqrt: residue lies outside the fixed residue field");
    if (square_class(r0) != SquareClass::square)
        throw NotASquareResidue("hensel_sqrt: residue is not a square");

    RingElement s = lift(sqrt_residue(r0));
    RingElement half = ring->from_int(2).invert();
    const int n = ring->precision();
    // Newton: s <- (s + b/s)/2, quadratically convergent from a residue root.
    for (int iter = 0; iter < n + 4; ++iter) {
        RingElement resid = s * s - b;
        if (resid.payload_zero()) break;
        s = (s + b * s.invert()) * half;
    }
    if (!(s * s - b).payload_zero())
        throw std::logic_error("hensel_sqrt failed to converge at the working precision");
    return s;
}

RingElement solve_norm_equation(const RingElement& b) {
    const RingPtr& ring = b.ring();
    Valuation v = b.valuation();
    if (!v.is_finite() || v.value != 0)
        throw NotAUnit("solve_norm_equation: target must be a unit of R");
    if (!b.is_symmetric()) throw TypeMismatch("solve_norm_equation: target must satisfy b^* = b");

    if (ring->involution_trivial()) {
        // c^* c = c^2
        ResidueElement r0 = residue_of(b);
        if (square_class(r0) != SquareClass::square)
            throw NoResidueSolution("residue equation c^2 = b has no solution mod r");
        return hensel_sqrt(b);
    }

    // lift a residue solution of a^* a = b mod r, then correct inside 1 + m
    RingElement a;
    if (ring->unramified()) {
        a = lift(solve_norm(residue_of(b)));
    } else {
        ResidueElement r0 = residue_of(b);
        if (square_class(r0) != SquareClass::square)
            throw NoResidueSolution("residue equation a^2 = b has no solution mod r");
        a = lift(sqrt_residue(r0));
    }
    RingElement ratio = b * (a.involute() * a).invert(); // in 1 + m, fixed by *
    RingElement delta = hensel_sqrt(ratio);
    return a * delta;
}

RingVector rescale_vector(const RingVector& u, const RingElement& b, const GramForm& h) {
    Valuation v = b.valuation();
    if (!v.is_finite() || v.value != 0) throw NotAUnit("rescale_vector: target must be a unit");
    RingElement target_conj = b.involute();
    RingElement eps_b = h.epsilon() == 1 ? b : -b;
    if (!target_conj.payload_equal(eps_b))
        throw TypeMismatch("rescale_vector: target must satisfy b^* = epsilon b");
    RingElement huu = h.pairing(u, u);
    // h(u,u)^{-1} b lies in 1 + m under the contract, so the norm equation
    // is always solvable; a violated precondition propagates
    // NoResidueSolution from below.
    RingElement c = solve_norm_equation(huu.invert() * b);
    return vector_scale(c, u);
}

RingElement solve_skew_quadratic(const RingElement& alpha, const RingElement& beta,
                                 const RingElement& gamma) {
    const RingPtr& ring = alpha.ring();
    if (ring->unramified())
        throw WrongInstance("solve_skew_quadratic requires a residue-trivial involution");
    if (!alpha.is_skew() || !gamma.is_skew())
        throw TypeMismatch("solve_skew_quadratic: alpha and gamma must be skew");
    Valuation vb = beta.valuation();
    if (!vb.is_finite() || vb.value != 0)
        throw NotAUnit("solve_skew_quadratic: beta must be a unit");

    const int n = ring->precision();
    RingElement t = ring->zero();
    RingElement g = gamma;
    RingElement bet = beta;
    RingElement half = ring->from_int(2).invert();
    RingElement quarter = half * half;
    for (int iter = 0; iter < n + 2; ++iter) {
        if (g.is_exact_zero() || g.payload_zero()) break;
        // t accumulates -1/2 gamma_i / beta_i
        t = t - half * g * bet.invert();
        RingElement bconj = bet.involute();
        RingElement next_g = -(alpha * g * g) * (quarter * (bconj * bet).invert());
        RingElement next_b = bet + alpha * g * (half * bconj.invert());
        g = next_g;
        bet = next_b;
    }
    if (!g.payload_zero() && !g.is_exact_zero())
        throw std::logic_error("solve_skew_quadratic failed to converge");
    // residual must vanish at the working precision
    RingElement resid = alpha * t.involute() * t + beta * t - t.involute() * beta.involute() + gamma;
    if (!resid.payload_zero())
        throw std::logic_error("solve_skew_quadratic: residual nonzero at precision");
    return t;
}

std::pair<RingVector, RingVector> make_symplectic_pair(const RingVector& u, const RingVector& v,
                                                       const GramForm& h) {
    const RingPtr& ring = h.ring();
    if (ring->unramified())
        throw WrongInstance("make_symplectic_pair requires a residue-trivial involution");
    if (h.epsilon() != -1) throw TypeMismatch("make_symplectic_pair: form must be skew hermitian");
    RingElement huv = h.pairing(u, v);
    Valuation val = huv.valuation();
    if (!val.is_finite() || val.value != 0)
        throw NotAUnitPairing("make_symplectic_pair: h(u,v) is not a unit");

    // normalise so that h(u, v) = 1
    RingVector vn = vector_scale(huv.invert(), v);

    RingElement hvv = h.pairing(vn, vn);
    RingElement huu = h.pairing(u, u);
    if (ring->involution_trivial()) {
        // skew symmetric: self-pairings vanish identically
        hvv = ring->zero();
        huu = ring->zero();
    }
    // b^* b h(v,v) + (b - b^*) + h(u,u) = 0, the shape of the skew
    // quadratic equation with alpha = h(v,v), beta = 1, gamma = h(u,u)
    RingElement b = solve_skew_quadratic(hvv, ring->one(), huu);
    RingVector u1 = vector_add(u, vector_scale(b, vn));

    RingElement hu1v = h.pairing(u1, vn);
    RingElement half = ring->from_int(2).invert();
    RingElement inner = hu1v.involute().invert();
    RingVector v1 = vector_add(vn, vector_scale(half * hvv * inner, u1));
    v1 = vector_scale(hu1v.invert(), v1);

    // Gram must be [[0, 1], [-1, 0]] at the working precision
    if (!h.pairing(u1, u1).payload_zero() || !h.pairing(v1, v1).payload_zero() ||
        !h.pairing(u1, v1).payload_equal(ring->one()))
        throw std::logic_error("make_symplectic_pair: constructed pair failed verification");
    return {u1, v1};
}

} // namespace dvrforms
