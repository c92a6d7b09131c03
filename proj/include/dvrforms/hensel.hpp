#pragma once

#include "dvrforms/form.hpp"
#include "dvrforms/matrix.hpp"
#include "dvrforms/ring.hpp"

namespace dvrforms {

// Square root of a unit b of the fixed ring R whose residue is a square in
// the fixed residue field: returns s with s^2 = b and s^* = s at the
// working precision. Newton iteration seeded with the canonical residue
// square root. Throws NotASquareResidue.
RingElement hensel_sqrt(const RingElement& b);

// c with c^* c = b for a unit b of R. For the trivial and ramified
// instances the residue of b must be a square in F_p (NoResidueSolution
// otherwise); for unramified instances the norm is onto and every unit
// target is admissible.
RingElement solve_norm_equation(const RingElement& b);

// w = c*u in A*u with h(w, w) = b, given h(u, u) = b mod r and b a unit
// with b^* = epsilon*b. The correction c solves the norm equation for
// h(u,u)^{-1} b in 1 + m.
RingVector rescale_vector(const RingVector& u, const RingElement& b, const GramForm& h);

// Solves alpha t^* t + beta t - t^* beta^* + gamma = 0 over a ring whose
// involution fixes the residue field (gamma skew implies gamma in r).
// Requires alpha^* = -alpha, gamma^* = -gamma, beta a unit. The iteration
//   gamma_{i+1} = -alpha gamma_i^2 / (4 beta_i^* beta_i)
//   beta_{i+1}  = beta_i + alpha gamma_i / (2 beta_i^*)
// accumulates t = -1/2 sum gamma_i / beta_i and stops once gamma has
// valuation >= the working precision.
RingElement solve_skew_quadratic(const RingElement& alpha, const RingElement& beta,
                                 const RingElement& gamma);

// Symplectic pair spanning A*u + A*v for a skew hermitian form with
// h(u, v) a unit, over an instance whose involution is trivial on the
// residue field. Throws NotAUnitPairing.
std::pair<RingVector, RingVector> make_symplectic_pair(const RingVector& u, const RingVector& v,
                                                       const GramForm& h);

} // namespace dvrforms
