#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dvrforms/errors.hpp"

namespace dvrforms {

using Int = boost::multiprecision::cpp_int;

// The six supported complete discrete valuation rings with involution.
// All have odd residue characteristic p, so 2 is a unit.
//
//   series_trivial     A = F_p[[y]],              a* = a
//   series_ramified    A = F_p[[y]],              y* = -y
//   series_unramified  A = F_{p^2}[[x]],          coefficientwise t* = -t,
//                      F_{p^2} = F_p[t]/(t^2 - nu), uniformiser y = t*x
//   padic_trivial      A = Z_p (stored mod p^K),  a* = a, y = p
//   padic_ramified     A = Z_p[y]/(y^2 - p),      y* = -y
//   padic_unramified   A = Z_p[t]/(t^2 - nu),     t* = -t, uniformiser y = t*p
//
// Every element is stored truncated at the working precision: known modulo
// y^{N_v}, with N_v counted in powers of the uniformiser y (for
// padic_unramified the count is in powers of p, and y/p = t is a unit).
enum class RingKind {
    series_trivial,
    series_ramified,
    series_unramified,
    padic_trivial,
    padic_ramified,
    padic_unramified,
};

enum class InvolutionClass {
    trivial,            // a* = a
    ramified_nontrivial,// * nontrivial, identity on the residue field
    unramified,         // * induces the Frobenius on F_{p^2}
};

const char* ring_kind_name(RingKind k);
bool parse_ring_kind(const std::string& s, RingKind& out);

class Ring;
class RingElement;
using RingPtr = std::shared_ptr<const Ring>;

// Result of a valuation query. Elements that vanish at the working
// precision without being exactly zero only admit the lower bound
// `at_least`.
struct Valuation {
    enum class Kind { finite, at_least, infinite };
    Kind kind = Kind::infinite;
    int value = 0; // the valuation if finite, the bound if at_least

    bool is_finite() const { return kind == Kind::finite; }
    bool is_infinite() const { return kind == Kind::infinite; }
    // True when the valuation is certified to be >= k.
    bool at_least_certified(int k) const {
        if (kind == Kind::finite) return value >= k;
        if (kind == Kind::at_least) return value >= k;
        return true;
    }
    static Valuation finite(int v) { return {Kind::finite, v}; }
    static Valuation at_least_bound(int v) { return {Kind::at_least, v}; }
    static Valuation infinite_val() { return {Kind::infinite, 0}; }
};

// Immutable ring descriptor. Create through Ring::make; share by RingPtr.
class Ring : public std::enable_shared_from_this<Ring> {
public:
    // p must be an odd prime < 2^15; precision >= 2 (for padic_ramified an
    // odd precision is rounded up so that N_v = 2K).
    static RingPtr make(RingKind kind, std::int64_t p, int precision);

    RingKind kind() const { return kind_; }
    std::int64_t p() const { return p_; }
    // The least quadratic non-residue modulo p.
    std::int64_t nu() const { return nu_; }
    int precision() const { return precision_; }
    // K with p^K the stored modulus (padic kinds; equals precision for
    // series kinds, where it is unused).
    int p_power() const { return kpow_; }
    const Int& p_to_k() const { return pk_; }
    // (p^K - 1)/2: the symmetric-range bound used by the exactness flag.
    const Int& balanced_bound() const { return half_; }

    InvolutionClass involution_class() const;
    bool is_series() const;
    bool is_padic() const { return !is_series(); }
    bool involution_trivial() const { return involution_class() == InvolutionClass::trivial; }
    bool unramified() const { return involution_class() == InvolutionClass::unramified; }
    // Ramified in the residue-field sense: the induced involution is
    // trivial. Includes the trivial involution.
    bool residue_involution_trivial() const { return !unramified(); }

    bool same_ring(const Ring& other) const {
        return kind_ == other.kind_ && p_ == other.p_ && precision_ == other.precision_;
    }

    // A copy of this descriptor at a different working precision.
    RingPtr with_precision(int precision) const;

    // --- element constructors ---
    RingElement zero() const;             // the exact zero
    RingElement one() const;
    RingElement from_int(std::int64_t v) const;
    RingElement from_integer(const Int& v) const;
    RingElement uniformiser() const;      // y
    RingElement uniformiser_power(int k) const; // y^k, k >= 0
    RingElement nu_element() const;       // the constant nu
    // The distinguished skew unit b (unramified kinds only): b = t.
    RingElement skew_unit() const;
    // Series kinds with prime residue field: sum c_k y^k.
    RingElement from_series(const std::vector<std::int64_t>& coeffs) const;
    // series_unramified: sum (a_k + b_k t) x^k.
    RingElement from_series_pairs(const std::vector<std::pair<std::int64_t, std::int64_t>>& coeffs) const;
    // padic_ramified: a + b*sqrt(p); padic_unramified: a + b*t.
    RingElement from_pair(const Int& a, const Int& b) const;

    std::string describe() const;

private:
    Ring(RingKind kind, std::int64_t p, std::int64_t nu, int precision);

    RingKind kind_;
    std::int64_t p_;
    std::int64_t nu_;
    int precision_; // N_v
    int kpow_;      // K (padic kinds)
    Int pk_;        // p^K
    Int half_;      // (p^K - 1)/2, the balanced-lift bound

    friend class RingElement;
};

// An exact element of the chosen ring, truncated at the working precision.
//
// The `exact` flag records that the stored payload *is* the element, not
// just its class modulo y^{N_v}: a finitely supported coefficient vector
// for the series kinds, a balanced (symmetric-range) integer lift for the
// padic kinds. It is what makes the exact zero distinguishable from an
// element that merely vanishes at precision.
class RingElement {
public:
    RingElement() = default;

    const RingPtr& ring() const { return ring_; }
    bool is_exact() const { return exact_; }
    bool is_exact_zero() const { return exact_ && payload_zero(); }
    bool payload_zero() const;

    // Algebra. Operands must share a descriptor.
    friend RingElement operator+(const RingElement& x, const RingElement& y);
    friend RingElement operator-(const RingElement& x, const RingElement& y);
    friend RingElement operator*(const RingElement& x, const RingElement& y);
    RingElement operator-() const;

    RingElement involute() const;
    Valuation valuation() const;
    // Multiplicative inverse; the operand must be a unit (valuation 0).
    RingElement invert() const;
    // z with y^k * z = x; requires certified valuation >= k.
    RingElement divide_by_uniformiser(int k) const;
    // x * y^k.
    RingElement times_uniformiser(int k) const;

    // (a + a*)/2 and (a - a*)/2: the symmetric/skew split of A = R + S.
    RingElement symmetric_part() const;
    RingElement skew_part() const;
    bool is_symmetric() const;  // a* == a (payload)
    bool is_skew() const;       // a* == -a (payload)

    // Payload equality at the working precision (ignores exactness flags).
    bool payload_equal(const RingElement& other) const;

    // Re-embed into `target`, which must be the same instance at another
    // precision. Raising keeps exact elements exact; lowering truncates.
    RingElement change_ring(const RingPtr& target) const;

    std::string to_string() const;

    // --- raw payload access (used by the residue and io layers) ---
    std::int64_t series_coeff_a(int i) const { return i < (int)ca_.size() ? ca_[i] : 0; }
    std::int64_t series_coeff_b(int i) const { return i < (int)cb_.size() ? cb_[i] : 0; }
    const Int& padic_a() const { return pa_; }
    const Int& padic_b() const { return pb_; }

private:
    explicit RingElement(RingPtr ring) : ring_(std::move(ring)) {}

    void reduce();
    int series_degree() const; // highest nonzero index, -1 if payload zero
    static void check_same(const RingElement& x, const RingElement& y);

    RingPtr ring_;
    // series payload: coefficient of y^i (resp. x^i) is ca_[i] + cb_[i] t.
    std::vector<std::int64_t> ca_, cb_;
    // padic payload: pa_ + pb_ * (sqrt(p) or t), reduced into [0, p^K).
    Int pa_ = 0, pb_ = 0;
    bool exact_ = false;

    friend class Ring;
};

} // namespace dvrforms
