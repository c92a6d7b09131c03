#pragma once

#include <cstdint>
#include <vector>

#include "dvrforms/matrix.hpp"
#include "dvrforms/ring.hpp"

namespace dvrforms {

// Element of the residue field A/r: F_p, or F_{p^2} = F_p[t]/(t^2 - nu)
// for the unramified instances. The induced involution is trivial on F_p
// and t -> -t on F_{p^2}.
struct ResidueElement {
    RingPtr ring;
    std::int64_t a = 0, b = 0; // a + b t, reduced mod p

    bool is_zero() const { return a == 0 && b == 0; }
    bool in_prime_field() const { return b == 0; }
    bool operator==(const ResidueElement& o) const { return a == o.a && b == o.b; }
    bool operator!=(const ResidueElement& o) const { return !(*this == o); }
};

ResidueElement residue_make(const RingPtr& ring, std::int64_t a, std::int64_t b = 0);
ResidueElement residue_add(const ResidueElement& x, const ResidueElement& y);
ResidueElement residue_sub(const ResidueElement& x, const ResidueElement& y);
ResidueElement residue_mul(const ResidueElement& x, const ResidueElement& y);
ResidueElement residue_neg(const ResidueElement& x);
ResidueElement residue_inv(const ResidueElement& x);
ResidueElement residue_conj(const ResidueElement& x);
// x * x^*: the norm onto the fixed field.
ResidueElement residue_norm(const ResidueElement& x);

// Reduction modulo the maximal ideal.
ResidueElement residue_of(const RingElement& x);
// The constant-coefficient section; residue_of(lift(r)) == r.
RingElement lift(const ResidueElement& r);

enum class SquareClass { zero, square, nonsquare };
// Euler-criterion classification of r in F_p (requires b == 0).
SquareClass square_class(const ResidueElement& r);

// Least s in the field with s^2 = r; scans F_p (ascending) or F_{p^2}
// (lexicographic (a, b)). Throws NotASquare.
ResidueElement sqrt_residue(const ResidueElement& r);

// Unramified instances: a with a a^* = c for c in F_p^x (norm surjectivity
// of finite fields). Deterministic lexicographic scan.
ResidueElement solve_norm(const ResidueElement& c);

enum class FormType { symmetric, alternating, hermitian, skew_hermitian };
const char* form_type_name(FormType t);

enum class DiscClass { square, nonsquare, not_applicable };
const char* disc_class_name(DiscClass d);

struct ResidueClassification {
    std::size_t rank = 0;
    DiscClass disc = DiscClass::not_applicable;
    bool operator==(const ResidueClassification& o) const {
        return rank == o.rank && disc == o.disc;
    }
    bool operator!=(const ResidueClassification& o) const { return !(*this == o); }
};

// Square matrix over the residue field.
class ResidueMatrix {
public:
    ResidueMatrix() = default;
    ResidueMatrix(RingPtr ring, std::size_t n);
    static ResidueMatrix identity(const RingPtr& ring, std::size_t n);

    const RingPtr& ring() const { return ring_; }
    std::size_t size() const { return n_; }
    ResidueElement& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const ResidueElement& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    ResidueMatrix operator*(const ResidueMatrix& other) const;
    ResidueMatrix conj_transpose() const;
    ResidueMatrix inverse() const; // throws Degenerate
    bool invertible() const;
    ResidueElement det() const;
    bool operator==(const ResidueMatrix& other) const;

    // Lift entrywise by the constant section.
    RingMatrix lift_matrix() const;

private:
    RingPtr ring_;
    std::size_t n_ = 0;
    std::vector<ResidueElement> e_;
};

ResidueMatrix residue_of_matrix(const RingMatrix& m);

// Complete invariants of nondegenerate forms over the residue field:
//   symmetric over F_p        -> (rank, discriminant square class)
//   alternating over F_p      -> (rank, n/a), rank even
//   (skew-)hermitian over F_{p^2} -> (rank, n/a)
// Throws TypeMismatch if the matrix fails the declared symmetry and
// Degenerate if it is singular.
ResidueClassification classify_residue_form(const ResidueMatrix& mbar, FormType type);

// Xbar invertible with Xbar'^* Mbar Xbar = Nbar, exactly over the residue
// field. Throws NotCongruent when the classifications differ.
ResidueMatrix residue_congruence_witness(const ResidueMatrix& mbar, const ResidueMatrix& nbar,
                                         FormType type);

} // namespace dvrforms
