#pragma once

#include <map>
#include <string>
#include <vector>

#include "dvrforms/form.hpp"
#include "dvrforms/hensel.hpp"
#include "dvrforms/matrix.hpp"
#include "dvrforms/residue.hpp"

namespace dvrforms {

// X'^* source X = target at the working precision, X invertible.
struct Witness {
    RingMatrix x;
    GramForm source;
    GramForm target;

    bool verify() const;
};

// M congruent to block_0 + y^{i_1} block_1 + ... + 0_{zero_rank}, each
// unit block invertible over A, exponents strictly increasing and below
// the working precision.
struct OMearaDecomposition {
    RingPtr ring;
    int epsilon = 1;
    struct Block {
        int exponent;
        RingMatrix unit_block; // invertible; epsilon*(-1)^exponent-hermitian
                               // when * is nontrivial, epsilon-hermitian when trivial
    };
    std::vector<Block> blocks;
    std::size_t zero_rank = 0;
    RingMatrix witness;

    // The right-hand side: direct sum of y^i * block_i and the zero block.
    RingMatrix assembled() const;
    std::size_t size() const;
};

// Lemma-level splitting steps. Vectors are coordinates in the form's basis;
// the returned lists are bases whose Gram matrices are block diagonal.
std::vector<RingVector> split_unit_vector(const GramForm& f, const RingVector& u);
std::vector<RingVector> split_rank_two(const GramForm& f, const RingVector& u, const RingVector& v);

// A vector with unit self-pairing among u, v, u+v after the unit
// normalisation of the pairing; requires a hermitian form or an unramified
// instance (ramified skew forms have no unit lengths).
RingVector find_unit_length(const GramForm& f, const RingVector& u, const RingVector& v);

OMearaDecomposition omeara_decompose(const GramForm& f);

// Lift of an exact residue congruence to a congruence over A (both forms
// invertible unit blocks of the same shape).
Witness lift_residue_congruence(const GramForm& m, const GramForm& n, const ResidueMatrix& xbar);

// Witness to J + J + ... + J for an invertible skew hermitian form over an
// instance whose involution fixes the residue field.
Witness symplectic_basis(const GramForm& f);

struct NormalForm {
    GramForm canonical;
    Witness witness;
    InvariantProfile profile;
};

// The canonical representative of the congruence class, with witness:
//   symmetric levels      diag(1, ..., 1, delta), delta in {1, nu}
//   alternating levels    J + ... + J
//   hermitian levels      identity
//   skew hermitian levels b * identity
// followed by the zero block.
NormalForm normal_form(const GramForm& f);

struct CongruenceVerdict {
    bool congruent = false;
    std::string reason; // first disagreeing level when not congruent
};

CongruenceVerdict decide_congruent(const GramForm& f, const GramForm& g);

// Explicit X with X'^* F X = G; throws NotCongruent.
Witness congruence_witness(const GramForm& f, const GramForm& g);

// Whether a finitely supported level -> size map arises as the d-profile of
// some epsilon-hermitian form over the instance.
bool realisable(const std::map<int, std::size_t>& d, int epsilon, const Ring& ring);

// The canonical form realising a profile (throws Error if not realisable).
GramForm canonical_from_profile(const std::map<int, std::size_t>& d, std::size_t d_inf,
                                int epsilon, const RingPtr& ring);

} // namespace dvrforms
