#pragma once

#include <map>
#include <string>

#include "dvrforms/matrix.hpp"
#include "dvrforms/residue.hpp"
#include "dvrforms/ring.hpp"

namespace dvrforms {

// An epsilon-hermitian matrix over a ring instance: entries(j,i) equals
// epsilon * entries(i,j)^* throughout.
class GramForm {
public:
    // Checks the epsilon-hermitian relation entrywise; reports the first
    // offending position through NotEpsilonHermitian.
    static GramForm validate(const RingMatrix& entries, int epsilon);

    const RingPtr& ring() const { return matrix_.ring(); }
    int epsilon() const { return epsilon_; }
    std::size_t size() const { return matrix_.rows(); }
    const RingMatrix& matrix() const { return matrix_; }
    const RingElement& at(std::size_t i, std::size_t j) const { return matrix_.at(i, j); }

    // h(u, v) = u'^* G v.
    RingElement pairing(const RingVector& u, const RingVector& v) const {
        return pair_with(matrix_, u, v);
    }

    GramForm change_ring(const RingPtr& target) const {
        return GramForm(matrix_.change_ring(target), epsilon_);
    }

private:
    GramForm(RingMatrix m, int epsilon) : matrix_(std::move(m)), epsilon_(epsilon) {}
    RingMatrix matrix_;
    int epsilon_;

    friend GramForm unchecked_gram(RingMatrix m, int epsilon);
};

// Internal: wrap a matrix known to satisfy the relation.
GramForm unchecked_gram(RingMatrix m, int epsilon);

// The type of the induced residue form h_i at level i: h_i is
// epsilon-hermitian when * is trivial and epsilon*(-1)^i-hermitian
// otherwise.
FormType level_type(int level, int epsilon, const Ring& ring);

// The sequence d_i of graded quotient dimensions with, per finite level,
// the residue classification of h_i; d_inf is the corank.
struct InvariantProfile {
    RingPtr ring;
    int epsilon = 1;
    std::size_t dimension = 0;
    std::map<int, std::size_t> d;                      // finite levels with d_i > 0
    std::map<int, ResidueClassification> level_data;   // same keys as d
    std::size_t d_inf = 0;

    std::size_t d_at(int level) const {
        auto it = d.find(level);
        return it == d.end() ? 0 : it->second;
    }
    std::string to_string() const;
};

// Computes the profile through the O'Meara decomposition and cross-checks
// the multiset {i with multiplicity d_i} against the Smith invariant-factor
// valuations; the two routes disagreeing is a hard internal error.
InvariantProfile invariant_profile(const GramForm& form);

// Basis of the exact radical (the span of the y^inf block in the witness
// basis); vectors are coordinates in the input basis.
std::vector<RingVector> radical_basis(const GramForm& form);

} // namespace dvrforms
