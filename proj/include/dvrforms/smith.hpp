#pragma once

#include <vector>

#include "dvrforms/form.hpp"
#include "dvrforms/matrix.hpp"

namespace dvrforms {

// P M Q = diag(y^{k_1}, ..., y^{k_r}, 0, ..., 0) with k_1 <= ... <= k_r
// (invariant factors normalised to pure uniformiser powers) and P, Q
// invertible over A.
struct SmithForm {
    std::vector<int> valuations; // ascending
    std::size_t corank = 0;
    RingMatrix p;
    RingMatrix q;
    RingMatrix diagonal;
};

SmithForm smith_form(const RingMatrix& m);

// Thm-7.3 route: on unramified instances *-congruence is decided by the
// invariant factors alone. Throws WrongInstance elsewhere (the norm map of
// the residue extension must be onto).
bool congruent_by_invariant_factors(const GramForm& f, const GramForm& g);

} // namespace dvrforms
