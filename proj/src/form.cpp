#include "dvrforms/form.hpp"

#include <sstream>

#include "dvrforms/decompose.hpp"
#include "dvrforms/smith.hpp"

namespace dvrforms {

GramForm unchecked_gram(RingMatrix m, int epsilon) { return GramForm(std::move(m), epsilon); }

GramForm GramForm::validate(const RingMatrix& entries, int epsilon) {
    if (epsilon != 1 && epsilon != -1) throw Error("epsilon must be +1 or -1");
    if (entries.rows() != entries.cols()) throw ShapeMismatch("Gram matrix must be square");
    if (entries.rows() == 0) throw ShapeMismatch("Gram matrix must be nonempty");
    const std::size_t m = entries.rows();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            RingElement expect = entries.at(i, j).involute();
            if (epsilon == -1) expect = -expect;
            if (!entries.at(j, i).payload_equal(expect))
                throw NotEpsilonHermitian(
                    "matrix is not epsilon-hermitian at (" + std::to_string(j) + ", " +
                        std::to_string(i) + "): expected epsilon * entry(" + std::to_string(i) +
                        ", " + std::to_string(j) + ")^*",
                    j, i);
        }
    return GramForm(entries, epsilon);
}

FormType level_type(int level, int epsilon, const Ring& ring) {
    if (level < 0) throw Error("level_type: level must be nonnegative");
    int eff = ring.involution_trivial() ? epsilon : (level % 2 == 0 ? epsilon : -epsilon);
    if (ring.unramified()) return eff == 1 ? FormType::hermitian : FormType::skew_hermitian;
    return eff == 1 ? FormType::symmetric : FormType::alternating;
}

std::string InvariantProfile::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [level, size] : d) {
        if (!first) os << "; ";
        first = false;
        os << "d_" << level << "=" << size;
        FormType t = level_type(level, epsilon, *ring);
        os << " (" << form_type_name(t);
        auto it = level_data.find(level);
        if (it != level_data.end() && it->second.disc != DiscClass::not_applicable)
            os << ", disc=" << disc_class_name(it->second.disc);
        os << ")";
    }
    if (!first) os << "; ";
    os << "d_inf=" << d_inf;
    return os.str();
}

InvariantProfile invariant_profile(const GramForm& form) {
    OMearaDecomposition dec = omeara_decompose(form);

    InvariantProfile profile;
    profile.ring = form.ring();
    profile.epsilon = form.epsilon();
    profile.dimension = form.size();
    profile.d_inf = dec.zero_rank;
    for (const auto& block : dec.blocks) {
        profile.d[block.exponent] = block.unit_block.rows();
        FormType t = level_type(block.exponent, form.epsilon(), *form.ring());
        profile.level_data[block.exponent] =
            classify_residue_form(residue_of_matrix(block.unit_block), t);
    }

    // Independent route: the multiset {exponent i with multiplicity d_i}
    // must equal the Smith invariant-factor valuations.
    SmithForm smith = smith_form(form.matrix());
    std::vector<int> from_blocks;
    for (const auto& block : dec.blocks)
        from_blocks.insert(from_blocks.end(), block.unit_block.rows(), block.exponent);
    if (from_blocks != smith.valuations || profile.d_inf != smith.corank)
        throw std::logic_error(
            "invariant_profile: O'Meara exponents disagree with Smith valuations");
    return profile;
}

std::vector<RingVector> radical_basis(const GramForm& form) {
    OMearaDecomposition dec = omeara_decompose(form);
    std::vector<RingVector> out;
    const std::size_t m = form.size();
    const std::size_t start = m - dec.zero_rank;
    for (std::size_t j = start; j < m; ++j) out.push_back(dec.witness.column(j));
    return out;
}

} // namespace dvrforms
