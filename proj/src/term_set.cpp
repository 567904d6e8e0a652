#include "idforge/term_set.hpp"

#include "idforge/errors.hpp"

#include <stdexcept>
#include <string>

namespace idforge {

Term full_dnf(int arity, const std::function<bool(std::uint32_t)>& value) {
    if (arity < 0 || arity > 30)
        throw std::invalid_argument("full_dnf: arity out of range");
    Term result = Term::constant(false);
    bool any = false;
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << arity); ++a) {
        if (!value(a))
            continue;
        Term minterm = (a & 1) ? Term::var(1) : Term::negate(Term::var(1));
        if (arity == 0)
            minterm = Term::constant(true);
        for (int i = 2; i <= arity; ++i) {
            Term lit = ((a >> (i - 1)) & 1) ? Term::var(i) : Term::negate(Term::var(i));
            minterm = Term::conj(minterm, lit);
        }
        result = any ? Term::disj(result, minterm) : minterm;
        any = true;
    }
    return result;
}

CompleteTermSet::CompleteTermSet(int arity) : arity_(arity) {
    if (arity < 0)
        throw std::invalid_argument("CompleteTermSet: negative arity");
    if (arity > 4)
        throw ResourceError("CompleteTermSet: arity " + std::to_string(arity) +
                            " has 2^" + std::to_string(1u << arity) +
                            " functions; arities above 4 are not enumerated");
}

Term CompleteTermSet::term(std::uint64_t index) const {
    if (index >= size())
        throw std::out_of_range("CompleteTermSet::term: index " + std::to_string(index) +
                                " out of range for arity " + std::to_string(arity_));
    return full_dnf(arity_, [index](std::uint32_t a) { return (index >> a) & 1; });
}

bool CompleteTermSet::eval_index(std::uint64_t index, std::uint32_t assignment) const {
    if (index >= size())
        throw std::out_of_range("CompleteTermSet::eval_index: index out of range");
    return (index >> (assignment & ((std::uint32_t{1} << arity_) - 1))) & 1;
}

std::uint64_t CompleteTermSet::index_of(const Term& t) const {
    if (t.arity() > arity_)
        throw std::invalid_argument("CompleteTermSet::index_of: term arity exceeds the set's");
    std::uint64_t index = 0;
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << arity_); ++a)
        if (t.eval_bits(a))
            index |= std::uint64_t{1} << a;
    return index;
}

} // namespace idforge
