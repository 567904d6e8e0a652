#pragma once

#include "idforge/dyadic.hpp"
#include "idforge/term.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace idforge {

// Index of a free generator of the measure algebra.
struct GeneratorId {
    std::uint32_t value = 0;
    auto operator<=>(const GeneratorId&) const = default;
};

// Element of the boolean algebra freely generated by independent fair-coin
// generators, represented exactly: a sorted support of generators plus the set
// of atoms over that support (bit j of an atom index is the value of
// support()[j]).  Extending the support never changes the element's measure
// or its identity as a set.  Values are immutable; operations are pure.
class AlgebraElement {
public:
    AlgebraElement(); // zero over empty support

    static AlgebraElement zero() { return {}; }
    static AlgebraElement one();
    static AlgebraElement generator(GeneratorId g);
    // Build from an explicit atom predicate over the given (deduplicated)
    // support: keep(a) decides atom a.
    template <typename Pred>
    static AlgebraElement from_atoms(std::vector<GeneratorId> support, Pred keep);

    const std::vector<GeneratorId>& support() const { return support_; }
    int support_size() const { return static_cast<int>(support_.size()); }
    std::uint64_t atom_space() const { return std::uint64_t{1} << support_.size(); }
    bool atom(std::uint64_t index) const;
    std::uint64_t atom_count() const;

    AlgebraElement operator~() const;
    AlgebraElement operator&(const AlgebraElement& rhs) const;
    AlgebraElement operator|(const AlgebraElement& rhs) const;
    AlgebraElement operator^(const AlgebraElement& rhs) const; // symmetric difference
    AlgebraElement minus(const AlgebraElement& rhs) const;

    bool is_empty() const;
    bool is_full() const;
    bool subset_of(const AlgebraElement& rhs) const;

    // The same element over a support extended by the given generators.
    AlgebraElement with_support(const std::vector<GeneratorId>& gens) const;
    // Drops generators the element does not depend on.
    AlgebraElement normalized() const;
    // Set equality (insensitive to support padding).
    bool operator==(const AlgebraElement& rhs) const;
    bool operator!=(const AlgebraElement& rhs) const { return !(*this == rhs); }

    std::string str() const; // "support=[g0,g1,...]; atoms=0x..."

private:
    std::vector<GeneratorId> support_; // sorted, unique
    std::vector<std::uint64_t> atoms_; // 2^k bits in 64-bit words

    static std::vector<std::uint64_t> blank(std::size_t supportSize);
    void set_atom(std::uint64_t index, bool value);
};

// Substitutes gens[i-1] for x_i.  Repeated generators identify their
// variables; the tuple may be longer than the term's arity (extra generators
// pad the support), but never shorter.
AlgebraElement eval(const Term& term, const std::vector<GeneratorId>& gens);

// |atoms| / 2^|support|, reduced.
DyadicMeasure measure(const AlgebraElement& e);

// Pairwise disjoint with union equal to the whole algebra.  (In this exact
// finite model, measure zero coincides with emptiness and measure one with
// fullness.)
bool is_partition_sequence(const std::vector<AlgebraElement>& cells);
bool is_partition_sequence(const std::vector<Term>& terms,
                           const std::vector<std::vector<GeneratorId>>& gens);

// Peels overlaps off a cell list: entry m becomes sigma_m minus all earlier
// sigmas, and a final complement cell makes the result a partition sequence of
// length |sigma| + 1 with every output cell contained in its input cell.  All
// output entries share the union tuple of the input tuples.
std::vector<std::pair<Term, std::vector<GeneratorId>>>
disjointify(const std::vector<std::pair<Term, std::vector<GeneratorId>>>& sigma);

struct Approximation {
    Term term;
    std::vector<GeneratorId> gens;
    DyadicMeasure delta; // mu(term(gens) ^ target)
};

// Best approximation of `target` by a term over at most `budget` generators
// (chosen from target's support), minimizing the symmetric-difference
// measure.  Ties prefer the smaller canonical term (truth-table index), then
// the lexicographically smaller generator tuple.
Approximation approximate(const AlgebraElement& target, int budget);

template <typename Pred>
AlgebraElement AlgebraElement::from_atoms(std::vector<GeneratorId> support, Pred keep) {
    AlgebraElement e;
    e.support_ = std::move(support);
    e.atoms_ = blank(e.support_.size());
    for (std::uint64_t a = 0; a < e.atom_space(); ++a)
        if (keep(a))
            e.set_atom(a, true);
    return e;
}

} // namespace idforge
