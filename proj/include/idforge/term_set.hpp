#pragma once

#include "idforge/term.hpp"

#include <cstdint>
#include <functional>

namespace idforge {

// Full disjunctive normal form of a predicate over x1..x_arity: one conjunct
// of literals per satisfying assignment, joined left to right in increasing
// assignment order.  The empty predicate yields the constant 0.
Term full_dnf(int arity, const std::function<bool(std::uint32_t)>& value);

// The complete list of boolean functions of a fixed arity, indexed by truth
// table: bit a of an index is the function's value on assignment a.  Size is
// 2^2^arity, so arities above 4 are refused.
class CompleteTermSet {
public:
    explicit CompleteTermSet(int arity); // 0..4

    int arity() const { return arity_; }
    std::uint64_t size() const { return std::uint64_t{1} << (1u << arity_); }

    // Canonical representative (full DNF) of the function with this index.
    Term term(std::uint64_t index) const;

    // The function's value on an assignment, straight off the index.
    bool eval_index(std::uint64_t index, std::uint32_t assignment) const;

    // Truth-table index of an arbitrary term of compatible arity.
    std::uint64_t index_of(const Term& t) const;

private:
    int arity_;
};

} // namespace idforge
