#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace idforge {

// Immutable boolean term over variables x1, x2, ....  Cheap to copy (nodes are
// shared) and safe to share across threads.
class Term {
public:
    enum class Kind { Const0, Const1, Var, Not, And, Or };

    Term(); // Const0

    static Term constant(bool value);
    static Term var(int index); // 1-based
    static Term negate(Term t);
    static Term conj(Term a, Term b);
    static Term disj(Term a, Term b);

    Kind kind() const;
    int var_index() const;  // Kind::Var only
    Term child(int i) const; // Not: i = 0; And/Or: i = 0, 1

    // Largest variable index mentioned; 0 for constants.
    int arity() const;
    // Evaluate under an assignment: bit i-1 of `assignment` is the value of x_i.
    bool eval_bits(std::uint32_t assignment) const;
    // Round-trippable text in the parse_term grammar.
    std::string str() const;

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> node_;
};

// Grammar (precedence low to high): or := and ('|' and)*; and := unary ('&'
// unary)*; unary := '~' unary | 'xN' | '0' | '1' | '(' or ')'.
// Throws ParseError naming the offending position.
Term parse_term(std::string_view text);

} // namespace idforge
