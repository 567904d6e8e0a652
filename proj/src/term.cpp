#include "idforge/term.hpp"

#include "idforge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace idforge {

struct Term::Node {
    Kind kind;
    int var = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

Term::Term() : node_(std::make_shared<Node>(Node{Kind::Const0, 0, nullptr, nullptr})) {}

Term::Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Term Term::constant(bool value) {
    return Term(std::make_shared<Node>(
        Node{value ? Kind::Const1 : Kind::Const0, 0, nullptr, nullptr}));
}

Term Term::var(int index) {
    if (index < 1)
        throw std::invalid_argument("Term::var: variable indices are 1-based");
    return Term(std::make_shared<Node>(Node{Kind::Var, index, nullptr, nullptr}));
}

Term Term::negate(Term t) {
    return Term(std::make_shared<Node>(Node{Kind::Not, 0, t.node_, nullptr}));
}

Term Term::conj(Term a, Term b) {
    return Term(std::make_shared<Node>(Node{Kind::And, 0, a.node_, b.node_}));
}

Term Term::disj(Term a, Term b) {
    return Term(std::make_shared<Node>(Node{Kind::Or, 0, a.node_, b.node_}));
}

Term::Kind Term::kind() const {
    return node_->kind;
}

int Term::var_index() const {
    return node_->var;
}

Term Term::child(int i) const {
    return Term(i == 0 ? node_->lhs : node_->rhs);
}

int Term::arity() const {
    switch (node_->kind) {
    case Kind::Const0:
    case Kind::Const1:
        return 0;
    case Kind::Var:
        return node_->var;
    case Kind::Not:
        return Term(node_->lhs).arity();
    case Kind::And:
    case Kind::Or:
        return std::max(Term(node_->lhs).arity(), Term(node_->rhs).arity());
    }
    return 0;
}

bool Term::eval_bits(std::uint32_t assignment) const {
    switch (node_->kind) {
    case Kind::Const0:
        return false;
    case Kind::Const1:
        return true;
    case Kind::Var:
        return (assignment >> (node_->var - 1)) & 1u;
    case Kind::Not:
        return !Term(node_->lhs).eval_bits(assignment);
    case Kind::And:
        return Term(node_->lhs).eval_bits(assignment) &&
               Term(node_->rhs).eval_bits(assignment);
    case Kind::Or:
        return Term(node_->lhs).eval_bits(assignment) ||
               Term(node_->rhs).eval_bits(assignment);
    }
    return false;
}

namespace {

// precedence: Or = 1, And = 2, unary/atoms = 3
int precedence(Term::Kind k) {
    switch (k) {
    case Term::Kind::Or:
        return 1;
    case Term::Kind::And:
        return 2;
    default:
        return 3;
    }
}

void print(const Term& t, std::ostringstream& out, int parentPrec) {
    int prec = precedence(t.kind());
    bool parens = prec < parentPrec;
    if (parens)
        out << "(";
    switch (t.kind()) {
    case Term::Kind::Const0:
        out << "0";
        break;
    case Term::Kind::Const1:
        out << "1";
        break;
    case Term::Kind::Var:
        out << "x" << t.var_index();
        break;
    case Term::Kind::Not:
        out << "~";
        print(t.child(0), out, 3);
        break;
    case Term::Kind::And:
        print(t.child(0), out, 2);
        out << " & ";
        print(t.child(1), out, 2);
        break;
    case Term::Kind::Or:
        print(t.child(0), out, 1);
        out << " | ";
        print(t.child(1), out, 1);
        break;
    }
    if (parens)
        out << ")";
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("term: " + what + " at position " + std::to_string(pos));
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Term parse_or() {
        Term t = parse_and();
        while (eat('|'))
            t = Term::disj(t, parse_and());
        return t;
    }

    Term parse_and() {
        Term t = parse_unary();
        while (eat('&'))
            t = Term::conj(t, parse_unary());
        return t;
    }

    Term parse_unary() {
        skip_ws();
        if (eat('~'))
            return Term::negate(parse_unary());
        if (eat('('))  {
            Term t = parse_or();
            if (!eat(')'))
                fail("expected ')'");
            return t;
        }
        if (pos >= text.size())
            fail("unexpected end of input");
        char c = text[pos];
        if (c == '0') {
            ++pos;
            return Term::constant(false);
        }
        if (c == '1') {
            ++pos;
            return Term::constant(true);
        }
        if (c == 'x') {
            ++pos;
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (pos == start)
                fail("expected variable index after 'x'");
            int idx = 0;
            try {
                idx = std::stoi(std::string(text.substr(start, pos - start)));
            } catch (const std::exception&) {
                fail("variable index out of range");
            }
            if (idx < 1)
                fail("variable indices start at 1");
            return Term::var(idx);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

std::string Term::str() const {
    std::ostringstream out;
    print(*this, out, 0);
    return out.str();
}

Term parse_term(std::string_view text) {
    Parser p{text};
    Term t = p.parse_or();
    p.skip_ws();
    if (p.pos != text.size())
        p.fail("trailing input");
    return t;
}

} // namespace idforge
