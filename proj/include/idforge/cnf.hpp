#pragma once

#include "idforge/statement.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace idforge {

// Propositional variable q(w, L, m, i): "the m-th color of pair w at level L
// uses the term with truth-table index i".
struct QKey {
    VertexPair w;
    int L = 0;
    int m = 0;          // 1..g(L)
    std::uint64_t i = 0; // 0..2^2^f(L)-1
    auto operator<=>(const QKey&) const = default;
};

// One variable of the relevant pool: position pos of the generator tuple slot
// (w, L) would use under term-tuple choice t.  Tuple choices are indexed
// base-2^2^f(L): digit m-1 of t is the truth-table index of color m's term.
struct PoolKey {
    VertexPair w;
    int L = 0;
    std::uint64_t t = 0;
    int pos = 0; // 0..f(L)-1
    auto operator<=>(const PoolKey&) const = default;
};

// A propositional rendering of the statement for fixed parameters.  DIMACS
// variables 1..q_count() are the q-variables in QKey order; the remaining
// C(pool, 2) variables are p(a, b) for pool-index pairs a < b in pair order,
// asserting that pool variables a and b denote the same generator.
//
// The clause set is the base theory (exactly-one per q-group, transitivity of
// p) plus one blocking clause per (constraint, term choice, partition of the
// constraint's pool variables) whose exact measure check fails.  The
// generator budget is recorded for provenance but deliberately not encoded:
// the clauses express the statement with unboundedly many generators, and a
// decoded witness never needs more than the sum of f(L) over all slots.
class CnfInstance {
public:
    StatementParams params;
    int generatorBudget = 0;
    std::vector<QKey> qKeys;      // DIMACS var = position + 1
    std::vector<PoolKey> poolKeys; // pool index = position
    std::vector<std::vector<int>> clauses;

    int q_count() const { return static_cast<int>(qKeys.size()); }
    int pool_count() const { return static_cast<int>(poolKeys.size()); }
    int var_count() const;

    int q_var(VertexPair w, int L, int m, std::uint64_t i) const; // DIMACS index
    int pool_index(const PoolKey& key) const;
    int p_var(int poolA, int poolB) const; // DIMACS index, poolA != poolB

    // Rebuilds the lookup tables after filling qKeys/poolKeys directly.
    void reindex();

private:
    std::map<QKey, int> qIndex_;
    std::map<PoolKey, int> poolIndex_;
};

// Compiles the parameters into CNF.  Shares the search guards (kappa,
// lambda <= 3; f, g <= 2 per level) and additionally refuses instances whose
// pool exceeds 96 variables or whose constraint enumeration exceeds a fixed
// evaluation cap, since transitivity clauses grow cubically in the pool.
CnfInstance encode(const StatementParams& p, int generatorBudget);

// Standard DIMACS with a legend: "c meta {...}" carries the parameters,
// "c q w=i,j L=.. m=.. i=.. var=N" and "c x idx=K w=i,j L=.. t=.. pos=.."
// name the variables, "c p w=a,b var=N" names the pool-pair variables.
std::string export_dimacs(const CnfInstance& c);

// Reads text produced by export_dimacs (meta line required); the variable
// layout is regenerated from the parameters and checked against the header
// counts.  Throws ParseError on malformed input.
CnfInstance parse_dimacs(const std::string& text);

// Extracts literals from a solver model file: integer tokens, ignoring zero
// terminators, comment lines ('c'), status lines ('s'), and 'v' prefixes.
std::vector<int> parse_model_literals(const std::string& text);

// Interprets a satisfying model: checks every clause, reads the chosen term
// indices off the q-variables, unions pool variables related by p, and
// assigns one fresh generator per class in discovery order.  Throws
// std::invalid_argument when the model leaves a clause unsatisfied or breaks
// the exactly-one structure.  The result passes verify_witness whenever the
// model satisfies the instance.
Witness decode(const std::vector<int>& modelLiterals, const CnfInstance& c);

} // namespace idforge
