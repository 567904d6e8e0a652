#pragma once

#include "idforge/algebra.hpp"
#include "idforge/identity.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idforge {

// An unordered pair {i, j} of vertices, stored with i < j.
using VertexPair = std::pair<int, int>;

// Parameters of the finite statement: an identity of size r, a vertex set
// [kappa], levels 1..lambda, and per-level color counts g(L) >= 1 and term
// arities f(L) <= 4.  The headline statement ties kappa and lambda together;
// they are kept independent here so levels can be dropped in monotonicity
// experiments.
struct StatementParams {
    Identity identity;
    int kappa = 0;
    int lambda = 0;
    std::vector<int> g; // g[L-1], level L = 1..lambda
    std::vector<int> f; // f[L-1]

    // Throws std::invalid_argument on structural violations (sizes, ranges)
    // and ResourceError when some f(L) exceeds the complete-term-set bound.
    void validate() const;
    int g_at(int L) const { return g[static_cast<std::size_t>(L - 1)]; }
    int f_at(int L) const { return f[static_cast<std::size_t>(L - 1)]; }
    // All pairs of [kappa] in lexicographic order.
    std::vector<VertexPair> pairs() const;
};

// Data at one (pair, level) slot: a generator tuple of length f(L) and g(L)
// truth-table indices into the complete term set of arity f(L).
struct WitnessEntry {
    std::vector<GeneratorId> gens;
    std::vector<std::uint64_t> terms;
};

// A full candidate family: one entry per (pair of [kappa], level in
// 1..lambda).  Colors m = 1..g(L) name entry.terms[m-1].
struct Witness {
    std::map<std::pair<VertexPair, int>, WitnessEntry> entries;

    const WitnessEntry* find(VertexPair w, int L) const;
};

// One agreement check between two levels of the same pair: the measure of
// union over colors of (level-N cell intersect level-L cell) against the
// threshold 1 - 1/2^N.
struct C4Instance {
    VertexPair w;
    int N = 0, L = 0;
    DyadicMeasure value;
    DyadicMeasure threshold;
    bool pass = false;
};

// One realization-probability check: the measure of the union, over colorings
// of the pairs of P that realize the identity, of the corresponding cell
// intersections, which must be strictly below 1/L.
struct C5Instance {
    std::vector<int> P;
    int L = 0;
    DyadicMeasure value;
    bool pass = false; // value < 1/L
};

struct VerificationReport {
    bool structure_ok = false;            // tuple lengths and term indices
    std::vector<std::string> structural_issues;
    std::vector<std::string> partition_failures; // "(w, L)" slots that are not partitions
    std::vector<C4Instance> c4;           // every (w, N <= L) instance
    std::vector<C5Instance> c5;           // every (P, L) instance

    bool partitions_ok() const { return partition_failures.empty(); }
    bool c4_ok() const;
    bool c5_ok() const;
    bool passed() const;
    // Human-readable description of the first failing item; empty when passed.
    std::string first_failure() const;
};

// Checks the full condition list with exact arithmetic: tuple lengths and
// term-index ranges, per-slot partition sequences, cross-level agreement
// measures >= 1 - 1/2^N, and per-(P, level) realizing-union measures < 1/L
// (strict).  Structural violations are reported in the result, not thrown.
VerificationReport verify_witness(const StatementParams& p, const Witness& w);

// The evaluated color cells <cell_1 .. cell_{g(L)}> of a pair at a level.
// Throws std::invalid_argument when the entry is missing or malformed.
std::vector<AlgebraElement> witness_cells(const StatementParams& p, const Witness& w,
                                          VertexPair pair, int L);

// Measure of the agreement region of two cell lists: the union over common
// positions m of cellsN[m] & cellsL[m].  Positions present on one side only
// contribute nothing.
DyadicMeasure c4_union_measure(const std::vector<AlgebraElement>& cellsN,
                               const std::vector<AlgebraElement>& cellsL);

// Exact measure of the union over colorings c of the pairs of P (colors
// 1..g(L)) that realize p.identity, of the intersections over pairs z of the
// c(z)-th cell of z at level L.  P must be a sorted r-subset of [kappa].
DyadicMeasure c5_union_measure(const StatementParams& p, const Witness& w,
                               const std::vector<int>& P, int L);

// Flags over all colorings of the pairs of an id.size()-vertex set into
// colors 1..g, telling which realize the identity.  Colorings are indexed as
// base-g counters: pair e (in lexicographic pair order) gets color
// 1 + (index / g^e) % g.
std::vector<char> realizing_colorings(const Identity& id, int g);

// Measure of the union, over the flagged colorings, of the intersections of
// the picked cells: pairCells[e][m-1] is the m-th color cell of the e-th pair.
DyadicMeasure realizing_union_measure(const std::vector<std::vector<AlgebraElement>>& pairCells,
                                      const std::vector<char>& realizing, int g);

// Exhaustive search for a witness using at most generatorBudget distinct
// generators, exploring slots level by level and pruning with the partition,
// agreement, and realization checks as soon as they are decidable.  Generator
// names are canonicalized by first use, which loses nothing since every check
// is invariant under injective renaming.  Returns the first witness in the
// slot-major (term indices, then generator tuple) order, or nothing when the
// whole space fails.  Guarded to kappa <= 3, lambda <= 3, f <= 2, g <= 2,
// budget <= 4; beyond that the space is astronomically large and the call
// refuses with ResourceError.
std::optional<Witness> search_witness(const StatementParams& p, int generatorBudget);

} // namespace idforge
