#include "idforge/statement.hpp"

#include "idforge/errors.hpp"
#include "idforge/term_set.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace idforge {

namespace {

std::string pair_str(VertexPair w) {
    return "{" + std::to_string(w.first) + "," + std::to_string(w.second) + "}";
}

std::string slot_str(VertexPair w, int L) {
    return "(w=" + pair_str(w) + ", L=" + std::to_string(L) + ")";
}

} // namespace

std::vector<char> realizing_colorings(const Identity& id, int g) {
    if (g < 1)
        throw std::invalid_argument("realizing_colorings: g must be >= 1");
    const int r = id.size();
    const int pairCount = pair_count(r);
    std::uint64_t total = 1;
    for (int e = 0; e < pairCount; ++e) {
        total *= static_cast<std::uint64_t>(g);
        if (total > (std::uint64_t{1} << 20))
            throw ResourceError("realizing_colorings: " + std::to_string(g) + "^" +
                                std::to_string(pairCount) +
                                " colorings exceed the enumeration limit");
    }
    std::vector<char> table(total, 0);
    Coloring c;
    c.n = r;
    c.colors.assign(static_cast<std::size_t>(pairCount), 0);
    for (std::uint64_t t = 0; t < total; ++t) {
        std::uint64_t rest = t;
        for (int e = 0; e < pairCount; ++e) {
            c.colors[static_cast<std::size_t>(e)] =
                1 + static_cast<unsigned>(rest % static_cast<std::uint64_t>(g));
            rest /= static_cast<std::uint64_t>(g);
        }
        table[t] = realizes_identity(c, id) ? 1 : 0;
    }
    return table;
}

DyadicMeasure realizing_union_measure(const std::vector<std::vector<AlgebraElement>>& pairCells,
                                      const std::vector<char>& realizing, int g) {
    AlgebraElement total = AlgebraElement::zero();
    for (std::uint64_t t = 0; t < realizing.size(); ++t) {
        if (!realizing[t])
            continue;
        AlgebraElement part = AlgebraElement::one();
        std::uint64_t rest = t;
        for (std::size_t e = 0; e < pairCells.size() && !part.is_empty(); ++e) {
            auto m = static_cast<std::size_t>(rest % static_cast<std::uint64_t>(g));
            rest /= static_cast<std::uint64_t>(g);
            part = part & pairCells[e][m];
        }
        total = total | part;
    }
    return measure(total);
}

void StatementParams::validate() const {
    if (identity.size() < 2)
        throw std::invalid_argument("StatementParams: identity must have size >= 2");
    if (kappa < 1)
        throw std::invalid_argument("StatementParams: kappa must be >= 1");
    if (lambda < 1)
        throw std::invalid_argument("StatementParams: lambda must be >= 1");
    if (static_cast<int>(g.size()) != lambda || static_cast<int>(f.size()) != lambda)
        throw std::invalid_argument("StatementParams: g and f must assign every level 1..lambda");
    for (int L = 1; L <= lambda; ++L) {
        if (g_at(L) < 1)
            throw std::invalid_argument("StatementParams: g(" + std::to_string(L) +
                                        ") must be >= 1");
        if (f_at(L) < 0)
            throw std::invalid_argument("StatementParams: f(" + std::to_string(L) +
                                        ") must be >= 0");
        if (f_at(L) > 4)
            throw ResourceError("StatementParams: f(" + std::to_string(L) +
                                ") exceeds the complete-term-set arity bound 4");
    }
}

std::vector<VertexPair> StatementParams::pairs() const {
    std::vector<VertexPair> out;
    for (int i = 0; i < kappa; ++i)
        for (int j = i + 1; j < kappa; ++j)
            out.emplace_back(i, j);
    return out;
}

const WitnessEntry* Witness::find(VertexPair w, int L) const {
    auto it = entries.find({w, L});
    return it == entries.end() ? nullptr : &it->second;
}

std::vector<AlgebraElement> witness_cells(const StatementParams& p, const Witness& w,
                                          VertexPair pair, int L) {
    const WitnessEntry* entry = w.find(pair, L);
    if (entry == nullptr)
        throw std::invalid_argument("witness_cells: no entry at " + slot_str(pair, L));
    const int arity = p.f_at(L);
    if (static_cast<int>(entry->gens.size()) != arity)
        throw std::invalid_argument("witness_cells: tuple length mismatch at " +
                                    slot_str(pair, L));
    CompleteTermSet set(arity);
    std::vector<AlgebraElement> cells;
    cells.reserve(entry->terms.size());
    for (std::uint64_t index : entry->terms) {
        if (index >= set.size())
            throw std::invalid_argument("witness_cells: term index out of range at " +
                                        slot_str(pair, L));
        cells.push_back(eval(set.term(index), entry->gens));
    }
    return cells;
}

DyadicMeasure c4_union_measure(const std::vector<AlgebraElement>& cellsN,
                               const std::vector<AlgebraElement>& cellsL) {
    AlgebraElement agree = AlgebraElement::zero();
    std::size_t common = std::min(cellsN.size(), cellsL.size());
    for (std::size_t m = 0; m < common; ++m)
        agree = agree | (cellsN[m] & cellsL[m]);
    return measure(agree);
}

DyadicMeasure c5_union_measure(const StatementParams& p, const Witness& w,
                               const std::vector<int>& P, int L) {
    p.validate();
    const int r = p.identity.size();
    if (static_cast<int>(P.size()) != r)
        throw std::invalid_argument("c5_union_measure: P must list exactly " +
                                    std::to_string(r) + " vertices");
    if (!std::is_sorted(P.begin(), P.end()) ||
        std::adjacent_find(P.begin(), P.end()) != P.end() || P.front() < 0 ||
        P.back() >= p.kappa)
        throw std::invalid_argument("c5_union_measure: P must be a sorted subset of the vertex set");
    if (L < 1 || L > p.lambda)
        throw std::invalid_argument("c5_union_measure: level out of range");

    const int g = p.g_at(L);
    // cells of each pair of P at level L, in local pair order
    std::vector<std::vector<AlgebraElement>> cells;
    cells.reserve(static_cast<std::size_t>(pair_count(r)));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            cells.push_back(witness_cells(p, w, {P[static_cast<std::size_t>(i)],
                                                 P[static_cast<std::size_t>(j)]}, L));
    return realizing_union_measure(cells, realizing_colorings(p.identity, g), g);
}

bool VerificationReport::c4_ok() const {
    return std::all_of(c4.begin(), c4.end(), [](const C4Instance& i) { return i.pass; });
}

bool VerificationReport::c5_ok() const {
    return std::all_of(c5.begin(), c5.end(), [](const C5Instance& i) { return i.pass; });
}

bool VerificationReport::passed() const {
    return structure_ok && partitions_ok() && c4_ok() && c5_ok();
}

std::string VerificationReport::first_failure() const {
    if (!structure_ok)
        return structural_issues.empty() ? "structure: unspecified" : structural_issues.front();
    if (!partition_failures.empty())
        return "partition: cells at " + partition_failures.front() +
               " are not a partition sequence";
    for (const C4Instance& i : c4)
        if (!i.pass)
            return "agreement: w=" + pair_str(i.w) + " N=" + std::to_string(i.N) +
                   " L=" + std::to_string(i.L) + " measure " + i.value.str() +
                   " below " + i.threshold.str();
    for (const C5Instance& i : c5) {
        if (i.pass)
            continue;
        std::ostringstream out;
        out << "realization: P={";
        for (std::size_t k = 0; k < i.P.size(); ++k)
            out << (k ? "," : "") << i.P[k];
        out << "} L=" << i.L << " measure " << i.value.str() << " not below 1/" << i.L;
        return out.str();
    }
    return {};
}

VerificationReport verify_witness(const StatementParams& p, const Witness& w) {
    p.validate();
    VerificationReport report;

    // structural conditions: every slot present with the right shapes
    const auto pairList = p.pairs();
    for (VertexPair pr : pairList) {
        for (int L = 1; L <= p.lambda; ++L) {
            const WitnessEntry* entry = w.find(pr, L);
            if (entry == nullptr) {
                report.structural_issues.push_back("structure: missing entry at " +
                                                   slot_str(pr, L));
                continue;
            }
            if (static_cast<int>(entry->gens.size()) != p.f_at(L))
                report.structural_issues.push_back(
                    "structure: tuple at " + slot_str(pr, L) + " has length " +
                    std::to_string(entry->gens.size()) + ", expected " +
                    std::to_string(p.f_at(L)));
            if (static_cast<int>(entry->terms.size()) != p.g_at(L)) {
                report.structural_issues.push_back(
                    "structure: " + std::to_string(entry->terms.size()) +
                    " terms at " + slot_str(pr, L) + ", expected " +
                    std::to_string(p.g_at(L)));
            } else {
                std::uint64_t limit = std::uint64_t{1} << (1u << p.f_at(L));
                for (std::uint64_t index : entry->terms)
                    if (index >= limit)
                        report.structural_issues.push_back(
                            "structure: term index " + std::to_string(index) + " at " +
                            slot_str(pr, L) + " out of range for arity " +
                            std::to_string(p.f_at(L)));
            }
        }
    }
    for (const auto& [key, entry] : w.entries) {
        auto [pr, L] = key;
        bool known = pr.first >= 0 && pr.first < pr.second && pr.second < p.kappa &&
                     L >= 1 && L <= p.lambda;
        if (!known)
            report.structural_issues.push_back("structure: entry at " + slot_str(pr, L) +
                                               " outside the parameter ranges");
    }
    report.structure_ok = report.structural_issues.empty();
    if (!report.structure_ok)
        return report;

    // evaluated cells per slot
    std::map<std::pair<VertexPair, int>, std::vector<AlgebraElement>> cells;
    for (VertexPair pr : pairList)
        for (int L = 1; L <= p.lambda; ++L)
            cells[{pr, L}] = witness_cells(p, w, pr, L);

    for (VertexPair pr : pairList)
        for (int L = 1; L <= p.lambda; ++L)
            if (!is_partition_sequence(cells[{pr, L}]))
                report.partition_failures.push_back(slot_str(pr, L));

    for (VertexPair pr : pairList) {
        for (int L = 1; L <= p.lambda; ++L) {
            for (int N = 1; N <= L; ++N) {
                C4Instance inst;
                inst.w = pr;
                inst.N = N;
                inst.L = L;
                inst.value = c4_union_measure(cells[{pr, N}], cells[{pr, L}]);
                inst.threshold = DyadicMeasure::one_minus_half_pow(static_cast<unsigned>(N));
                inst.pass = inst.value >= inst.threshold;
                report.c4.push_back(std::move(inst));
            }
        }
    }

    const int r = p.identity.size();
    if (r <= p.kappa) {
        std::vector<int> P(static_cast<std::size_t>(r));
        // iterate sorted r-subsets of [kappa]
        for (int i = 0; i < r; ++i)
            P[static_cast<std::size_t>(i)] = i;
        while (true) {
            for (int L = 1; L <= p.lambda; ++L) {
                C5Instance inst;
                inst.P = P;
                inst.L = L;
                inst.value = c5_union_measure(p, w, P, L);
                inst.pass = inst.value.less_than(1, static_cast<std::uint64_t>(L));
                report.c5.push_back(std::move(inst));
            }
            int pos = r - 1;
            while (pos >= 0 && P[static_cast<std::size_t>(pos)] == p.kappa - r + pos)
                --pos;
            if (pos < 0)
                break;
            ++P[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < r; ++q)
                P[static_cast<std::size_t>(q)] = P[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
    return report;
}

namespace {

// State of the slot-by-slot search.
struct SearchState {
    const StatementParams& p;
    int budget;
    std::vector<std::pair<VertexPair, int>> slots; // level-major (L, then pair order)
    std::vector<WitnessEntry> chosen;              // per filled slot
    std::vector<std::vector<AlgebraElement>> cells; // per filled slot
    std::vector<std::vector<char>> realizesByLevel; // lazy realizing tables per level
    std::vector<std::vector<int>> subsets;         // sorted r-subsets of [kappa]

    explicit SearchState(const StatementParams& params, int b) : p(params), budget(b) {
        for (int L = 1; L <= p.lambda; ++L)
            for (VertexPair w : p.pairs())
                slots.emplace_back(w, L);
        realizesByLevel.resize(static_cast<std::size_t>(p.lambda));
        const int r = p.identity.size();
        if (r <= p.kappa) {
            std::vector<int> P(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i)
                P[static_cast<std::size_t>(i)] = i;
            while (true) {
                subsets.push_back(P);
                int pos = r - 1;
                while (pos >= 0 && P[static_cast<std::size_t>(pos)] == p.kappa - r + pos)
                    --pos;
                if (pos < 0)
                    break;
                ++P[static_cast<std::size_t>(pos)];
                for (int q = pos + 1; q < r; ++q)
                    P[static_cast<std::size_t>(q)] = P[static_cast<std::size_t>(q - 1)] + 1;
            }
        }
    }

    const std::vector<char>& realizing_at(int L) {
        auto& table = realizesByLevel[static_cast<std::size_t>(L - 1)];
        if (table.empty())
            table = realizing_colorings(p.identity, p.g_at(L));
        return table;
    }

    int slot_index(VertexPair w, int L) const {
        auto it = std::find(slots.begin(), slots.end(), std::make_pair(w, L));
        return static_cast<int>(it - slots.begin());
    }

    // All generator tuples of the given length in canonical first-use order:
    // a position may reuse any generator seen so far or introduce the next
    // fresh one, subject to the budget.
    std::vector<std::vector<GeneratorId>> gen_tuples(int length, int used) const {
        std::vector<std::vector<GeneratorId>> out;
        std::vector<GeneratorId> cur;
        auto rec = [&](auto&& self, int introduced) -> void {
            if (static_cast<int>(cur.size()) == length) {
                out.push_back(cur);
                return;
            }
            int seen = used + introduced;
            for (int v = 0; v <= seen && v < budget; ++v) {
                cur.push_back(GeneratorId{static_cast<std::uint32_t>(v)});
                self(self, introduced + (v == seen ? 1 : 0));
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return out;
    }

    // checks for the freshly filled slot at index `idx`
    bool admissible(std::size_t idx) {
        auto [w, L] = slots[idx];
        const auto& slotCells = cells[idx];
        if (!is_partition_sequence(slotCells))
            return false;
        for (int N = 1; N < L; ++N) {
            const auto& earlier = cells[static_cast<std::size_t>(slot_index(w, N))];
            if (c4_union_measure(earlier, slotCells) <
                DyadicMeasure::one_minus_half_pow(static_cast<unsigned>(N)))
                return false;
        }
        // once a level is complete, its realization bounds are decidable
        bool levelDone = idx + 1 == slots.size() || slots[idx + 1].second != L;
        if (levelDone && !subsets.empty()) {
            const auto& table = realizing_at(L);
            const int g = p.g_at(L);
            const int r = p.identity.size();
            for (const auto& P : subsets) {
                std::vector<std::vector<AlgebraElement>> pairCells;
                for (int i = 0; i < r; ++i)
                    for (int j = i + 1; j < r; ++j) {
                        VertexPair z{P[static_cast<std::size_t>(i)],
                                     P[static_cast<std::size_t>(j)]};
                        pairCells.push_back(cells[static_cast<std::size_t>(slot_index(z, L))]);
                    }
                if (!realizing_union_measure(pairCells, table, g)
                         .less_than(1, static_cast<std::uint64_t>(L)))
                    return false;
            }
        }
        return true;
    }

    bool run(std::size_t idx, int used, Witness& out) {
        if (idx == slots.size()) {
            for (std::size_t s = 0; s < slots.size(); ++s)
                out.entries[slots[s]] = chosen[s];
            return true;
        }
        auto [w, L] = slots[idx];
        const int g = p.g_at(L);
        const int arity = p.f_at(L);
        CompleteTermSet set(arity);
        const auto tuples = gen_tuples(arity, used);

        // term tuples in lexicographic index order
        std::vector<std::uint64_t> terms(static_cast<std::size_t>(g), 0);
        while (true) {
            for (const auto& gens : tuples) {
                WitnessEntry entry{gens, terms};
                std::vector<AlgebraElement> slotCells;
                slotCells.reserve(terms.size());
                for (std::uint64_t index : terms)
                    slotCells.push_back(eval(set.term(index), gens));
                chosen.push_back(std::move(entry));
                cells.push_back(std::move(slotCells));
                int introduced = 0;
                for (GeneratorId gid : gens)
                    introduced = std::max(introduced,
                                          static_cast<int>(gid.value) + 1 - used);
                if (admissible(idx) && run(idx + 1, used + introduced, out))
                    return true;
                chosen.pop_back();
                cells.pop_back();
            }
            // advance the term tuple odometer
            int pos = g - 1;
            while (pos >= 0 && terms[static_cast<std::size_t>(pos)] + 1 == set.size()) {
                terms[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0)
                break;
            ++terms[static_cast<std::size_t>(pos)];
        }
        return false;
    }
};

} // namespace

std::optional<Witness> search_witness(const StatementParams& p, int generatorBudget) {
    p.validate();
    if (p.kappa > 3 || p.lambda > 3)
        throw ResourceError("search_witness: kappa and lambda are limited to 3");
    for (int L = 1; L <= p.lambda; ++L)
        if (p.f_at(L) > 2 || p.g_at(L) > 2)
            throw ResourceError("search_witness: f and g are limited to 2 per level");
    if (generatorBudget < 0 || generatorBudget > 4)
        throw ResourceError("search_witness: generator budget is limited to 4");

    SearchState state(p, generatorBudget);
    Witness found;
    if (state.run(0, 0, found))
        return found;
    return std::nullopt;
}

} // namespace idforge
