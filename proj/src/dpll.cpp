#include "idforge/dpll.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace idforge {

namespace {

// Literals are stored as slots 2*var + (negative ? 1 : 0).
int lit_slot(int lit) { return 2 * std::abs(lit) + (lit < 0 ? 1 : 0); }
int slot_var(int slot) { return slot >> 1; }
int slot_negate(int slot) { return slot ^ 1; }

// Conflict-driven solver: two watched literals, first-UIP clause learning,
// non-chronological backjumping.  No restarts and no clause deletion, so runs
// are reproducible; branching takes the lowest unassigned variable, false
// first.
struct Solver {
    int varCount;
    std::vector<std::vector<int>> db;      // clause database, learned appended
    std::vector<std::vector<int>> watches; // per slot: clause indices
    std::vector<signed char> value;        // per var: -1 unassigned, 0 false, 1 true
    std::vector<int> level;                // per var: decision level
    std::vector<int> reason;               // per var: clause index or -1
    std::vector<int> trail;                // assigned slots in order
    std::vector<std::size_t> trailLim;     // trail size at each decision
    std::size_t head = 0;                  // propagation queue position
    std::vector<char> seen;                // scratch for conflict analysis

    explicit Solver(int vars)
        : varCount(vars),
          watches(2 * static_cast<std::size_t>(vars) + 2),
          value(static_cast<std::size_t>(vars) + 1, -1),
          level(static_cast<std::size_t>(vars) + 1, 0),
          reason(static_cast<std::size_t>(vars) + 1, -1),
          seen(static_cast<std::size_t>(vars) + 1, 0) {}

    int current_level() const { return static_cast<int>(trailLim.size()); }

    bool lit_true(int slot) const {
        signed char v = value[static_cast<std::size_t>(slot_var(slot))];
        return v == ((slot & 1) ? 0 : 1);
    }
    bool lit_false(int slot) const {
        signed char v = value[static_cast<std::size_t>(slot_var(slot))];
        return v == ((slot & 1) ? 1 : 0);
    }
    bool lit_unassigned(int slot) const {
        return value[static_cast<std::size_t>(slot_var(slot))] == -1;
    }

    void assign(int slot, int why) {
        int v = slot_var(slot);
        value[static_cast<std::size_t>(v)] = (slot & 1) ? 0 : 1;
        level[static_cast<std::size_t>(v)] = current_level();
        reason[static_cast<std::size_t>(v)] = why;
        trail.push_back(slot);
    }

    void attach(int clauseIdx) {
        const std::vector<int>& c = db[static_cast<std::size_t>(clauseIdx)];
        watches[static_cast<std::size_t>(c[0])].push_back(clauseIdx);
        watches[static_cast<std::size_t>(c[1])].push_back(clauseIdx);
    }

    // Returns the index of a conflicting clause, or -1.
    int propagate() {
        while (head < trail.size()) {
            int falsified = slot_negate(trail[head++]);
            std::vector<int>& list = watches[static_cast<std::size_t>(falsified)];
            std::size_t keep = 0;
            for (std::size_t k = 0; k < list.size(); ++k) {
                int ci = list[k];
                std::vector<int>& c = db[static_cast<std::size_t>(ci)];
                if (c[0] == falsified)
                    std::swap(c[0], c[1]);
                // c[1] == falsified now
                if (lit_true(c[0])) {
                    list[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t j = 2; j < c.size(); ++j)
                    if (!lit_false(c[j])) {
                        std::swap(c[1], c[j]);
                        watches[static_cast<std::size_t>(c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved)
                    continue;
                list[keep++] = ci;
                if (lit_false(c[0])) { // conflict: keep the remaining watchers
                    for (++k; k < list.size(); ++k)
                        list[keep++] = list[k];
                    list.resize(keep);
                    return ci;
                }
                assign(c[0], ci); // unit
            }
            list.resize(keep);
        }
        return -1;
    }

    // First-UIP learning.  Fills `learnt` (asserting literal first) and
    // returns the backjump level.
    int analyze(int conflictIdx, std::vector<int>& learnt) {
        learnt.assign(1, 0); // slot 0 reserved for the asserting literal
        int counter = 0;
        int p = -1;
        std::size_t index = trail.size();
        int ci = conflictIdx;
        do {
            const std::vector<int>& c = db[static_cast<std::size_t>(ci)];
            for (int q : c) {
                if (q == p)
                    continue;
                int v = slot_var(q);
                if (!seen[static_cast<std::size_t>(v)] &&
                    level[static_cast<std::size_t>(v)] > 0) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    if (level[static_cast<std::size_t>(v)] == current_level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen[static_cast<std::size_t>(slot_var(trail[index - 1]))])
                --index;
            --index;
            p = trail[index];
            ci = reason[static_cast<std::size_t>(slot_var(p))];
            seen[static_cast<std::size_t>(slot_var(p))] = 0;
            --counter;
        } while (counter > 0);
        learnt[0] = slot_negate(p);

        int back = 0;
        std::size_t backPos = 1;
        for (std::size_t k = 1; k < learnt.size(); ++k) {
            int lv = level[static_cast<std::size_t>(slot_var(learnt[k]))];
            if (lv > back) {
                back = lv;
                backPos = k;
            }
        }
        if (learnt.size() > 1)
            std::swap(learnt[1], learnt[backPos]);
        for (std::size_t k = 1; k < learnt.size(); ++k)
            seen[static_cast<std::size_t>(slot_var(learnt[k]))] = 0;
        return back;
    }

    void backjump(int toLevel) {
        std::size_t keep = trailLim[static_cast<std::size_t>(toLevel)];
        for (std::size_t k = trail.size(); k > keep; --k) {
            int v = slot_var(trail[k - 1]);
            value[static_cast<std::size_t>(v)] = -1;
            reason[static_cast<std::size_t>(v)] = -1;
        }
        trail.resize(keep);
        trailLim.resize(static_cast<std::size_t>(toLevel));
        head = keep;
    }

    std::optional<std::vector<bool>> run() {
        while (true) {
            int conflict = propagate();
            if (conflict >= 0) {
                if (current_level() == 0)
                    return std::nullopt;
                std::vector<int> learnt;
                int back = analyze(conflict, learnt);
                backjump(back);
                if (learnt.size() == 1) {
                    assign(learnt[0], -1); // entailed at the root
                } else {
                    db.push_back(learnt);
                    int ci = static_cast<int>(db.size()) - 1;
                    attach(ci);
                    assign(learnt[0], ci);
                }
                continue;
            }
            int branch = 0;
            for (int v = 1; v <= varCount; ++v)
                if (value[static_cast<std::size_t>(v)] == -1) {
                    branch = v;
                    break;
                }
            if (branch == 0) {
                std::vector<bool> model(static_cast<std::size_t>(varCount) + 1, false);
                for (int v = 1; v <= varCount; ++v)
                    model[static_cast<std::size_t>(v)] = value[static_cast<std::size_t>(v)] == 1;
                return model;
            }
            trailLim.push_back(trail.size());
            assign(2 * branch + 1, -1); // decide false
        }
    }
};

} // namespace

std::optional<std::vector<bool>> solve_cnf(int varCount,
                                           const std::vector<std::vector<int>>& clauses) {
    if (varCount < 0)
        throw std::invalid_argument("solve_cnf: negative variable count");
    Solver s(varCount);
    std::vector<int> units;
    for (const auto& clause : clauses) {
        std::vector<int> slots;
        slots.reserve(clause.size());
        for (int lit : clause) {
            int var = std::abs(lit);
            if (var == 0 || var > varCount)
                throw std::invalid_argument("solve_cnf: literal out of range");
            slots.push_back(lit_slot(lit));
        }
        std::sort(slots.begin(), slots.end());
        slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
        bool tautology = false;
        for (std::size_t k = 0; k + 1 < slots.size(); ++k)
            if (slots[k + 1] == slot_negate(slots[k]) && slot_var(slots[k]) == slot_var(slots[k + 1])) {
                tautology = true;
                break;
            }
        if (tautology)
            continue;
        if (slots.empty())
            return std::nullopt;
        if (slots.size() == 1) {
            units.push_back(slots[0]);
            continue;
        }
        s.db.push_back(std::move(slots));
        s.attach(static_cast<int>(s.db.size()) - 1);
    }
    for (int slot : units) {
        if (s.lit_false(slot))
            return std::nullopt;
        if (s.lit_unassigned(slot))
            s.assign(slot, -1);
    }
    return s.run();
}

} // namespace idforge
