#include "idforge/algebra.hpp"

#include "idforge/errors.hpp"
#include "idforge/term_set.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace idforge {

namespace {

// 2^k atoms is an honest dense representation; cap the exponent so a single
// element stays within a few dozen megabytes.
constexpr std::size_t kMaxSupport = 28;

void check_support_size(std::size_t k) {
    if (k > kMaxSupport)
        throw ResourceError("AlgebraElement: support of " + std::to_string(k) +
                            " generators exceeds the dense-atom limit of " +
                            std::to_string(kMaxSupport));
}

std::size_t word_count(std::size_t supportSize) {
    std::uint64_t atoms = std::uint64_t{1} << supportSize;
    return static_cast<std::size_t>((atoms + 63) / 64);
}

} // namespace

AlgebraElement::AlgebraElement() : atoms_(blank(0)) {}

std::vector<std::uint64_t> AlgebraElement::blank(std::size_t supportSize) {
    check_support_size(supportSize);
    return std::vector<std::uint64_t>(word_count(supportSize), 0);
}

AlgebraElement AlgebraElement::one() {
    AlgebraElement e;
    e.atoms_[0] = 1; // the single atom over the empty support
    return e;
}

AlgebraElement AlgebraElement::generator(GeneratorId g) {
    AlgebraElement e;
    e.support_ = {g};
    e.atoms_ = blank(1);
    e.atoms_[0] = 0b10; // the atom where the generator reads 1
    return e;
}

bool AlgebraElement::atom(std::uint64_t index) const {
    return (atoms_[static_cast<std::size_t>(index >> 6)] >> (index & 63)) & 1;
}

void AlgebraElement::set_atom(std::uint64_t index, bool value) {
    std::uint64_t& word = atoms_[static_cast<std::size_t>(index >> 6)];
    std::uint64_t bit = std::uint64_t{1} << (index & 63);
    if (value)
        word |= bit;
    else
        word &= ~bit;
}

std::uint64_t AlgebraElement::atom_count() const {
    std::uint64_t n = 0;
    for (std::uint64_t w : atoms_)
        n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
}

AlgebraElement AlgebraElement::with_support(const std::vector<GeneratorId>& gens) const {
    std::vector<GeneratorId> merged = support_;
    merged.insert(merged.end(), gens.begin(), gens.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged == support_)
        return *this;
    check_support_size(merged.size());

    // position of each merged generator inside the old support, or -1
    std::vector<int> oldPos(merged.size(), -1);
    for (std::size_t j = 0, o = 0; j < merged.size(); ++j)
        if (o < support_.size() && support_[o] == merged[j])
            oldPos[j] = static_cast<int>(o++);

    AlgebraElement out;
    out.support_ = std::move(merged);
    out.atoms_ = blank(out.support_.size());
    for (std::uint64_t a = 0; a < out.atom_space(); ++a) {
        std::uint64_t old = 0;
        for (std::size_t j = 0; j < out.support_.size(); ++j)
            if (oldPos[j] >= 0 && ((a >> j) & 1))
                old |= std::uint64_t{1} << oldPos[j];
        if (atom(old))
            out.set_atom(a, true);
    }
    return out;
}

AlgebraElement AlgebraElement::normalized() const {
    // a generator is irrelevant when flipping its bit never changes membership
    std::vector<GeneratorId> essential;
    std::vector<int> keepPos;
    for (std::size_t j = 0; j < support_.size(); ++j) {
        std::uint64_t bit = std::uint64_t{1} << j;
        for (std::uint64_t a = 0; a < atom_space(); ++a) {
            if (atom(a) != atom(a ^ bit)) {
                essential.push_back(support_[j]);
                keepPos.push_back(static_cast<int>(j));
                break;
            }
        }
    }
    if (essential.size() == support_.size())
        return *this;

    AlgebraElement out;
    out.support_ = std::move(essential);
    out.atoms_ = blank(out.support_.size());
    for (std::uint64_t a = 0; a < out.atom_space(); ++a) {
        std::uint64_t full = 0;
        for (std::size_t j = 0; j < keepPos.size(); ++j)
            if ((a >> j) & 1)
                full |= std::uint64_t{1} << keepPos[j];
        // dropped generators read as 0; membership does not depend on them
        if (atom(full))
            out.set_atom(a, true);
    }
    return out;
}

namespace {

// Brings both elements onto their common (union) support.
std::pair<AlgebraElement, AlgebraElement> aligned(const AlgebraElement& a,
                                                  const AlgebraElement& b) {
    return {a.with_support(b.support()), b.with_support(a.support())};
}

} // namespace

AlgebraElement AlgebraElement::operator~() const {
    AlgebraElement out = *this;
    for (auto& w : out.atoms_)
        w = ~w;
    std::uint64_t atoms = out.atom_space();
    if (atoms % 64 != 0) // mask padding bits beyond 2^k
        out.atoms_.back() &= (std::uint64_t{1} << (atoms % 64)) - 1;
    return out;
}

AlgebraElement AlgebraElement::operator&(const AlgebraElement& rhs) const {
    auto [x, y] = aligned(*this, rhs);
    for (std::size_t i = 0; i < x.atoms_.size(); ++i)
        x.atoms_[i] &= y.atoms_[i];
    return x;
}

AlgebraElement AlgebraElement::operator|(const AlgebraElement& rhs) const {
    auto [x, y] = aligned(*this, rhs);
    for (std::size_t i = 0; i < x.atoms_.size(); ++i)
        x.atoms_[i] |= y.atoms_[i];
    return x;
}

AlgebraElement AlgebraElement::operator^(const AlgebraElement& rhs) const {
    auto [x, y] = aligned(*this, rhs);
    for (std::size_t i = 0; i < x.atoms_.size(); ++i)
        x.atoms_[i] ^= y.atoms_[i];
    return x;
}

AlgebraElement AlgebraElement::minus(const AlgebraElement& rhs) const {
    auto [x, y] = aligned(*this, rhs);
    for (std::size_t i = 0; i < x.atoms_.size(); ++i)
        x.atoms_[i] &= ~y.atoms_[i];
    return x;
}

bool AlgebraElement::is_empty() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](std::uint64_t w) { return w == 0; });
}

bool AlgebraElement::is_full() const {
    return (~*this).is_empty();
}

bool AlgebraElement::subset_of(const AlgebraElement& rhs) const {
    return minus(rhs).is_empty();
}

bool AlgebraElement::operator==(const AlgebraElement& rhs) const {
    return (*this ^ rhs).is_empty();
}

std::string AlgebraElement::str() const {
    std::ostringstream out;
    out << "support=[";
    for (std::size_t j = 0; j < support_.size(); ++j)
        out << (j ? "," : "") << support_[j].value;
    out << "]; atoms=0x";
    // big-endian hex over exactly ceil(2^k / 4) digits
    std::uint64_t atoms = atom_space();
    std::size_t digits = static_cast<std::size_t>((atoms + 3) / 4);
    std::string hex(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
        unsigned nibble = 0;
        for (unsigned b = 0; b < 4; ++b) {
            std::uint64_t idx = static_cast<std::uint64_t>(d) * 4 + b;
            if (idx < atoms && atom(idx))
                nibble |= 1u << b;
        }
        hex[digits - 1 - d] = "0123456789abcdef"[nibble];
    }
    out << hex;
    return out.str();
}

AlgebraElement eval(const Term& term, const std::vector<GeneratorId>& gens) {
    if (static_cast<int>(gens.size()) < term.arity())
        throw std::invalid_argument("eval: tuple of " + std::to_string(gens.size()) +
                                    " generators for a term of arity " +
                                    std::to_string(term.arity()));
    std::vector<GeneratorId> support = gens;
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    std::vector<int> varPos(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
        varPos[i] = static_cast<int>(
            std::lower_bound(support.begin(), support.end(), gens[i]) - support.begin());
    return AlgebraElement::from_atoms(support, [&](std::uint64_t a) {
        std::uint32_t assignment = 0;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if ((a >> varPos[i]) & 1)
                assignment |= 1u << i;
        return term.eval_bits(assignment);
    });
}

DyadicMeasure measure(const AlgebraElement& e) {
    return {BigNat(e.atom_count()), static_cast<unsigned>(e.support_size())};
}

bool is_partition_sequence(const std::vector<AlgebraElement>& cells) {
    AlgebraElement join = AlgebraElement::zero();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = i + 1; j < cells.size(); ++j)
            if (!(cells[i] & cells[j]).is_empty())
                return false;
        join = join | cells[i];
    }
    return join.is_full();
}

bool is_partition_sequence(const std::vector<Term>& terms,
                           const std::vector<std::vector<GeneratorId>>& gens) {
    if (terms.size() != gens.size())
        throw std::invalid_argument("is_partition_sequence: one tuple per term required");
    std::vector<AlgebraElement> cells;
    cells.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        cells.push_back(eval(terms[i], gens[i]));
    return is_partition_sequence(cells);
}

std::vector<std::pair<Term, std::vector<GeneratorId>>>
disjointify(const std::vector<std::pair<Term, std::vector<GeneratorId>>>& sigma) {
    // shared tuple: union of all input tuples, sorted
    std::vector<GeneratorId> tuple;
    for (const auto& [t, gs] : sigma) {
        if (static_cast<int>(gs.size()) < t.arity())
            throw std::invalid_argument("disjointify: tuple shorter than term arity");
        tuple.insert(tuple.end(), gs.begin(), gs.end());
    }
    std::sort(tuple.begin(), tuple.end());
    tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());

    // rewrite each sigma_m over the shared tuple
    std::vector<Term> shifted;
    shifted.reserve(sigma.size());
    for (const auto& [t, gs] : sigma) {
        std::vector<int> remap(gs.size());
        for (std::size_t i = 0; i < gs.size(); ++i)
            remap[i] = static_cast<int>(
                std::lower_bound(tuple.begin(), tuple.end(), gs[i]) - tuple.begin()) + 1;
        auto rewrite = [&](auto&& self, const Term& u) -> Term {
            switch (u.kind()) {
            case Term::Kind::Const0:
            case Term::Kind::Const1:
                return u;
            case Term::Kind::Var:
                return Term::var(remap[static_cast<std::size_t>(u.var_index() - 1)]);
            case Term::Kind::Not:
                return Term::negate(self(self, u.child(0)));
            case Term::Kind::And:
                return Term::conj(self(self, u.child(0)), self(self, u.child(1)));
            case Term::Kind::Or:
                return Term::disj(self(self, u.child(0)), self(self, u.child(1)));
            }
            return u;
        };
        shifted.push_back(rewrite(rewrite, t));
    }

    std::vector<std::pair<Term, std::vector<GeneratorId>>> rho;
    rho.reserve(sigma.size() + 1);
    for (std::size_t m = 0; m < shifted.size(); ++m) {
        Term peeled = shifted[m];
        for (std::size_t i = 0; i < m; ++i)
            peeled = Term::conj(peeled, Term::negate(shifted[i]));
        rho.emplace_back(peeled, tuple);
    }
    Term rest = Term::constant(true);
    for (const Term& s : shifted)
        rest = Term::conj(rest, Term::negate(s));
    rho.emplace_back(rest, tuple);
    return rho;
}

Approximation approximate(const AlgebraElement& target, int budget) {
    if (budget < 0)
        throw std::invalid_argument("approximate: negative budget");
    const auto& sup = target.support();
    const int k = target.support_size();
    const int maxPick = std::min(budget, k);
    if (maxPick > 12)
        throw ResourceError("approximate: budgets above 12 generators are not supported");

    bool haveBest = false;
    Approximation best;
    std::vector<std::uint64_t> bestIndex; // cell-inclusion bits, low word first

    // numeric comparison of truth-table indices stored as bit words
    auto index_less = [](const std::vector<std::uint64_t>& a,
                         const std::vector<std::uint64_t>& b) {
        std::size_t n = std::max(a.size(), b.size());
        for (std::size_t i = n; i-- > 0;) {
            std::uint64_t wa = i < a.size() ? a[i] : 0;
            std::uint64_t wb = i < b.size() ? b[i] : 0;
            if (wa != wb)
                return wa < wb;
        }
        return false;
    };

    // Candidate supports are subsets of the target's support: a generator
    // outside it splits every cell into halves with the same conditional
    // fraction of the target, so it can never reduce the error.
    std::vector<int> pick;
    auto consider = [&]() {
        const int u = static_cast<int>(pick.size());
        std::vector<std::uint64_t> cellHits(std::size_t{1} << u, 0);
        for (std::uint64_t a = 0; a < target.atom_space(); ++a) {
            if (!target.atom(a))
                continue;
            std::uint64_t cell = 0;
            for (int j = 0; j < u; ++j)
                if ((a >> pick[static_cast<std::size_t>(j)]) & 1)
                    cell |= std::uint64_t{1} << j;
            ++cellHits[static_cast<std::size_t>(cell)];
        }
        const std::uint64_t cellSize = std::uint64_t{1} << (k - u);
        // include a cell iff the majority of it lies in the target; a tie
        // excludes, keeping the truth-table index minimal
        std::vector<std::uint64_t> index((cellHits.size() + 63) / 64, 0);
        BigNat err = 0;
        for (std::uint64_t cell = 0; cell < (std::uint64_t{1} << u); ++cell) {
            std::uint64_t hits = cellHits[static_cast<std::size_t>(cell)];
            if (hits * 2 > cellSize) {
                index[static_cast<std::size_t>(cell >> 6)] |= std::uint64_t{1} << (cell & 63);
                err += cellSize - hits;
            } else {
                err += hits;
            }
        }
        DyadicMeasure delta{err, static_cast<unsigned>(k)};
        std::vector<GeneratorId> gens;
        gens.reserve(pick.size());
        for (int j : pick)
            gens.push_back(sup[static_cast<std::size_t>(j)]);
        bool better =
            !haveBest || delta < best.delta ||
            (delta == best.delta &&
             (index_less(index, bestIndex) ||
              (!index_less(bestIndex, index) && gens < best.gens)));
        if (better) {
            haveBest = true;
            bestIndex = index;
            best.delta = delta;
            best.gens = std::move(gens);
            best.term = full_dnf(u, [&](std::uint32_t cell) {
                return (index[cell >> 6] >> (cell & 63)) & 1;
            });
        }
    };

    auto rec = [&](auto&& self, int from, int remaining) -> void {
        consider();
        if (remaining == 0)
            return;
        for (int j = from; j < k; ++j) {
            pick.push_back(j);
            self(self, j + 1, remaining - 1);
            pick.pop_back();
        }
    };
    rec(rec, 0, maxPick);
    return best;
}

} // namespace idforge
