#include "idforge/identity.hpp"

#include "idforge/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace idforge {

BinaryWord::BinaryWord(std::string b) : bits(std::move(b)) {
    for (char c : bits)
        if (c != '0' && c != '1')
            throw ParseError("binary word: invalid character '" + std::string(1, c) + "'");
}

BinaryWord meet(const BinaryWord& a, const BinaryWord& b) {
    std::size_t k = 0;
    while (k < a.bits.size() && k < b.bits.size() && a.bits[k] == b.bits[k])
        ++k;
    return BinaryWord(a.bits.substr(0, k));
}

namespace {

// Renumbers a color sequence so blocks appear as 0, 1, 2, ... in order of
// first appearance ("restricted growth" normal form).
std::vector<int> normalize_blocks(const std::vector<unsigned>& seq) {
    std::vector<int> out(seq.size());
    std::map<unsigned, int> label;
    int next = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        auto [it, fresh] = label.try_emplace(seq[k], next);
        if (fresh)
            ++next;
        out[k] = it->second;
    }
    return out;
}

std::vector<int> canonical_blocks(const Coloring& c) {
    int n = c.n;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    std::vector<unsigned> seq(static_cast<std::size_t>(pair_count(n)));
    do {
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                seq[k++] = c.color(perm[static_cast<std::size_t>(i)],
                                   perm[static_cast<std::size_t>(j)]);
        std::vector<int> cand = normalize_blocks(seq);
        if (best.empty() || cand < best)
            best = std::move(cand);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best.empty())
        best = {};
    return best;
}

} // namespace

int Identity::block_count() const {
    int m = -1;
    for (int b : blocks_)
        m = std::max(m, b);
    return m + 1;
}

Coloring Identity::representative() const {
    Coloring c;
    c.n = size_;
    c.colors.reserve(blocks_.size());
    for (int b : blocks_)
        c.colors.push_back(static_cast<unsigned>(b));
    return c;
}

std::string Identity::str() const {
    std::ostringstream out;
    out << size_ << ";";
    int nblocks = block_count();
    bool firstBlock = true;
    for (int b = 0; b < nblocks; ++b) {
        out << (firstBlock ? " " : "|");
        firstBlock = false;
        bool firstPair = true;
        for (std::size_t k = 0; k < blocks_.size(); ++k) {
            if (blocks_[k] != b)
                continue;
            auto [i, j] = pair_at(static_cast<int>(k), size_);
            if (!firstPair)
                out << ",";
            firstPair = false;
            out << i << "-" << j;
        }
    }
    return out.str();
}

Identity Identity::parse(std::string_view text) {
    auto semi = text.find(';');
    if (semi == std::string_view::npos)
        throw ParseError("identity: missing ';'");
    int r = 0;
    try {
        r = std::stoi(std::string(text.substr(0, semi)));
    } catch (const std::exception&) {
        throw ParseError("identity: malformed size");
    }
    if (r < 2)
        throw ParseError("identity: size must be at least 2");

    Coloring c = Coloring::constant(r, 0);
    std::vector<bool> seen(static_cast<std::size_t>(pair_count(r)), false);
    std::string rest(text.substr(semi + 1));
    std::istringstream blocks(rest);
    std::string block;
    unsigned blockId = 0;
    while (std::getline(blocks, block, '|')) {
        std::istringstream pairs(block);
        std::string pairTok;
        bool any = false;
        while (std::getline(pairs, pairTok, ',')) {
            auto start = pairTok.find_first_not_of(" \t");
            auto end = pairTok.find_last_not_of(" \t");
            if (start == std::string::npos)
                continue;
            pairTok = pairTok.substr(start, end - start + 1);
            auto dash = pairTok.find('-');
            if (dash == std::string::npos)
                throw ParseError("identity: malformed pair '" + pairTok + "'");
            int i, j;
            try {
                i = std::stoi(pairTok.substr(0, dash));
                j = std::stoi(pairTok.substr(dash + 1));
            } catch (const std::exception&) {
                throw ParseError("identity: malformed pair '" + pairTok + "'");
            }
            if (i < 0 || j < 0 || i >= j || j >= r)
                throw ParseError("identity: pair '" + pairTok + "' out of range");
            auto idx = static_cast<std::size_t>(pair_index(i, j, r));
            if (seen[idx])
                throw ParseError("identity: pair '" + pairTok + "' listed twice");
            seen[idx] = true;
            c.colors[idx] = blockId;
            any = true;
        }
        if (any)
            ++blockId;
    }
    for (std::size_t idx = 0; idx < seen.size(); ++idx) {
        if (!seen[idx]) {
            auto [i, j] = pair_at(static_cast<int>(idx), r);
            throw ParseError("identity: pair " + std::to_string(i) + "-" +
                             std::to_string(j) + " missing");
        }
    }
    return canonical_identity(c);
}

bool Identity::operator<(const Identity& o) const {
    if (size_ != o.size_)
        return size_ < o.size_;
    return blocks_ < o.blocks_;
}

Identity canonical_identity(const Coloring& c) {
    if (!c.valid())
        throw std::invalid_argument("canonical_identity: malformed coloring");
    if (c.n > 8)
        throw ResourceError("canonical_identity: vertex sets above 8 are not supported");
    Identity id;
    id.size_ = c.n;
    id.blocks_ = canonical_blocks(c);
    return id;
}

std::vector<Identity> enumerate_identities(int r) {
    if (r < 2)
        throw std::invalid_argument("enumerate_identities: size must be at least 2");
    if (r > 5)
        throw ResourceError("enumerate_identities: sizes above 5 are not supported");

    const int pairs = pair_count(r);
    std::set<Identity> seen;
    // enumerate all partitions of the pair set as restricted-growth strings
    std::vector<unsigned> rgs(static_cast<std::size_t>(pairs), 0);
    auto rec = [&](auto&& self, int pos, unsigned blocks) -> void {
        if (pos == pairs) {
            Coloring c;
            c.n = r;
            c.colors = rgs;
            seen.insert(canonical_identity(c));
            return;
        }
        for (unsigned b = 0; b <= blocks; ++b) {
            rgs[static_cast<std::size_t>(pos)] = b;
            self(self, pos + 1, std::max(blocks, b + 1));
        }
    };
    rec(rec, 0, 0);
    return {seen.begin(), seen.end()};
}

Coloring meet_coloring(const std::vector<BinaryWord>& words) {
    const int n = static_cast<int>(words.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (words[static_cast<std::size_t>(i)] == words[static_cast<std::size_t>(j)])
                throw std::invalid_argument("meet_coloring: duplicate word '" +
                                            words[static_cast<std::size_t>(i)].bits + "'");
            const auto& a = words[static_cast<std::size_t>(i)].bits;
            const auto& b = words[static_cast<std::size_t>(j)].bits;
            const auto& shorter = a.size() <= b.size() ? a : b;
            const auto& longer = a.size() <= b.size() ? b : a;
            if (longer.compare(0, shorter.size(), shorter) == 0)
                throw std::invalid_argument("meet_coloring: '" + shorter +
                                            "' is a prefix of '" + longer + "'");
        }
    }
    Coloring c;
    c.n = n;
    c.colors.resize(static_cast<std::size_t>(pair_count(n)));
    std::map<std::string, unsigned> colorOf;
    unsigned next = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::string m = meet(words[static_cast<std::size_t>(i)],
                                 words[static_cast<std::size_t>(j)]).bits;
            auto [it, fresh] = colorOf.try_emplace(m, next);
            if (fresh)
                ++next;
            c.colors[static_cast<std::size_t>(pair_index(i, j, n))] = it->second;
        }
    }
    return c;
}

bool realizes_identity(const Coloring& c, const Identity& id) {
    return realizes(c, id.representative());
}

std::vector<Identity> j_identities(int r, int depth) {
    if (r < 2)
        throw std::invalid_argument("j_identities: size must be at least 2");
    if (r > 5)
        throw ResourceError("j_identities: sizes above 5 are not supported");
    if (depth < r)
        throw std::invalid_argument("j_identities: depth must be at least r");
    if (depth > 6)
        throw ResourceError("j_identities: depths above 6 are not supported");

    // Collect the distinct meet shapes of r words of the given length.  Raw
    // block sequences dedupe cheaply; canonicalization runs on survivors only.
    const int wordCount = 1 << depth;
    std::vector<int> pick(static_cast<std::size_t>(r));
    std::set<std::vector<int>> rawShapes;
    std::vector<BinaryWord> tuple(static_cast<std::size_t>(r));
    auto wordAt = [&](int v) {
        std::string bits(static_cast<std::size_t>(depth), '0');
        for (int b = 0; b < depth; ++b)
            if (v & (1 << (depth - 1 - b)))
                bits[static_cast<std::size_t>(b)] = '1';
        return BinaryWord(bits);
    };
    // iterate r-combinations of words
    for (int i = 0; i < r; ++i)
        pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        for (int i = 0; i < r; ++i)
            tuple[static_cast<std::size_t>(i)] = wordAt(pick[static_cast<std::size_t>(i)]);
        Coloring mc = meet_coloring(tuple);
        rawShapes.insert(normalize_blocks(mc.colors));
        int i = r - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == wordCount - r + i)
            --i;
        if (i < 0)
            break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }

    std::set<Identity> shapes;
    for (const auto& raw : rawShapes) {
        Coloring c;
        c.n = r;
        c.colors.reserve(raw.size());
        for (int b : raw)
            c.colors.push_back(static_cast<unsigned>(b));
        shapes.insert(canonical_identity(c));
    }

    std::vector<Identity> out;
    for (const Identity& id : enumerate_identities(r)) {
        for (const Identity& shape : shapes) {
            if (realizes_identity(shape.representative(), id)) {
                out.push_back(id);
                break;
            }
        }
    }
    return out;
}

} // namespace idforge
