#pragma once

#include "idforge/coloring.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace idforge {

// A finite branch label: word over {0, 1}.
struct BinaryWord {
    std::string bits;

    BinaryWord() = default;
    explicit BinaryWord(std::string b);  // validates characters
    std::size_t length() const { return bits.size(); }
    bool operator==(const BinaryWord&) const = default;
    bool operator<(const BinaryWord& o) const { return bits < o.bits; }
};

// Longest common prefix.
BinaryWord meet(const BinaryWord& a, const BinaryWord& b);

// The shape of a pair coloring up to vertex permutation and injective
// recoloring: the partition of the pair set into equal-color blocks, stored as
// the lexicographically minimal block sequence over all vertex permutations
// (blocks numbered by first appearance in pair order).  Two colorings of equal
// size are mutually realizable exactly when they share this canonical form.
class Identity {
public:
    Identity() = default;

    int size() const { return size_; }
    // canonical block id per pair index
    const std::vector<int>& edge_blocks() const { return blocks_; }
    int block_count() const;
    // a coloring on {0..size-1} whose colors are the canonical block ids
    Coloring representative() const;

    // "r; i-j,i-j|i-j|..." with blocks and pairs in canonical order
    std::string str() const;
    // Accepts any well-formed partition string and canonicalizes it.
    static Identity parse(std::string_view text);

    bool operator==(const Identity&) const = default;
    bool operator<(const Identity& o) const;

private:
    friend Identity canonical_identity(const Coloring& c);
    int size_ = 0;
    std::vector<int> blocks_;
};

// Canonical form of the coloring's edge partition.  Invariant under vertex
// permutation and injective recoloring.
Identity canonical_identity(const Coloring& c);

// All identities of size r, sorted.  Practical for r <= 5.
std::vector<Identity> enumerate_identities(int r);

// Colors each pair of words by their longest common prefix (one fresh color
// per distinct meet).  Words must be pairwise distinct and no word may be a
// prefix of another.
Coloring meet_coloring(const std::vector<BinaryWord>& words);

// True iff c realizes some (equivalently, the representative) coloring of id.
bool realizes_identity(const Coloring& c, const Identity& id);

// All size-r identities realized by meet colorings of r distinct words of the
// given length, sorted.  Requires depth >= r; the result is independent of
// depth from r-1 on, since any meet shape embeds into words that long.
std::vector<Identity> j_identities(int r, int depth);

} // namespace idforge
