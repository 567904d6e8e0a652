#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace idforge {

// Unordered pairs {i, j} with i < j < n are indexed lexicographically:
// {0,1}, {0,2}, ..., {0,n-1}, {1,2}, ...
int pair_count(int n);
int pair_index(int i, int j, int n);
std::pair<int, int> pair_at(int index, int n);

// A coloring of all unordered pairs of the vertex set {0, ..., n-1}.
// Color values are opaque labels; only equality between them matters.
struct Coloring {
    int n = 0;
    std::vector<unsigned> colors; // indexed by pair_index(i, j, n)

    unsigned color(int i, int j) const;
    static Coloring constant(int n, unsigned color = 0);
    bool valid() const;
};

// Parses one "i j c" line per pair (0 <= i < j), '#' comments and blank lines
// allowed.  The vertex set is {0, ..., max index}; every pair must be colored
// exactly once.  Throws ParseError naming the offending line or pair.
Coloring parse_coloring(std::string_view text);
std::string to_text(const Coloring& c);

// True iff some injection k of g's vertices into f's vertices maps pairs with
// equal g-colors to pairs with equal f-colors (so distinguishing f-colors pull
// back to distinguishing g-colors).  False when g has more vertices than f.
// Reflexive and transitive.
bool realizes(const Coloring& f, const Coloring& g);

// Mutual realization; an equivalence on colorings of equal size.
bool equivalent(const Coloring& f, const Coloring& g);

} // namespace idforge
