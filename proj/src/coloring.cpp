#include "idforge/coloring.hpp"

#include "idforge/errors.hpp"

#include <algorithm>
#include <sstream>

namespace idforge {

int pair_count(int n) {
    return n * (n - 1) / 2;
}

int pair_index(int i, int j, int n) {
    // pairs {0,1}..{0,n-1} come first, then {1,2}.., so row i starts after
    // i rows of lengths n-1, n-2, ...
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> pair_at(int index, int n) {
    for (int i = 0; i < n; ++i) {
        int row = n - i - 1;
        if (index < row)
            return {i, i + 1 + index};
        index -= row;
    }
    return {-1, -1};
}

unsigned Coloring::color(int i, int j) const {
    if (i > j)
        std::swap(i, j);
    return colors[static_cast<std::size_t>(pair_index(i, j, n))];
}

Coloring Coloring::constant(int n, unsigned color) {
    Coloring c;
    c.n = n;
    c.colors.assign(static_cast<std::size_t>(pair_count(n)), color);
    return c;
}

bool Coloring::valid() const {
    return n >= 0 && colors.size() == static_cast<std::size_t>(pair_count(n));
}

Coloring parse_coloring(std::string_view text) {
    struct Entry {
        int i, j;
        unsigned c;
        int line;
    };
    std::vector<Entry> entries;
    int maxVertex = -1;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ls(line);
        long long i, j;
        unsigned long long c;
        if (!(ls >> i >> j >> c))
            throw ParseError("coloring: malformed line " + std::to_string(lineNo));
        std::string trailing;
        if (ls >> trailing)
            throw ParseError("coloring: trailing tokens on line " + std::to_string(lineNo));
        if (i < 0 || j < 0 || i >= j)
            throw ParseError("coloring: line " + std::to_string(lineNo) +
                             " must name a pair i < j");
        entries.push_back({static_cast<int>(i), static_cast<int>(j),
                           static_cast<unsigned>(c), lineNo});
        maxVertex = std::max(maxVertex, static_cast<int>(j));
    }

    Coloring out;
    out.n = maxVertex + 1;
    out.colors.assign(static_cast<std::size_t>(pair_count(out.n)), 0);
    std::vector<int> seenAt(out.colors.size(), 0);
    for (const auto& e : entries) {
        auto idx = static_cast<std::size_t>(pair_index(e.i, e.j, out.n));
        if (seenAt[idx] != 0)
            throw ParseError("coloring: pair " + std::to_string(e.i) + " " +
                             std::to_string(e.j) + " recolored on line " +
                             std::to_string(e.line) + " (first on line " +
                             std::to_string(seenAt[idx]) + ")");
        seenAt[idx] = e.line;
        out.colors[idx] = e.c;
    }
    for (std::size_t idx = 0; idx < seenAt.size(); ++idx) {
        if (seenAt[idx] == 0) {
            auto [i, j] = pair_at(static_cast<int>(idx), out.n);
            throw ParseError("coloring: pair " + std::to_string(i) + " " +
                             std::to_string(j) + " missing");
        }
    }
    return out;
}

std::string to_text(const Coloring& c) {
    std::ostringstream out;
    for (int i = 0; i < c.n; ++i)
        for (int j = i + 1; j < c.n; ++j)
            out << i << " " << j << " " << c.color(i, j) << "\n";
    return out.str();
}

namespace {

// After mapping vertex v, every pair {u,v} must respect the implication
// "equal g-colors -> equal f-colors" against all pairs mapped so far.
bool consistent_with(const Coloring& f, const Coloring& g,
                     const std::vector<int>& k, int v) {
    for (int u = 0; u < v; ++u) {
        unsigned gc = g.color(u, v);
        unsigned fc = f.color(k[static_cast<std::size_t>(u)],
                              k[static_cast<std::size_t>(v)]);
        for (int a = 0; a <= v; ++a) {
            for (int b = a + 1; b <= v; ++b) {
                if (a == u && b == v)
                    continue;
                bool gEq = g.color(a, b) == gc;
                bool fEq = f.color(k[static_cast<std::size_t>(a)],
                                   k[static_cast<std::size_t>(b)]) == fc;
                if (gEq && !fEq)
                    return false;
            }
        }
    }
    return true;
}

bool extend(const Coloring& f, const Coloring& g, std::vector<int>& k,
            std::vector<bool>& used, int v) {
    if (v == g.n)
        return true;
    for (int target = 0; target < f.n; ++target) {
        if (used[static_cast<std::size_t>(target)])
            continue;
        k[static_cast<std::size_t>(v)] = target;
        if (consistent_with(f, g, k, v)) {
            used[static_cast<std::size_t>(target)] = true;
            if (extend(f, g, k, used, v + 1))
                return true;
            used[static_cast<std::size_t>(target)] = false;
        }
    }
    return false;
}

} // namespace

bool realizes(const Coloring& f, const Coloring& g) {
    if (g.n > f.n)
        return false;
    if (g.n <= 1)
        return true; // no pairs to constrain
    std::vector<int> k(static_cast<std::size_t>(g.n), -1);
    std::vector<bool> used(static_cast<std::size_t>(f.n), false);
    return extend(f, g, k, used, 0);
}

bool equivalent(const Coloring& f, const Coloring& g) {
    return realizes(f, g) && realizes(g, f);
}

} // namespace idforge
