#include "idforge/sampler.hpp"

#include <algorithm>
#include <stdexcept>

namespace idforge {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

BitSource::BitSource(std::uint64_t seed, std::uint64_t stream)
    : counter_(mix64(seed) ^ mix64(mix64(stream))) {}

bool BitSource::next_bit() {
    if (remaining_ == 0) {
        buffer_ = mix64(counter_++);
        remaining_ = 64;
    }
    bool bit = buffer_ & 1;
    buffer_ >>= 1;
    --remaining_;
    return bit;
}

std::vector<GeneratorId> touched_generators(const Witness& w) {
    std::vector<GeneratorId> out;
    for (const auto& [key, entry] : w.entries)
        out.insert(out.end(), entry.gens.begin(), entry.gens.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SamplePoint sample_point(std::uint64_t seed, std::uint64_t trial,
                         const std::vector<GeneratorId>& gens) {
    std::vector<GeneratorId> sorted = gens;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    BitSource source(seed, trial);
    SamplePoint pt;
    pt.seed = seed;
    for (GeneratorId g : sorted)
        pt.assignment[g] = source.next_bit();
    return pt;
}

bool contains_point(const AlgebraElement& e, const SamplePoint& pt) {
    std::uint64_t index = 0;
    for (std::size_t j = 0; j < e.support().size(); ++j) {
        auto it = pt.assignment.find(e.support()[j]);
        if (it == pt.assignment.end())
            throw std::invalid_argument("contains_point: generator " +
                                        std::to_string(e.support()[j].value) +
                                        " has no sampled value");
        if (it->second)
            index |= std::uint64_t{1} << j;
    }
    return e.atom(index);
}

namespace {

int unique_cell_color(const std::vector<AlgebraElement>& cells, const SamplePoint& pt,
                      VertexPair pair, int L) {
    int color = 0;
    for (std::size_t m = 0; m < cells.size(); ++m) {
        if (!contains_point(cells[m], pt))
            continue;
        if (color != 0)
            throw std::runtime_error("color_at: cells " + std::to_string(color) + " and " +
                                     std::to_string(m + 1) + " of pair {" +
                                     std::to_string(pair.first) + "," +
                                     std::to_string(pair.second) + "} at level " +
                                     std::to_string(L) + " overlap at the sampled point");
        color = static_cast<int>(m + 1);
    }
    if (color == 0)
        throw std::runtime_error("color_at: no cell of pair {" +
                                 std::to_string(pair.first) + "," +
                                 std::to_string(pair.second) + "} at level " +
                                 std::to_string(L) + " contains the sampled point");
    return color;
}

} // namespace

int color_at(const SamplePoint& pt, const StatementParams& p, const Witness& w,
             VertexPair pair, int L) {
    return unique_cell_color(witness_cells(p, w, pair, L), pt, pair, L);
}

Coloring coloring_at(const SamplePoint& pt, const StatementParams& p, const Witness& w,
                     int L) {
    Coloring c;
    c.n = p.kappa;
    c.colors.resize(static_cast<std::size_t>(pair_count(p.kappa)));
    for (VertexPair pr : p.pairs())
        c.colors[static_cast<std::size_t>(pair_index(pr.first, pr.second, p.kappa))] =
            static_cast<unsigned>(color_at(pt, p, w, pr, L));
    return c;
}

TrajectoryReport limit_coloring(const SamplePoint& pt, const StatementParams& p,
                                const Witness& w) {
    TrajectoryReport report;
    for (VertexPair pr : p.pairs()) {
        PairTrajectory traj;
        traj.w = pr;
        for (int L = 1; L <= p.lambda; ++L)
            traj.colors.push_back(color_at(pt, p, w, pr, L));
        int stable = p.lambda;
        while (stable > 1 &&
               traj.colors[static_cast<std::size_t>(stable - 2)] ==
                   traj.colors[static_cast<std::size_t>(stable - 1)])
            --stable;
        traj.stabilized_at = (stable == p.lambda && p.lambda > 1) ? 0 : stable;
        report.pairs.push_back(std::move(traj));
    }
    return report;
}

RealizationEstimate estimate_realization_probability(const StatementParams& p,
                                                     const Witness& w,
                                                     const std::vector<int>& P, int L,
                                                     std::uint64_t trials,
                                                     std::uint64_t seed) {
    if (trials < 1)
        throw std::invalid_argument("estimate_realization_probability: trials must be >= 1");
    RealizationEstimate est;
    est.P = P;
    est.L = L;
    est.trials = trials;
    est.seed = seed;
    est.exact = c5_union_measure(p, w, P, L); // also validates P and L

    const int r = static_cast<int>(P.size());
    std::vector<std::vector<AlgebraElement>> cells; // per local pair of P
    std::vector<VertexPair> localPairs;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            VertexPair z{P[static_cast<std::size_t>(i)], P[static_cast<std::size_t>(j)]};
            localPairs.push_back(z);
            cells.push_back(witness_cells(p, w, z, L));
        }
    std::vector<GeneratorId> touched = touched_generators(w);

    Coloring sub;
    sub.n = r;
    sub.colors.resize(static_cast<std::size_t>(pair_count(r)));
    for (std::uint64_t t = 0; t < trials; ++t) {
        SamplePoint pt = sample_point(seed, t, touched);
        for (std::size_t e = 0; e < cells.size(); ++e)
            sub.colors[e] = static_cast<unsigned>(
                unique_cell_color(cells[e], pt, localPairs[e], L));
        if (realizes_identity(sub, p.identity))
            ++est.hits;
    }
    est.frequency = static_cast<double>(est.hits) / static_cast<double>(trials);
    return est;
}

} // namespace idforge
