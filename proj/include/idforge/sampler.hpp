#pragma once

#include "idforge/statement.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace idforge {

// Deterministic stream of fair bits: a counter-based 64-bit mixer keyed by
// (seed, stream), so trial i of a run always sees the same bits regardless of
// evaluation order or threading.
class BitSource {
public:
    BitSource(std::uint64_t seed, std::uint64_t stream);
    bool next_bit();

private:
    std::uint64_t counter_;
    std::uint64_t buffer_ = 0;
    int remaining_ = 0;
};

// A 0/1 assignment to the generators a witness touches.
struct SamplePoint {
    std::map<GeneratorId, bool> assignment;
    std::uint64_t seed = 0;
};

// Sorted list of every generator mentioned by the witness.
std::vector<GeneratorId> touched_generators(const Witness& w);

// One independent fair bit per generator, reproducible from (seed, trial) and
// independent of the order the generators are listed in.
SamplePoint sample_point(std::uint64_t seed, std::uint64_t trial,
                         const std::vector<GeneratorId>& gens);

// Membership of the point in the element; the assignment must cover the
// element's support.
bool contains_point(const AlgebraElement& e, const SamplePoint& pt);

// The unique color m in 1..g(L) whose cell at (pair, L) contains the point.
// Throws std::runtime_error naming the slot when no cell or several cells
// contain it (the cells then fail to partition the space).
int color_at(const SamplePoint& pt, const StatementParams& p, const Witness& w,
             VertexPair pair, int L);

// The level-L coloring of all pairs of the vertex set at the point.
Coloring coloring_at(const SamplePoint& pt, const StatementParams& p, const Witness& w,
                     int L);

struct PairTrajectory {
    VertexPair w;
    std::vector<int> colors; // c_L(w) for L = 1..lambda
    // Least N whose tail c_N = c_{N+1} = ... = c_lambda is constant; 0 when
    // the colors still flip at the last observed step (lambda > 1 and
    // c_{lambda-1} != c_lambda), meaning no stabilization was observed.
    int stabilized_at = 0;
};

struct TrajectoryReport {
    std::vector<PairTrajectory> pairs;
};

// Color trajectories across levels at one point, with stabilization levels.
TrajectoryReport limit_coloring(const SamplePoint& pt, const StatementParams& p,
                                const Witness& w);

struct RealizationEstimate {
    std::vector<int> P;
    int L = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    std::uint64_t seed = 0;
    double frequency = 0.0; // hits / trials
    DyadicMeasure exact;    // the measured union the frequency estimates
};

// Fraction of sampled points whose level-L coloring restricted to P realizes
// the identity, next to the exact measure of the realizing union.
RealizationEstimate estimate_realization_probability(const StatementParams& p,
                                                     const Witness& w,
                                                     const std::vector<int>& P, int L,
                                                     std::uint64_t trials,
                                                     std::uint64_t seed);

} // namespace idforge
