#pragma once

#include <optional>
#include <vector>

namespace idforge {

// Satisfiability of a CNF over variables 1..varCount, clauses given as lists
// of nonzero literals (positive = variable true).  Conflict-driven search:
// two watched literals, first-UIP clause learning, non-chronological
// backjumping, no restarts.  Branching always picks the lowest unassigned
// variable and tries false first, so the returned assignment (indexed by
// variable, entry 0 unused) is deterministic.  Sized for the instances the
// encoder produces, not as a general-purpose solver.
std::optional<std::vector<bool>> solve_cnf(int varCount,
                                           const std::vector<std::vector<int>>& clauses);

} // namespace idforge
