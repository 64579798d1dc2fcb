#pragma once

#include <vector>

#include "rsp/ucg.hpp"

namespace rsp {

/// Vertex sequences jointly covering every UCG vertex exactly once: one
/// sequence per variable-connected component (cartesian edges only link
/// sequences at plan level). Consecutive cost is the all-pairs shortest-path
/// distance, so total_weight is the summed distance along every sequence.
struct PathCover {
    std::vector<std::vector<int>> sequences;
    double total_weight = 0;
};

/// Floyd-Warshall all-pairs distances over the non-cartesian edges, then a
/// greedy path extension run once per candidate seed edge: repeatedly attach
/// the unvisited vertex with the cheapest distance to either endpoint,
/// splicing any unvisited vertices on the connecting shortest path. Candidate
/// sequences are ranked by the estimated cost of their midpoint-folded plan,
/// then by path distance, then by seed edge. Deterministic.
PathCover find_path_cover(const Ucg& ucg);

}  // namespace rsp
