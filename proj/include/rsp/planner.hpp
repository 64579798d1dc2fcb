#pragma once

#include "rsp/path_cover.hpp"
#include "rsp/plan.hpp"
#include "rsp/ucg.hpp"

namespace rsp {

/// Folds a path cover into a bushy join tree: each sequence splits recursively
/// at its midpoint (so same-height joins are independent), and the sequences
/// of cartesian-linked components meet at the root.
PlanNodePtr build_branch_plan(const Ucg& ucg, const PathCover& cover);

/// Plans every branch of the algebra from already-weighted branch UCGs and
/// wires them under a union root when there is more than one.
LogicalPlan plan_from_ucgs(const std::vector<Ucg>& branch_ucgs, const QueryAlgebra& algebra);

/// Compile-time plan: heuristic weights only, no data.
LogicalPlan static_plan(const QueryAlgebra& algebra);

}  // namespace rsp
