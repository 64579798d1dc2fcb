#include "rsp/planner.hpp"

#include <algorithm>

namespace rsp {
namespace {

// Halves that share no variable multiply out instead of filtering.
double joined_estimate(const PlanNode& left, const PlanNode& right) {
    std::set<std::string> lv = left.output_variables();
    for (const std::string& v : right.output_variables())
        if (lv.count(v)) return std::min(left.estimate, right.estimate);
    return left.estimate * std::max(right.estimate, 1.0);
}

PlanNodePtr fold_sequence(const Ucg& ucg, const std::vector<int>& seq, std::size_t lo,
                          std::size_t hi) {
    if (hi - lo == 1) {
        const UcgVertex& v = ucg.vertices[seq[lo]];
        return make_scan(v.pattern, v.weight);
    }
    std::size_t mid = lo + (hi - lo + 1) / 2;
    PlanNodePtr left = fold_sequence(ucg, seq, lo, mid);
    PlanNodePtr right = fold_sequence(ucg, seq, mid, hi);
    double est = joined_estimate(*left, *right);
    return make_join(std::move(left), std::move(right), est);
}

PlanNodePtr fold_plans(const std::vector<PlanNodePtr>& plans, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return plans[lo];
    std::size_t mid = lo + (hi - lo + 1) / 2;
    PlanNodePtr left = fold_plans(plans, lo, mid);
    PlanNodePtr right = fold_plans(plans, mid, hi);
    double est = left->estimate * std::max(right->estimate, 1.0);
    return make_join(std::move(left), std::move(right), est);
}

}  // namespace

PlanNodePtr build_branch_plan(const Ucg& ucg, const PathCover& cover) {
    std::vector<PlanNodePtr> parts;
    parts.reserve(cover.sequences.size());
    for (const std::vector<int>& seq : cover.sequences)
        parts.push_back(fold_sequence(ucg, seq, 0, seq.size()));
    return fold_plans(parts, 0, parts.size());
}

LogicalPlan plan_from_ucgs(const std::vector<Ucg>& branch_ucgs, const QueryAlgebra& algebra) {
    std::vector<PlanNodePtr> branches;
    branches.reserve(branch_ucgs.size());
    for (const Ucg& ucg : branch_ucgs) branches.push_back(build_branch_plan(ucg, find_path_cover(ucg)));
    PlanNodePtr root =
        branches.size() == 1 ? std::move(branches.front()) : make_union(std::move(branches));
    return finish_plan(std::move(root), algebra.projection);
}

LogicalPlan static_plan(const QueryAlgebra& algebra) {
    std::vector<Ucg> ucgs;
    ucgs.reserve(algebra.branches.size());
    for (const Bgp& bgp : algebra.branches) {
        Ucg ucg = build_ucg(bgp);
        init_weights_static(ucg);
        ucgs.push_back(std::move(ucg));
    }
    return plan_from_ucgs(ucgs, algebra);
}

}  // namespace rsp
