#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rsp/query_ast.hpp"

namespace rsp {

struct PlanNode;
using PlanNodePtr = std::shared_ptr<const PlanNode>;

/// Bushy logical plan node. Leaves scan triple patterns; Join combines two
/// subtrees on their shared variables (cartesian when none); Union merges
/// branch sub-plans. Same-height sibling subtrees are data-independent.
struct PlanNode {
    enum class Kind { Scan, Join, Union };
    Kind kind = Kind::Scan;
    TriplePattern pattern;                 // Scan
    std::vector<PlanNodePtr> children;     // Join: 2, Union: >=2
    std::set<std::string> join_variables;  // Join only; empty => cartesian
    bool cartesian = false;
    double estimate = 0;                   // optimizer cost annotation
    int height = 0;                        // leaves are 0

    std::set<std::string> output_variables() const;
};

struct LogicalPlan {
    PlanNodePtr root;
    std::vector<Variable> projection;
    std::uint64_t plan_id = 0;  // hash of tree shape, estimates excluded

    std::vector<TriplePattern> leaves() const;
    /// Deterministic indented rendering: `join[vars] est=..` / `scan .. card=..`.
    std::string explain() const;
};

PlanNodePtr make_scan(TriplePattern tp, double estimate);
PlanNodePtr make_join(PlanNodePtr left, PlanNodePtr right, double estimate);
PlanNodePtr make_union(std::vector<PlanNodePtr> branches);

/// Stable across runs and platforms (FNV-1a over the structural rendering).
std::uint64_t plan_shape_hash(const PlanNodePtr& root);

LogicalPlan finish_plan(PlanNodePtr root, std::vector<Variable> projection);

}  // namespace rsp
