#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsp/binding_table.hpp"
#include "rsp/plan.hpp"
#include "rsp/ucg.hpp"

namespace rsp {

/// Per-node exact output cardinalities recorded when counting is on.
struct ExecTrace {
    struct NodeCount {
        std::string label;
        int height = 0;
        std::size_t cardinality = 0;
        bool is_operator = false;  // join/union as opposed to scan
    };
    std::vector<NodeCount> nodes;

    /// Total tuples produced by join/union operators (scans excluded).
    std::size_t intermediate_tuples() const {
        std::size_t n = 0;
        for (const NodeCount& c : nodes)
            if (c.is_operator) n += c.cardinality;
        return n;
    }
};

struct ExecOptions {
    bool counting = true;
    ScanCache* scan_cache = nullptr;  // leaves reuse cached window scans
    int workers = 1;                  // same-height fan-out bound
};

/// Bottom-up evaluation of a logical plan over the window dataset, ending with
/// projection onto the plan's projection list. Same-height independent
/// subtrees may evaluate concurrently; results are identical regardless of
/// worker count.
BindingTable execute_plan(const LogicalPlan& plan, const std::vector<Triple>& dataset,
                          const ExecOptions& options = {}, ExecTrace* trace = nullptr);

}  // namespace rsp
