#include "rsp/execute.hpp"

#include <atomic>
#include <future>
#include <mutex>

#include "rsp/errors.hpp"

namespace rsp {
namespace {

struct ExecContext {
    const std::vector<Triple>& dataset;
    const std::vector<Variable>& projection;
    const ExecOptions& options;
    ExecTrace* trace;
    std::mutex trace_mutex;
    std::atomic<int> spare_workers;
};

void record(ExecContext& ctx, std::string label, int height, std::size_t card, bool is_operator) {
    if (!ctx.trace || !ctx.options.counting) return;
    std::lock_guard lock(ctx.trace_mutex);
    ctx.trace->nodes.push_back({std::move(label), height, card, is_operator});
}

BindingTable evaluate(ExecContext& ctx, const PlanNodePtr& node) {
    switch (node->kind) {
        case PlanNode::Kind::Scan: {
            BindingTable table;
            if (ctx.options.scan_cache) {
                auto it = ctx.options.scan_cache->find(node->pattern.key());
                if (it != ctx.options.scan_cache->end()) {
                    table = *it->second;
                } else {
                    table = scan_pattern(ctx.dataset, node->pattern);
                    ctx.options.scan_cache->emplace(
                        node->pattern.key(), std::make_shared<const BindingTable>(table));
                }
            } else {
                table = scan_pattern(ctx.dataset, node->pattern);
            }
            record(ctx, "scan " + node->pattern.key(), node->height, table.cardinality(), false);
            return table;
        }
        case PlanNode::Kind::Join: {
            BindingTable left, right;
            // Children are data-independent; fan the first out when a worker
            // is spare.
            if (ctx.spare_workers.fetch_sub(1) > 0) {
                auto fut = std::async(std::launch::async,
                                      [&] { return evaluate(ctx, node->children[0]); });
                right = evaluate(ctx, node->children[1]);
                left = fut.get();
            } else {
                left = evaluate(ctx, node->children[0]);
                right = evaluate(ctx, node->children[1]);
            }
            ctx.spare_workers.fetch_add(1);
            BindingTable out = hash_join(left, right);
            record(ctx, "join", node->height, out.cardinality(), true);
            return out;
        }
        case PlanNode::Kind::Union: {
            BindingTable out;
            bool first = true;
            for (const PlanNodePtr& child : node->children) {
                // Branch schemas differ; align them on the projection list.
                BindingTable branch = project(evaluate(ctx, child), ctx.projection);
                if (first) {
                    out = std::move(branch);
                    first = false;
                } else {
                    out = union_tables(out, branch);
                }
            }
            record(ctx, "union", node->height, out.cardinality(), true);
            return out;
        }
    }
    throw Error("unreachable plan node kind");
}

}  // namespace

BindingTable execute_plan(const LogicalPlan& plan, const std::vector<Triple>& dataset,
                          const ExecOptions& options, ExecTrace* trace) {
    if (!plan.root) throw Error("execute_plan: empty plan");
    ExecContext ctx{dataset, plan.projection, options, trace, {}, options.workers - 1};
    BindingTable result = evaluate(ctx, plan.root);
    // Union branches may expose variables in different orders; project fixes
    // the output schema to the query's projection list.
    return project(result, plan.projection);
}

}  // namespace rsp
