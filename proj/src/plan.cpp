#include "rsp/plan.hpp"

#include <algorithm>
#include <cstdio>

#include "rsp/term.hpp"

namespace rsp {
namespace {

void collect_leaves(const PlanNodePtr& node, std::vector<TriplePattern>& out) {
    if (!node) return;
    if (node->kind == PlanNode::Kind::Scan) {
        out.push_back(node->pattern);
        return;
    }
    for (const PlanNodePtr& c : node->children) collect_leaves(c, out);
}

void render(const PlanNodePtr& node, int depth, bool with_estimates, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    switch (node->kind) {
        case PlanNode::Kind::Scan: {
            out += "scan ";
            out += node->pattern.key();
            if (with_estimates) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " card=%g", node->estimate);
                out += buf;
            }
            out += '\n';
            return;
        }
        case PlanNode::Kind::Join: {
            out += node->cartesian ? "join[cartesian]" : "join[";
            if (!node->cartesian) {
                bool first = true;
                for (const std::string& v : node->join_variables) {
                    if (!first) out += ',';
                    out += '?';
                    out += v;
                    first = false;
                }
                out += ']';
            }
            if (with_estimates) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " est=%g", node->estimate);
                out += buf;
            }
            out += '\n';
            break;
        }
        case PlanNode::Kind::Union:
            out += "union\n";
            break;
    }
    for (const PlanNodePtr& c : node->children) render(c, depth + 1, with_estimates, out);
}

}  // namespace

std::set<std::string> PlanNode::output_variables() const {
    if (kind == Kind::Scan) return pattern.variables();
    std::set<std::string> out;
    for (const PlanNodePtr& c : children)
        for (const std::string& v : c->output_variables()) out.insert(v);
    return out;
}

std::vector<TriplePattern> LogicalPlan::leaves() const {
    std::vector<TriplePattern> out;
    collect_leaves(root, out);
    return out;
}

std::string LogicalPlan::explain() const {
    std::string out;
    if (root) render(root, 0, /*with_estimates=*/true, out);
    return out;
}

PlanNodePtr make_scan(TriplePattern tp, double estimate) {
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanNode::Kind::Scan;
    node->pattern = std::move(tp);
    node->estimate = estimate;
    node->height = 0;
    return node;
}

PlanNodePtr make_join(PlanNodePtr left, PlanNodePtr right, double estimate) {
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanNode::Kind::Join;
    std::set<std::string> lv = left->output_variables();
    for (const std::string& v : right->output_variables())
        if (lv.contains(v)) node->join_variables.insert(v);
    node->cartesian = node->join_variables.empty();
    node->estimate = estimate;
    node->height = std::max(left->height, right->height) + 1;
    node->children = {std::move(left), std::move(right)};
    return node;
}

PlanNodePtr make_union(std::vector<PlanNodePtr> branches) {
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanNode::Kind::Union;
    int h = 0;
    for (const PlanNodePtr& b : branches) h = std::max(h, b->height);
    node->height = h + 1;
    node->children = std::move(branches);
    return node;
}

std::uint64_t plan_shape_hash(const PlanNodePtr& root) {
    std::string shape;
    if (root) render(root, 0, /*with_estimates=*/false, shape);
    return fnv1a(kFnvSeed, shape);
}

LogicalPlan finish_plan(PlanNodePtr root, std::vector<Variable> projection) {
    LogicalPlan plan;
    plan.plan_id = plan_shape_hash(root);
    plan.root = std::move(root);
    plan.projection = std::move(projection);
    return plan;
}

}  // namespace rsp
