#include "rsp/ucg.hpp"

#include <algorithm>
#include <numeric>

#include "rsp/errors.hpp"

namespace rsp {
namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

const PatternTerm& position_of(const TriplePattern& tp, StarPosition pos) {
    switch (pos) {
        case StarPosition::Subject: return tp.subject;
        case StarPosition::Predicate: return tp.predicate;
        default: return tp.object;
    }
}

/// Shared edge-weight pass of the run-time weighting: star groups first, then
/// the remaining non-star / cartesian edges.
std::vector<double> assign_runtime_edge_weights(Ucg& ucg) {
    std::vector<StarGroup> groups = classify_stars(ucg);
    std::vector<double> bounds;
    bounds.reserve(groups.size());
    for (StarGroup& group : groups) {
        group.upper_bound = star_upper_bound(ucg, group);
        bounds.push_back(group.upper_bound);
        for (UcgEdge& e : ucg.edges) {
            if (e.visited || e.kind == EdgeKind::Cartesian) continue;
            bool a_in = std::binary_search(group.members.begin(), group.members.end(), e.a);
            bool b_in = std::binary_search(group.members.begin(), group.members.end(), e.b);
            if (a_in && b_in && e.join_variables.contains(group.variable)) {
                e.kind = EdgeKind::Star;
                e.weight = star_join_weight(ucg, group, e);
                e.visited = true;
            }
        }
    }
    for (UcgEdge& e : ucg.edges) {
        if (e.visited) continue;
        e.weight = non_star_join_weight(ucg, e);
        e.visited = true;
    }
    return bounds;
}

}  // namespace

int Ucg::edge_between(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].a == a && edges[i].b == b) return static_cast<int>(i);
    return -1;
}

bool Ucg::all_visited() const {
    for (const UcgVertex& v : vertices)
        if (!v.visited) return false;
    for (const UcgEdge& e : edges)
        if (!e.visited) return false;
    return true;
}

void Ucg::reset_visits() {
    for (UcgVertex& v : vertices) v.visited = false;
    for (UcgEdge& e : edges) {
        e.visited = false;
        if (e.kind == EdgeKind::Star) e.kind = EdgeKind::NonStar;
    }
}

Ucg build_ucg(const Bgp& bgp) {
    if (bgp.empty()) throw Error("build_ucg: empty BGP");
    Ucg ucg;
    ucg.vertices.reserve(bgp.size());
    for (const TriplePattern& tp : bgp) ucg.vertices.push_back({tp, tp.key()});
    std::sort(ucg.vertices.begin(), ucg.vertices.end(),
              [](const UcgVertex& a, const UcgVertex& b) { return a.key < b.key; });

    const int n = static_cast<int>(ucg.vertices.size());
    UnionFind components(n);
    for (int a = 0; a < n; ++a) {
        std::set<std::string> va = ucg.vertices[a].pattern.variables();
        for (int b = a + 1; b < n; ++b) {
            std::set<std::string> shared;
            for (const std::string& v : ucg.vertices[b].pattern.variables())
                if (va.contains(v)) shared.insert(v);
            if (!shared.empty()) {
                ucg.edges.push_back({a, b, std::move(shared), 0, EdgeKind::NonStar, false});
                components.unite(a, b);
            }
        }
    }

    // Chain disconnected components together with cartesian edges, in order of
    // each component's smallest vertex.
    std::map<int, int> first_of_component;  // root -> smallest vertex
    for (int i = 0; i < n; ++i) first_of_component.try_emplace(components.find(i), i);
    std::vector<int> anchors;
    for (const auto& [_, v] : first_of_component) anchors.push_back(v);
    std::sort(anchors.begin(), anchors.end());
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        int a = anchors[i - 1], b = anchors[i];
        if (a > b) std::swap(a, b);
        ucg.edges.push_back({a, b, {}, 0, EdgeKind::Cartesian, false});
    }
    return ucg;
}

std::vector<StarGroup> classify_stars(const Ucg& ucg) {
    std::vector<StarGroup> groups;
    const int n = static_cast<int>(ucg.vertices.size());
    for (StarPosition pos : {StarPosition::Subject, StarPosition::Predicate,
                             StarPosition::Object}) {
        std::map<std::string, std::vector<int>> by_var;
        for (int i = 0; i < n; ++i) {
            if (const Variable* v = as_variable(position_of(ucg.vertices[i].pattern, pos)))
                by_var[v->name].push_back(i);
        }
        for (const auto& [var, members] : by_var) {
            if (members.size() < 2) continue;
            StarGroup group;
            group.variable = var;
            group.position = pos;
            group.members = members;
            for (int m : members)
                if (!is_variable(ucg.vertices[m].pattern.object)) group.bounded_object = true;
            groups.push_back(std::move(group));
        }
    }
    return groups;
}

void init_weights_static(Ucg& ucg) {
    for (UcgVertex& v : ucg.vertices) {
        const bool s = !is_variable(v.pattern.subject);
        const bool p = !is_variable(v.pattern.predicate);
        const bool o = !is_variable(v.pattern.object);
        double w;
        if (s && p && o) w = 1;
        else if (s && o) w = 2;
        else if (s && p) w = 3;
        else if (p && o) w = 4;
        else if (o) w = 5;
        else if (s) w = 6;
        else if (p) w = 7;
        else w = 8;
        v.weight = w;
        v.visited = true;
    }
    std::vector<StarGroup> groups = classify_stars(ucg);
    for (UcgEdge& e : ucg.edges) {
        if (e.kind == EdgeKind::Cartesian) {
            e.weight = ucg.vertices[e.a].weight * ucg.vertices[e.b].weight;
            e.visited = true;
            continue;
        }
        double w = std::min(ucg.vertices[e.a].weight, ucg.vertices[e.b].weight);
        for (const StarGroup& g : groups) {
            if (std::binary_search(g.members.begin(), g.members.end(), e.a) &&
                std::binary_search(g.members.begin(), g.members.end(), e.b) &&
                e.join_variables.contains(g.variable)) {
                e.kind = EdgeKind::Star;
                w /= 2;
                break;
            }
        }
        e.weight = w;
        e.visited = true;
    }
}

double star_upper_bound(const Ucg& ucg, const StarGroup& group) {
    double bound = ucg.vertices[group.members.front()].weight;
    for (int m : group.members) bound = std::min(bound, ucg.vertices[m].weight);
    if (group.bounded_object) bound *= 0.1;
    return bound;
}

double star_join_weight(const Ucg& ucg, const StarGroup& group, const UcgEdge& edge) {
    double w = std::min(ucg.vertices[edge.a].weight, ucg.vertices[edge.b].weight);
    return std::min(w, group.upper_bound);
}

double non_star_join_weight(const Ucg& ucg, const UcgEdge& edge) {
    if (edge.kind == EdgeKind::Cartesian)
        return ucg.vertices[edge.a].weight * ucg.vertices[edge.b].weight;
    return std::min(ucg.vertices[edge.a].weight, ucg.vertices[edge.b].weight);
}

StatsSnapshot init_weights_runtime(Ucg& ucg, const std::vector<Triple>& window_data,
                                   ScanCache& cache, std::int64_t window_index) {
    ucg.reset_visits();
    StatsSnapshot stats;
    stats.window_index = window_index;
    for (UcgVertex& v : ucg.vertices) {
        auto it = cache.find(v.key);
        if (it == cache.end()) {
            it = cache.emplace(v.key, std::make_shared<const BindingTable>(
                                          scan_pattern(window_data, v.pattern)))
                     .first;
        }
        v.weight = static_cast<double>(it->second->cardinality());
        v.visited = true;
        stats.pattern_cardinalities[v.key] = v.weight;
    }
    stats.star_upper_bounds = assign_runtime_edge_weights(ucg);
    stats.edge_weights.reserve(ucg.edges.size());
    for (const UcgEdge& e : ucg.edges) stats.edge_weights.push_back(e.weight);
    return stats;
}

void apply_stats(Ucg& ucg, const StatsSnapshot& stats) {
    ucg.reset_visits();
    for (UcgVertex& v : ucg.vertices) {
        auto it = stats.pattern_cardinalities.find(v.key);
        v.weight = it == stats.pattern_cardinalities.end() ? 0 : it->second;
        v.visited = true;
    }
    assign_runtime_edge_weights(ucg);
}

}  // namespace rsp
