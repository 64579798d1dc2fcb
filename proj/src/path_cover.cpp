#include "rsp/path_cover.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "rsp/errors.hpp"

namespace rsp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Apsp {
    std::vector<std::vector<double>> dist;
    std::vector<std::vector<int>> next;  // next[i][j]: first hop from i toward j

    explicit Apsp(int n)
        : dist(n, std::vector<double>(n, kInf)), next(n, std::vector<int>(n, -1)) {
        for (int i = 0; i < n; ++i) {
            dist[i][i] = 0;
            next[i][i] = i;
        }
    }

    void relax_all() {
        const int n = static_cast<int>(dist.size());
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (dist[i][k] + dist[k][j] < dist[i][j]) {
                        dist[i][j] = dist[i][k] + dist[k][j];
                        next[i][j] = next[i][k];
                    }
    }

    std::vector<int> path(int from, int to) const {
        std::vector<int> out;
        if (next[from][to] < 0) return out;
        int cur = from;
        while (cur != to) {
            cur = next[cur][to];
            out.push_back(cur);
        }
        return out;  // excludes `from`, ends with `to`
    }
};

/// Greedy two-ended extension from one seed edge, in local indices.
std::deque<int> grow_from(const Apsp& apsp, int n, int seed_a, int seed_b, double& weight) {
    std::deque<int> path{seed_a, seed_b};
    std::vector<bool> visited(n, false);
    visited[seed_a] = visited[seed_b] = true;
    int covered = 2;

    while (covered < n) {
        // Cheapest unvisited vertex by distance to either endpoint; ties break
        // on smaller cost, then back attachment, then vertex order.
        int best_u = -1;
        bool best_front = false;
        double best_cost = kInf;
        for (int u = 0; u < n; ++u) {
            if (visited[u]) continue;
            double back_cost = apsp.dist[path.back()][u];
            double front_cost = apsp.dist[path.front()][u];
            if (back_cost < best_cost) {
                best_cost = back_cost;
                best_u = u;
                best_front = false;
            }
            if (front_cost < best_cost) {
                best_cost = front_cost;
                best_u = u;
                best_front = true;
            }
        }
        if (best_u < 0 || best_cost == kInf)
            throw DisconnectedGraph("unreachable vertex in component");

        int end = best_front ? path.front() : path.back();
        for (int step : apsp.path(end, best_u)) {
            if (visited[step]) continue;
            visited[step] = true;
            ++covered;
            if (best_front)
                path.push_front(step);
            else
                path.push_back(step);
        }
    }

    weight = 0;
    for (std::size_t i = 1; i < path.size(); ++i) weight += apsp.dist[path[i - 1]][path[i]];
    return path;
}

/// Intermediate-result estimate produced by folding one candidate sequence the
/// same way the planner does (balanced midpoint splits). Halves that share no
/// variable multiply out; shared halves keep the smaller estimate.
struct FoldSim {
    double est = 0;
    std::set<std::string> vars;
};

FoldSim simulate_fold(const Ucg& ucg, const std::vector<int>& seq, std::size_t lo,
                      std::size_t hi, double& cost) {
    if (hi - lo == 1) {
        const UcgVertex& v = ucg.vertices[seq[lo]];
        return {v.weight, v.pattern.variables()};
    }
    std::size_t mid = lo + (hi - lo + 1) / 2;
    FoldSim left = simulate_fold(ucg, seq, lo, mid, cost);
    FoldSim right = simulate_fold(ucg, seq, mid, hi, cost);
    bool shared = false;
    for (const std::string& v : right.vars)
        if (left.vars.count(v)) {
            shared = true;
            break;
        }
    FoldSim out;
    out.est = shared ? std::min(left.est, right.est) : left.est * right.est;
    out.vars = std::move(left.vars);
    out.vars.insert(right.vars.begin(), right.vars.end());
    cost += out.est;
    return out;
}

double fold_cost(const Ucg& ucg, const std::deque<int>& local_path,
                 const std::vector<int>& comp) {
    std::vector<int> seq;
    seq.reserve(local_path.size());
    for (int local : local_path) seq.push_back(comp[local]);
    double cost = 0;
    simulate_fold(ucg, seq, 0, seq.size(), cost);
    return cost;
}

std::vector<int> cover_component(const Ucg& ucg, const std::vector<int>& comp, double& weight) {
    const int n = static_cast<int>(comp.size());
    if (n == 1) return {comp[0]};

    std::vector<int> local_of(ucg.vertices.size(), -1);
    for (int i = 0; i < n; ++i) local_of[comp[i]] = i;

    Apsp apsp(n);
    std::vector<std::pair<double, std::pair<int, int>>> seeds;  // weight, local endpoints
    for (const UcgEdge& e : ucg.edges) {
        if (e.kind == EdgeKind::Cartesian) continue;
        int a = local_of[e.a], b = local_of[e.b];
        if (a < 0 || b < 0) continue;
        if (e.weight < apsp.dist[a][b]) {
            apsp.dist[a][b] = apsp.dist[b][a] = e.weight;
            apsp.next[a][b] = b;
            apsp.next[b][a] = a;
        }
        seeds.push_back({e.weight, {a, b}});
    }
    if (seeds.empty()) throw DisconnectedGraph("component has no joinable edge");
    apsp.relax_all();

    // The single-seed greedy is sensitive to where it starts; every edge is
    // tried as a seed. A sequence with minimal distance can still fold into a
    // plan whose midpoint pairs produce huge cross products, so candidates are
    // ranked first by the estimated cost of their folded plan and only then by
    // path distance; ties after that prefer the lighter, earlier seed edge.
    // Everything is deterministic.
    std::deque<int> best_path;
    double best_fold = kInf;
    double best_weight = kInf;
    double best_seed_weight = kInf;
    for (const auto& [seed_weight, endpoints] : seeds) {
        double w = 0;
        std::deque<int> path = grow_from(apsp, n, endpoints.first, endpoints.second, w);
        double fold = fold_cost(ucg, path, comp);
        bool better = fold < best_fold || (fold == best_fold && w < best_weight) ||
                      (fold == best_fold && w == best_weight && seed_weight < best_seed_weight);
        if (better) {
            best_fold = fold;
            best_weight = w;
            best_seed_weight = seed_weight;
            best_path = std::move(path);
        }
    }

    std::vector<int> global;
    global.reserve(best_path.size());
    for (int local : best_path) global.push_back(comp[local]);
    weight += best_weight;
    return global;
}

}  // namespace

PathCover find_path_cover(const Ucg& ucg) {
    const int n = static_cast<int>(ucg.vertices.size());
    // Components over the non-cartesian edges.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](auto&& self, int x) -> int {
        return parent[x] == x ? x : parent[x] = self(self, parent[x]);
    };
    for (const UcgEdge& e : ucg.edges)
        if (e.kind != EdgeKind::Cartesian) parent[find(find, e.a)] = find(find, e.b);

    std::map<int, std::vector<int>> by_root;
    for (int i = 0; i < n; ++i) by_root[find(find, i)].push_back(i);
    std::vector<std::vector<int>> comps;
    for (auto& [_, members] : by_root) comps.push_back(std::move(members));
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    PathCover cover;
    for (const std::vector<int>& comp : comps)
        cover.sequences.push_back(cover_component(ucg, comp, cover.total_weight));
    return cover;
}

}  // namespace rsp
