#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rsp/binding_table.hpp"
#include "rsp/query_ast.hpp"

namespace rsp {

enum class EdgeKind { NonStar, Star, Cartesian };

struct UcgVertex {
    TriplePattern pattern;
    std::string key;      // canonical pattern serialization, the tie-break order
    double weight = 0;    // cardinality estimate
    bool visited = false;
};

struct UcgEdge {
    int a = 0;
    int b = 0;  // a < b
    std::set<std::string> join_variables;  // empty for cartesian edges
    double weight = 0;
    EdgeKind kind = EdgeKind::NonStar;
    bool visited = false;
};

/// Weighted undirected join graph of a BGP: one vertex per triple pattern
/// (key-sorted), one edge per variable-sharing pair. Disconnected components
/// are linked by cartesian edges so the graph is always connected.
struct Ucg {
    std::vector<UcgVertex> vertices;
    std::vector<UcgEdge> edges;

    int edge_between(int a, int b) const;
    bool all_visited() const;
    void reset_visits();
};

enum class StarPosition { Subject, Predicate, Object };

/// Maximal group of >=2 patterns pairwise joined on one variable occupying the
/// same position in each of them.
struct StarGroup {
    std::string variable;
    StarPosition position = StarPosition::Subject;
    std::vector<int> members;      // vertex indices, ascending
    bool bounded_object = false;   // some member has a constant object
    double upper_bound = 0;        // output-cardinality bound, set by weighting
};

Ucg build_ucg(const Bgp& bgp);

std::vector<StarGroup> classify_stars(const Ucg& ucg);

/// Data-free heuristic weights: vertices ranked by which positions are bound,
/// edge weight = min of its endpoints, halved inside star groups, product for
/// cartesian edges.
void init_weights_static(Ucg& ucg);

/// Output-cardinality bound for a star group whose member weights are set:
/// min member weight, scaled by 0.1 when the group has a bounded object.
double star_upper_bound(const Ucg& ucg, const StarGroup& group);

/// Edge weight inside a star group: min of the endpoint weights, capped at the
/// group's upper bound.
double star_join_weight(const Ucg& ucg, const StarGroup& group, const UcgEdge& edge);

/// Min of the endpoint weights; cartesian edges get the product instead.
double non_star_join_weight(const Ucg& ucg, const UcgEdge& edge);

/// Per-window exact statistics gathered while weighting the UCG.
struct StatsSnapshot {
    std::int64_t window_index = 0;
    std::map<std::string, double> pattern_cardinalities;  // pattern key -> Card
    std::vector<double> star_upper_bounds;                // by classify_stars order
    std::vector<double> edge_weights;                     // by edge index
};

using ScanCache = std::map<std::string, std::shared_ptr<const BindingTable>>;

/// Exact run-time weighting: every vertex weight is the exact scan cardinality
/// over the window dataset (scans cached for reuse as plan leaves), then star
/// and non-star edges are weighted until everything is visited.
StatsSnapshot init_weights_runtime(Ucg& ucg, const std::vector<Triple>& window_data,
                                   ScanCache& cache, std::int64_t window_index);

/// Re-weights from a previous window's snapshot without touching any data.
void apply_stats(Ucg& ucg, const StatsSnapshot& stats);

}  // namespace rsp
