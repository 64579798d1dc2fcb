#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsp/execute.hpp"
#include "rsp/plan.hpp"
#include "rsp/planner.hpp"
#include "rsp/query_ast.hpp"
#include "rsp/ucg.hpp"

namespace rsp {

struct TriggerConfig {
    std::uint64_t triple_count_threshold = 10000;
    double memory_fraction_threshold = 0.5;     // of heap_budget_bytes
    std::uint64_t heap_budget_bytes = 1ULL << 30;
    double mean_triple_size_bytes = 120;        // input size estimator
};

/// True routes the window to the adaptive path: the workload crossed the
/// triple-count threshold or the estimated input size crossed the configured
/// fraction of the heap budget.
bool should_adapt(const TriggerConfig& cfg, std::uint64_t window_input_count,
                  double estimated_bytes);

inline double estimate_input_bytes(const TriggerConfig& cfg, std::uint64_t count) {
    return cfg.mean_triple_size_bytes * static_cast<double>(count);
}

enum class Strategy { Static, Backward, Forward };

const char* strategy_name(Strategy s);

/// gamma < epsilon selects Backward (plan the next window during idle time);
/// otherwise Forward (re-plan live while executing the next window). The
/// boundary gamma == epsilon goes Forward.
Strategy decide(double gamma, double epsilon);

struct MetricsRecord {
    std::int64_t window_index = 0;
    std::uint64_t input_triples = 0;
    std::int64_t exec_ms = 0;
    std::int64_t idle_ms = 0;
    double gamma = 0;
    Strategy strategy = Strategy::Static;
    std::uint64_t plan_id = 0;
    double throughput_tps = 0;
    std::int64_t latency_ms = 0;
    bool adapted = false;
    std::uint64_t late_dropped = 0;
    // Not serialized: per-window operator output total, for cost comparisons.
    std::uint64_t intermediate_tuples = 0;
    std::int64_t wall_exec_ms = 0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRecord& r);

/// Per-query adaptation state. The pending plan is present exactly when the
/// last decision was Backward and the idle-slot planning finished in budget.
struct DecisionState {
    double epsilon = 0.7;
    std::int64_t update_frequency_ms = 0;  // the slide
    std::int64_t last_exec_ms = 0;
    std::int64_t last_idle_ms = 0;
    double gamma = 0;
    Strategy strategy = Strategy::Forward;  // first adaptive window plans live
    std::optional<LogicalPlan> pending_plan;
    // Idle-budget estimate: moving average of planning time, applied with a
    // 2x margin before committing to backward planning.
    double planning_avg_ms = 0;
    double idle_margin = 2.0;

    void observe_planning_time(double ms) {
        planning_avg_ms = planning_avg_ms == 0 ? ms : 0.8 * planning_avg_ms + 0.2 * ms;
    }
    bool idle_budget_allows(std::int64_t idle_ms) const {
        return planning_avg_ms * idle_margin <= static_cast<double>(idle_ms);
    }
};

/// Query-scoped planning helper holding the per-branch UCG skeletons.
class AdaptivePlanner {
public:
    explicit AdaptivePlanner(const QueryAlgebra& algebra);

    /// B-AQP: re-weights the UCGs from a previous window's statistics (no data
    /// access) and derives the next window's plan.
    LogicalPlan backward_update(const std::vector<StatsSnapshot>& branch_stats);

    /// F-AQP: exact weighting against the live window (scans cached into
    /// `cache` for reuse by the plan's leaves), then plan construction.
    LogicalPlan forward_plan(const std::vector<Triple>& window_data, ScanCache& cache,
                             std::int64_t window_index, std::vector<StatsSnapshot>* stats_out);

    const std::vector<Ucg>& branch_ucgs() const { return ucgs_; }

private:
    QueryAlgebra algebra_;
    std::vector<Ucg> ucgs_;
};

}  // namespace rsp
