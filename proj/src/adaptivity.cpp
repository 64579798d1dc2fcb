#include "rsp/adaptivity.hpp"

#include <cstdio>

namespace rsp {

bool should_adapt(const TriggerConfig& cfg, std::uint64_t window_input_count,
                  double estimated_bytes) {
    if (window_input_count >= cfg.triple_count_threshold) return true;
    return estimated_bytes / static_cast<double>(cfg.heap_budget_bytes) >=
           cfg.memory_fraction_threshold;
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Static: return "Static";
        case Strategy::Backward: return "Backward";
        case Strategy::Forward: return "Forward";
    }
    return "?";
}

Strategy decide(double gamma, double epsilon) {
    return gamma < epsilon ? Strategy::Backward : Strategy::Forward;
}

std::string metrics_csv_header() {
    return "window,input_triples,exec_ms,idle_ms,gamma,strategy,plan_id,throughput_tps,"
           "latency_ms,adapted,late_dropped";
}

std::string metrics_csv_row(const MetricsRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%lld,%llu,%lld,%lld,%.4f,%s,%llu,%.2f,%lld,%d,%llu",
                  static_cast<long long>(r.window_index),
                  static_cast<unsigned long long>(r.input_triples),
                  static_cast<long long>(r.exec_ms), static_cast<long long>(r.idle_ms), r.gamma,
                  strategy_name(r.strategy), static_cast<unsigned long long>(r.plan_id),
                  r.throughput_tps, static_cast<long long>(r.latency_ms), r.adapted ? 1 : 0,
                  static_cast<unsigned long long>(r.late_dropped));
    return buf;
}

AdaptivePlanner::AdaptivePlanner(const QueryAlgebra& algebra) : algebra_(algebra) {
    ucgs_.reserve(algebra.branches.size());
    for (const Bgp& bgp : algebra.branches) ucgs_.push_back(build_ucg(bgp));
}

LogicalPlan AdaptivePlanner::backward_update(const std::vector<StatsSnapshot>& branch_stats) {
    for (std::size_t i = 0; i < ucgs_.size(); ++i)
        apply_stats(ucgs_[i], branch_stats.at(i));
    return plan_from_ucgs(ucgs_, algebra_);
}

LogicalPlan AdaptivePlanner::forward_plan(const std::vector<Triple>& window_data,
                                          ScanCache& cache, std::int64_t window_index,
                                          std::vector<StatsSnapshot>* stats_out) {
    std::vector<StatsSnapshot> stats;
    stats.reserve(ucgs_.size());
    for (Ucg& ucg : ucgs_)
        stats.push_back(init_weights_runtime(ucg, window_data, cache, window_index));
    LogicalPlan plan = plan_from_ucgs(ucgs_, algebra_);
    if (stats_out) *stats_out = std::move(stats);
    return plan;
}

}  // namespace rsp
