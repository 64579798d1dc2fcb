#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsp/adaptivity.hpp"
#include "rsp/generator.hpp"
#include "rsp/query_ast.hpp"
#include "rsp/registry.hpp"
#include "rsp/topic_log.hpp"

namespace rsp {

struct EngineConfig {
    enum class Mode { Static, Adaptive, Auto };

    int worker_count = 1;
    std::vector<std::string> topics;  // empty: derived from the source
    int partitions = 4;
    TriggerConfig trigger;
    double epsilon = 0.7;
    double idle_margin = 2.0;
    bool simulated_clock = true;
    std::uint64_t seed = 1;
    Mode mode = Mode::Auto;
    // Simulated execution-cost model: tuples processed per simulated ms.
    double work_rate_tuples_per_ms = 100.0;
    // Test hook: when > 0, replaces the measured backward-planning time.
    double forced_planning_ms = 0;
    double rate_tps = 1000;  // generator rate
    int sensor_count = 10;

    /// Flat `key = value` lines; '#' comments. Unknown keys are rejected.
    static EngineConfig from_text(const std::string& text);
    static EngineConfig from_file(const std::string& path);
    std::string echo() const;
};

/// Stream source: either a pre-parsed replay stream or a generator schedule.
struct StreamSource {
    enum class Kind { Replay, Generate };
    Kind kind = Kind::Replay;
    std::vector<TimedTriple> events;  // Replay: parsed replay lines
    MixSchedule schedule;             // Generate

    static StreamSource replay_file(const std::string& path);
    static StreamSource replay_events(std::vector<TimedTriple> events);
    static StreamSource generate(MixSchedule schedule);
};

struct QueryRun {
    std::string query_id;
    std::vector<MetricsRecord> records;
    std::string static_explain;
    std::string final_explain;
    std::size_t max_pending_batches = 0;

    std::string metrics_csv() const;
};

struct RunReport {
    std::vector<QueryRun> queries;
    std::uint64_t seed = 0;
    std::string config_echo;
    std::int64_t wall_ms = 0;  // excluded from every CSV
    std::uint64_t source_emitted_triples = 0;

    const QueryRun& query(const std::string& id) const;
};

/// Runs every query for exactly `duration_windows` windows over the source.
/// Per query and window: seal the window, route it static or adaptive through
/// the trigger, execute, record metrics, then let the decision maker pick the
/// next window's strategy.
RunReport run_engine(const EngineConfig& config, const std::vector<ContinuousQuerySpec>& specs,
                     const StreamSource& source, int duration_windows);

}  // namespace rsp
