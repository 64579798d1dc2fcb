#include "rsp/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "rsp/errors.hpp"
#include "rsp/execute.hpp"
#include "rsp/ntriples.hpp"
#include "rsp/planner.hpp"
#include "rsp/window.hpp"

namespace rsp {
namespace {

std::int64_t now_wall_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

struct QueryState {
    ContinuousQuerySpec spec;
    BatchAssembler assembler;
    LogicalPlan static_plan_;
    AdaptivePlanner planner;
    DecisionState decision;
    std::map<std::string, OffsetMap> offsets;  // per topic
    QueryRun run;
    int windows_done = 0;
    std::uint64_t late_dropped_seen = 0;
    std::uint64_t prev_plan_id = 0;
    std::vector<StatsSnapshot> last_stats;
    bool have_stats = false;

    QueryState(ContinuousQuerySpec s)
        : spec(std::move(s)),
          assembler(spec.window_ms, spec.slide_ms, spec.batch_ms),
          static_plan_(static_plan(spec.algebra)),
          planner(spec.algebra) {
        run.query_id = spec.query_id;
        run.static_explain = static_plan_.explain();
        prev_plan_id = static_plan_.plan_id;
        decision.update_frequency_ms = spec.slide_ms;
    }
};

std::vector<StatsSnapshot> snapshots_from_cache(const AdaptivePlanner& planner,
                                                const ScanCache& cache,
                                                std::int64_t window_index) {
    std::vector<StatsSnapshot> out;
    for (const Ucg& ucg : planner.branch_ucgs()) {
        StatsSnapshot s;
        s.window_index = window_index;
        for (const UcgVertex& v : ucg.vertices) {
            auto it = cache.find(v.key);
            s.pattern_cardinalities[v.key] =
                it == cache.end() ? 0.0 : static_cast<double>(it->second->cardinality());
        }
        out.push_back(std::move(s));
    }
    return out;
}

void process_window(const EngineConfig& config, QueryState& q, const WindowInstance& w) {
    const std::vector<Triple> dataset = union_window(w);
    const std::uint64_t input = dataset.size();

    bool adapt;
    switch (config.mode) {
        case EngineConfig::Mode::Static: adapt = false; break;
        case EngineConfig::Mode::Adaptive: adapt = true; break;
        default:
            adapt = should_adapt(config.trigger, input,
                                 estimate_input_bytes(config.trigger, input));
    }

    ScanCache cache;
    ExecTrace trace;
    ExecOptions options{true, &cache, config.worker_count};
    Strategy strategy = Strategy::Static;
    LogicalPlan plan;

    const std::int64_t wall_start = now_wall_ms();
    if (!adapt) {
        plan = q.static_plan_;
        q.have_stats = false;
    } else if (q.decision.pending_plan) {
        strategy = Strategy::Backward;
        plan = std::move(*q.decision.pending_plan);
        q.decision.pending_plan.reset();
    } else {
        strategy = Strategy::Forward;
        plan = q.planner.forward_plan(dataset, cache, w.window_index, &q.last_stats);
        q.have_stats = true;
    }
    BindingTable result = execute_plan(plan, dataset, options, &trace);
    const std::int64_t wall_exec = std::max<std::int64_t>(now_wall_ms() - wall_start, 0);

    if (adapt && strategy != Strategy::Forward) {
        // Leaf scans are cached by the execution; their cardinalities are this
        // window's exact statistics.
        q.last_stats = snapshots_from_cache(q.planner, cache, w.window_index);
        q.have_stats = true;
    }

    MetricsRecord rec;
    rec.window_index = w.window_index;
    rec.input_triples = input;
    rec.intermediate_tuples = trace.intermediate_tuples();
    rec.wall_exec_ms = wall_exec;
    if (config.simulated_clock) {
        double work = static_cast<double>(input) +
                      static_cast<double>(rec.intermediate_tuples) +
                      static_cast<double>(result.cardinality());
        rec.exec_ms = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(work / config.work_rate_tuples_per_ms)));
    } else {
        rec.exec_ms = std::max<std::int64_t>(1, wall_exec);
    }
    rec.idle_ms = q.spec.slide_ms - rec.exec_ms;
    rec.gamma = static_cast<double>(rec.exec_ms) / static_cast<double>(q.spec.slide_ms);
    rec.strategy = strategy;
    rec.plan_id = plan.plan_id;
    rec.throughput_tps =
        static_cast<double>(input) / static_cast<double>(rec.exec_ms) * 1000.0;
    rec.latency_ms = rec.exec_ms;
    rec.adapted = strategy != Strategy::Static && plan.plan_id != q.prev_plan_id;
    rec.late_dropped = q.assembler.late_dropped() - q.late_dropped_seen;
    q.late_dropped_seen = q.assembler.late_dropped();
    q.prev_plan_id = plan.plan_id;
    q.run.final_explain = plan.explain();

    // Decision maker for the next window.
    q.decision.last_exec_ms = rec.exec_ms;
    q.decision.last_idle_ms = rec.idle_ms;
    q.decision.gamma = rec.gamma;
    if (adapt) {
        Strategy next = decide(rec.gamma, q.decision.epsilon);
        q.decision.strategy = next;
        if (next == Strategy::Backward && q.have_stats) {
            q.decision.idle_margin = config.idle_margin;
            if (!q.decision.idle_budget_allows(rec.idle_ms)) {
                // IdleBudgetExceeded: abandon backward planning; the next
                // window recomputes its plan live.
                q.decision.strategy = Strategy::Forward;
            } else {
                const std::int64_t plan_start = now_wall_ms();
                q.decision.pending_plan = q.planner.backward_update(q.last_stats);
                double planning_ms = config.forced_planning_ms > 0
                                         ? config.forced_planning_ms
                                         : static_cast<double>(now_wall_ms() - plan_start);
                q.decision.observe_planning_time(planning_ms);
            }
        }
    }
    q.run.records.push_back(rec);
    ++q.windows_done;
}

}  // namespace

EngineConfig EngineConfig::from_text(const std::string& text) {
    EngineConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "worker_count") cfg.worker_count = std::stoi(value);
            else if (key == "partitions") cfg.partitions = std::stoi(value);
            else if (key == "topics") {
                std::istringstream ts(value);
                std::string t;
                while (std::getline(ts, t, ',')) cfg.topics.push_back(trim(t));
            } else if (key == "triple_count_threshold")
                cfg.trigger.triple_count_threshold = std::stoull(value);
            else if (key == "memory_fraction_threshold")
                cfg.trigger.memory_fraction_threshold = std::stod(value);
            else if (key == "heap_budget_bytes") cfg.trigger.heap_budget_bytes = std::stoull(value);
            else if (key == "mean_triple_size_bytes")
                cfg.trigger.mean_triple_size_bytes = std::stod(value);
            else if (key == "epsilon") cfg.epsilon = std::stod(value);
            else if (key == "idle_margin") cfg.idle_margin = std::stod(value);
            else if (key == "simulated_clock") cfg.simulated_clock = (value == "on" || value == "true");
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "work_rate_tuples_per_ms") cfg.work_rate_tuples_per_ms = std::stod(value);
            else if (key == "forced_planning_ms") cfg.forced_planning_ms = std::stod(value);
            else if (key == "rate_tps") cfg.rate_tps = std::stod(value);
            else if (key == "sensor_count") cfg.sensor_count = std::stoi(value);
            else if (key == "mode") {
                if (value == "static") cfg.mode = Mode::Static;
                else if (value == "adaptive") cfg.mode = Mode::Adaptive;
                else if (value == "auto") cfg.mode = Mode::Auto;
                else throw ConfigError("unknown mode '" + value + "'");
            } else
                throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad value for '" +
                              key + "'");
        }
    }
    if (cfg.worker_count < 1) throw ConfigError("worker_count must be >= 1");
    if (cfg.epsilon <= 0 || cfg.epsilon >= 1) throw ConfigError("epsilon must be in (0,1)");
    if (cfg.trigger.memory_fraction_threshold <= 0 || cfg.trigger.memory_fraction_threshold > 1)
        throw ConfigError("memory_fraction_threshold must be in (0,1]");
    return cfg;
}

EngineConfig EngineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

std::string EngineConfig::echo() const {
    std::ostringstream out;
    out << "worker_count=" << worker_count << " partitions=" << partitions
        << " epsilon=" << epsilon << " idle_margin=" << idle_margin
        << " triple_count_threshold=" << trigger.triple_count_threshold
        << " memory_fraction_threshold=" << trigger.memory_fraction_threshold
        << " seed=" << seed << " simulated_clock=" << (simulated_clock ? "on" : "off");
    return out.str();
}

StreamSource StreamSource::replay_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open replay file: " + path);
    StreamSource src;
    src.kind = Kind::Replay;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        ReplayLineParse parsed = parse_replay_line(line);
        if (parsed.kind == LineParse::Kind::Skip) continue;
        if (parsed.kind == LineParse::Kind::Malformed)
            throw ConfigError("replay file line " + std::to_string(lineno) + ": " + parsed.reason);
        src.events.push_back(std::move(parsed.event));
    }
    return src;
}

StreamSource StreamSource::replay_events(std::vector<TimedTriple> events) {
    StreamSource src;
    src.kind = Kind::Replay;
    src.events = std::move(events);
    return src;
}

StreamSource StreamSource::generate(MixSchedule schedule) {
    StreamSource src;
    src.kind = Kind::Generate;
    src.schedule = std::move(schedule);
    return src;
}

std::string QueryRun::metrics_csv() const {
    std::string out = metrics_csv_header();
    out += '\n';
    for (const MetricsRecord& r : records) {
        out += metrics_csv_row(r);
        out += '\n';
    }
    return out;
}

const QueryRun& RunReport::query(const std::string& id) const {
    for (const QueryRun& q : queries)
        if (q.query_id == id) return q;
    throw Error("no such query in report: " + id);
}

RunReport run_engine(const EngineConfig& config, const std::vector<ContinuousQuerySpec>& specs,
                     const StreamSource& source, int duration_windows) {
    if (specs.empty()) throw ConfigError("no queries to run");
    if (duration_windows < 1) throw ConfigError("duration must be >= 1 window");
    const std::int64_t t0 = now_wall_ms();

    QueryRegistry registry;
    std::vector<QueryState> states;
    states.reserve(specs.size());
    for (const ContinuousQuerySpec& spec : specs) {
        registry.register_query(spec);
        states.emplace_back(spec);
    }

    RunReport report;
    report.seed = config.seed;
    report.config_echo = config.echo();

    // Event source: a replay stream is materialized and sorted; a generator
    // yields one window at a time so long runs stay memory-bounded.
    std::deque<TimedTriple> pending;
    std::optional<ObservationGenerator> generator;
    if (source.kind == StreamSource::Kind::Generate) {
        GeneratorParams gp;
        gp.rate_tps = config.rate_tps;
        gp.seed = config.seed;
        gp.sensor_count = config.sensor_count;
        gp.window_ms = specs.front().window_ms;
        gp.batch_ms = specs.front().batch_ms;
        std::int64_t gen_end_ms = 0;
        for (const ContinuousQuerySpec& s : specs)
            gen_end_ms = std::max(gen_end_ms,
                                  (static_cast<std::int64_t>(duration_windows) - 1) * s.slide_ms +
                                      s.window_ms);
        gp.windows = static_cast<int>((gen_end_ms + gp.window_ms - 1) / gp.window_ms);
        generator.emplace(source.schedule, gp);
    } else {
        pending.assign(source.events.begin(), source.events.end());
        std::stable_sort(pending.begin(), pending.end(),
                         [](const TimedTriple& a, const TimedTriple& b) {
                             return a.event_time_ms < b.event_time_ms;
                         });
        report.source_emitted_triples = pending.size();
    }

    // Topic setup.
    TopicLog bus;
    std::vector<std::string> topics = config.topics;
    if (topics.empty()) {
        if (generator) {
            topics = source.schedule.observation_types();
        } else {
            std::set<std::string> seen;
            for (const TimedTriple& e : pending) seen.insert(e.topic);
            topics.assign(seen.begin(), seen.end());
        }
        if (topics.empty()) topics.push_back("default");
    }
    for (const std::string& t : topics) bus.create_topic(t, config.partitions);
    for (QueryState& q : states)
        for (const std::string& t : topics) q.offsets[t] = bus.begin_offsets(t);

    // Tick step: finest granularity that hits every query's batch boundary.
    std::int64_t step = 0;
    for (const ContinuousQuerySpec& s : specs) step = std::gcd(step, s.batch_ms);
    std::int64_t end_ms = 0;
    for (const ContinuousQuerySpec& s : specs)
        end_ms = std::max(end_ms, (static_cast<std::int64_t>(duration_windows) - 1) * s.slide_ms +
                                      s.window_ms);

    for (std::int64_t now = step; now <= end_ms; now += step) {
        // Pull generated windows until the source has covered this tick.
        if (generator) {
            const std::int64_t gen_window = generator->params().window_ms;
            while (generator->windows_emitted() < generator->params().windows &&
                   static_cast<std::int64_t>(generator->windows_emitted()) * gen_window < now) {
                std::vector<TimedTriple> produced = generator->next_window();
                report.source_emitted_triples += produced.size();
                pending.insert(pending.end(), std::make_move_iterator(produced.begin()),
                               std::make_move_iterator(produced.end()));
            }
        }

        // Publish everything that happened before this tick, chunked per topic.
        std::map<std::string, std::vector<TimedTriple>> chunk;
        while (!pending.empty() && pending.front().event_time_ms < now) {
            TimedTriple e = std::move(pending.front());
            pending.pop_front();
            if (!bus.has_topic(e.topic)) continue;  // not subscribed anywhere
            chunk[e.topic].push_back(std::move(e));
        }
        for (auto& [topic, payload] : chunk) {
            // Bounded message size keeps partitions busy.
            std::size_t at = 0;
            while (at < payload.size()) {
                std::size_t n = std::min<std::size_t>(payload.size() - at, 512);
                std::vector<TimedTriple> part(payload.begin() + at, payload.begin() + at + n);
                bus.publish(topic, std::move(part), now);
                at += n;
            }
        }

        for (QueryState& q : states) {
            if (q.windows_done >= duration_windows) continue;
            for (const std::string& topic : topics) {
                PollResult polled = bus.poll(topic, q.offsets[topic],
                                             std::numeric_limits<std::size_t>::max());
                q.offsets[topic] = polled.next;
                for (const Message& m : polled.messages)
                    for (const TimedTriple& e : m.payload) q.assembler.add(e);
            }
            for (const WindowInstance& w : q.assembler.tick(now)) {
                if (q.windows_done >= duration_windows) break;
                process_window(config, q, w);
            }
            q.run.max_pending_batches =
                std::max(q.run.max_pending_batches, q.assembler.pending_batches());
        }

        // Trim the log behind the slowest consumer.
        for (const std::string& topic : topics) {
            OffsetMap low;
            bool first = true;
            for (QueryState& q : states) {
                const OffsetMap& offs = q.offsets[topic];
                if (first) {
                    low = offs;
                    first = false;
                } else {
                    for (auto& [p, o] : low) o = std::min(o, offs.at(p));
                }
            }
            bus.trim(topic, low);
        }
    }

    for (QueryState& q : states) report.queries.push_back(std::move(q.run));
    report.wall_ms = now_wall_ms() - t0;
    return report;
}

}  // namespace rsp
