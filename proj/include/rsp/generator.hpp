#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rsp/term.hpp"

namespace rsp {

namespace vocab {
inline const std::string kHasValue = "http://purl.oclc.org/NET/ssnx/ssn/hasValue";
inline const std::string kType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline const std::string kUnit = "http://qudt.org/schema/qudt/unit";
inline const std::string kObservationNs = "http://www.cuahsi.org/waterML/";
inline const std::string kSensorNs = "http://sensors.example.org/s/";
inline const std::string kValueNs = "http://sensors.example.org/v/";
inline const std::string kUnitNs = "http://qudt.org/vocab/unit/";
}  // namespace vocab

/// Piecewise observation-type mix: each segment applies from its start window
/// (inclusive) until the next segment begins. Fractions in a segment sum to 1.
struct MixSchedule {
    struct Segment {
        int start_window = 0;
        std::vector<std::pair<std::string, double>> proportions;  // type -> fraction
    };
    std::vector<Segment> segments;

    const Segment& segment_for(int window) const;
    std::vector<std::string> observation_types() const;

    /// Parses lines of the form
    ///   segment <start-window> <type>=<fraction>[,<type>=<fraction>...]
    /// Blank lines and '#' comments are ignored. Throws ConfigError.
    static MixSchedule parse(const std::string& text);
};

struct GeneratorParams {
    double rate_tps = 1000;       // triples per second
    int windows = 1;
    std::int64_t window_ms = 10000;
    std::int64_t batch_ms = 5000;
    std::uint64_t seed = 1;
    int sensor_count = 10;
};

/// Number of triples one observation event expands to
/// (sensor hasValue value / value type t / value unit u).
inline constexpr int kTriplesPerObservation = 3;

/// Incremental synthesis of star-shaped sensor observations honoring the
/// schedule's per-batch type mix, one window at a time so long runs never
/// materialize the whole stream. Identical seed + schedule + params give an
/// identical stream.
class ObservationGenerator {
public:
    ObservationGenerator(MixSchedule schedule, GeneratorParams params);

    /// Triples of the next window, in event-time order.
    std::vector<TimedTriple> next_window();
    int windows_emitted() const { return window_; }
    const GeneratorParams& params() const { return params_; }

private:
    MixSchedule schedule_;
    GeneratorParams params_;
    std::mt19937_64 rng_;
    std::uint64_t value_counter_ = 0;
    int window_ = 0;
};

/// Convenience wrapper: the fully materialized stream of `p.windows` windows.
std::vector<TimedTriple> generate_stream(const MixSchedule& schedule, const GeneratorParams& p);

/// Per-batch observation counts by type, apportioned by largest remainder so
/// every type is within one event of its exact fractional share.
std::vector<std::pair<std::string, int>> apportion(
    const std::vector<std::pair<std::string, double>>& proportions, int total);

}  // namespace rsp
