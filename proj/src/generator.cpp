#include "rsp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "rsp/errors.hpp"

namespace rsp {

const MixSchedule::Segment& MixSchedule::segment_for(int window) const {
    if (segments.empty()) throw ConfigError("mix schedule has no segments");
    const Segment* active = &segments.front();
    for (const Segment& s : segments) {
        if (s.start_window <= window) active = &s;
    }
    return *active;
}

std::vector<std::string> MixSchedule::observation_types() const {
    std::set<std::string> seen;
    for (const auto& seg : segments)
        for (const auto& [type, _] : seg.proportions) seen.insert(type);
    return {seen.begin(), seen.end()};
}

MixSchedule MixSchedule::parse(const std::string& text) {
    MixSchedule out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string keyword;
        int start = 0;
        std::string mix;
        if (!(ls >> keyword >> start >> mix) || keyword != "segment")
            throw ConfigError("schedule line " + std::to_string(lineno) +
                              ": expected 'segment <start-window> <type>=<fraction>,...'");
        MixSchedule::Segment seg;
        seg.start_window = start;
        std::istringstream ms(mix);
        std::string item;
        double sum = 0;
        while (std::getline(ms, item, ',')) {
            std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("schedule line " + std::to_string(lineno) + ": bad mix item '" +
                                  item + "'");
            double frac = std::stod(item.substr(eq + 1));
            seg.proportions.emplace_back(item.substr(0, eq), frac);
            sum += frac;
        }
        if (seg.proportions.empty() || std::abs(sum - 1.0) > 1e-9)
            throw ConfigError("schedule line " + std::to_string(lineno) +
                              ": fractions must sum to 1");
        if (!out.segments.empty() && start <= out.segments.back().start_window)
            throw ConfigError("schedule line " + std::to_string(lineno) +
                              ": start windows must strictly increase");
        out.segments.push_back(std::move(seg));
    }
    if (out.segments.empty()) throw ConfigError("mix schedule is empty");
    return out;
}

std::vector<std::pair<std::string, int>> apportion(
    const std::vector<std::pair<std::string, double>>& proportions, int total) {
    std::vector<std::pair<std::string, int>> counts;
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t i = 0; i < proportions.size(); ++i) {
        double exact = proportions[i].second * total;
        int floor_count = static_cast<int>(std::floor(exact));
        counts.emplace_back(proportions[i].first, floor_count);
        remainders.emplace_back(exact - floor_count, i);
        assigned += floor_count;
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned)
        ++counts[remainders[i % remainders.size()].second].second;
    return counts;
}

ObservationGenerator::ObservationGenerator(MixSchedule schedule, GeneratorParams params)
    : schedule_(std::move(schedule)), params_(params), rng_(params.seed) {
    if (params_.rate_tps <= 0) throw ConfigError("generator rate must be > 0");
    if (params_.window_ms <= 0 || params_.batch_ms <= 0 ||
        params_.window_ms % params_.batch_ms != 0)
        throw ConfigError("window must be a positive multiple of batch");
}

std::vector<TimedTriple> ObservationGenerator::next_window() {
    const GeneratorParams& p = params_;
    const int batches_per_window = static_cast<int>(p.window_ms / p.batch_ms);
    const int obs_per_batch = static_cast<int>(
        std::llround(p.rate_tps * p.batch_ms / 1000.0 / kTriplesPerObservation));

    std::vector<TimedTriple> stream;
    stream.reserve(static_cast<std::size_t>(batches_per_window) * obs_per_batch *
                   kTriplesPerObservation);
    const int w = window_++;
    const auto& seg = schedule_.segment_for(w);
    for (int b = 0; b < batches_per_window; ++b) {
        const std::int64_t batch_start = static_cast<std::int64_t>(w) * p.window_ms +
                                         static_cast<std::int64_t>(b) * p.batch_ms;
        // Interleave types deterministically across the batch.
        std::vector<std::string> slots;
        for (const auto& [type, count] : apportion(seg.proportions, obs_per_batch))
            slots.insert(slots.end(), count, type);
        std::shuffle(slots.begin(), slots.end(), rng_);

        for (std::size_t i = 0; i < slots.size(); ++i) {
            const std::string& type = slots[i];
            std::int64_t when =
                batch_start + static_cast<std::int64_t>(i * p.batch_ms / std::max<std::size_t>(
                                                                             slots.size(), 1));
            int sensor = static_cast<int>(rng_() % p.sensor_count);
            Term sensor_iri = Term::iri(vocab::kSensorNs + std::to_string(sensor));
            Term value_iri = Term::iri(vocab::kValueNs + std::to_string(value_counter_++));
            Term type_iri = Term::iri(vocab::kObservationNs + type);
            Term unit_iri = Term::iri(vocab::kUnitNs + type);

            stream.push_back({Triple{sensor_iri, Term::iri(vocab::kHasValue), value_iri}, when,
                              type});
            stream.push_back({Triple{value_iri, Term::iri(vocab::kType), type_iri}, when, type});
            stream.push_back({Triple{value_iri, Term::iri(vocab::kUnit), unit_iri}, when, type});
        }
    }
    return stream;
}

std::vector<TimedTriple> generate_stream(const MixSchedule& schedule, const GeneratorParams& p) {
    ObservationGenerator gen(schedule, p);
    std::vector<TimedTriple> stream;
    for (int w = 0; w < p.windows; ++w) {
        std::vector<TimedTriple> chunk = gen.next_window();
        stream.insert(stream.end(), std::make_move_iterator(chunk.begin()),
                      std::make_move_iterator(chunk.end()));
    }
    return stream;
}

}  // namespace rsp
