#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "rsp/errors.hpp"
#include "rsp/term.hpp"

namespace rsp {

/// Triples accumulated over one batch interval. Immutable once sealed.
struct MicroBatch {
    std::int64_t batch_index = 0;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;  // exclusive
    std::vector<Triple> triples;
};

using MicroBatchPtr = std::shared_ptr<const MicroBatch>;

/// One evaluation scope: the batches tiling [start, end). Overlapping windows
/// share batches by reference.
struct WindowInstance {
    std::int64_t window_index = 0;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::vector<MicroBatchPtr> batches;

    std::size_t input_triples() const {
        std::size_t n = 0;
        for (const auto& b : batches) n += b->triples.size();
        return n;
    }
};

/// Multiset union of all batch triples.
std::vector<Triple> union_window(const WindowInstance& w);

/// Time-driven batch/window assembly for one query. Events are assigned to
/// batches by event time; events older than the earliest open batch are
/// dropped and counted. Ticks seal every batch whose interval has elapsed and
/// emit windows due at slide boundaries: window n spans
/// [n*slide, n*slide + window_size).
class BatchAssembler {
public:
    BatchAssembler(std::int64_t window_ms, std::int64_t slide_ms, std::int64_t batch_ms);

    /// Buffers one event. Returns false (and counts it) if the event is late.
    bool add(const TimedTriple& event);

    /// Advances the clock; returns every window sealed by this tick, in order.
    /// Throws ClockRegression if now decreases.
    std::vector<WindowInstance> tick(std::int64_t now_ms);

    std::uint64_t late_dropped() const { return late_dropped_; }
    std::int64_t clock_ms() const { return clock_ms_; }
    /// Batches currently buffered (open + sealed awaiting a window).
    std::size_t pending_batches() const { return open_.size() + sealed_.size(); }

private:
    std::int64_t window_ms_;
    std::int64_t slide_ms_;
    std::int64_t batch_ms_;
    std::int64_t clock_ms_ = 0;
    std::int64_t next_window_ = 0;
    std::uint64_t late_dropped_ = 0;
    std::map<std::int64_t, MicroBatch> open_;           // batch index -> accumulating
    std::map<std::int64_t, MicroBatchPtr> sealed_;      // batch index -> sealed
};

}  // namespace rsp
