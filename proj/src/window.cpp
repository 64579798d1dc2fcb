#include "rsp/window.hpp"

namespace rsp {

std::vector<Triple> union_window(const WindowInstance& w) {
    std::vector<Triple> all;
    all.reserve(w.input_triples());
    for (const MicroBatchPtr& b : w.batches)
        all.insert(all.end(), b->triples.begin(), b->triples.end());
    return all;
}

BatchAssembler::BatchAssembler(std::int64_t window_ms, std::int64_t slide_ms,
                               std::int64_t batch_ms)
    : window_ms_(window_ms), slide_ms_(slide_ms), batch_ms_(batch_ms) {
    if (batch_ms <= 0 || window_ms % batch_ms != 0 || slide_ms % batch_ms != 0 ||
        window_ms < slide_ms)
        throw ConfigError("window/slide must be positive multiples of batch");
}

bool BatchAssembler::add(const TimedTriple& event) {
    if (event.event_time_ms < clock_ms_) {
        ++late_dropped_;
        return false;
    }
    std::int64_t idx = event.event_time_ms / batch_ms_;
    auto [it, inserted] = open_.try_emplace(idx);
    if (inserted) {
        it->second.batch_index = idx;
        it->second.start_ms = idx * batch_ms_;
        it->second.end_ms = (idx + 1) * batch_ms_;
    }
    it->second.triples.push_back(event.triple);
    return true;
}

std::vector<WindowInstance> BatchAssembler::tick(std::int64_t now_ms) {
    if (now_ms < clock_ms_) throw ClockRegression("clock moved backwards");
    clock_ms_ = now_ms;

    // Seal every batch whose interval has fully elapsed. Batches nobody wrote
    // to are sealed empty on demand when a window needs them.
    for (auto it = open_.begin(); it != open_.end();) {
        if (it->second.end_ms <= now_ms) {
            sealed_[it->first] = std::make_shared<const MicroBatch>(std::move(it->second));
            it = open_.erase(it);
        } else {
            ++it;
        }
    }

    std::vector<WindowInstance> due;
    while (next_window_ * slide_ms_ + window_ms_ <= now_ms) {
        WindowInstance w;
        w.window_index = next_window_;
        w.start_ms = next_window_ * slide_ms_;
        w.end_ms = w.start_ms + window_ms_;
        for (std::int64_t b = w.start_ms / batch_ms_; b < w.end_ms / batch_ms_; ++b) {
            auto it = sealed_.find(b);
            if (it != sealed_.end()) {
                w.batches.push_back(it->second);
            } else {
                auto empty = std::make_shared<const MicroBatch>(
                    MicroBatch{b, b * batch_ms_, (b + 1) * batch_ms_, {}});
                sealed_[b] = empty;
                w.batches.push_back(empty);
            }
        }
        ++next_window_;
        // Batches entirely before the next window's start are no longer needed.
        std::int64_t horizon = next_window_ * slide_ms_;
        for (auto it = sealed_.begin(); it != sealed_.end();) {
            if (it->second->end_ms <= horizon)
                it = sealed_.erase(it);
            else
                ++it;
        }
        due.push_back(std::move(w));
    }
    return due;
}

}  // namespace rsp
