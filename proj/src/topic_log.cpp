#include "rsp/topic_log.hpp"

#include <algorithm>

namespace rsp {

void TopicLog::create_topic(const std::string& topic, int partitions) {
    std::lock_guard lock(registry_mutex_);
    auto& entry = topics_[topic];
    if (!entry) {
        entry = std::make_unique<Topic>();
        entry->partitions.resize(std::max(partitions, 1));
    }
}

bool TopicLog::has_topic(const std::string& topic) const {
    std::lock_guard lock(registry_mutex_);
    return topics_.contains(topic);
}

std::vector<std::string> TopicLog::topics() const {
    std::lock_guard lock(registry_mutex_);
    std::vector<std::string> names;
    names.reserve(topics_.size());
    for (const auto& [name, _] : topics_) names.push_back(name);
    return names;
}

int TopicLog::partition_count(const std::string& topic) const {
    return static_cast<int>(topic_ref(topic).partitions.size());
}

TopicLog::Topic& TopicLog::topic_ref(const std::string& name) {
    std::lock_guard lock(registry_mutex_);
    auto it = topics_.find(name);
    if (it == topics_.end()) throw UnknownTopic(name);
    return *it->second;
}

const TopicLog::Topic& TopicLog::topic_ref(const std::string& name) const {
    std::lock_guard lock(registry_mutex_);
    auto it = topics_.find(name);
    if (it == topics_.end()) throw UnknownTopic(name);
    return *it->second;
}

std::uint64_t TopicLog::publish(const std::string& topic, std::vector<TimedTriple> payload,
                                std::int64_t publish_time_ms) {
    if (payload.empty()) throw Error("publish: empty payload");
    Topic& t = topic_ref(topic);
    std::lock_guard lock(t.mutex);
    Partition& p = t.partitions[t.round_robin];
    t.round_robin = (t.round_robin + 1) % t.partitions.size();
    std::uint64_t offset = p.next_offset();
    p.messages.push_back(Message{offset, std::move(payload), publish_time_ms});
    return offset;
}

PollResult TopicLog::poll(const std::string& topic, const OffsetMap& from,
                          std::size_t max_messages) const {
    const Topic& t = topic_ref(topic);
    std::lock_guard lock(t.mutex);
    PollResult out;
    out.next = from;
    for (int pi = 0; pi < static_cast<int>(t.partitions.size()); ++pi) {
        const Partition& p = t.partitions[pi];
        std::uint64_t cursor = 0;
        if (auto it = from.find(pi); it != from.end()) cursor = it->second;
        if (cursor > p.next_offset() || cursor < p.base)
            throw OffsetOutOfRange("poll: partition " + std::to_string(pi) + " offset " +
                                   std::to_string(cursor));
        while (cursor < p.next_offset() && out.messages.size() < max_messages) {
            out.messages.push_back(p.messages[cursor - p.base]);
            ++cursor;
        }
        out.next[pi] = cursor;
    }
    return out;
}

OffsetMap TopicLog::begin_offsets(const std::string& topic) const {
    const Topic& t = topic_ref(topic);
    std::lock_guard lock(t.mutex);
    OffsetMap from;
    for (int pi = 0; pi < static_cast<int>(t.partitions.size()); ++pi) from[pi] = 0;
    return from;
}

void TopicLog::trim(const std::string& topic, const OffsetMap& up_to) {
    Topic& t = topic_ref(topic);
    std::lock_guard lock(t.mutex);
    for (const auto& [pi, offset] : up_to) {
        if (pi < 0 || pi >= static_cast<int>(t.partitions.size())) continue;
        Partition& p = t.partitions[pi];
        while (p.base < offset && !p.messages.empty()) {
            p.messages.pop_front();
            ++p.base;
        }
    }
}

}  // namespace rsp
