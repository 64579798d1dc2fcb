#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rsp/errors.hpp"
#include "rsp/term.hpp"

namespace rsp {

struct Message {
    std::uint64_t offset = 0;
    std::vector<TimedTriple> payload;
    std::int64_t publish_time_ms = 0;
};

using OffsetMap = std::map<int, std::uint64_t>;  // partition -> next offset to read

struct PollResult {
    std::vector<Message> messages;
    OffsetMap next;
};

/// In-process partitioned, offset-addressed append-only log. Offsets within a
/// partition are contiguous from 0; messages are immutable once appended.
/// Publish distributes round-robin across partitions. A consumer that always
/// resumes from the returned offset map sees every message exactly once.
class TopicLog {
public:
    void create_topic(const std::string& topic, int partitions);
    bool has_topic(const std::string& topic) const;
    std::vector<std::string> topics() const;
    int partition_count(const std::string& topic) const;

    /// Appends one message to the topic's next round-robin partition and
    /// returns the offset it received there. Throws UnknownTopic.
    std::uint64_t publish(const std::string& topic, std::vector<TimedTriple> payload,
                          std::int64_t publish_time_ms = 0);

    /// Returns up to max_messages starting at `from`, in per-partition offset
    /// order, plus the offset map to resume from. Throws OffsetOutOfRange if a
    /// requested offset exceeds the partition's next offset.
    PollResult poll(const std::string& topic, const OffsetMap& from, std::size_t max_messages) const;

    OffsetMap begin_offsets(const std::string& topic) const;

    /// Drops message storage strictly below the given offsets. Polling a
    /// trimmed offset throws OffsetOutOfRange; intended for a single consumer
    /// trimming behind itself to bound memory.
    void trim(const std::string& topic, const OffsetMap& up_to);

private:
    struct Partition {
        std::uint64_t base = 0;  // offset of messages.front()
        std::deque<Message> messages;
        std::uint64_t next_offset() const { return base + messages.size(); }
    };
    struct Topic {
        std::vector<Partition> partitions;
        std::size_t round_robin = 0;
        mutable std::mutex mutex;
    };

    Topic& topic_ref(const std::string& name);
    const Topic& topic_ref(const std::string& name) const;

    mutable std::mutex registry_mutex_;
    std::map<std::string, std::unique_ptr<Topic>> topics_;
};

}  // namespace rsp
