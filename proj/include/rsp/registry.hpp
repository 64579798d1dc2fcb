#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rsp/errors.hpp"
#include "rsp/query_ast.hpp"

namespace rsp {

using QueryHandle = std::shared_ptr<const ContinuousQuerySpec>;

/// Registered specs are immutable and shared; mutation is serialized, reads
/// take a snapshot. Registration order is preserved.
class QueryRegistry {
public:
    QueryHandle register_query(ContinuousQuerySpec spec) {
        std::lock_guard lock(mutex_);
        for (const QueryHandle& q : queries_)
            if (q->query_id == spec.query_id) throw DuplicateQueryId(spec.query_id);
        auto handle = std::make_shared<const ContinuousQuerySpec>(std::move(spec));
        queries_.push_back(handle);
        return handle;
    }

    std::vector<QueryHandle> snapshot() const {
        std::lock_guard lock(mutex_);
        return queries_;
    }

    std::vector<std::string> ids() const {
        std::lock_guard lock(mutex_);
        std::vector<std::string> out;
        out.reserve(queries_.size());
        for (const QueryHandle& q : queries_) out.push_back(q->query_id);
        return out;
    }

private:
    mutable std::mutex mutex_;
    std::vector<QueryHandle> queries_;
};

}  // namespace rsp
