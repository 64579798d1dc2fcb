#pragma once

#include <stdexcept>
#include <string>

namespace rsp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// stream_bus
struct UnknownTopic : Error {
    explicit UnknownTopic(const std::string& topic) : Error("unknown topic: " + topic) {}
};
struct OffsetOutOfRange : Error {
    using Error::Error;
};

// query_language
struct SyntaxError : Error {
    int line;
    std::string token;
    std::string expected;
    SyntaxError(int line_, std::string token_, std::string expected_)
        : Error("syntax error at line " + std::to_string(line_) + ": got '" + token_ +
                "', expected " + expected_),
          line(line_), token(std::move(token_)), expected(std::move(expected_)) {}
};
struct ValidationError : Error {
    using Error::Error;
};
struct UnsupportedFeature : Error {
    explicit UnsupportedFeature(const std::string& what) : Error("unsupported feature: " + what) {}
};
struct DuplicateQueryId : Error {
    explicit DuplicateQueryId(const std::string& id) : Error("duplicate query id: " + id) {}
};

// optimizer
struct DisconnectedGraph : Error {
    using Error::Error;
};

// adaptivity / runtime
struct IdleBudgetExceeded : Error {
    using Error::Error;
};
struct ClockRegression : Error {
    using Error::Error;
};
struct CancelledByDeadline : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace rsp
