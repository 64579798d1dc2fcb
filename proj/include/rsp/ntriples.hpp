#pragma once

#include <string>
#include <string_view>

#include "rsp/term.hpp"

namespace rsp {

/// Outcome of parsing one physical line of an N-Triples file.
struct LineParse {
    enum class Kind { Statement, Skip, Malformed };
    Kind kind = Kind::Skip;
    Triple triple;        // Statement only
    std::size_t position = 0;  // Malformed only: byte offset into the line
    std::string reason;        // Malformed only

    static LineParse statement(Triple t) { return {Kind::Statement, std::move(t), 0, {}}; }
    static LineParse skip() { return {}; }
    static LineParse malformed(std::size_t pos, std::string why) {
        return {Kind::Malformed, {}, pos, std::move(why)};
    }
};

/// Parses one line. Blank lines and '#' comments yield Skip; anything that is
/// not a well-formed statement yields Malformed. Never throws.
LineParse parse_ntriples_line(std::string_view line);

/// Serializes a triple as one N-Triples statement (no trailing newline).
/// parse_ntriples_line(serialize_triple(t)) reproduces t for any valid t.
std::string serialize_triple(const Triple& t);

std::string serialize_term(const Term& t);

/// Replay-file line: `<event-time-ms> <topic> <ntriples statement>`.
struct ReplayLineParse {
    LineParse::Kind kind = LineParse::Kind::Skip;
    TimedTriple event;
    std::size_t position = 0;
    std::string reason;
};

ReplayLineParse parse_replay_line(std::string_view line);
std::string serialize_replay_line(const TimedTriple& e);

}  // namespace rsp
