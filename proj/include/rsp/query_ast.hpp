#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rsp/ntriples.hpp"
#include "rsp/term.hpp"

namespace rsp {

struct Variable {
    std::string name;  // without the leading '?'

    bool operator==(const Variable&) const = default;
    auto operator<=>(const Variable&) const = default;
};

using PatternTerm = std::variant<Term, Variable>;

inline bool is_variable(const PatternTerm& t) { return std::holds_alternative<Variable>(t); }
inline const Variable* as_variable(const PatternTerm& t) { return std::get_if<Variable>(&t); }
inline const Term* as_term(const PatternTerm& t) { return std::get_if<Term>(&t); }

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const PatternTerm* p : {&subject, &predicate, &object})
            if (const Variable* v = as_variable(*p)) out.insert(v->name);
        return out;
    }

    /// Canonical serialization, used for deterministic tie-breaking.
    std::string key() const {
        auto render = [](const PatternTerm& t) {
            if (const Variable* v = as_variable(t)) return "?" + v->name;
            return serialize_term(*as_term(t));
        };
        return render(subject) + " " + render(predicate) + " " + render(object);
    }

    bool operator==(const TriplePattern&) const = default;
};

inline bool pattern_key_less(const TriplePattern& a, const TriplePattern& b) {
    return a.key() < b.key();
}

using Bgp = std::vector<TriplePattern>;

/// Projection over a union of basic graph patterns. A plain BGP query has a
/// single branch.
struct QueryAlgebra {
    std::vector<Variable> projection;
    std::vector<Bgp> branches;

    std::size_t pattern_count() const {
        std::size_t n = 0;
        for (const Bgp& b : branches) n += b.size();
        return n;
    }
};

struct ContinuousQuerySpec {
    std::string query_id;
    std::int64_t window_ms = 0;
    std::int64_t slide_ms = 0;
    std::int64_t batch_ms = 0;
    QueryAlgebra algebra;
    std::string sparql_text;

    int batches_per_window() const { return static_cast<int>(window_ms / batch_ms); }
};

}  // namespace rsp
