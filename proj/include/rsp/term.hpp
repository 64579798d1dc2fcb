#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace rsp {

enum class TermKind : std::uint8_t { Iri, TypedLiteral, PlainLiteral, BlankNode };

/// An RDF term. Typed literals carry a datatype IRI; every other kind leaves
/// `datatype` empty. Language-tagged literals are normalized to PlainLiteral
/// with the tag folded into the lexical form.
struct Term {
    TermKind kind = TermKind::Iri;
    std::string lexical;
    std::string datatype;

    static Term iri(std::string value) { return {TermKind::Iri, std::move(value), {}}; }
    static Term plain_literal(std::string value) {
        return {TermKind::PlainLiteral, std::move(value), {}};
    }
    static Term typed_literal(std::string value, std::string datatype_iri) {
        return {TermKind::TypedLiteral, std::move(value), std::move(datatype_iri)};
    }
    static Term blank(std::string label) { return {TermKind::BlankNode, std::move(label), {}}; }

    bool is_literal() const {
        return kind == TermKind::TypedLiteral || kind == TermKind::PlainLiteral;
    }

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

/// A triple stamped with event time and the topic it was published on.
struct TimedTriple {
    Triple triple;
    std::int64_t event_time_ms = 0;
    std::string topic;

    bool operator==(const TimedTriple&) const = default;
};

inline std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
    return h;
}
constexpr std::uint64_t kFnvSeed = 0xcbf29ce484222325ULL;

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        std::uint64_t h = kFnvSeed;
        h = fnv1a(h, t.subject.lexical);
        h = fnv1a(h, t.predicate.lexical);
        h = fnv1a(h, t.object.lexical);
        h = fnv1a(h, t.object.datatype);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace rsp
