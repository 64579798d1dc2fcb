#include "rsp/ntriples.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace rsp {
namespace {

struct Cursor {
    std::string_view in;
    std::size_t pos = 0;

    bool done() const { return pos >= in.size(); }
    char peek() const { return in[pos]; }
    void skip_ws() {
        while (!done() && (in[pos] == ' ' || in[pos] == '\t')) ++pos;
    }
};

struct ParseFail {
    std::size_t pos;
    std::string reason;
};

using TermResult = std::optional<Term>;

// Appends the UTF-8 encoding of a code point.
void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool parse_hex(Cursor& c, int digits, std::uint32_t& out) {
    out = 0;
    for (int i = 0; i < digits; ++i) {
        if (c.done() || !std::isxdigit(static_cast<unsigned char>(c.peek()))) return false;
        char ch = c.peek();
        out = out * 16 +
              (std::isdigit(static_cast<unsigned char>(ch)) ? ch - '0'
                                                            : (std::tolower(ch) - 'a' + 10));
        ++c.pos;
    }
    return true;
}

TermResult parse_iri(Cursor& c, ParseFail& fail) {
    // caller verified '<'
    ++c.pos;
    std::string value;
    while (true) {
        if (c.done()) {
            fail = {c.pos, "unterminated IRI"};
            return std::nullopt;
        }
        char ch = c.peek();
        if (ch == '>') {
            ++c.pos;
            break;
        }
        if (ch == ' ' || ch == '\t') {
            fail = {c.pos, "whitespace inside IRI"};
            return std::nullopt;
        }
        value += ch;
        ++c.pos;
    }
    if (value.empty()) {
        fail = {c.pos, "empty IRI"};
        return std::nullopt;
    }
    return Term::iri(std::move(value));
}

TermResult parse_blank(Cursor& c, ParseFail& fail) {
    // caller verified "_:"
    c.pos += 2;
    std::string label;
    while (!c.done()) {
        char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.') {
            label += ch;
            ++c.pos;
        } else {
            break;
        }
    }
    if (label.empty()) {
        fail = {c.pos, "empty blank node label"};
        return std::nullopt;
    }
    return Term::blank(std::move(label));
}

TermResult parse_literal(Cursor& c, ParseFail& fail) {
    // caller verified '"'
    ++c.pos;
    std::string value;
    while (true) {
        if (c.done()) {
            fail = {c.pos, "unterminated literal"};
            return std::nullopt;
        }
        char ch = c.peek();
        if (ch == '"') {
            ++c.pos;
            break;
        }
        if (ch == '\\') {
            ++c.pos;
            if (c.done()) {
                fail = {c.pos, "dangling escape"};
                return std::nullopt;
            }
            char esc = c.peek();
            ++c.pos;
            switch (esc) {
                case 't': value += '\t'; break;
                case 'n': value += '\n'; break;
                case 'r': value += '\r'; break;
                case '"': value += '"'; break;
                case '\\': value += '\\'; break;
                case 'u':
                case 'U': {
                    std::uint32_t cp = 0;
                    if (!parse_hex(c, esc == 'u' ? 4 : 8, cp)) {
                        fail = {c.pos, "bad unicode escape"};
                        return std::nullopt;
                    }
                    append_utf8(value, cp);
                    break;
                }
                default:
                    fail = {c.pos, "unknown escape"};
                    return std::nullopt;
            }
            continue;
        }
        value += ch;
        ++c.pos;
    }
    // Optional datatype or language tag.
    if (!c.done() && c.peek() == '^') {
        if (c.pos + 1 >= c.in.size() || c.in[c.pos + 1] != '^') {
            fail = {c.pos, "expected '^^'"};
            return std::nullopt;
        }
        c.pos += 2;
        if (c.done() || c.peek() != '<') {
            fail = {c.pos, "expected datatype IRI"};
            return std::nullopt;
        }
        TermResult dt = parse_iri(c, fail);
        if (!dt) return std::nullopt;
        return Term::typed_literal(std::move(value), std::move(dt->lexical));
    }
    if (!c.done() && c.peek() == '@') {
        ++c.pos;
        std::string tag;
        while (!c.done()) {
            char ch = c.peek();
            if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-') {
                tag += ch;
                ++c.pos;
            } else {
                break;
            }
        }
        if (tag.empty()) {
            fail = {c.pos, "empty language tag"};
            return std::nullopt;
        }
        // Language tags are folded into the lexical form.
        return Term::plain_literal(value + "@" + tag);
    }
    return Term::plain_literal(std::move(value));
}

TermResult parse_term(Cursor& c, ParseFail& fail, const char* role) {
    c.skip_ws();
    if (c.done() || c.peek() == '.') {
        fail = {c.pos, std::string("missing ") + role};
        return std::nullopt;
    }
    char ch = c.peek();
    if (ch == '<') return parse_iri(c, fail);
    if (ch == '"') return parse_literal(c, fail);
    if (ch == '_' && c.pos + 1 < c.in.size() && c.in[c.pos + 1] == ':') return parse_blank(c, fail);
    fail = {c.pos, std::string("unexpected character at ") + role};
    return std::nullopt;
}

void escape_into(std::string& out, const std::string& s) {
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
        }
    }
}

}  // namespace

LineParse parse_ntriples_line(std::string_view line) {
    Cursor c{line};
    c.skip_ws();
    if (c.done() || c.peek() == '#' || c.peek() == '\r') return LineParse::skip();

    ParseFail fail{0, {}};
    TermResult subject = parse_term(c, fail, "subject");
    if (!subject) return LineParse::malformed(fail.pos, fail.reason);
    if (subject->is_literal()) return LineParse::malformed(c.pos, "literal subject");

    c.skip_ws();
    if (c.done() || c.peek() != '<') {
        if (!c.done() && c.peek() == '.')
            return LineParse::malformed(c.pos, "missing predicate");
        TermResult bad = parse_term(c, fail, "predicate");
        if (!bad) return LineParse::malformed(fail.pos, fail.reason);
        return LineParse::malformed(c.pos, "predicate must be an IRI");
    }
    TermResult predicate = parse_iri(c, fail);
    if (!predicate) return LineParse::malformed(fail.pos, fail.reason);

    TermResult object = parse_term(c, fail, "object");
    if (!object) return LineParse::malformed(fail.pos, fail.reason);

    c.skip_ws();
    if (c.done() || c.peek() != '.') return LineParse::malformed(c.pos, "missing final '.'");
    ++c.pos;
    c.skip_ws();
    if (!c.done() && c.peek() != '#' && c.peek() != '\r')
        return LineParse::malformed(c.pos, "trailing garbage after '.'");

    return LineParse::statement(Triple{std::move(*subject), std::move(*predicate),
                                       std::move(*object)});
}

std::string serialize_term(const Term& t) {
    std::string out;
    switch (t.kind) {
        case TermKind::Iri:
            out += '<';
            out += t.lexical;
            out += '>';
            break;
        case TermKind::BlankNode:
            out += "_:";
            out += t.lexical;
            break;
        case TermKind::PlainLiteral:
            out += '"';
            escape_into(out, t.lexical);
            out += '"';
            break;
        case TermKind::TypedLiteral:
            out += '"';
            escape_into(out, t.lexical);
            out += "\"^^<";
            out += t.datatype;
            out += '>';
            break;
    }
    return out;
}

std::string serialize_triple(const Triple& t) {
    std::string out = serialize_term(t.subject);
    out += ' ';
    out += serialize_term(t.predicate);
    out += ' ';
    out += serialize_term(t.object);
    out += " .";
    return out;
}

ReplayLineParse parse_replay_line(std::string_view line) {
    ReplayLineParse out;
    Cursor c{line};
    c.skip_ws();
    if (c.done() || c.peek() == '#' || c.peek() == '\r') return out;  // Skip

    std::size_t start = c.pos;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.pos;
    if (c.pos == start || c.done() || c.peek() != ' ') {
        out.kind = LineParse::Kind::Malformed;
        out.position = c.pos;
        out.reason = "missing event-time prefix";
        return out;
    }
    std::int64_t when = 0;
    std::from_chars(line.data() + start, line.data() + c.pos, when);
    ++c.pos;  // single separating space

    start = c.pos;
    while (!c.done() && c.peek() != ' ') ++c.pos;
    if (c.pos == start || c.done()) {
        out.kind = LineParse::Kind::Malformed;
        out.position = c.pos;
        out.reason = "missing topic token";
        return out;
    }
    std::string topic(line.substr(start, c.pos - start));
    ++c.pos;

    LineParse rest = parse_ntriples_line(line.substr(c.pos));
    out.kind = rest.kind;
    if (rest.kind == LineParse::Kind::Statement) {
        out.event = TimedTriple{std::move(rest.triple), when, std::move(topic)};
    } else if (rest.kind == LineParse::Kind::Malformed) {
        out.position = c.pos + rest.position;
        out.reason = std::move(rest.reason);
    } else {
        out.kind = LineParse::Kind::Malformed;
        out.position = c.pos;
        out.reason = "empty statement after replay prefix";
    }
    return out;
}

std::string serialize_replay_line(const TimedTriple& e) {
    return std::to_string(e.event_time_ms) + " " + e.topic + " " + serialize_triple(e.triple);
}

}  // namespace rsp
