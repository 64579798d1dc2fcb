#include "rsp/query_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <optional>

#include "rsp/errors.hpp"

namespace rsp {
namespace {

const std::string kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
const std::string kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
const std::string kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct Token {
    enum class Kind {
        Word,      // bare identifier / keyword
        Iri,       // <...>
        Pname,     // prefix:local (prefix may be empty)
        Var,       // ?name
        String,    // "..." (+ optional datatype/lang resolved later)
        Integer,
        Punct,     // one of { } [ ] . ; , *
        End,
    };
    Kind kind = Kind::End;
    std::string text;          // raw surface form
    std::string value;         // decoded payload
    std::string extra;         // datatype iri / pname, or lang tag ("@tag")
    int line = 1;
    std::size_t offset = 0;    // byte offset into the source
};

bool word_is(const Token& t, const char* kw) {
    if (t.kind != Token::Kind::Word) return false;
    if (t.value.size() != std::string_view(kw).size()) return false;
    for (std::size_t i = 0; i < t.value.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(t.value[i])) != kw[i]) return false;
    return true;
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token t;
        t.line = line_;
        t.offset = pos_;
        if (pos_ >= src_.size()) return t;
        char c = src_[pos_];
        if (std::strchr("{}[].;,*", c)) {
            t.kind = Token::Kind::Punct;
            t.text = t.value = std::string(1, c);
            ++pos_;
            return t;
        }
        if (c == '<') return lex_iri(t);
        if (c == '?' || c == '$') return lex_var(t);
        if (c == '"') return lex_string(t);
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
            return lex_number(t);
        if (is_name_start(c) || c == ':' || c == '_') return lex_word_or_pname(t);
        throw SyntaxError(line_, std::string(1, c), "a token");
    }

private:
    static bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    Token lex_iri(Token t) {
        std::size_t end = src_.find('>', pos_ + 1);
        if (end == std::string::npos) throw SyntaxError(line_, "<", "a closing '>'");
        t.kind = Token::Kind::Iri;
        t.value = src_.substr(pos_ + 1, end - pos_ - 1);
        t.text = src_.substr(pos_, end - pos_ + 1);
        pos_ = end + 1;
        return t;
    }

    Token lex_var(Token t) {
        std::size_t start = ++pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        t.kind = Token::Kind::Var;
        t.value = src_.substr(start, pos_ - start);
        t.text = "?" + t.value;
        if (t.value.empty() || !std::isalpha(static_cast<unsigned char>(t.value[0])))
            throw SyntaxError(line_, t.text, "a variable name ?[A-Za-z][A-Za-z0-9]*");
        return t;
    }

    Token lex_string(Token t) {
        ++pos_;
        std::string value;
        while (true) {
            if (pos_ >= src_.size()) throw SyntaxError(line_, "\"", "a closing '\"'");
            char c = src_[pos_];
            if (c == '"') {
                ++pos_;
                break;
            }
            if (c == '\\' && pos_ + 1 < src_.size()) {
                char esc = src_[pos_ + 1];
                pos_ += 2;
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    default: value += esc;
                }
                continue;
            }
            if (c == '\n') ++line_;
            value += c;
            ++pos_;
        }
        t.kind = Token::Kind::String;
        t.value = std::move(value);
        // Optional ^^<iri>, ^^pname, or @lang suffix.
        if (pos_ + 1 < src_.size() && src_[pos_] == '^' && src_[pos_ + 1] == '^') {
            pos_ += 2;
            if (pos_ < src_.size() && src_[pos_] == '<') {
                Token dt = lex_iri({});
                t.extra = "<" + dt.value + ">";
            } else {
                Token dt = lex_word_or_pname({});
                if (dt.kind != Token::Kind::Pname)
                    throw SyntaxError(line_, dt.text, "a datatype IRI");
                t.extra = dt.text;
            }
        } else if (pos_ < src_.size() && src_[pos_] == '@') {
            std::size_t start = ++pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '-'))
                ++pos_;
            t.extra = "@" + src_.substr(start, pos_ - start);
        }
        return t;
    }

    Token lex_number(Token t) {
        std::size_t start = pos_;
        if (src_[pos_] == '-') ++pos_;
        bool decimal = false;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            if (src_[pos_] == '.') {
                if (pos_ + 1 >= src_.size() ||
                    !std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))
                    break;  // statement-terminating dot
                decimal = true;
            }
            ++pos_;
        }
        t.kind = Token::Kind::Integer;
        t.value = src_.substr(start, pos_ - start);
        t.text = t.value;
        t.extra = decimal ? "decimal" : "integer";
        return t;
    }

    Token lex_word_or_pname(Token t) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (is_name_char(src_[pos_]) || src_[pos_] == '_')) ++pos_;
        // Trailing '.' belongs to the statement, not the name.
        while (pos_ > start && src_[pos_ - 1] == '.') --pos_;
        if (pos_ < src_.size() && src_[pos_] == ':') {
            std::string prefix = src_.substr(start, pos_ - start);
            ++pos_;
            std::size_t lstart = pos_;
            while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
            while (pos_ > lstart && src_[pos_ - 1] == '.') --pos_;
            t.kind = Token::Kind::Pname;
            t.value = prefix;
            t.extra = src_.substr(lstart, pos_ - lstart);
            t.text = prefix + ":" + t.extra;
            return t;
        }
        t.kind = Token::Kind::Word;
        t.value = t.text = src_.substr(start, pos_ - start);
        if (t.value.empty()) throw SyntaxError(line_, std::string(1, src_[start]), "a name");
        return t;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

const char* kUnsupportedKeywords[] = {
    "FILTER",   "OPTIONAL", "GRAPH",  "BIND",   "MINUS",   "SERVICE", "VALUES",
    "DISTINCT", "REDUCED",  "ORDER",  "GROUP",  "LIMIT",   "OFFSET",  "HAVING",
    "ASK",      "CONSTRUCT", "DESCRIBE", "FROM", "EXISTS",
};

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src), lexer_(src) { advance(); }

    ContinuousQuerySpec parse() {
        ContinuousQuerySpec spec;
        expect_word("STREAMING");
        expect_punct("{");
        expect_word("WINDOW");
        spec.window_ms = parse_duration();
        expect_word("SLIDE");
        spec.slide_ms = parse_duration();
        expect_word("BATCH");
        spec.batch_ms = parse_duration();
        expect_punct("}");
        expect_word("REGISTER");
        expect_punct("{");
        expect_word("QUERYID");
        expect_punct("[");
        spec.query_id = expect_name();
        expect_punct("]");
        expect_word("SPARQL");
        expect_punct("[");
        std::size_t sparql_start = cur_.offset;
        spec.algebra = parse_sparql();
        spec.sparql_text = src_.substr(sparql_start, cur_.offset - sparql_start);
        expect_punct("]");
        expect_punct("}");
        if (cur_.kind != Token::Kind::End) throw SyntaxError(cur_.line, cur_.text, "end of query");
        validate(spec);
        return spec;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void check_unsupported(const Token& t) {
        for (const char* kw : kUnsupportedKeywords)
            if (word_is(t, kw)) throw UnsupportedFeature(t.value);
    }

    void expect_word(const char* kw) {
        if (!word_is(cur_, kw)) throw SyntaxError(cur_.line, cur_.text, std::string(kw));
        advance();
    }

    void expect_punct(const char* p) {
        if (cur_.kind != Token::Kind::Punct || cur_.value != p)
            throw SyntaxError(cur_.line, cur_.text, std::string("'") + p + "'");
        advance();
    }

    bool at_punct(const char* p) const {
        return cur_.kind == Token::Kind::Punct && cur_.value == p;
    }

    std::string expect_name() {
        if (cur_.kind != Token::Kind::Word && cur_.kind != Token::Kind::Integer)
            throw SyntaxError(cur_.line, cur_.text, "an identifier");
        std::string name = cur_.value;
        advance();
        return name;
    }

    std::int64_t parse_duration() {
        expect_punct("[");
        if (cur_.kind != Token::Kind::Integer)
            throw SyntaxError(cur_.line, cur_.text, "an integer duration");
        std::int64_t amount = std::stoll(cur_.value);
        advance();
        std::int64_t scale;
        if (word_is(cur_, "SECONDS"))
            scale = 1000;
        else if (word_is(cur_, "MINUTES"))
            scale = 60000;
        else if (word_is(cur_, "MILLISECONDS"))
            scale = 1;
        else
            throw SyntaxError(cur_.line, cur_.text, "Seconds, Minutes or Milliseconds");
        advance();
        expect_punct("]");
        return amount * scale;
    }

    QueryAlgebra parse_sparql() {
        while (word_is(cur_, "PREFIX")) {
            advance();
            if (cur_.kind != Token::Kind::Pname || !cur_.extra.empty())
                throw SyntaxError(cur_.line, cur_.text, "a prefix declaration 'name:'");
            std::string name = cur_.value;
            advance();
            if (cur_.kind != Token::Kind::Iri)
                throw SyntaxError(cur_.line, cur_.text, "an IRI");
            prefixes_[name] = cur_.value;
            advance();
        }
        check_unsupported(cur_);
        expect_word("SELECT");
        QueryAlgebra algebra;
        check_unsupported(cur_);
        if (at_punct("*")) throw UnsupportedFeature("SELECT *");
        while (cur_.kind == Token::Kind::Var) {
            algebra.projection.push_back(Variable{cur_.value});
            advance();
        }
        if (algebra.projection.empty())
            throw SyntaxError(cur_.line, cur_.text, "a projection variable");
        expect_word("WHERE");
        expect_punct("{");
        if (at_punct("{")) {
            // { BGP } UNION { BGP } [ UNION { BGP } ]*
            algebra.branches.push_back(parse_group());
            while (word_is(cur_, "UNION")) {
                advance();
                algebra.branches.push_back(parse_group());
            }
        } else {
            algebra.branches.push_back(parse_triples_block());
        }
        expect_punct("}");
        check_unsupported(cur_);
        return algebra;
    }

    Bgp parse_group() {
        expect_punct("{");
        Bgp bgp = parse_triples_block();
        expect_punct("}");
        return bgp;
    }

    Bgp parse_triples_block() {
        Bgp bgp;
        while (true) {
            check_unsupported(cur_);
            if (at_punct("}") || cur_.kind == Token::Kind::End || word_is(cur_, "UNION")) break;
            parse_same_subject(bgp);
            if (at_punct(".")) {
                advance();
                continue;
            }
            break;
        }
        if (bgp.empty()) throw SyntaxError(cur_.line, cur_.text, "at least one triple pattern");
        return bgp;
    }

    void parse_same_subject(Bgp& bgp) {
        PatternTerm subject = parse_pattern_term("subject");
        while (true) {
            PatternTerm predicate = parse_verb();
            while (true) {
                PatternTerm object = parse_pattern_term("object");
                bgp.push_back(TriplePattern{subject, predicate, object});
                if (at_punct(",")) {
                    advance();
                    continue;
                }
                break;
            }
            if (at_punct(";")) {
                advance();
                if (at_punct(".") || at_punct("}")) break;  // trailing ';'
                continue;
            }
            break;
        }
    }

    PatternTerm parse_verb() {
        if (word_is(cur_, "A")) {
            advance();
            return Term::iri(kRdfType);
        }
        check_unsupported(cur_);
        PatternTerm verb = parse_pattern_term("predicate");
        if (const Term* t = as_term(verb); t && t->kind != TermKind::Iri)
            throw SyntaxError(cur_.line, cur_.text, "an IRI predicate");
        return verb;
    }

    PatternTerm parse_pattern_term(const char* role) {
        check_unsupported(cur_);
        switch (cur_.kind) {
            case Token::Kind::Var: {
                Variable v{cur_.value};
                advance();
                return v;
            }
            case Token::Kind::Iri: {
                Term t = Term::iri(cur_.value);
                advance();
                return t;
            }
            case Token::Kind::Pname: {
                Term t = Term::iri(expand(cur_));
                advance();
                return t;
            }
            case Token::Kind::String: {
                Token tok = cur_;
                advance();
                if (tok.extra.empty()) return Term::plain_literal(tok.value);
                if (tok.extra[0] == '@') return Term::plain_literal(tok.value + tok.extra);
                if (tok.extra[0] == '<')
                    return Term::typed_literal(tok.value,
                                               tok.extra.substr(1, tok.extra.size() - 2));
                // prefixed datatype
                std::size_t colon = tok.extra.find(':');
                Token dt;
                dt.kind = Token::Kind::Pname;
                dt.value = tok.extra.substr(0, colon);
                dt.extra = tok.extra.substr(colon + 1);
                dt.text = tok.extra;
                dt.line = tok.line;
                return Term::typed_literal(tok.value, expand(dt));
            }
            case Token::Kind::Integer: {
                Term t = Term::typed_literal(cur_.value,
                                             cur_.extra == "decimal" ? kXsdDecimal : kXsdInteger);
                advance();
                return t;
            }
            default:
                throw SyntaxError(cur_.line, cur_.text, std::string("a ") + role);
        }
    }

    std::string expand(const Token& pname) {
        auto it = prefixes_.find(pname.value);
        if (it == prefixes_.end())
            throw SyntaxError(pname.line, pname.text, "a declared prefix");
        return it->second + pname.extra;
    }

    static void validate(const ContinuousQuerySpec& spec) {
        if (spec.batch_ms <= 0) throw ValidationError("batch interval must be > 0");
        if (spec.slide_ms < spec.batch_ms)
            throw ValidationError("slide must be >= batch interval");
        if (spec.window_ms < spec.slide_ms) throw ValidationError("window must be >= slide");
        if (spec.window_ms % spec.batch_ms != 0)
            throw ValidationError("window must be an integer multiple of batch interval");
        if (spec.slide_ms % spec.batch_ms != 0)
            throw ValidationError("slide must be an integer multiple of batch interval");
        for (const Bgp& branch : spec.algebra.branches) {
            if (branch.empty()) throw ValidationError("empty BGP branch");
            std::set<std::string> vars;
            for (const TriplePattern& tp : branch)
                for (const std::string& v : tp.variables()) vars.insert(v);
            for (const Variable& v : spec.algebra.projection)
                if (!vars.contains(v.name))
                    throw ValidationError("projected variable ?" + v.name +
                                          " does not occur in every union branch");
        }
    }

    const std::string& src_;
    Lexer lexer_;
    Token cur_;
    std::map<std::string, std::string> prefixes_;
};

}  // namespace

ContinuousQuerySpec parse_continuous_query(const std::string& text) {
    return Parser(text).parse();
}

}  // namespace rsp
