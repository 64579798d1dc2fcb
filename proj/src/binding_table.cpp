#include "rsp/binding_table.hpp"

#include <algorithm>
#include <unordered_map>

#include "rsp/errors.hpp"
#include "rsp/ntriples.hpp"

namespace rsp {
namespace {

struct RowKeyHash {
    std::size_t operator()(const std::string& s) const { return std::hash<std::string>{}(s); }
};

std::string term_key(const Term& t) {
    return std::to_string(static_cast<int>(t.kind)) + "\x1f" + t.lexical + "\x1f" + t.datatype;
}

}  // namespace

BindingTable scan_pattern(const std::vector<Triple>& dataset, const TriplePattern& tp) {
    BindingTable out;
    // Schema: variables in s,p,o order, deduplicated.
    std::vector<std::pair<std::string, int>> slots;  // var -> position (0,1,2)
    const PatternTerm* positions[3] = {&tp.subject, &tp.predicate, &tp.object};
    for (int i = 0; i < 3; ++i) {
        if (const Variable* v = as_variable(*positions[i])) {
            bool seen = false;
            for (const auto& [name, _] : slots) seen |= (name == v->name);
            if (!seen) slots.emplace_back(v->name, i);
        }
    }
    for (const auto& [name, _] : slots) out.schema.push_back(name);

    for (const Triple& t : dataset) {
        const Term* fields[3] = {&t.subject, &t.predicate, &t.object};
        bool match = true;
        for (int i = 0; i < 3 && match; ++i) {
            if (const Term* bound = as_term(*positions[i])) {
                match = (*bound == *fields[i]);
            }
        }
        if (!match) continue;
        // Repeated variables must bind equal terms.
        std::vector<Term> row;
        row.reserve(slots.size());
        for (const auto& [name, pos] : slots) row.push_back(*fields[pos]);
        for (int i = 0; i < 3 && match; ++i) {
            if (const Variable* v = as_variable(*positions[i])) {
                for (const auto& [name, pos] : slots)
                    if (name == v->name && !(*fields[i] == *fields[pos])) match = false;
            }
        }
        if (match) out.rows.push_back(std::move(row));
    }
    return out;
}

BindingTable hash_join(const BindingTable& left, const BindingTable& right) {
    std::vector<int> shared_left, shared_right;
    std::vector<int> right_rest;
    for (std::size_t j = 0; j < right.schema.size(); ++j) {
        int li = left.column_of(right.schema[j]);
        if (li >= 0) {
            shared_left.push_back(li);
            shared_right.push_back(static_cast<int>(j));
        } else {
            right_rest.push_back(static_cast<int>(j));
        }
    }

    BindingTable out;
    out.schema = left.schema;
    for (int j : right_rest) out.schema.push_back(right.schema[j]);

    auto key_of = [](const std::vector<Term>& row, const std::vector<int>& cols) {
        std::string key;
        for (int c : cols) {
            key += term_key(row[c]);
            key += '\x1e';
        }
        return key;
    };

    if (shared_left.empty()) {
        out.rows.reserve(left.rows.size() * right.rows.size());
        for (const auto& lrow : left.rows) {
            for (const auto& rrow : right.rows) {
                std::vector<Term> row = lrow;
                for (int j : right_rest) row.push_back(rrow[j]);
                out.rows.push_back(std::move(row));
            }
        }
        return out;
    }

    // Build on the smaller side, probe with the larger; output row layout is
    // fixed by the schema so the result does not depend on build choice.
    const bool build_left = left.rows.size() <= right.rows.size();
    const BindingTable& build = build_left ? left : right;
    const BindingTable& probe = build_left ? right : left;
    const std::vector<int>& build_cols = build_left ? shared_left : shared_right;
    const std::vector<int>& probe_cols = build_left ? shared_right : shared_left;

    std::unordered_map<std::string, std::vector<const std::vector<Term>*>, RowKeyHash> table;
    table.reserve(build.rows.size());
    for (const auto& row : build.rows) table[key_of(row, build_cols)].push_back(&row);

    for (const auto& prow : probe.rows) {
        auto it = table.find(key_of(prow, probe_cols));
        if (it == table.end()) continue;
        for (const std::vector<Term>* brow : it->second) {
            const std::vector<Term>& lrow = build_left ? *brow : prow;
            const std::vector<Term>& rrow = build_left ? prow : *brow;
            std::vector<Term> row = lrow;
            row.reserve(out.schema.size());
            for (int j : right_rest) row.push_back(rrow[j]);
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

BindingTable project(const BindingTable& table, const std::vector<Variable>& projection) {
    BindingTable out;
    std::vector<int> cols;
    for (const Variable& v : projection) {
        int c = table.column_of(v.name);
        if (c < 0) throw Error("projection variable ?" + v.name + " missing from result schema");
        out.schema.push_back(v.name);
        cols.push_back(c);
    }
    out.rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<Term> projected;
        projected.reserve(cols.size());
        for (int c : cols) projected.push_back(row[c]);
        out.rows.push_back(std::move(projected));
    }
    return out;
}

BindingTable union_tables(const BindingTable& left, const BindingTable& right) {
    BindingTable out = left;
    std::vector<int> cols;
    for (const std::string& var : left.schema) {
        int c = right.column_of(var);
        if (c < 0) throw Error("union branch schema mismatch on ?" + var);
        cols.push_back(c);
    }
    for (const auto& row : right.rows) {
        std::vector<Term> mapped;
        mapped.reserve(cols.size());
        for (int c : cols) mapped.push_back(row[c]);
        out.rows.push_back(std::move(mapped));
    }
    return out;
}

std::vector<std::string> sorted_row_keys(const BindingTable& table) {
    std::vector<std::string> keys;
    keys.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::string key;
        for (const Term& t : row) {
            key += serialize_term(t);
            key += '\t';
        }
        keys.push_back(std::move(key));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace rsp
