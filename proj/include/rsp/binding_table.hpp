#pragma once

#include <string>
#include <vector>

#include "rsp/query_ast.hpp"
#include "rsp/term.hpp"

namespace rsp {

/// A multiset of variable bindings. Row order is unspecified; equality of
/// results is multiset equality.
struct BindingTable {
    std::vector<std::string> schema;          // variable names, ordered
    std::vector<std::vector<Term>> rows;      // each row has schema.size() terms

    std::size_t cardinality() const { return rows.size(); }
    int column_of(const std::string& var) const {
        for (std::size_t i = 0; i < schema.size(); ++i)
            if (schema[i] == var) return static_cast<int>(i);
        return -1;
    }
};

/// One binding per triple matching the pattern. Schema lists the pattern's
/// variables in subject, predicate, object order (a repeated variable appears
/// once and must match equal terms).
BindingTable scan_pattern(const std::vector<Triple>& dataset, const TriplePattern& tp);

/// Natural join on shared schema variables; cartesian product when none are
/// shared. Output schema is left's schema followed by right's non-shared
/// variables. Bag semantics.
BindingTable hash_join(const BindingTable& left, const BindingTable& right);

/// Restricts to the projection list, in order. Bag semantics (no dedup).
BindingTable project(const BindingTable& table, const std::vector<Variable>& projection);

/// Appends right's rows to left's under left's schema (schemas must list the
/// same variables, possibly in different order).
BindingTable union_tables(const BindingTable& left, const BindingTable& right);

/// Canonical multiset fingerprint, for order-insensitive comparison in tests
/// and for reproducibility checks.
std::vector<std::string> sorted_row_keys(const BindingTable& table);

}  // namespace rsp
