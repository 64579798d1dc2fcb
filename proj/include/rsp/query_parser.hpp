#pragma once

#include <string>

#include "rsp/query_ast.hpp"

namespace rsp {

/// Parses one continuous query of the form
///   STREAMING { WINDOW [n unit] SLIDE [n unit] BATCH [n unit] }
///   REGISTER { QUERYID [id] SPARQL [ <SPARQL SELECT over BGPs/UNION> ] }
/// Prefixes are expanded; ';' and ',' abbreviations are flattened into simple
/// triple patterns. Throws SyntaxError, ValidationError, UnsupportedFeature.
ContinuousQuerySpec parse_continuous_query(const std::string& text);

}  // namespace rsp
