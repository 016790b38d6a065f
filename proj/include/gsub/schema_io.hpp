#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gsub/graph.hpp"

namespace gsub {

// The four graph encodings the toolkit can read and write. Every realization
// is invertible: parse(serialize(g, r), r) is structurally equal to g.
enum class SchemaRealization {
  unified_text,
  xml_style,
  natural_language,
  canonical_json,
};

const char* to_string(SchemaRealization r);
std::optional<SchemaRealization> realization_from_string(std::string_view s);

struct ParseOptions {
  // Drop exact-duplicate triples (and exact-duplicate entities) on ingest
  // instead of raising semantic-error.
  bool dedupe = false;
};

// Deterministic text rendering: entities sorted by id, relations sorted by
// (subject, predicate, object), attribute keys sorted. graph_id is not
// emitted, so structurally equal graphs render identically.
//
// Throws Error{"invalid-graph"} and, for unified-text only,
// Error{"unrepresentable-label"} when a label/predicate/attribute contains a
// control character the grammar has no escape for.
std::string serialize(const GraphState& g, SchemaRealization r);

// Throws Error{"syntax-error"} (with line/column and the expected token) or
// Error{"semantic-error"} (dangling endpoint, duplicate id or triple).
GraphState parse(const std::string& text, SchemaRealization r,
                 const ParseOptions& options = {});

// Canonical JSON object form used in corpus files:
// {"graph_id"?, "entities": [{"id","label"?,"attrs"?}...],
//  "relations": [{"subject","predicate","object","attrs"?}...]}
// with keys in exactly that order. Includes graph_id when present (the
// serialize() realization output omits it).
nlohmann::ordered_json graph_to_json(const GraphState& g);
GraphState graph_from_json(const nlohmann::json& j,
                           const ParseOptions& options = {});

}  // namespace gsub
