#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gsub/forge.hpp"
#include "gsub/graph.hpp"

namespace gsub {

enum class Domain { algorithm, molecule, scene, event };

const char* to_string(Domain d);
std::optional<Domain> domain_from_string(std::string_view s);

enum class SourceKind { text, image_ref, smiles };

const char* to_string(SourceKind k);

// Modality payload of a record: extraction passage, opaque image handle, or
// SMILES string. Encoded in JSON as a one-key object, e.g. {"text": "..."}.
struct SourceRef {
  SourceKind kind = SourceKind::text;
  std::string value;
};

struct CorpusRecord {
  std::string id;
  Domain domain = Domain::algorithm;
  GraphState graph;
  std::optional<SourceRef> source;
  std::optional<std::string> target_text;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

// Keys emitted in the order id, domain, graph, source, target_text, meta;
// absent optionals and an empty meta are omitted. The graph field is the
// canonical JSON object (graph_id kept when present).
nlohmann::ordered_json corpus_record_to_json(const CorpusRecord& r);

// Strict: unknown keys, missing id/domain/graph, or a graph that fails
// validation raise Error{"invalid-record"}.
CorpusRecord corpus_record_from_json(const nlohmann::ordered_json& j);

// JSONL, one record per line; blank lines are skipped. Errors carry 1-based
// line numbers: parse-error (bad JSON), invalid-record (bad shape, invalid
// graph, duplicate id). read_corpus adds io-error for unreadable paths.
std::vector<CorpusRecord> read_corpus_text(const std::string& text);
std::vector<CorpusRecord> read_corpus(const std::string& path);
std::string write_corpus_text(const std::vector<CorpusRecord>& records);

// Same conventions for task-instance JSONL.
std::vector<TaskInstance> read_instances_text(const std::string& text);
std::vector<TaskInstance> read_instances(const std::string& path);
std::string write_instances_text(const std::vector<TaskInstance>& instances);

// Whole-file read, Error{"io-error"} when the path cannot be opened.
std::string slurp_file(const std::string& path);

}  // namespace gsub
