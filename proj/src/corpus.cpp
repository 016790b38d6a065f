#include "gsub/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "gsub/error.hpp"
#include "gsub/schema_io.hpp"

namespace gsub {

namespace {

[[noreturn]] void at_line(const char* code, std::size_t line,
                          const std::string& detail) {
  throw Error(code, "line " + std::to_string(line) + ": " + detail);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool blank(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

nlohmann::ordered_json parse_line(const std::string& line, std::size_t number) {
  try {
    return nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    at_line("parse-error", number, e.what());
  }
}

SourceRef source_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw Error("invalid-record",
                "source must be a one-key object (text | image_ref | smiles)");
  }
  auto it = j.begin();
  SourceRef ref;
  if (it.key() == "text") {
    ref.kind = SourceKind::text;
  } else if (it.key() == "image_ref") {
    ref.kind = SourceKind::image_ref;
  } else if (it.key() == "smiles") {
    ref.kind = SourceKind::smiles;
  } else {
    throw Error("invalid-record", "unknown source kind \"" + it.key() + "\"");
  }
  if (!it.value().is_string()) {
    throw Error("invalid-record", "source value must be a string");
  }
  ref.value = it.value().get<std::string>();
  return ref;
}

}  // namespace

const char* to_string(Domain d) {
  switch (d) {
    case Domain::algorithm: return "algorithm";
    case Domain::molecule: return "molecule";
    case Domain::scene: return "scene";
    case Domain::event: return "event";
  }
  return "algorithm";
}

std::optional<Domain> domain_from_string(std::string_view s) {
  if (s == "algorithm") return Domain::algorithm;
  if (s == "molecule") return Domain::molecule;
  if (s == "scene") return Domain::scene;
  if (s == "event") return Domain::event;
  return std::nullopt;
}

const char* to_string(SourceKind k) {
  switch (k) {
    case SourceKind::text: return "text";
    case SourceKind::image_ref: return "image_ref";
    case SourceKind::smiles: return "smiles";
  }
  return "text";
}

nlohmann::ordered_json corpus_record_to_json(const CorpusRecord& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["id"] = r.id;
  j["domain"] = to_string(r.domain);
  j["graph"] = graph_to_json(r.graph);
  if (r.source) {
    nlohmann::ordered_json src = nlohmann::ordered_json::object();
    src[to_string(r.source->kind)] = r.source->value;
    j["source"] = std::move(src);
  }
  if (r.target_text) j["target_text"] = *r.target_text;
  if (r.meta.is_object() && !r.meta.empty()) j["meta"] = r.meta;
  return j;
}

CorpusRecord corpus_record_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) {
    throw Error("invalid-record", "record must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "id" && key != "domain" && key != "graph" && key != "source" &&
        key != "target_text" && key != "meta") {
      throw Error("invalid-record", "unknown key \"" + key + "\"");
    }
  }
  CorpusRecord r;
  if (!j.contains("id") || !j["id"].is_string() ||
      j["id"].get<std::string>().empty()) {
    throw Error("invalid-record", "id must be a non-empty string");
  }
  r.id = j["id"].get<std::string>();
  if (!j.contains("domain") || !j["domain"].is_string()) {
    throw Error("invalid-record", "domain must be a string");
  }
  auto d = domain_from_string(j["domain"].get<std::string>());
  if (!d) {
    throw Error("invalid-record",
                "unknown domain \"" + j["domain"].get<std::string>() + "\"");
  }
  r.domain = *d;
  if (!j.contains("graph")) {
    throw Error("invalid-record", "missing graph");
  }
  try {
    r.graph = graph_from_json(j["graph"]);
  } catch (const Error& e) {
    throw Error("invalid-record", std::string("graph: ") + e.what());
  }
  if (j.contains("source")) r.source = source_from_json(j["source"]);
  if (j.contains("target_text")) {
    if (!j["target_text"].is_string()) {
      throw Error("invalid-record", "target_text must be a string");
    }
    r.target_text = j["target_text"].get<std::string>();
  }
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) {
      throw Error("invalid-record", "meta must be an object");
    }
    r.meta = j["meta"];
  }
  return r;
}

std::vector<CorpusRecord> read_corpus_text(const std::string& text) {
  std::vector<CorpusRecord> records;
  std::set<std::string> seen;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    std::size_t number = i + 1;
    nlohmann::ordered_json j = parse_line(lines[i], number);
    CorpusRecord r;
    try {
      r = corpus_record_from_json(j);
    } catch (const Error& e) {
      at_line("invalid-record", number, e.what());
    }
    if (!seen.insert(r.id).second) {
      at_line("invalid-record", number, "duplicate record id \"" + r.id + "\"");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<CorpusRecord> read_corpus(const std::string& path) {
  return read_corpus_text(slurp_file(path));
}

std::string write_corpus_text(const std::vector<CorpusRecord>& records) {
  std::string out;
  for (const CorpusRecord& r : records) {
    out += corpus_record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<TaskInstance> read_instances_text(const std::string& text) {
  std::vector<TaskInstance> instances;
  std::set<std::string> seen;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    std::size_t number = i + 1;
    nlohmann::ordered_json j = parse_line(lines[i], number);
    TaskInstance t;
    try {
      t = task_instance_from_json(j);
    } catch (const Error& e) {
      at_line("invalid-record", number, e.what());
    }
    if (!seen.insert(t.instance_id).second) {
      at_line("invalid-record", number,
              "duplicate instance id \"" + t.instance_id + "\"");
    }
    instances.push_back(std::move(t));
  }
  return instances;
}

std::vector<TaskInstance> read_instances(const std::string& path) {
  return read_instances_text(slurp_file(path));
}

std::string write_instances_text(const std::vector<TaskInstance>& instances) {
  std::string out;
  for (const TaskInstance& t : instances) {
    out += task_instance_to_json(t).dump();
    out += '\n';
  }
  return out;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("io-error", path + ": read failed");
  return buf.str();
}

}  // namespace gsub
