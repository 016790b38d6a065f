#include "gsub/cli.hpp"

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsub/algo.hpp"
#include "gsub/corpus.hpp"
#include "gsub/error.hpp"
#include "gsub/forge.hpp"
#include "gsub/manifest.hpp"
#include "gsub/metrics.hpp"
#include "gsub/rng.hpp"
#include "gsub/schedule.hpp"
#include "gsub/schema_io.hpp"
#include "gsub/stats.hpp"

namespace gsub {

namespace {

namespace fs = std::filesystem;

struct Io {
  std::ostream& out;
  std::ostream& err;
};

int run_impl(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, bool allow_env);

SchemaRealization realization_arg(const std::string& s) {
  auto r = realization_from_string(s);
  if (!r) throw Error("invalid-config", "unknown realization \"" + s + "\"");
  return *r;
}

// Outputs are staged under a ".partial" suffix and renamed once fully
// written, so an interrupted run never leaves a clean-named partial file.
void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw Error("io-error",
                  target.parent_path().string() + ": " + ec.message());
    }
  }
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("io-error", tmp.string() + ": cannot write");
    f.write(content.data(),
            static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Error("io-error", tmp.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error("io-error", path + ": " + ec.message());
}

// Buffers every output, then writes them and a manifest beside them. All
// content is composed in memory first, so a data error never reaches disk.
struct Committer {
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::string& path, std::string content) {
    files.emplace_back(path, std::move(content));
  }

  void commit(RunManifest manifest, const std::string& manifest_path) {
    manifest.tool_version = kToolVersion;
    for (const auto& [path, content] : files) {
      manifest.outputs.push_back(FileDigest{path, sha256_hex(content)});
    }
    for (const auto& [path, content] : files) {
      write_file_atomic(path, content);
    }
    write_file_atomic(manifest_path, manifest_to_json(manifest).dump(2) + "\n");
  }
};

FileDigest input_digest(const std::string& path) {
  return FileDigest{path, sha256_file(path)};
}

std::optional<std::uint64_t> parse_seed_text(const std::string& text) {
  if (text.empty() || text.size() > 20) return std::nullopt;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  try {
    std::size_t used = 0;
    std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Forges one instance for a record, or nullopt when sampling is exhausted
// (unsampleable query, no valid perturbation, no big-enough component).
// Shape mismatches between the record and the task are hard errors.
std::optional<TaskInstance> forge_for_record(
    const CorpusRecord& rec, TaskKind task, SchemaRealization realization,
    std::uint64_t seed, double positive_rate, int subgraph_k,
    std::optional<GarKind> fixed_kind, std::size_t index) {
  static constexpr std::array<GarKind, 4> kKinds{
      GarKind::connectivity, GarKind::cycle, GarKind::shortest_path,
      GarKind::matching};
  // Anonymous graphs inherit the record id, so instance ids and provenance
  // stay traceable to the corpus line.
  GraphState g = rec.graph;
  if (!g.graph_id) g.graph_id = rec.id;
  switch (task) {
    case TaskKind::ere:
      if (!rec.source || rec.source->kind != SourceKind::text) {
        throw Error("invalid-record", rec.id + ": ere needs a text source");
      }
      return make_generation_instance("text", rec.id, rec.source->value, g,
                                      realization);
    case TaskKind::sgg:
      if (!rec.source || rec.source->kind != SourceKind::image_ref) {
        throw Error("invalid-record",
                    rec.id + ": sgg needs an image_ref source");
      }
      return make_generation_instance("image", rec.id, rec.source->value, g,
                                      realization);
    case TaskKind::mgd: {
      if (!rec.target_text) {
        throw Error("invalid-record", rec.id + ": mgd needs target_text");
      }
      std::optional<std::string> smiles;
      if (rec.source && rec.source->kind == SourceKind::smiles) {
        smiles = rec.source->value;
      }
      return make_description_instance(g, smiles, *rec.target_text,
                                       realization);
    }
    case TaskKind::gar: {
      std::size_t first = 0;
      std::size_t tries = kKinds.size();
      if (fixed_kind) {
        while (kKinds[first] != *fixed_kind) ++first;
        tries = 1;
      } else {
        first = index % kKinds.size();
      }
      for (std::size_t t = 0; t < tries; ++t) {
        GarKind kind = kKinds[(first + t) % kKinds.size()];
        try {
          return make_gar_instance(g, kind, seed, realization);
        } catch (const Error& e) {
          if (e.code() != "unsampleable-query") throw;
        }
      }
      return std::nullopt;
    }
    case TaskKind::cc: {
      bool label = SeededRng(seed).unit() < positive_rate;
      try {
        return make_consistency_instance(rec.id, g, label, seed, realization);
      } catch (const Error& e) {
        if (e.code() != "no-valid-perturbation") throw;
      }
      return std::nullopt;
    }
    case TaskKind::sr: {
      bool positive = SeededRng(seed).unit() < positive_rate;
      try {
        return make_subgraph_instance(g, subgraph_k, positive, seed,
                                      realization);
      } catch (const Error& e) {
        if (e.code() != "no-component-large-enough" &&
            e.code() != "no-valid-negative") {
          throw;
        }
      }
      return std::nullopt;
    }
  }
  throw Error("invalid-config", "unknown task");
}

struct ForgedBatch {
  std::vector<TaskInstance> instances;
  std::size_t exhausted = 0;
};

ForgedBatch forge_batch(const std::vector<CorpusRecord>& records,
                        TaskKind task, SchemaRealization realization,
                        std::uint64_t batch_seed, double positive_rate,
                        int subgraph_k, std::optional<GarKind> fixed_kind) {
  ForgedBatch batch;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::optional<TaskInstance> t = forge_for_record(
        records[i], task, realization, SeededRng::mix(batch_seed, i),
        positive_rate, subgraph_k, fixed_kind, i);
    if (!t) {
      ++batch.exhausted;
      continue;
    }
    if (!ids.insert(t->instance_id).second) {
      throw Error("duplicate-id", "instance id \"" + t->instance_id +
                                      "\" forged twice (record \"" +
                                      records[i].id + "\")");
    }
    batch.instances.push_back(std::move(*t));
  }
  return batch;
}

// ---------------------------------------------------------------------------
// subcommand options

struct ConvertOpts {
  std::string corpus;
  std::string from = "canonical-json";
  std::string to = "canonical-json";
  std::string out;
};

struct StatsOpts {
  std::string corpus;
  bool per_graph = false;
  bool relation_pairs = false;
  std::string out;
};

struct ForgeOpts {
  std::string corpus;
  std::string task;
  std::string domain;
  std::string realization = "unified-text";
  std::uint64_t seed = 0;
  std::string kind;
  double positive_rate = 0.5;
  int subgraph_k = 3;
  std::string out;
};

struct ScheduleOpts {
  std::string catalog;
  std::string paradigm = "umt";
  double ratio = 0.0;
  std::uint64_t seed = 0;
  bool random_offset = false;
  int chain_depth = 1;
  double positive_rate = 0.5;
  double mix_gar = 0.5;
  double mix_cc = 0.25;
  double mix_sr = 0.25;
  std::string out;
};

struct EvalOpts {
  std::string task;
  std::string pred;
  std::string gold;
  int k = 50;
  bool smooth_bleu = false;
  double rouge_beta = 1.0;
  bool fold_symmetric = false;
  std::string out;
};

struct PerturbOpts {
  std::string corpus;
  std::string op = "endpoint-rewire";
  std::uint64_t seed = 0;
  std::string out;
};

// ---------------------------------------------------------------------------
// subcommands

void cmd_validate(const std::string& corpus, Io io) {
  std::vector<CorpusRecord> records = read_corpus(corpus);
  io.out << "ok: " << records.size() << " records\n";
}

void cmd_convert(const ConvertOpts& o, Io io) {
  SchemaRealization from = realization_arg(o.from);
  SchemaRealization to = realization_arg(o.to);
  std::string text = slurp_file(o.corpus);

  std::string converted;
  std::set<std::string> seen;
  std::size_t line_number = 0;
  std::size_t count = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string line = nl == std::string::npos ? text.substr(start)
                                               : text.substr(start, nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_number;
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') blank = false;
    }
    if (blank) continue;

    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("parse-error",
                  "line " + std::to_string(line_number) + ": " + e.what());
    }
    try {
      if (!j.is_object() || !j.contains("graph")) {
        throw Error("invalid-record", "missing graph");
      }
      if (from != SchemaRealization::canonical_json) {
        if (!j["graph"].is_string()) {
          throw Error("invalid-record",
                      std::string("graph must be a serialized ") +
                          to_string(from) + " string");
        }
        GraphState g = parse(j["graph"].get<std::string>(), from);
        j["graph"] = graph_to_json(g);
      }
      CorpusRecord rec = corpus_record_from_json(j);
      if (!seen.insert(rec.id).second) {
        throw Error("invalid-record",
                    "duplicate record id \"" + rec.id + "\"");
      }
      nlohmann::ordered_json out_json = corpus_record_to_json(rec);
      if (to != SchemaRealization::canonical_json) {
        out_json["graph"] = serialize(rec.graph, to);
      }
      converted += out_json.dump();
      converted += '\n';
      ++count;
    } catch (const Error& e) {
      if (e.code() == "invalid-record" || e.code() == "syntax-error" ||
          e.code() == "semantic-error") {
        throw Error("invalid-record",
                    "line " + std::to_string(line_number) + ": " + e.what());
      }
      throw;
    }
  }

  Committer c;
  c.add(o.out, converted);
  RunManifest m;
  m.command = {"convert", "--corpus", o.corpus, "--from", o.from,
               "--to",    o.to,       "--out",  o.out};
  m.config = {{"corpus", o.corpus},
              {"from", o.from},
              {"to", o.to},
              {"out", o.out}};
  m.inputs = {input_digest(o.corpus)};
  c.commit(std::move(m), o.out + ".manifest.json");
  io.err << "converted " << count << " records -> " << o.out << "\n";
}

void cmd_stats(const StatsOpts& o, Io io) {
  std::vector<CorpusRecord> records = read_corpus(o.corpus);
  if (records.empty()) throw Error("empty-corpus", o.corpus);
  StatsOptions options;
  options.two_hop = o.relation_pairs ? TwoHopMode::relation_pairs
                                     : TwoHopMode::node_triples;
  std::string payload;
  if (o.per_graph) {
    for (const CorpusRecord& rec : records) {
      GraphState g = rec.graph;
      if (!g.graph_id) g.graph_id = rec.id;
      payload += stat_record_to_json(graph_stats(g, options)).dump();
      payload += '\n';
    }
  } else {
    std::vector<GraphState> graphs;
    graphs.reserve(records.size());
    for (const CorpusRecord& rec : records) graphs.push_back(rec.graph);
    payload = corpus_stats_to_json(corpus_stats(graphs, options)).dump();
    payload += '\n';
  }

  if (o.out.empty()) {
    io.out << payload;
    return;
  }
  Committer c;
  c.add(o.out, payload);
  RunManifest m;
  m.command = {"stats", "--corpus", o.corpus};
  if (o.per_graph) m.command.push_back("--per-graph");
  if (o.relation_pairs) m.command.push_back("--relation-pairs");
  m.command.insert(m.command.end(), {"--out", o.out});
  m.config = {{"corpus", o.corpus},
              {"mode", o.per_graph ? "per-graph" : "corpus"},
              {"two_hop", o.relation_pairs ? "relation-pairs" : "node-triples"},
              {"out", o.out}};
  m.inputs = {input_digest(o.corpus)};
  c.commit(std::move(m), o.out + ".manifest.json");
  io.err << "stats for " << records.size() << " graphs -> " << o.out << "\n";
}

void cmd_forge(const ForgeOpts& o, std::uint64_t seed, Io io) {
  std::vector<CorpusRecord> records = read_corpus(o.corpus);
  if (!o.domain.empty()) {
    Domain wanted = *domain_from_string(o.domain);
    std::vector<CorpusRecord> kept;
    for (CorpusRecord& rec : records) {
      if (rec.domain == wanted) kept.push_back(std::move(rec));
    }
    records = std::move(kept);
  }
  if (records.empty()) throw Error("empty-corpus", o.corpus);
  TaskKind task = *task_kind_from_string(o.task);
  SchemaRealization realization = realization_arg(o.realization);
  std::optional<GarKind> fixed_kind;
  if (!o.kind.empty()) {
    fixed_kind = gar_kind_from_string(o.kind);
    if (!fixed_kind) {
      throw Error("invalid-config", "unknown gar kind \"" + o.kind + "\"");
    }
  }
  ForgedBatch batch = forge_batch(records, task, realization, seed,
                                  o.positive_rate, o.subgraph_k, fixed_kind);

  Committer c;
  c.add(o.out, write_instances_text(batch.instances));
  RunManifest m;
  m.command = {"forge",        "--corpus", o.corpus,
               "--task",       o.task,     "--realization",
               o.realization,  "--seed",   std::to_string(seed)};
  if (!o.domain.empty()) m.command.insert(m.command.end(), {"--domain", o.domain});
  if (fixed_kind) m.command.insert(m.command.end(), {"--kind", o.kind});
  m.command.insert(m.command.end(),
                   {"--positive-rate", format_decimal(o.positive_rate),
                    "--subgraph-k", std::to_string(o.subgraph_k), "--out",
                    o.out});
  m.config = {{"corpus", o.corpus},
              {"task", o.task},
              {"domain", o.domain.empty() ? "all" : o.domain},
              {"realization", o.realization},
              {"seed", seed},
              {"gar_kind", fixed_kind ? o.kind : "mixed"},
              {"positive_rate", o.positive_rate},
              {"subgraph_k", o.subgraph_k},
              {"out", o.out},
              {"forged", batch.instances.size()},
              {"exhausted", batch.exhausted}};
  m.seed = seed;
  m.inputs = {input_digest(o.corpus)};
  c.commit(std::move(m), o.out + ".manifest.json");
  io.err << "forged " << batch.instances.size() << " instances ("
         << batch.exhausted << " exhausted) -> " << o.out << "\n";
}

struct CatalogFile {
  std::vector<TaskCatalogEntry> entries;
  std::vector<std::vector<TaskInstance>> base;
  std::vector<std::string> input_paths;
  std::size_t exhausted = 0;
};

CatalogFile load_catalog(const std::string& path, std::uint64_t seed,
                         double positive_rate) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(slurp_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse-error", path + ": " + e.what());
  }
  if (!j.is_object() || j.size() != 1 || !j.contains("entries") ||
      !j["entries"].is_array() || j["entries"].empty()) {
    throw Error("invalid-config",
                path + ": catalog must be {\"entries\": [...]} with at least "
                       "one entry");
  }
  fs::path base_dir = fs::path(path).parent_path();
  CatalogFile catalog;
  catalog.input_paths.push_back(path);
  for (std::size_t e = 0; e < j["entries"].size(); ++e) {
    const auto& entry = j["entries"][e];
    std::string where = path + ": entries[" + std::to_string(e) + "]";
    if (!entry.is_object()) {
      throw Error("invalid-config", where + " must be an object");
    }
    for (const auto& [key, value] : entry.items()) {
      (void)value;
      if (key != "task" && key != "corpus" && key != "instances" &&
          key != "domain" && key != "native_realization" && key != "kind" &&
          key != "subgraph_k") {
        throw Error("invalid-config", where + ": unknown key \"" + key + "\"");
      }
    }
    if (!entry.contains("task") || !entry["task"].is_string()) {
      throw Error("invalid-config", where + ": task must be a string");
    }
    auto task = task_kind_from_string(entry["task"].get<std::string>());
    if (!task) {
      throw Error("invalid-config",
                  where + ": unknown task \"" +
                      entry["task"].get<std::string>() + "\"");
    }
    bool has_corpus = entry.contains("corpus");
    bool has_instances = entry.contains("instances");
    if (has_corpus == has_instances) {
      throw Error("invalid-config",
                  where + ": exactly one of corpus or instances is required");
    }
    const char* ref_key = has_corpus ? "corpus" : "instances";
    if (!entry[ref_key].is_string() ||
        entry[ref_key].get<std::string>().empty()) {
      throw Error("invalid-config",
                  where + ": " + ref_key + " must be a non-empty path");
    }
    std::string ref = entry[ref_key].get<std::string>();
    std::string resolved = (base_dir / ref).string();

    TaskCatalogEntry cat = catalog_entry(*task, ref);
    if (entry.contains("native_realization")) {
      if (!entry["native_realization"].is_string()) {
        throw Error("invalid-config",
                    where + ": native_realization must be a string");
      }
      auto r = realization_from_string(
          entry["native_realization"].get<std::string>());
      if (!r) {
        throw Error("invalid-config",
                    where + ": unknown realization \"" +
                        entry["native_realization"].get<std::string>() + "\"");
      }
      cat.native_realization = *r;
    }

    std::vector<TaskInstance> instances;
    if (has_instances) {
      if (entry.contains("domain") || entry.contains("kind") ||
          entry.contains("subgraph_k")) {
        throw Error("invalid-config",
                    where + ": domain/kind/subgraph_k apply only to corpus "
                            "entries");
      }
      instances = read_instances(resolved);
    } else {
      std::vector<CorpusRecord> records = read_corpus(resolved);
      if (entry.contains("domain")) {
        if (!entry["domain"].is_string()) {
          throw Error("invalid-config", where + ": domain must be a string");
        }
        auto dom = domain_from_string(entry["domain"].get<std::string>());
        if (!dom) {
          throw Error("invalid-config",
                      where + ": unknown domain \"" +
                          entry["domain"].get<std::string>() + "\"");
        }
        std::vector<CorpusRecord> kept;
        for (CorpusRecord& rec : records) {
          if (rec.domain == *dom) kept.push_back(std::move(rec));
        }
        records = std::move(kept);
      }
      std::optional<GarKind> fixed_kind;
      if (entry.contains("kind")) {
        if (!entry["kind"].is_string() ||
            !(fixed_kind =
                  gar_kind_from_string(entry["kind"].get<std::string>()))) {
          throw Error("invalid-config", where + ": unknown gar kind");
        }
      }
      int subgraph_k = 3;
      if (entry.contains("subgraph_k")) {
        if (!entry["subgraph_k"].is_number_integer() ||
            entry["subgraph_k"].get<int>() < 2) {
          throw Error("invalid-config",
                      where + ": subgraph_k must be an integer >= 2");
        }
        subgraph_k = entry["subgraph_k"].get<int>();
      }
      std::uint64_t entry_seed =
          SeededRng::mix(SeededRng::mix(seed, 0x5EEDBA5Eull), e);
      ForgedBatch batch =
          forge_batch(records, *task, cat.native_realization, entry_seed,
                      positive_rate, subgraph_k, fixed_kind);
      catalog.exhausted += batch.exhausted;
      instances = std::move(batch.instances);
    }

    catalog.entries.push_back(cat);
    catalog.base.push_back(std::move(instances));
    catalog.input_paths.push_back(resolved);
  }
  return catalog;
}

void cmd_schedule(const ScheduleOpts& o, std::uint64_t seed, Io io) {
  auto paradigm = paradigm_from_string(o.paradigm);
  if (!paradigm) {
    throw Error("invalid-config", "unknown paradigm \"" + o.paradigm + "\"");
  }
  ParadigmConfig config;
  config.paradigm = *paradigm;
  config.interleave_ratio = o.ratio;
  config.interleave_mix = InterleaveMix{o.mix_gar, o.mix_cc, o.mix_sr};
  config.seed = seed;
  config.random_offset = o.random_offset;
  config.chain_depth = o.chain_depth;
  config.positive_rate = o.positive_rate;

  CatalogFile catalog = load_catalog(o.catalog, seed, o.positive_rate);
  TrainingSchedule schedule =
      build_schedule(catalog.entries, catalog.base, config);
  ScheduleCheck check = validate_schedule(schedule);
  if (!check.ok()) {
    throw Error("invalid-schedule", check.violations.front().rule + ": " +
                                        check.violations.front().detail);
  }
  ScheduleStats stats = interleave_stats(schedule);

  fs::path dir(o.out);
  std::string schedule_path = (dir / "schedule.txt").string();
  std::string stats_path = (dir / "stats.json").string();

  Committer c;
  c.add(schedule_path, schedule_to_text(schedule));
  c.add(stats_path, stats_to_json(stats).dump(2) + "\n");
  RunManifest m;
  m.command = {"schedule",
               "--paradigm",
               o.paradigm,
               "--ratio",
               format_decimal(o.ratio),
               "--seed",
               std::to_string(seed),
               "--catalog",
               o.catalog,
               "--chain-depth",
               std::to_string(o.chain_depth),
               "--positive-rate",
               format_decimal(o.positive_rate),
               "--mix-gar",
               format_decimal(o.mix_gar),
               "--mix-cc",
               format_decimal(o.mix_cc),
               "--mix-sr",
               format_decimal(o.mix_sr)};
  if (o.random_offset) m.command.push_back("--random-offset");
  m.command.insert(m.command.end(), {"--out", o.out});
  m.config = nlohmann::ordered_json::object();
  m.config["catalog"] = o.catalog;
  m.config["out"] = o.out;
  m.config["paradigm_config"] = config_to_json(config);
  std::size_t base_total = 0;
  for (const auto& stream : catalog.base) base_total += stream.size();
  m.config["base_instances"] = base_total;
  m.config["base_exhausted"] = catalog.exhausted;
  m.seed = seed;
  for (const std::string& path : catalog.input_paths) {
    m.inputs.push_back(input_digest(path));
  }
  c.commit(std::move(m), (dir / "manifest.json").string());
  io.err << "scheduled " << stats.total << " instances ("
         << stats.interleaved << " interleaved) -> " << schedule_path << "\n";
}

void cmd_eval(const EvalOpts& o, Io io) {
  std::vector<TaskInstance> golds = read_instances(o.gold);
  std::vector<Prediction> preds = read_predictions(slurp_file(o.pred));
  EvalConfig config;
  config.task = *task_kind_from_string(o.task);
  config.k = o.k;
  config.smooth_bleu = o.smooth_bleu;
  config.rouge_beta = o.rouge_beta;
  config.fold_symmetric = o.fold_symmetric;
  MetricReport report = evaluate_run(preds, golds, config);
  std::string payload = report_to_json(report).dump(2) + "\n";

  if (o.out.empty()) {
    io.out << payload;
    return;
  }
  Committer c;
  c.add(o.out, payload);
  RunManifest m;
  m.command = {"eval", "--task", o.task, "--pred", o.pred,
               "--gold", o.gold, "--k", std::to_string(o.k)};
  if (o.smooth_bleu) m.command.push_back("--smooth-bleu");
  m.command.insert(m.command.end(),
                   {"--rouge-beta", format_decimal(o.rouge_beta)});
  if (o.fold_symmetric) m.command.push_back("--fold-symmetric");
  m.command.insert(m.command.end(), {"--out", o.out});
  m.config = report_to_json(report)["config"];
  m.config["pred"] = o.pred;
  m.config["gold"] = o.gold;
  m.config["out"] = o.out;
  m.inputs = {input_digest(o.pred), input_digest(o.gold)};
  c.commit(std::move(m), o.out + ".manifest.json");
  io.err << "evaluated " << report.gold_count << " instances -> " << o.out
         << "\n";
}

void cmd_perturb(const PerturbOpts& o, std::uint64_t seed, Io io) {
  std::vector<CorpusRecord> records = read_corpus(o.corpus);
  PerturbOp op = *perturb_op_from_string(o.op);

  std::vector<CorpusRecord> out_records;
  std::size_t exhausted = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::uint64_t record_seed = SeededRng::mix(seed, i);
    try {
      PerturbResult result = perturb(records[i].graph, op, record_seed);
      CorpusRecord rec = records[i];
      rec.graph = std::move(result.graph);
      if (!rec.meta.is_object()) rec.meta = nlohmann::ordered_json::object();
      rec.meta["perturbation"] = perturbation_to_json(result.descriptor);
      out_records.push_back(std::move(rec));
    } catch (const Error& e) {
      if (e.code() == "no-valid-perturbation" ||
          e.code() == "precondition-violation") {
        ++exhausted;
        continue;
      }
      throw;
    }
  }

  Committer c;
  c.add(o.out, write_corpus_text(out_records));
  RunManifest m;
  m.command = {"perturb", "--corpus", o.corpus,
               "--op",    o.op,       "--seed",
               std::to_string(seed),  "--out",  o.out};
  m.config = {{"corpus", o.corpus},
              {"op", o.op},
              {"seed", seed},
              {"out", o.out},
              {"perturbed", out_records.size()},
              {"exhausted", exhausted}};
  m.seed = seed;
  m.inputs = {input_digest(o.corpus)};
  c.commit(std::move(m), o.out + ".manifest.json");
  io.err << "perturbed " << out_records.size() << " records (" << exhausted
         << " exhausted) -> " << o.out << "\n";
}

int cmd_rerun(const std::string& manifest_path, Io io) {
  RunManifest m = read_manifest(manifest_path);
  if (m.tool_version != kToolVersion) {
    throw Error("invalid-manifest", "tool version mismatch: manifest " +
                                        m.tool_version + ", tool " +
                                        kToolVersion);
  }
  if (m.command.empty() || m.command.front() == "rerun") {
    throw Error("invalid-manifest", "manifest command is not replayable");
  }
  for (const FileDigest& input : m.inputs) {
    std::string now = sha256_file(input.path);
    if (now != input.sha256) {
      throw Error("digest-mismatch",
                  "input " + input.path + " changed since the recorded run");
    }
  }
  int rc = run_impl(m.command, io.out, io.err, false);
  if (rc != 0) return rc;
  std::size_t mismatches = 0;
  for (const FileDigest& output : m.outputs) {
    std::string now = sha256_file(output.path);
    if (now != output.sha256) {
      io.err << "output differs: " << output.path << "\n";
      ++mismatches;
    }
  }
  if (mismatches > 0) return 1;
  io.out << "byte-identical: " << m.outputs.size() << " outputs\n";
  return 0;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, bool allow_env) {
  CLI::App app{"deterministic graph data engineering toolkit", "gsub"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("gsub ") + kToolVersion);

  static const std::vector<std::string> kRealizations{
      "unified-text", "xml-style", "natural-language", "canonical-json"};
  static const std::vector<std::string> kAllTasks{"sgg", "ere", "mgd",
                                                  "gar", "cc",  "sr"};
  static const std::vector<std::string> kEvalTasks{"gar", "mgd", "sgg", "ere"};
  static const std::vector<std::string> kGarKinds{
      "connectivity", "cycle", "shortest-path", "matching"};
  static const std::vector<std::string> kParadigms{"nst", "ust",   "nmt",
                                                   "umt", "nmt-i", "g-sub"};
  static const std::vector<std::string> kOps{"endpoint-rewire", "edge-swap",
                                            "delete-insert"};

  std::string validate_corpus;
  CLI::App* sc_validate =
      app.add_subcommand("validate", "check a corpus file");
  sc_validate->add_option("--corpus", validate_corpus, "corpus JSONL")
      ->required();

  ConvertOpts convert;
  CLI::App* sc_convert =
      app.add_subcommand("convert", "re-serialize corpus graphs");
  sc_convert->add_option("--corpus", convert.corpus, "corpus JSONL")
      ->required();
  sc_convert->add_option("--from", convert.from, "input graph realization")
      ->check(CLI::IsMember(kRealizations));
  sc_convert->add_option("--to", convert.to, "output graph realization")
      ->check(CLI::IsMember(kRealizations));
  sc_convert->add_option("--out", convert.out, "output JSONL")->required();

  StatsOpts stats;
  CLI::App* sc_stats =
      app.add_subcommand("stats", "structural statistics over a corpus");
  sc_stats->add_option("--corpus", stats.corpus, "corpus JSONL")->required();
  sc_stats->add_flag("--per-graph", stats.per_graph,
                     "one JSON object per graph instead of corpus averages");
  sc_stats->add_flag("--relation-pairs", stats.relation_pairs,
                     "count two-hop chains as ordered relation pairs");
  sc_stats->add_option("--out", stats.out, "output file (default stdout)");

  ForgeOpts forge;
  CLI::App* sc_forge =
      app.add_subcommand("forge", "build task instances from a corpus");
  sc_forge->add_option("--corpus", forge.corpus, "corpus JSONL")->required();
  sc_forge->add_option("--task", forge.task, "task kind")
      ->required()
      ->check(CLI::IsMember(kAllTasks));
  sc_forge->add_option("--domain", forge.domain, "restrict to one domain")
      ->check(CLI::IsMember(
          std::vector<std::string>{"algorithm", "molecule", "scene", "event"}));
  sc_forge->add_option("--realization", forge.realization, "schema realization")
      ->check(CLI::IsMember(kRealizations));
  sc_forge->add_option("--seed", forge.seed, "master seed");
  sc_forge->add_option("--kind", forge.kind, "fixed gar kind (default mixed)")
      ->check(CLI::IsMember(kGarKinds));
  sc_forge
      ->add_option("--positive-rate", forge.positive_rate,
                   "positive label rate for cc/sr")
      ->check(CLI::Range(0.0, 1.0));
  sc_forge->add_option("--subgraph-k", forge.subgraph_k, "sr subgraph size")
      ->check(CLI::Range(2, 1000000));
  sc_forge->add_option("--out", forge.out, "instance JSONL")->required();

  ScheduleOpts schedule;
  CLI::App* sc_schedule =
      app.add_subcommand("schedule", "assemble a training schedule");
  sc_schedule->add_option("--catalog", schedule.catalog, "catalog JSON")
      ->required();
  sc_schedule->add_option("--paradigm", schedule.paradigm, "training paradigm")
      ->check(CLI::IsMember(kParadigms));
  sc_schedule->add_option("--ratio", schedule.ratio, "interleave ratio")
      ->check(CLI::Range(0.0, 1.0));
  sc_schedule->add_option("--seed", schedule.seed, "master seed");
  sc_schedule->add_flag("--random-offset", schedule.random_offset,
                        "scatter consumers instead of adjacent placement");
  sc_schedule
      ->add_option("--chain-depth", schedule.chain_depth,
                   "consumers chained per producer")
      ->check(CLI::Range(1, 1000000));
  sc_schedule
      ->add_option("--positive-rate", schedule.positive_rate,
                   "positive label rate for cc/sr")
      ->check(CLI::Range(0.0, 1.0));
  sc_schedule->add_option("--mix-gar", schedule.mix_gar, "gar share")
      ->check(CLI::Range(0.0, 1.0));
  sc_schedule->add_option("--mix-cc", schedule.mix_cc, "cc share")
      ->check(CLI::Range(0.0, 1.0));
  sc_schedule->add_option("--mix-sr", schedule.mix_sr, "sr share")
      ->check(CLI::Range(0.0, 1.0));
  sc_schedule->add_option("--out", schedule.out, "output directory")
      ->required();

  EvalOpts eval;
  CLI::App* sc_eval = app.add_subcommand("eval", "score a prediction file");
  sc_eval->add_option("--task", eval.task, "task kind")
      ->required()
      ->check(CLI::IsMember(kEvalTasks));
  sc_eval->add_option("--pred", eval.pred, "prediction JSONL")->required();
  sc_eval->add_option("--gold", eval.gold, "gold instance JSONL")->required();
  sc_eval->add_option("--k", eval.k, "recall cutoff for sgg")
      ->check(CLI::Range(1, 1000000));
  sc_eval->add_flag("--smooth-bleu", eval.smooth_bleu, "add-one BLEU smoothing");
  sc_eval->add_option("--rouge-beta", eval.rouge_beta, "ROUGE-L beta")
      ->check(CLI::Range(1e-9, 1e9));
  sc_eval->add_flag("--fold-symmetric", eval.fold_symmetric,
                    "fold triple direction before matching");
  sc_eval->add_option("--out", eval.out, "report file (default stdout)");

  PerturbOpts perturb;
  CLI::App* sc_perturb =
      app.add_subcommand("perturb", "structural negatives for a corpus");
  sc_perturb->add_option("--corpus", perturb.corpus, "corpus JSONL")
      ->required();
  sc_perturb->add_option("--op", perturb.op, "perturbation op")
      ->check(CLI::IsMember(kOps));
  sc_perturb->add_option("--seed", perturb.seed, "master seed");
  sc_perturb->add_option("--out", perturb.out, "output JSONL")->required();

  std::string rerun_manifest;
  CLI::App* sc_rerun =
      app.add_subcommand("rerun", "replay a recorded run and compare digests");
  sc_rerun->add_option("manifest", rerun_manifest, "manifest JSON path")
      ->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::optional<std::uint64_t> env_seed;
  if (allow_env) {
    if (const char* value = std::getenv("GSUB_SEED")) {
      env_seed = parse_seed_text(value);
      if (!env_seed) {
        err << "usage error: GSUB_SEED must be an unsigned 64-bit integer\n";
        return 2;
      }
    }
  }

  Io io{out, err};
  try {
    if (sc_validate->parsed()) {
      cmd_validate(validate_corpus, io);
    } else if (sc_convert->parsed()) {
      cmd_convert(convert, io);
    } else if (sc_stats->parsed()) {
      cmd_stats(stats, io);
    } else if (sc_forge->parsed()) {
      cmd_forge(forge, env_seed.value_or(forge.seed), io);
    } else if (sc_schedule->parsed()) {
      cmd_schedule(schedule, env_seed.value_or(schedule.seed), io);
    } else if (sc_eval->parsed()) {
      cmd_eval(eval, io);
    } else if (sc_perturb->parsed()) {
      cmd_perturb(perturb, env_seed.value_or(perturb.seed), io);
    } else if (sc_rerun->parsed()) {
      return cmd_rerun(rerun_manifest, io);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  return run_impl(args, out, err, true);
}

}  // namespace gsub
