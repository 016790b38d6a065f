#include "gsub/schedule.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "gsub/error.hpp"
#include "gsub/rng.hpp"

namespace gsub {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

TaskKind next_interleave_task(TaskKind k) {
  if (k == TaskKind::gar) return TaskKind::cc;
  if (k == TaskKind::cc) return TaskKind::sr;
  return TaskKind::gar;
}

void check_config(const std::vector<TaskCatalogEntry>& catalog,
                  const std::vector<std::vector<TaskInstance>>& base,
                  const ParadigmConfig& config) {
  if (catalog.size() != base.size()) {
    throw Error("invalid-config",
                "catalog and base instance lists differ in length");
  }
  if (catalog.empty()) throw Error("empty-corpus", "catalog is empty");
  std::size_t total = 0;
  for (const auto& list : base) total += list.size();
  if (total == 0) throw Error("empty-corpus", "no base instances");

  std::set<TaskKind> tasks;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const TaskCatalogEntry& e = catalog[i];
    if (e.role != role_of(e.task)) {
      throw Error("invalid-config",
                  std::string("role does not match task ") + to_string(e.task));
    }
    if (!tasks.insert(e.task).second) {
      throw Error("invalid-config",
                  std::string("duplicate catalog task ") + to_string(e.task));
    }
    for (const TaskInstance& inst : base[i]) {
      if (inst.task != e.task) {
        throw Error("invalid-config",
                    inst.instance_id + " does not belong to the " +
                        to_string(e.task) + " corpus");
      }
    }
  }

  const double r = config.interleave_ratio;
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error("invalid-config", "interleave_ratio must lie in [0, 1]");
  }
  if (r != 0.0 && !paradigm_interleaves(config.paradigm)) {
    throw Error("invalid-config",
                std::string(to_string(config.paradigm)) +
                    " does not interleave; ratio must be 0");
  }
  const InterleaveMix& m = config.interleave_mix;
  if (!(m.gar >= 0.0) || !(m.cc >= 0.0) || !(m.sr >= 0.0) ||
      std::fabs(m.gar + m.cc + m.sr - 1.0) > 1e-9) {
    throw Error("invalid-config",
                "interleave_mix weights must be non-negative and sum to 1");
  }
  if (config.chain_depth < 1) {
    throw Error("invalid-config", "chain_depth must be at least 1");
  }
  if (!(config.positive_rate >= 0.0 && config.positive_rate <= 1.0)) {
    throw Error("invalid-config", "positive_rate must lie in [0, 1]");
  }
}

SchemaRealization native_for(const std::vector<TaskCatalogEntry>& catalog,
                             TaskKind k) {
  for (const TaskCatalogEntry& e : catalog) {
    if (e.task == k) return e.native_realization;
  }
  return default_native_realization(k);
}

TaskInstance forge_consumer(
    TaskKind duty, const GraphState& g, const TaskInstance& producer,
    std::uint64_t fseed, SeededRng& rng,
    const std::function<SchemaRealization(TaskKind)>& realization_for,
    double positive_rate) {
  TaskKind task = duty;
  for (int hop = 0; hop < 3; ++hop, task = next_interleave_task(task)) {
    SchemaRealization realization = realization_for(task);
    switch (task) {
      case TaskKind::gar: {
        std::uint64_t first = rng.below(4);
        for (std::uint64_t dk = 0; dk < 4; ++dk) {
          auto kind = static_cast<GarKind>((first + dk) % 4);
          try {
            return make_gar_instance(g, kind, fseed, realization);
          } catch (const Error&) {
          }
        }
        break;
      }
      case TaskKind::cc: {
        bool label = rng.unit() < positive_rate;
        const std::string& ref = producer.input_refs.empty()
                                     ? producer.instance_id
                                     : producer.input_refs.front();
        try {
          return make_consistency_instance(ref, g, label, fseed, realization);
        } catch (const Error&) {
        }
        break;
      }
      case TaskKind::sr: {
        bool positive = rng.unit() < positive_rate;
        int k = 2 + static_cast<int>(rng.below(2));
        for (int attempt = 0; attempt < 2; ++attempt, k = k == 2 ? 3 : 2) {
          try {
            return make_subgraph_instance(g, k, positive, fseed, realization);
          } catch (const Error&) {
          }
        }
        break;
      }
      default:
        break;
    }
  }
  // A gar cycle query succeeds on any valid graph, so this is unreachable
  // for graphs produced by the generation builders.
  throw Error("no-generation-source",
              "no interleavable task fits the producer graph");
}

}  // namespace

const char* to_string(Paradigm p) {
  switch (p) {
    case Paradigm::nst: return "NST";
    case Paradigm::ust: return "UST";
    case Paradigm::nmt: return "NMT";
    case Paradigm::umt: return "UMT";
    case Paradigm::nmt_i: return "NMT-I";
    case Paradigm::g_sub: return "G-Sub";
  }
  return "UMT";
}

std::optional<Paradigm> paradigm_from_string(std::string_view s) {
  std::string k = lower(s);
  if (k == "nst") return Paradigm::nst;
  if (k == "ust") return Paradigm::ust;
  if (k == "nmt") return Paradigm::nmt;
  if (k == "umt") return Paradigm::umt;
  if (k == "nmt-i") return Paradigm::nmt_i;
  if (k == "g-sub") return Paradigm::g_sub;
  return std::nullopt;
}

const char* to_string(SchemaMode m) {
  return m == SchemaMode::native ? "native" : "unified";
}

std::optional<SchemaMode> schema_mode_from_string(std::string_view s) {
  if (s == "native") return SchemaMode::native;
  if (s == "unified") return SchemaMode::unified;
  return std::nullopt;
}

bool paradigm_is_unified(Paradigm p) {
  return p == Paradigm::ust || p == Paradigm::umt || p == Paradigm::g_sub;
}

bool paradigm_interleaves(Paradigm p) {
  return p == Paradigm::nmt_i || p == Paradigm::g_sub;
}

bool paradigm_is_single_stream(Paradigm p) {
  return p != Paradigm::nst && p != Paradigm::ust;
}

SchemaRealization default_native_realization(TaskKind k) {
  switch (k) {
    case TaskKind::ere: return SchemaRealization::natural_language;
    case TaskKind::sgg: return SchemaRealization::xml_style;
    default: return SchemaRealization::unified_text;
  }
}

TaskCatalogEntry catalog_entry(TaskKind task, const std::string& corpus_ref) {
  TaskCatalogEntry e;
  e.task = task;
  e.role = role_of(task);
  e.corpus_ref = corpus_ref;
  e.native_realization = default_native_realization(task);
  return e;
}

TrainingSchedule build_schedule(
    const std::vector<TaskCatalogEntry>& catalog,
    const std::vector<std::vector<TaskInstance>>& base_instances,
    const ParadigmConfig& config) {
  check_config(catalog, base_instances, config);
  TrainingSchedule out;
  out.config = config;
  const bool unified = paradigm_is_unified(config.paradigm);

  if (!paradigm_is_single_stream(config.paradigm)) {
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      SchemaRealization target = unified ? SchemaRealization::unified_text
                                         : catalog[i].native_realization;
      std::vector<TaskInstance> stream;
      stream.reserve(base_instances[i].size());
      for (const TaskInstance& inst : base_instances[i]) {
        stream.push_back(re_realize(inst, target));
      }
      SeededRng rng(SeededRng::mix(config.seed, i));
      rng.shuffle(stream);
      out.streams.push_back(std::move(stream));
    }
    return out;
  }

  std::vector<TaskInstance> pool;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    SchemaRealization target = unified ? SchemaRealization::unified_text
                                       : catalog[i].native_realization;
    for (const TaskInstance& inst : base_instances[i]) {
      pool.push_back(re_realize(inst, target));
    }
  }
  SeededRng shuffle_rng(SeededRng::mix(config.seed, 0));
  shuffle_rng.shuffle(pool);

  std::size_t m = 0;
  if (paradigm_interleaves(config.paradigm)) {
    m = static_cast<std::size_t>(std::floor(
        config.interleave_ratio * static_cast<double>(pool.size()) + 1e-9));
  }
  if (m == 0) {
    out.streams.push_back(std::move(pool));
    return out;
  }

  std::vector<std::size_t> producers;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].role == TaskRole::generate) producers.push_back(i);
  }
  if (producers.empty()) {
    throw Error("no-generation-source",
                "interleaving needs at least one generation instance");
  }

  const std::array<double, 3> weights{config.interleave_mix.gar,
                                      config.interleave_mix.cc,
                                      config.interleave_mix.sr};
  const std::array<TaskKind, 3> duty_kinds{TaskKind::gar, TaskKind::cc,
                                           TaskKind::sr};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int t = 0; t < 3; ++t) {
    double q = weights[t] * static_cast<double>(m);
    counts[t] = static_cast<std::size_t>(std::floor(q));
    frac[t] = q - std::floor(q);
    assigned += counts[t];
  }
  while (assigned < m) {
    int best = 0;
    for (int t = 1; t < 3; ++t) {
      if (frac[t] > frac[best]) best = t;
    }
    ++counts[best];
    frac[best] = -1.0;
    ++assigned;
  }

  std::vector<TaskKind> duty;
  duty.reserve(m);
  for (int t = 0; t < 3; ++t) {
    duty.insert(duty.end(), counts[t], duty_kinds[t]);
  }
  SeededRng assign_rng(SeededRng::mix(config.seed, 1));
  assign_rng.shuffle(duty);

  auto realization_for = [&](TaskKind k) {
    return unified ? SchemaRealization::unified_text : native_for(catalog, k);
  };

  struct OffsetConsumer {
    std::string producer_id;
    std::uint64_t draw = 0;
    TaskInstance inst;
  };
  const auto depth = static_cast<std::size_t>(config.chain_depth);
  std::vector<std::vector<TaskInstance>> attached(pool.size());
  std::vector<OffsetConsumer> offset_consumers;

  for (std::size_t j = 0; j < m; ++j) {
    std::size_t chain = j / depth;
    int step = static_cast<int>(j % depth) + 1;
    std::size_t prod_idx = producers[chain % producers.size()];
    const TaskInstance& prod = pool[prod_idx];
    GraphState g = embedded_graph(prod);
    g.graph_id = prod.provenance.source_graph_id;

    std::uint64_t fseed = SeededRng::mix(config.seed, 2 + j);
    SeededRng crng(SeededRng::mix(fseed, 3));
    TaskInstance c = forge_consumer(duty[j], g, prod, fseed, crng,
                                    realization_for, config.positive_rate);
    c.provenance.trajectory_step = step;
    out.trajectory_links.push_back({prod.instance_id, c.instance_id});
    if (config.random_offset) {
      offset_consumers.push_back(
          {prod.instance_id, crng.next(), std::move(c)});
    } else {
      attached[prod_idx].push_back(std::move(c));
    }
  }

  auto& stream = out.streams.emplace_back();
  if (!config.random_offset) {
    stream.reserve(pool.size() + m);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      stream.push_back(std::move(pool[i]));
      for (TaskInstance& c : attached[i]) stream.push_back(std::move(c));
    }
  } else {
    stream = std::move(pool);
    for (OffsetConsumer& oc : offset_consumers) {
      std::size_t pos = 0;
      while (pos < stream.size() &&
             stream[pos].instance_id != oc.producer_id) {
        ++pos;
      }
      std::size_t span = stream.size() - pos;
      std::size_t where = pos + 1 + static_cast<std::size_t>(oc.draw % span);
      stream.insert(stream.begin() + static_cast<std::ptrdiff_t>(where),
                    std::move(oc.inst));
    }
  }
  return out;
}

ScheduleCheck validate_schedule(const TrainingSchedule& s) {
  ScheduleCheck out;
  auto flag = [&](const char* rule, std::string detail) {
    out.violations.push_back({rule, std::move(detail)});
  };

  if (paradigm_is_single_stream(s.config.paradigm)) {
    if (s.streams.size() != 1) {
      flag("stream shape", std::string(to_string(s.config.paradigm)) +
                               " must have exactly one stream");
    }
  } else {
    std::set<TaskKind> seen;
    for (const auto& stream : s.streams) {
      std::optional<TaskKind> task;
      for (const TaskInstance& inst : stream) {
        if (!task) {
          task = inst.task;
        } else if (*task != inst.task) {
          flag("stream shape", "mixed tasks in a single-task stream");
          break;
        }
      }
      if (task && !seen.insert(*task).second) {
        flag("stream shape",
             std::string("two streams carry task ") + to_string(*task));
      }
    }
    if (!s.trajectory_links.empty()) {
      flag("stream shape",
           "single-task paradigms cannot carry trajectory links");
    }
  }

  std::map<std::string, std::pair<std::size_t, std::size_t>> where;
  for (std::size_t si = 0; si < s.streams.size(); ++si) {
    for (std::size_t i = 0; i < s.streams[si].size(); ++i) {
      const TaskInstance& inst = s.streams[si][i];
      if (!where.emplace(inst.instance_id, std::make_pair(si, i)).second) {
        flag("duplicate id", inst.instance_id);
      }
      if (inst.role != role_of(inst.task)) {
        flag("role mismatch", inst.instance_id);
      }
      if (paradigm_is_unified(s.config.paradigm) &&
          inst.realization != SchemaRealization::unified_text) {
        flag("realization", inst.instance_id + " is not unified-text");
      }
    }
  }

  for (const TrajectoryLink& link : s.trajectory_links) {
    auto p = where.find(link.producer);
    auto c = where.find(link.consumer);
    if (p == where.end() || c == where.end()) {
      flag("unknown id", link.producer + " -> " + link.consumer);
      continue;
    }
    if (p->second.first != c->second.first) {
      flag("link order",
           "link spans two streams: " + link.producer + " -> " + link.consumer);
      continue;
    }
    if (c->second.second <= p->second.second) {
      flag("link order",
           link.consumer + " does not appear after " + link.producer);
      continue;
    }
    const TaskInstance& prod = s.streams[p->second.first][p->second.second];
    const TaskInstance& cons = s.streams[c->second.first][c->second.second];
    if (prod.role != TaskRole::generate) {
      flag("provenance mismatch",
           link.producer + " is not a generation instance");
      continue;
    }
    if (cons.provenance.source_graph_id != prod.provenance.source_graph_id) {
      flag("provenance mismatch",
           link.consumer + " names source graph " +
               cons.provenance.source_graph_id + " but the producer holds " +
               prod.provenance.source_graph_id);
      continue;
    }
    try {
      GraphState gold = embedded_graph(prod);
      GraphState emb = embedded_graph(cons);
      bool negative_cc = cons.task == TaskKind::cc && cons.gold.is_string() &&
                         cons.gold.get<std::string>() == "inconsistent";
      if (negative_cc) {
        if (!cons.provenance.perturbation_applied) {
          flag("provenance mismatch",
               link.consumer + " is a negative without a perturbation "
                               "descriptor");
          continue;
        }
        bool desc_ok = true;
        std::set<Triple> expected;
        for (const auto& r : gold.relations) expected.insert(triple_of(r));
        const auto& touched = cons.provenance.perturbation_applied->touched;
        for (const auto& pair : touched) {
          if (expected.erase(pair.first) == 0) desc_ok = false;
        }
        for (const auto& pair : touched) {
          if (!expected.insert(pair.second).second) desc_ok = false;
        }
        std::set<Triple> got;
        for (const auto& r : emb.relations) got.insert(triple_of(r));
        if (!desc_ok || got != expected || emb.entities != gold.entities) {
          flag("provenance mismatch",
               link.consumer + ": embedded graph is not the recorded "
                               "perturbation of the producer graph");
        }
      } else if (!structural_equal(emb, gold)) {
        flag("provenance mismatch",
             link.consumer +
                 ": embedded graph differs from the producer gold graph");
      }
    } catch (const Error& e) {
      flag("provenance mismatch", link.consumer + ": " + e.what());
    }
  }
  return out;
}

ScheduleStats interleave_stats(const TrainingSchedule& s) {
  ScheduleCheck check = validate_schedule(s);
  if (!check.ok()) {
    throw Error("invalid-schedule", check.violations.front().rule + ": " +
                                        check.violations.front().detail);
  }
  ScheduleStats st;
  for (const auto& stream : s.streams) {
    st.total += stream.size();
    for (const TaskInstance& inst : stream) {
      ++st.per_task[to_string(inst.task)];
      ++st.per_role[to_string(inst.role)];
    }
  }
  std::set<std::string> consumers;
  std::map<std::string, int> chains;
  for (const TrajectoryLink& link : s.trajectory_links) {
    consumers.insert(link.consumer);
    ++chains[link.producer];
  }
  st.interleaved = consumers.size();
  st.interleaved_fraction =
      st.total == 0 ? 0.0
                    : static_cast<double>(st.interleaved) /
                          static_cast<double>(st.total);
  for (const auto& [producer, n] : chains) {
    (void)producer;
    ++st.trajectory_lengths[n];
  }
  return st;
}

nlohmann::ordered_json stats_to_json(const ScheduleStats& st) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["total"] = st.total;
  nlohmann::ordered_json per_task = nlohmann::ordered_json::object();
  for (const auto& [k, v] : st.per_task) per_task[k] = v;
  j["per_task"] = std::move(per_task);
  nlohmann::ordered_json per_role = nlohmann::ordered_json::object();
  for (const auto& [k, v] : st.per_role) per_role[k] = v;
  j["per_role"] = std::move(per_role);
  j["interleaved"] = st.interleaved;
  j["interleaved_fraction"] = st.interleaved_fraction;
  nlohmann::ordered_json lengths = nlohmann::ordered_json::object();
  for (const auto& [len, n] : st.trajectory_lengths) {
    lengths[std::to_string(len)] = n;
  }
  j["trajectory_lengths"] = std::move(lengths);
  return j;
}

nlohmann::ordered_json config_to_json(const ParadigmConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["paradigm"] = to_string(c.paradigm);
  j["interleave_ratio"] = c.interleave_ratio;
  nlohmann::ordered_json mix = nlohmann::ordered_json::object();
  mix["gar"] = c.interleave_mix.gar;
  mix["cc"] = c.interleave_mix.cc;
  mix["sr"] = c.interleave_mix.sr;
  j["interleave_mix"] = std::move(mix);
  j["seed"] = c.seed;
  j["random_offset"] = c.random_offset;
  j["chain_depth"] = c.chain_depth;
  j["positive_rate"] = c.positive_rate;
  return j;
}

ParadigmConfig config_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw Error("syntax-error", "config: expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "paradigm" && key != "interleave_ratio" &&
        key != "interleave_mix" && key != "seed" && key != "random_offset" &&
        key != "chain_depth" && key != "positive_rate") {
      throw Error("syntax-error", "config: unexpected key '" + key + "'");
    }
  }
  ParadigmConfig c;
  if (!j.contains("paradigm") || !j["paradigm"].is_string()) {
    throw Error("syntax-error", "config: missing string key 'paradigm'");
  }
  auto p = paradigm_from_string(j["paradigm"].get<std::string>());
  if (!p) {
    throw Error("syntax-error", "config: unknown paradigm '" +
                                    j["paradigm"].get<std::string>() + "'");
  }
  c.paradigm = *p;
  if (!j.contains("interleave_ratio") || !j["interleave_ratio"].is_number()) {
    throw Error("syntax-error", "config: missing number 'interleave_ratio'");
  }
  c.interleave_ratio = j["interleave_ratio"].get<double>();
  if (!j.contains("interleave_mix") || !j["interleave_mix"].is_object()) {
    throw Error("syntax-error", "config: missing object 'interleave_mix'");
  }
  const auto& mix = j["interleave_mix"];
  for (const char* key : {"gar", "cc", "sr"}) {
    if (!mix.contains(key) || !mix[key].is_number()) {
      throw Error("syntax-error",
                  std::string("config: interleave_mix needs number '") + key +
                      "'");
    }
  }
  c.interleave_mix.gar = mix["gar"].get<double>();
  c.interleave_mix.cc = mix["cc"].get<double>();
  c.interleave_mix.sr = mix["sr"].get<double>();
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    throw Error("syntax-error", "config: missing unsigned key 'seed'");
  }
  c.seed = j["seed"].get<std::uint64_t>();
  if (!j.contains("random_offset") || !j["random_offset"].is_boolean()) {
    throw Error("syntax-error", "config: missing boolean 'random_offset'");
  }
  c.random_offset = j["random_offset"].get<bool>();
  if (!j.contains("chain_depth") || !j["chain_depth"].is_number_integer()) {
    throw Error("syntax-error", "config: missing integer 'chain_depth'");
  }
  c.chain_depth = j["chain_depth"].get<int>();
  if (!j.contains("positive_rate") || !j["positive_rate"].is_number()) {
    throw Error("syntax-error", "config: missing number 'positive_rate'");
  }
  c.positive_rate = j["positive_rate"].get<double>();
  return c;
}

std::string schedule_to_text(const TrainingSchedule& s) {
  nlohmann::ordered_json header = config_to_json(s.config);
  nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
  for (const auto& stream : s.streams) sizes.push_back(stream.size());
  header["stream_sizes"] = std::move(sizes);
  header["links"] = s.trajectory_links.size();

  std::string out = header.dump() + "\n";
  for (const auto& stream : s.streams) {
    for (const TaskInstance& inst : stream) {
      out += task_instance_to_json(inst).dump() + "\n";
    }
  }
  for (const TrajectoryLink& link : s.trajectory_links) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["producer"] = link.producer;
    j["consumer"] = link.consumer;
    out += j.dump() + "\n";
  }
  return out;
}

TrainingSchedule schedule_from_text(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) {
    throw Error("syntax-error", "schedule: missing header line");
  }

  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(lines[0]);
  } catch (const nlohmann::json::exception& e) {
    throw Error("syntax-error", std::string("schedule header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("stream_sizes") ||
      !header["stream_sizes"].is_array() || !header.contains("links") ||
      !header["links"].is_number_unsigned()) {
    throw Error("syntax-error",
                "schedule header: needs stream_sizes and links");
  }
  std::vector<std::size_t> sizes;
  for (const auto& v : header["stream_sizes"]) {
    if (!v.is_number_unsigned()) {
      throw Error("syntax-error", "schedule header: bad stream size");
    }
    sizes.push_back(v.get<std::size_t>());
  }
  std::size_t link_count = header["links"].get<std::size_t>();
  nlohmann::ordered_json config_json = header;
  config_json.erase("stream_sizes");
  config_json.erase("links");

  TrainingSchedule s;
  s.config = config_from_json(config_json);

  std::size_t line = 1;
  auto take_line = [&](const char* what) -> nlohmann::ordered_json {
    if (line >= lines.size()) {
      throw Error("syntax-error",
                  std::string("schedule: missing ") + what + " at line " +
                      std::to_string(line + 1));
    }
    try {
      return nlohmann::ordered_json::parse(lines[line++]);
    } catch (const nlohmann::json::exception& e) {
      throw Error("syntax-error", "schedule line " + std::to_string(line) +
                                      ": " + e.what());
    }
  };

  for (std::size_t size : sizes) {
    auto& stream = s.streams.emplace_back();
    for (std::size_t i = 0; i < size; ++i) {
      stream.push_back(task_instance_from_json(take_line("instance")));
    }
  }
  for (std::size_t i = 0; i < link_count; ++i) {
    nlohmann::ordered_json j = take_line("trajectory link");
    if (!j.is_object() || !j.contains("producer") ||
        !j["producer"].is_string() || !j.contains("consumer") ||
        !j["consumer"].is_string() || j.size() != 2) {
      throw Error("syntax-error", "schedule line " + std::to_string(line) +
                                      ": bad trajectory link");
    }
    s.trajectory_links.push_back({j["producer"].get<std::string>(),
                                  j["consumer"].get<std::string>()});
  }
  if (line != lines.size()) {
    throw Error("syntax-error", "schedule: trailing content at line " +
                                    std::to_string(line + 1));
  }
  return s;
}

}  // namespace gsub
