#include "gsub/forge.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "gsub/error.hpp"
#include "gsub/rng.hpp"

namespace gsub {

namespace {

std::string rstrip_newlines(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string join_blocks(std::initializer_list<std::string> blocks) {
  std::string out;
  for (const auto& block : blocks) {
    std::string t = rstrip_newlines(block);
    if (t.empty()) continue;
    if (!out.empty()) out += "\n\n";
    out += t;
  }
  return out;
}

std::string source_id_of(const GraphState& g) {
  return g.graph_id.value_or("anon");
}

const char* realization_phrase(SchemaRealization r) {
  switch (r) {
    case SchemaRealization::unified_text: return "unified text";
    case SchemaRealization::xml_style: return "XML";
    case SchemaRealization::natural_language: return "natural language";
    case SchemaRealization::canonical_json: return "canonical JSON";
  }
  return "unified text";
}

// Replaces {name} tokens in one pass; substituted values are never rescanned,
// so entity ids containing braces cannot re-trigger substitution.
std::string fill_template(const std::string& tpl,
                          const std::map<std::string, std::string>& subs) {
  std::string out;
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '{') {
      std::size_t close = tpl.find('}', i);
      if (close != std::string::npos) {
        auto it = subs.find(tpl.substr(i + 1, close - i - 1));
        if (it != subs.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tpl[i++];
  }
  return out;
}

const char* kind_pattern(TaskKind k) {
  switch (k) {
    case TaskKind::sgg:
      return "Study the image referenced alongside this instance and write "
             "its scene graph in {format} form.";
    case TaskKind::ere:
      return "Extract every entity and relation from the passage above and "
             "write the graph in {format} form.";
    case TaskKind::mgd:
      return "The molecule above is written in {format} form. Describe the "
             "molecule in plain language.";
    case TaskKind::gar:
      return "The graph above is written in {format} form. {question}";
    case TaskKind::cc:
      return "The graph above is written in {format} form. Does it "
             "faithfully describe the referenced source? Answer consistent "
             "or inconsistent.";
    case TaskKind::sr:
      return "The graph above and the query below are written in {format} "
             "form. Does the query subgraph appear in the graph? Answer "
             "present or absent.";
  }
  return "";
}

std::string gar_question(const GarQuery& q) {
  switch (q.kind) {
    case GarKind::connectivity:
      return "Is there a path between {source} and {target}? Answer yes or "
             "no.";
    case GarKind::cycle:
      return q.direction == CycleDirection::directed
                 ? "Following relation direction, does the graph contain a "
                   "cycle? Answer yes or no."
                 : "Treating every relation as undirected, does the graph "
                   "contain a cycle? Answer yes or no.";
    case GarKind::shortest_path:
      return q.weighted
                 ? "What is the total weight of the lightest path between "
                   "{source} and {target}? Give a number, or answer "
                   "unreachable."
                 : "How many hops long is the shortest path between {source} "
                   "and {target}? Give a number, or answer unreachable.";
    case GarKind::matching:
      return "How many pairs are in a largest matching between the two "
             "parts? Give a number.";
  }
  return "";
}

// Endpoint-rewire additionally needs a third entity to succeed, but that
// shows up as search exhaustion (no alternative endpoint exists), so it
// reports no-valid-perturbation rather than a precondition failure.
void require_perturbable(const GraphState& g) {
  ValidationResult r = validate(g);
  if (!r.ok()) {
    throw Error("precondition-violation",
                "graph does not validate: " + r.violations.front().detail);
  }
  if (g.relations.empty()) {
    throw Error("precondition-violation", "graph has no relations");
  }
}

bool all_relations_weighted(const GraphState& g) {
  bool any = false;
  for (const Relation& r : g.relations) {
    if (r.subject == r.object) continue;
    if (!relation_weight(r)) return false;
    any = true;
  }
  return any;
}

std::vector<int> view_components(const UndirectedSimpleView& view) {
  const int n = static_cast<int>(view.node_count());
  std::vector<int> comp(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : view.adjacency()[u]) {
        if (comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

nlohmann::ordered_json triple_json(const Triple& t) {
  return nlohmann::ordered_json::array({t.subject, t.predicate, t.object});
}

Triple triple_from_json(const nlohmann::ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_string() ||
      !j[1].is_string() || !j[2].is_string()) {
    throw Error("syntax-error",
                std::string(what) + ": expected [subject, predicate, object]");
  }
  return Triple{j[0].get<std::string>(), j[1].get<std::string>(),
                j[2].get<std::string>()};
}

}  // namespace

const char* const kTemplateVersion = "1";

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::sgg: return "sgg";
    case TaskKind::ere: return "ere";
    case TaskKind::mgd: return "mgd";
    case TaskKind::gar: return "gar";
    case TaskKind::cc: return "cc";
    case TaskKind::sr: return "sr";
  }
  return "sgg";
}

std::optional<TaskKind> task_kind_from_string(std::string_view s) {
  if (s == "sgg") return TaskKind::sgg;
  if (s == "ere") return TaskKind::ere;
  if (s == "mgd") return TaskKind::mgd;
  if (s == "gar") return TaskKind::gar;
  if (s == "cc") return TaskKind::cc;
  if (s == "sr") return TaskKind::sr;
  return std::nullopt;
}

const char* to_string(TaskRole r) {
  return r == TaskRole::generate ? "generate" : "understand";
}

std::optional<TaskRole> task_role_from_string(std::string_view s) {
  if (s == "generate") return TaskRole::generate;
  if (s == "understand") return TaskRole::understand;
  return std::nullopt;
}

TaskRole role_of(TaskKind k) {
  return (k == TaskKind::sgg || k == TaskKind::ere) ? TaskRole::generate
                                                    : TaskRole::understand;
}

const char* to_string(PerturbOp op) {
  switch (op) {
    case PerturbOp::endpoint_rewire: return "endpoint-rewire";
    case PerturbOp::edge_swap: return "edge-swap";
    case PerturbOp::delete_insert: return "delete-insert";
  }
  return "endpoint-rewire";
}

std::optional<PerturbOp> perturb_op_from_string(std::string_view s) {
  if (s == "endpoint-rewire") return PerturbOp::endpoint_rewire;
  if (s == "edge-swap") return PerturbOp::edge_swap;
  if (s == "delete-insert") return PerturbOp::delete_insert;
  return std::nullopt;
}

const std::string& question_template(TaskKind k, SchemaRealization r) {
  static const std::map<std::pair<int, int>, std::string> table = [] {
    std::map<std::pair<int, int>, std::string> t;
    for (TaskKind kind : {TaskKind::sgg, TaskKind::ere, TaskKind::mgd,
                          TaskKind::gar, TaskKind::cc, TaskKind::sr}) {
      for (SchemaRealization real :
           {SchemaRealization::unified_text, SchemaRealization::xml_style,
            SchemaRealization::natural_language,
            SchemaRealization::canonical_json}) {
        t[{static_cast<int>(kind), static_cast<int>(real)}] = fill_template(
            kind_pattern(kind), {{"format", realization_phrase(real)}});
      }
    }
    return t;
  }();
  return table.at({static_cast<int>(k), static_cast<int>(r)});
}

PerturbResult perturb(const GraphState& g, PerturbOp op, std::uint64_t seed) {
  require_perturbable(g);

  std::set<Triple> existing;
  for (const Relation& r : g.relations) existing.insert(triple_of(r));
  const std::size_t nrel = g.relations.size();
  const std::size_t nent = g.entities.size();

  SeededRng rng(SeededRng::mix(seed, 11 + static_cast<std::uint64_t>(op)));

  PerturbResult out;
  out.descriptor.op = op;
  out.descriptor.seed = seed;

  switch (op) {
    case PerturbOp::endpoint_rewire: {
      auto attempt = [&](std::size_t ri, std::size_t oi) {
        const Relation& r = g.relations[ri];
        const std::string& no = g.entities[oi].id;
        if (no == r.object || no == r.subject) return false;
        Triple cand{r.subject, r.predicate, no};
        if (existing.count(cand)) return false;
        out.graph = g;
        out.graph.relations[ri].object = no;
        out.descriptor.touched = {{triple_of(r), cand}};
        return true;
      };
      for (int t = 0; t < 64; ++t) {
        if (attempt(rng.below(nrel), rng.below(nent))) return out;
      }
      for (std::size_t ri = 0; ri < nrel; ++ri) {
        for (std::size_t oi = 0; oi < nent; ++oi) {
          if (attempt(ri, oi)) return out;
        }
      }
      throw Error("no-valid-perturbation", "every endpoint rewire collides");
    }

    case PerturbOp::edge_swap: {
      auto attempt = [&](std::size_t i, std::size_t j) {
        if (i == j) return false;
        const Relation& a = g.relations[i];
        const Relation& b = g.relations[j];
        if (a.object == b.object) return false;
        Triple na{a.subject, a.predicate, b.object};
        Triple nb{b.subject, b.predicate, a.object};
        // Same subject and predicate would swap the pair into itself.
        if (na == triple_of(b)) return false;
        std::set<Triple> rest = existing;
        rest.erase(triple_of(a));
        rest.erase(triple_of(b));
        if (rest.count(na) || rest.count(nb)) return false;
        out.graph = g;
        out.graph.relations[i].object = b.object;
        out.graph.relations[j].object = a.object;
        out.descriptor.touched = {{triple_of(a), na}, {triple_of(b), nb}};
        return true;
      };
      for (int t = 0; t < 64; ++t) {
        if (nrel < 2) break;
        std::size_t i = rng.below(nrel);
        std::size_t j = rng.below(nrel - 1);
        if (j >= i) ++j;
        if (attempt(i, j)) return out;
      }
      for (std::size_t i = 0; i < nrel; ++i) {
        for (std::size_t j = i + 1; j < nrel; ++j) {
          if (attempt(i, j)) return out;
        }
      }
      throw Error("no-valid-perturbation",
                  "no relation pair can swap objects without colliding");
    }

    case PerturbOp::delete_insert: {
      std::vector<std::string> preds;
      preds.reserve(nrel);
      for (const Relation& r : g.relations) preds.push_back(r.predicate);
      auto attempt = [&](std::size_t ri, std::size_t pi, std::size_t si,
                         std::size_t oi) {
        const Relation& del = g.relations[ri];
        const std::string& s = g.entities[si].id;
        const std::string& o = g.entities[oi].id;
        if (s == o) return false;
        if (std::minmax(s, o) == std::minmax(del.subject, del.object)) {
          return false;
        }
        Triple cand{s, preds[pi], o};
        std::set<Triple> rest = existing;
        rest.erase(triple_of(del));
        if (rest.count(cand)) return false;
        out.graph = g;
        Relation ins;
        ins.subject = s;
        ins.predicate = preds[pi];
        ins.object = o;
        out.graph.relations[ri] = std::move(ins);
        out.descriptor.touched = {{triple_of(del), cand}};
        return true;
      };
      for (int t = 0; t < 64; ++t) {
        if (attempt(rng.below(nrel), rng.below(nrel), rng.below(nent),
                    rng.below(nent))) {
          return out;
        }
      }
      for (std::size_t ri = 0; ri < nrel; ++ri) {
        for (std::size_t pi = 0; pi < nrel; ++pi) {
          for (std::size_t si = 0; si < nent; ++si) {
            for (std::size_t oi = 0; oi < nent; ++oi) {
              if (attempt(ri, pi, si, oi)) return out;
            }
          }
        }
      }
      throw Error("no-valid-perturbation",
                  "no replacement relation avoids the deleted pair and the "
                  "existing triples");
    }
  }
  throw Error("no-valid-perturbation", "unknown op");
}

TaskInstance make_generation_instance(const std::string& modality,
                                      const std::string& source_ref,
                                      const std::string& source_payload,
                                      const GraphState& g,
                                      SchemaRealization realization) {
  TaskKind task;
  if (modality == "text") {
    task = TaskKind::ere;
  } else if (modality == "image") {
    task = TaskKind::sgg;
  } else {
    throw Error("unknown-modality",
                "modality must be \"text\" or \"image\", got \"" + modality +
                    "\"");
  }
  std::string gold = serialize(g, realization);

  TaskInstance t;
  t.task = task;
  t.role = TaskRole::generate;
  t.realization = realization;
  t.instance_id = std::string(to_string(task)) + "-" + source_id_of(g);
  const std::string& question = question_template(task, realization);
  t.input_text = task == TaskKind::ere ? join_blocks({source_payload, question})
                                       : question;
  t.input_refs = {source_ref};
  t.gold = gold;
  t.provenance.source_graph_id = source_id_of(g);
  return t;
}

TaskInstance make_description_instance(const GraphState& g,
                                       const std::optional<std::string>& smiles,
                                       const std::string& description,
                                       SchemaRealization realization) {
  if (description.empty()) {
    throw Error("empty-description", "mgd instance needs a description");
  }
  std::string graph_block = serialize(g, realization);

  TaskInstance t;
  t.task = TaskKind::mgd;
  t.role = TaskRole::understand;
  t.realization = realization;
  t.instance_id = "mgd-" + source_id_of(g);
  std::string smiles_block = smiles ? "SMILES: " + *smiles : std::string();
  t.input_text = join_blocks({graph_block, smiles_block,
                              question_template(TaskKind::mgd, realization)});
  t.gold = description;
  t.provenance.source_graph_id = source_id_of(g);
  return t;
}

TaskInstance make_gar_instance(const GraphState& g, GarKind kind,
                               std::uint64_t seed,
                               SchemaRealization realization) {
  require_valid(g);
  UndirectedSimpleView view(g);
  SeededRng rng(SeededRng::mix(seed, 31));

  GarQuery q;
  q.kind = kind;
  if (kind == GarKind::connectivity || kind == GarKind::shortest_path) {
    const std::size_t n = view.node_count();
    if (n < 2) {
      throw Error("unsampleable-query",
                  "need at least 2 entities to sample endpoints");
    }
    std::size_t a = rng.below(n);
    std::size_t b = rng.below(n - 1);
    if (b >= a) ++b;
    q.source = view.id_of(static_cast<int>(a));
    q.target = view.id_of(static_cast<int>(b));
    if (kind == GarKind::shortest_path) q.weighted = all_relations_weighted(g);
  } else if (kind == GarKind::cycle) {
    q.direction =
        rng.coin() ? CycleDirection::directed : CycleDirection::undirected;
  }

  GarAnswer answer = solve(g, q);

  TaskInstance t;
  t.task = TaskKind::gar;
  t.role = TaskRole::understand;
  t.realization = realization;
  t.instance_id = std::string("gar-") + to_string(kind) + "-" +
                  source_id_of(g) + "-s" + std::to_string(seed);
  std::map<std::string, std::string> subs;
  subs["question"] = fill_template(gar_question(q),
                                   {{"source", q.source.value_or("")},
                                    {"target", q.target.value_or("")}});
  t.input_text =
      join_blocks({serialize(g, realization),
                   fill_template(question_template(TaskKind::gar, realization),
                                 subs)});
  t.gold = nlohmann::ordered_json::object();
  t.gold["query"] = gar_query_to_json(q);
  t.gold["answer"] = gar_answer_to_json(answer);
  t.provenance.source_graph_id = source_id_of(g);
  return t;
}

TaskInstance make_consistency_instance(const std::string& source_ref,
                                       const GraphState& g, bool label,
                                       std::uint64_t seed,
                                       SchemaRealization realization) {
  TaskInstance t;
  t.task = TaskKind::cc;
  t.role = TaskRole::understand;
  t.realization = realization;
  t.input_refs = {source_ref};
  t.provenance.source_graph_id = source_id_of(g);
  t.instance_id = std::string("cc-") + (label ? "pos" : "neg") + "-" +
                  source_id_of(g) + "-s" + std::to_string(seed);

  std::string graph_block;
  if (label) {
    graph_block = serialize(g, realization);
    t.gold = "consistent";
  } else {
    require_perturbable(g);
    SeededRng rng(SeededRng::mix(seed, 47));
    std::uint64_t start = rng.below(3);
    std::optional<PerturbResult> res;
    for (std::uint64_t d = 0; d < 3 && !res; ++d) {
      auto op = static_cast<PerturbOp>((start + d) % 3);
      try {
        res = perturb(g, op, seed);
      } catch (const Error&) {
      }
    }
    if (!res) {
      throw Error("no-valid-perturbation",
                  "no structural negative exists for this graph");
    }
    graph_block = serialize(res->graph, realization);
    t.gold = "inconsistent";
    t.provenance.perturbation_applied = std::move(res->descriptor);
  }
  t.input_text =
      join_blocks({graph_block, question_template(TaskKind::cc, realization)});
  return t;
}

GraphState sample_connected_subgraph(const GraphState& g, int k,
                                     std::uint64_t seed) {
  ValidationResult vr = validate(g);
  if (!vr.ok()) {
    throw Error("precondition-violation",
                "graph does not validate: " + vr.violations.front().detail);
  }
  if (k < 2) throw Error("precondition-violation", "k must be at least 2");

  UndirectedSimpleView view(g);
  std::vector<int> comp = view_components(view);
  int ncomp = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<int> sizes(ncomp, 0);
  for (int c : comp) ++sizes[c];
  std::vector<int> eligible;
  for (int c = 0; c < ncomp; ++c) {
    if (sizes[c] >= k) eligible.push_back(c);
  }
  if (eligible.empty()) {
    throw Error("no-component-large-enough",
                "no connected component has " + std::to_string(k) +
                    " entities");
  }

  SeededRng rng(SeededRng::mix(seed, 61));
  int chosen = eligible[rng.below(eligible.size())];
  std::vector<int> members;
  for (int i = 0; i < static_cast<int>(comp.size()); ++i) {
    if (comp[i] == chosen) members.push_back(i);
  }

  std::set<int> selected{members[rng.below(members.size())]};
  std::set<int> frontier;
  auto expand = [&](int u) {
    for (int w : view.adjacency()[u]) {
      if (!selected.count(w)) frontier.insert(w);
    }
  };
  expand(*selected.begin());
  while (static_cast<int>(selected.size()) < k) {
    auto it = frontier.begin();
    std::advance(it, rng.below(frontier.size()));
    int pick = *it;
    frontier.erase(it);
    selected.insert(pick);
    expand(pick);
  }

  std::set<std::string> ids;
  for (int idx : selected) ids.insert(view.id_of(idx));
  GraphState out;
  for (const Entity& e : g.entities) {
    if (ids.count(e.id)) out.entities.push_back(e);
  }
  for (const Relation& r : g.relations) {
    if (ids.count(r.subject) && ids.count(r.object)) {
      out.relations.push_back(r);
    }
  }
  return out;
}

bool contains_subgraph(const GraphState& g, const GraphState& s) {
  require_valid(g);
  require_valid(s);
  std::set<std::pair<std::string, std::optional<std::string>>> gents;
  for (const Entity& e : g.entities) gents.insert({e.id, e.label});
  for (const Entity& e : s.entities) {
    if (!gents.count({e.id, e.label})) return false;
  }
  std::set<Triple> gtrips;
  for (const Relation& r : g.relations) gtrips.insert(triple_of(r));
  for (const Relation& r : s.relations) {
    if (!gtrips.count(triple_of(r))) return false;
  }
  return true;
}

TaskInstance make_subgraph_instance(const GraphState& g, int k, bool positive,
                                    std::uint64_t seed,
                                    SchemaRealization realization) {
  GraphState sampled = sample_connected_subgraph(g, k, seed);

  TaskInstance t;
  t.task = TaskKind::sr;
  t.role = TaskRole::understand;
  t.realization = realization;
  t.provenance.source_graph_id = source_id_of(g);
  t.instance_id = std::string("sr-") + (positive ? "pos" : "neg") + "-" +
                  source_id_of(g) + "-s" + std::to_string(seed);

  std::string query_block;
  if (positive) {
    query_block = serialize(sampled, realization);
    t.gold = "present";
  } else {
    SeededRng rng(SeededRng::mix(seed, 53));
    std::optional<PerturbResult> res;
    for (int round = 0; round < 64 && !res; ++round) {
      auto op = static_cast<PerturbOp>(rng.below(3));
      try {
        PerturbResult cand = perturb(sampled, op, SeededRng::mix(seed, round));
        if (!contains_subgraph(g, cand.graph)) res = std::move(cand);
      } catch (const Error&) {
      }
    }
    if (!res) {
      throw Error("no-valid-negative",
                  "could not find an absent variant of the sampled subgraph");
    }
    query_block = serialize(res->graph, realization);
    t.gold = "absent";
    t.provenance.perturbation_applied = std::move(res->descriptor);
  }
  t.input_text = join_blocks({serialize(g, realization),
                              question_template(TaskKind::sr, realization),
                              query_block});
  return t;
}

namespace {

std::string strip_question_suffix(const std::string& input,
                                  const std::string& question,
                                  const char* what) {
  if (input == question) return "";
  std::string sep = "\n\n" + question;
  if (input.size() > sep.size() &&
      input.compare(input.size() - sep.size(), sep.size(), sep) == 0) {
    return input.substr(0, input.size() - sep.size());
  }
  throw Error("malformed-instance",
              std::string(what) + ": question block not found");
}

std::string filled_gar_question(const GarQuery& q, SchemaRealization r) {
  std::map<std::string, std::string> subs;
  subs["question"] =
      fill_template(gar_question(q), {{"source", q.source.value_or("")},
                                      {"target", q.target.value_or("")}});
  return fill_template(question_template(TaskKind::gar, r), subs);
}

GraphState parse_graph_block(const std::string& block, SchemaRealization r) {
  return parse(block + "\n", r);
}

struct InstanceParts {
  std::string passage;
  std::string graph_block;
  std::optional<std::string> smiles;
  std::string query_block;
};

InstanceParts dissect(const TaskInstance& t) {
  InstanceParts parts;
  switch (t.task) {
    case TaskKind::sgg:
      if (t.input_text != question_template(TaskKind::sgg, t.realization)) {
        throw Error("malformed-instance", "sgg: unexpected input text");
      }
      return parts;
    case TaskKind::ere:
      parts.passage = strip_question_suffix(
          t.input_text, question_template(TaskKind::ere, t.realization),
          "ere");
      return parts;
    case TaskKind::mgd: {
      std::string rest = strip_question_suffix(
          t.input_text, question_template(TaskKind::mgd, t.realization),
          "mgd");
      auto pos = rest.rfind("\n\nSMILES: ");
      if (pos != std::string::npos) {
        parts.smiles = rest.substr(pos + 10);
        rest = rest.substr(0, pos);
      }
      parts.graph_block = rest;
      return parts;
    }
    case TaskKind::gar: {
      if (!t.gold.is_object() || !t.gold.contains("query")) {
        throw Error("malformed-instance", "gar: gold has no query");
      }
      GarQuery q = gar_query_from_json(t.gold.at("query"));
      parts.graph_block = strip_question_suffix(
          t.input_text, filled_gar_question(q, t.realization), "gar");
      return parts;
    }
    case TaskKind::cc:
      parts.graph_block = strip_question_suffix(
          t.input_text, question_template(TaskKind::cc, t.realization), "cc");
      return parts;
    case TaskKind::sr: {
      std::string sep =
          "\n\n" + question_template(TaskKind::sr, t.realization) + "\n\n";
      auto pos = t.input_text.find(sep);
      if (pos == std::string::npos) {
        throw Error("malformed-instance", "sr: question block not found");
      }
      parts.graph_block = t.input_text.substr(0, pos);
      parts.query_block = t.input_text.substr(pos + sep.size());
      return parts;
    }
  }
  throw Error("malformed-instance", "unknown task");
}

std::string gold_graph_text(const TaskInstance& t) {
  if (!t.gold.is_string()) {
    throw Error("malformed-instance", "generation gold is not a string");
  }
  return t.gold.get<std::string>();
}

}  // namespace

TaskInstance re_realize(const TaskInstance& t, SchemaRealization target) {
  if (target == t.realization) return t;
  InstanceParts parts = dissect(t);
  TaskInstance out = t;
  out.realization = target;
  switch (t.task) {
    case TaskKind::sgg: {
      GraphState g = parse(gold_graph_text(t), t.realization);
      out.gold = serialize(g, target);
      out.input_text = question_template(TaskKind::sgg, target);
      break;
    }
    case TaskKind::ere: {
      GraphState g = parse(gold_graph_text(t), t.realization);
      out.gold = serialize(g, target);
      out.input_text =
          join_blocks({parts.passage, question_template(TaskKind::ere, target)});
      break;
    }
    case TaskKind::mgd: {
      GraphState g = parse_graph_block(parts.graph_block, t.realization);
      std::string smiles_block =
          parts.smiles ? "SMILES: " + *parts.smiles : std::string();
      out.input_text = join_blocks({serialize(g, target), smiles_block,
                                    question_template(TaskKind::mgd, target)});
      break;
    }
    case TaskKind::gar: {
      GraphState g = parse_graph_block(parts.graph_block, t.realization);
      GarQuery q = gar_query_from_json(t.gold.at("query"));
      out.input_text =
          join_blocks({serialize(g, target), filled_gar_question(q, target)});
      break;
    }
    case TaskKind::cc: {
      GraphState g = parse_graph_block(parts.graph_block, t.realization);
      out.input_text = join_blocks(
          {serialize(g, target), question_template(TaskKind::cc, target)});
      break;
    }
    case TaskKind::sr: {
      GraphState host = parse_graph_block(parts.graph_block, t.realization);
      GraphState query = parse_graph_block(parts.query_block, t.realization);
      out.input_text = join_blocks({serialize(host, target),
                                    question_template(TaskKind::sr, target),
                                    serialize(query, target)});
      break;
    }
  }
  return out;
}

GraphState embedded_graph(const TaskInstance& t) {
  if (t.task == TaskKind::sgg || t.task == TaskKind::ere) {
    return parse(gold_graph_text(t), t.realization);
  }
  InstanceParts parts = dissect(t);
  return parse_graph_block(parts.graph_block, t.realization);
}

nlohmann::ordered_json perturbation_to_json(const PerturbationDescriptor& d) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["op"] = to_string(d.op);
  nlohmann::ordered_json touched = nlohmann::ordered_json::array();
  for (const auto& [before, after] : d.touched) {
    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
    entry["before"] = triple_json(before);
    entry["after"] = triple_json(after);
    touched.push_back(std::move(entry));
  }
  j["touched"] = std::move(touched);
  j["seed"] = d.seed;
  return j;
}

PerturbationDescriptor perturbation_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string() ||
      !j.contains("touched") || !j["touched"].is_array() ||
      !j.contains("seed") || !j["seed"].is_number_unsigned()) {
    throw Error("syntax-error",
                "perturbation: expected {op, touched, seed}");
  }
  auto op = perturb_op_from_string(j["op"].get<std::string>());
  if (!op) {
    throw Error("syntax-error",
                "perturbation: unknown op '" + j["op"].get<std::string>() +
                    "'");
  }
  PerturbationDescriptor d;
  d.op = *op;
  d.seed = j["seed"].get<std::uint64_t>();
  for (const auto& entry : j["touched"]) {
    if (!entry.is_object() || !entry.contains("before") ||
        !entry.contains("after")) {
      throw Error("syntax-error",
                  "perturbation.touched: expected {before, after}");
    }
    d.touched.push_back({triple_from_json(entry["before"], "before"),
                         triple_from_json(entry["after"], "after")});
  }
  return d;
}

nlohmann::ordered_json task_instance_to_json(const TaskInstance& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["instance_id"] = t.instance_id;
  j["task"] = to_string(t.task);
  j["role"] = to_string(t.role);
  j["realization"] = to_string(t.realization);
  j["input_text"] = t.input_text;
  if (!t.input_refs.empty()) j["input_refs"] = t.input_refs;
  j["gold"] = t.gold;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  prov["source_graph_id"] = t.provenance.source_graph_id;
  if (t.provenance.trajectory_step) {
    prov["trajectory_step"] = *t.provenance.trajectory_step;
  }
  if (t.provenance.perturbation_applied) {
    prov["perturbation_applied"] =
        perturbation_to_json(*t.provenance.perturbation_applied);
  }
  j["provenance"] = std::move(prov);
  return j;
}

TaskInstance task_instance_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) {
    throw Error("syntax-error", "instance: expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "instance_id" && key != "task" && key != "role" &&
        key != "realization" && key != "input_text" && key != "input_refs" &&
        key != "gold" && key != "provenance") {
      throw Error("syntax-error", "instance: unexpected key '" + key + "'");
    }
  }
  auto need_string = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error("syntax-error",
                  std::string("instance: missing string key '") + key + "'");
    }
    return j[key].get<std::string>();
  };

  TaskInstance t;
  t.instance_id = need_string("instance_id");
  auto task = task_kind_from_string(need_string("task"));
  if (!task) throw Error("syntax-error", "instance: unknown task");
  t.task = *task;
  auto role = task_role_from_string(need_string("role"));
  if (!role) throw Error("syntax-error", "instance: unknown role");
  t.role = *role;
  if (t.role != role_of(t.task)) {
    throw Error("syntax-error", "instance: role does not match task");
  }
  auto realization = realization_from_string(need_string("realization"));
  if (!realization) {
    throw Error("syntax-error", "instance: unknown realization");
  }
  t.realization = *realization;
  t.input_text = need_string("input_text");
  if (j.contains("input_refs")) {
    if (!j["input_refs"].is_array()) {
      throw Error("syntax-error", "instance.input_refs: expected array");
    }
    for (const auto& ref : j["input_refs"]) {
      if (!ref.is_string()) {
        throw Error("syntax-error", "instance.input_refs: expected strings");
      }
      t.input_refs.push_back(ref.get<std::string>());
    }
  }
  if (!j.contains("gold")) {
    throw Error("syntax-error", "instance: missing key 'gold'");
  }
  t.gold = j["gold"];
  if (!j.contains("provenance") || !j["provenance"].is_object()) {
    throw Error("syntax-error", "instance: missing object key 'provenance'");
  }
  const auto& prov = j["provenance"];
  for (const auto& [key, value] : prov.items()) {
    (void)value;
    if (key != "source_graph_id" && key != "trajectory_step" &&
        key != "perturbation_applied") {
      throw Error("syntax-error",
                  "instance.provenance: unexpected key '" + key + "'");
    }
  }
  if (!prov.contains("source_graph_id") ||
      !prov["source_graph_id"].is_string()) {
    throw Error("syntax-error",
                "instance.provenance: missing string key 'source_graph_id'");
  }
  t.provenance.source_graph_id = prov["source_graph_id"].get<std::string>();
  if (prov.contains("trajectory_step")) {
    if (!prov["trajectory_step"].is_number_integer()) {
      throw Error("syntax-error",
                  "instance.provenance.trajectory_step: expected integer");
    }
    t.provenance.trajectory_step = prov["trajectory_step"].get<int>();
  }
  if (prov.contains("perturbation_applied")) {
    t.provenance.perturbation_applied =
        perturbation_from_json(prov["perturbation_applied"]);
  }
  return t;
}

}  // namespace gsub
