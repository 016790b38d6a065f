#include "gsub/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <tuple>

#include "gsub/error.hpp"

namespace gsub {

bool valid_entity_id(const std::string& id) {
  if (id.empty()) return false;
  for (unsigned char c : id) {
    if (std::isspace(c)) return false;
    if (c == ',' || c == '(' || c == ')' || c == ':') return false;
  }
  return true;
}

namespace {

bool parses_as_weight(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size()) return false;
  if (!std::isfinite(v) || v < 0.0) return false;
  if (out) *out = v;
  return true;
}

}  // namespace

ValidationResult validate(const GraphState& g) {
  ValidationResult result;
  auto add = [&](std::string rule, std::string detail, int ei, int ri) {
    result.violations.push_back(
        Violation{std::move(rule), std::move(detail), ei, ri});
  };

  std::set<std::string> ids;
  for (int i = 0; i < static_cast<int>(g.entities.size()); ++i) {
    const Entity& e = g.entities[i];
    if (!valid_entity_id(e.id)) {
      add("entity-id-charset",
          "entity id \"" + e.id + "\" is empty or contains a forbidden character",
          i, -1);
    }
    if (!ids.insert(e.id).second) {
      add("duplicate-entity-id", "duplicate entity id " + e.id, i, -1);
    }
    for (const auto& [k, v] : e.attrs) {
      (void)v;
      if (k.empty()) add("empty-attr-key", "entity " + e.id + " has an empty attribute key", i, -1);
    }
  }

  std::set<Triple> triples;
  for (int i = 0; i < static_cast<int>(g.relations.size()); ++i) {
    const Relation& r = g.relations[i];
    if (r.predicate.empty() || r.predicate.find('\n') != std::string::npos) {
      add("predicate-charset",
          "relation " + std::to_string(i) + " has an empty or newline-bearing predicate",
          -1, i);
    }
    if (!ids.count(r.subject)) {
      add("dangling-endpoint", "dangling subject " + r.subject, -1, i);
    }
    if (!ids.count(r.object)) {
      add("dangling-endpoint", "dangling object " + r.object, -1, i);
    }
    if (!triples.insert(triple_of(r)).second) {
      add("duplicate-triple",
          "duplicate relation (" + r.subject + ", " + r.predicate + ", " + r.object + ")",
          -1, i);
    }
    for (const auto& [k, v] : r.attrs) {
      if (k.empty()) {
        add("empty-attr-key", "relation " + std::to_string(i) + " has an empty attribute key", -1, i);
      }
      if (k == kWeightAttr && !parses_as_weight(v, nullptr)) {
        add("bad-weight",
            "relation " + std::to_string(i) + " weight \"" + v +
                "\" is not a finite decimal >= 0",
            -1, i);
      }
    }
  }
  return result;
}

void require_valid(const GraphState& g) {
  ValidationResult r = validate(g);
  if (!r.ok()) throw Error("invalid-graph", r.violations.front().detail);
}

std::optional<double> relation_weight(const Relation& r) {
  auto it = r.attrs.find(kWeightAttr);
  if (it == r.attrs.end()) return std::nullopt;
  double v = 0.0;
  if (!parses_as_weight(it->second, &v)) return std::nullopt;
  return v;
}

namespace {

std::vector<std::string> sorted_ids(const GraphState& g) {
  std::vector<std::string> ids;
  ids.reserve(g.entities.size());
  for (const Entity& e : g.entities) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

UndirectedSimpleView::UndirectedSimpleView(const GraphState& g) {
  nodes_ = sorted_ids(g);
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) index_[nodes_[i]] = i;

  std::set<std::pair<int, int>> edge_set;
  for (const Relation& r : g.relations) {
    int a = index_.at(r.subject);
    int b = index_.at(r.object);
    if (a == b) continue;
    edge_set.insert({std::min(a, b), std::max(a, b)});
  }
  edges_.assign(edge_set.begin(), edge_set.end());

  adj_.resize(nodes_.size());
  for (auto [a, b] : edges_) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

int UndirectedSimpleView::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int UndirectedSimpleView::degree(const std::string& id) const {
  int idx = index_of(id);
  if (idx < 0) throw Error("unknown-node", "node " + id + " is not in the view");
  return degree(idx);
}

DirectedSimpleView::DirectedSimpleView(const GraphState& g) {
  nodes_ = sorted_ids(g);
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) index_[nodes_[i]] = i;

  std::set<std::pair<int, int>> arc_set;
  for (const Relation& r : g.relations) {
    arc_set.insert({index_.at(r.subject), index_.at(r.object)});
  }
  arcs_.assign(arc_set.begin(), arc_set.end());

  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  for (auto [a, b] : arcs_) {
    out_[a].push_back(b);
    in_[b].push_back(a);
  }
  for (auto& list : out_) std::sort(list.begin(), list.end());
  for (auto& list : in_) std::sort(list.begin(), list.end());
}

int DirectedSimpleView::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool structural_equal(const GraphState& a, const GraphState& b) {
  require_valid(a);
  require_valid(b);

  using EntityKey = std::tuple<std::string, std::optional<std::string>, AttrMap>;
  auto entity_set = [](const GraphState& g) {
    std::set<EntityKey> s;
    for (const Entity& e : g.entities) s.insert({e.id, e.label, e.attrs});
    return s;
  };
  using RelationKey = std::tuple<std::string, std::string, std::string, AttrMap>;
  auto relation_set = [](const GraphState& g) {
    std::set<RelationKey> s;
    for (const Relation& r : g.relations) {
      s.insert({r.subject, r.predicate, r.object, r.attrs});
    }
    return s;
  };
  return entity_set(a) == entity_set(b) && relation_set(a) == relation_set(b);
}

}  // namespace gsub
