#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gsub {

using AttrMap = std::map<std::string, std::string>;

// Reserved relation attribute key; value must parse as a finite decimal >= 0.
inline constexpr const char* kWeightAttr = "weight";

struct Entity {
  std::string id;
  std::optional<std::string> label;
  AttrMap attrs;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Relation {
  std::string subject;
  std::string predicate;
  std::string object;
  AttrMap attrs;

  friend bool operator==(const Relation&, const Relation&) = default;
};

// Bare (subject, predicate, object), the unit of identity for relations.
struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline Triple triple_of(const Relation& r) {
  return Triple{r.subject, r.predicate, r.object};
}

struct GraphState {
  std::optional<std::string> graph_id;
  std::vector<Entity> entities;
  std::vector<Relation> relations;
};

struct Violation {
  std::string rule;
  std::string detail;
  int entity_index = -1;
  int relation_index = -1;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Entity ids may not contain whitespace, ',', '(', ')' or ':'. This is what
// keeps the text realizations unambiguous.
bool valid_entity_id(const std::string& id);

ValidationResult validate(const GraphState& g);

// Throws Error{"invalid-graph"} naming the first violation.
void require_valid(const GraphState& g);

// Parses an attribute value as a relation weight. Returns nullopt when the
// key is absent or the value does not parse; callers that require a weight
// handle absence themselves.
std::optional<double> relation_weight(const Relation& r);

// Undirected simple view: reciprocal and parallel relations collapse to one
// edge, self-loops are dropped. Node order is byte-lexicographic by id.
class UndirectedSimpleView {
 public:
  explicit UndirectedSimpleView(const GraphState& g);

  const std::vector<std::string>& nodes() const { return nodes_; }
  // Index pairs (a, b) with a < b, sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  int index_of(const std::string& id) const;  // -1 when unknown
  const std::string& id_of(int idx) const { return nodes_[idx]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  int degree(int idx) const { return static_cast<int>(adj_[idx].size()); }
  // Throws Error{"unknown-node"}.
  int degree(const std::string& id) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::map<std::string, int> index_;
};

// Directed view with parallel predicates collapsed; self-loops are kept
// (directed cycle detection counts them). Same node numbering rule as the
// undirected view.
class DirectedSimpleView {
 public:
  explicit DirectedSimpleView(const GraphState& g);

  const std::vector<std::string>& nodes() const { return nodes_; }
  // Index pairs (from, to), sorted, may include (v, v).
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
  const std::vector<std::vector<int>>& out_adjacency() const { return out_; }
  const std::vector<std::vector<int>>& in_adjacency() const { return in_; }

  int index_of(const std::string& id) const;
  const std::string& id_of(int idx) const { return nodes_[idx]; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<int, int>> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::map<std::string, int> index_;
};

// Order-insensitive equality: entity (id, label, attrs) sets and relation
// (subject, predicate, object, attrs) sets; graph_id is ignored.
// Throws Error{"invalid-graph"} when either input fails validation.
bool structural_equal(const GraphState& a, const GraphState& b);

}  // namespace gsub
