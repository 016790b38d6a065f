#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsub/graph.hpp"

namespace gsub {

// TwoHop defaults to counting distinct (a, b, c) node triples on the
// predicate-collapsed directed view. relation_pairs counts ordered relation
// pairs instead, so parallel predicates multiply.
enum class TwoHopMode { node_triples, relation_pairs };

struct StatsOptions {
  TwoHopMode two_hop = TwoHopMode::node_triples;
};

struct StatRecord {
  std::optional<std::string> graph_id;
  double avg_deg = 0.0;
  std::optional<double> aspl;  // undefined when no node pair is connected
  long long two_hop = 0;
  int star = 0;
};

struct CorpusStats {
  long long graph_count = 0;
  double avg_deg = 0.0;
  std::optional<double> aspl;
  double two_hop = 0.0;
  double star = 0.0;
  long long aspl_defined_count = 0;
};

// A length-2 directed path a -> b -> c (pairwise distinct nodes), with the
// lowest-index witness relations.
struct TwoHopChain {
  std::string a, b, c;
  int first = -1;   // index into g.relations, subject a, object b
  int second = -1;  // index into g.relations, subject b, object c
};

struct HubMotif {
  std::string center;
  int degree = 0;
  std::vector<std::string> neighbors;  // sorted by id
};

// Throws Error{"empty-graph"} for a graph with no entities and
// Error{"invalid-graph"} for one that fails validation.
StatRecord graph_stats(const GraphState& g, const StatsOptions& options = {});

// Macro-average in fixed input order; ASPL averages over the graphs where it
// is defined. Throws Error{"empty-corpus"} on an empty list.
CorpusStats corpus_stats(const std::vector<StatRecord>& records);
CorpusStats corpus_stats(const std::vector<GraphState>& graphs,
                         const StatsOptions& options = {});

// Exactly the chains counted by graph_stats (node-triple mode), sorted by
// (a, b, c).
std::vector<TwoHopChain> extract_two_hop_chains(const GraphState& g);

// One motif per node with undirected-simple degree >= 3, sorted by
// (-degree, id).
std::vector<HubMotif> extract_hubs(const GraphState& g);

nlohmann::ordered_json stat_record_to_json(const StatRecord& r);
nlohmann::ordered_json corpus_stats_to_json(const CorpusStats& c);

}  // namespace gsub
