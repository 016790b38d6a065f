#include "gsub/stats.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "gsub/error.hpp"

namespace gsub {

namespace {

// Sum of BFS distances over connected unordered pairs, plus the pair count.
std::pair<long long, long long> distance_totals(const UndirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  long long sum = 0;
  long long pairs = 0;
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : v.adjacency()[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    for (int t = s + 1; t < n; ++t) {
      if (dist[t] > 0) {
        sum += dist[t];
        ++pairs;
      }
    }
  }
  return {sum, pairs};
}

long long count_two_hop_node_triples(const DirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  long long total = 0;
  for (int b = 0; b < n; ++b) {
    std::set<int> in, out;
    for (int a : v.in_adjacency()[b]) {
      if (a != b) in.insert(a);
    }
    for (int c : v.out_adjacency()[b]) {
      if (c != b) out.insert(c);
    }
    long long both = 0;
    for (int x : in) {
      if (out.count(x)) ++both;
    }
    total += static_cast<long long>(in.size()) *
                 static_cast<long long>(out.size()) -
             both;
  }
  return total;
}

long long count_two_hop_relation_pairs(const GraphState& g) {
  long long total = 0;
  for (const Relation& first : g.relations) {
    if (first.subject == first.object) continue;
    for (const Relation& second : g.relations) {
      if (second.subject != first.object) continue;
      if (second.subject == second.object) continue;
      if (second.object == first.subject) continue;
      ++total;
    }
  }
  return total;
}

}  // namespace

StatRecord graph_stats(const GraphState& g, const StatsOptions& options) {
  require_valid(g);
  if (g.entities.empty()) throw Error("empty-graph", "graph has no entities");

  StatRecord r;
  r.graph_id = g.graph_id;

  UndirectedSimpleView uv(g);
  r.avg_deg = 2.0 * static_cast<double>(uv.edge_count()) /
              static_cast<double>(uv.node_count());

  auto [dist_sum, pair_count] = distance_totals(uv);
  if (pair_count > 0) {
    r.aspl = static_cast<double>(dist_sum) / static_cast<double>(pair_count);
  }

  if (options.two_hop == TwoHopMode::node_triples) {
    r.two_hop = count_two_hop_node_triples(DirectedSimpleView(g));
  } else {
    r.two_hop = count_two_hop_relation_pairs(g);
  }

  for (int i = 0; i < static_cast<int>(uv.node_count()); ++i) {
    if (uv.degree(i) >= 3) ++r.star;
  }
  return r;
}

CorpusStats corpus_stats(const std::vector<StatRecord>& records) {
  if (records.empty()) throw Error("empty-corpus", "no graphs to aggregate");
  CorpusStats c;
  c.graph_count = static_cast<long long>(records.size());
  double aspl_sum = 0.0;
  for (const StatRecord& r : records) {
    c.avg_deg += r.avg_deg;
    c.two_hop += static_cast<double>(r.two_hop);
    c.star += static_cast<double>(r.star);
    if (r.aspl) {
      aspl_sum += *r.aspl;
      ++c.aspl_defined_count;
    }
  }
  const double n = static_cast<double>(c.graph_count);
  c.avg_deg /= n;
  c.two_hop /= n;
  c.star /= n;
  if (c.aspl_defined_count > 0) {
    c.aspl = aspl_sum / static_cast<double>(c.aspl_defined_count);
  }
  return c;
}

CorpusStats corpus_stats(const std::vector<GraphState>& graphs,
                         const StatsOptions& options) {
  std::vector<StatRecord> records;
  records.reserve(graphs.size());
  for (const GraphState& g : graphs) records.push_back(graph_stats(g, options));
  return corpus_stats(records);
}

std::vector<TwoHopChain> extract_two_hop_chains(const GraphState& g) {
  require_valid(g);
  DirectedSimpleView v(g);
  const int n = static_cast<int>(v.node_count());

  // Lowest-index witness relation per collapsed arc.
  std::map<std::pair<std::string, std::string>, int> witness;
  for (int i = 0; i < static_cast<int>(g.relations.size()); ++i) {
    const Relation& r = g.relations[i];
    witness.emplace(std::make_pair(r.subject, r.object), i);
  }

  std::vector<TwoHopChain> chains;
  for (int b = 0; b < n; ++b) {
    for (int a : v.in_adjacency()[b]) {
      if (a == b) continue;
      for (int c : v.out_adjacency()[b]) {
        if (c == b || c == a) continue;
        TwoHopChain chain;
        chain.a = v.id_of(a);
        chain.b = v.id_of(b);
        chain.c = v.id_of(c);
        chain.first = witness.at({chain.a, chain.b});
        chain.second = witness.at({chain.b, chain.c});
        chains.push_back(std::move(chain));
      }
    }
  }
  std::sort(chains.begin(), chains.end(),
            [](const TwoHopChain& x, const TwoHopChain& y) {
              return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
            });
  return chains;
}

std::vector<HubMotif> extract_hubs(const GraphState& g) {
  require_valid(g);
  UndirectedSimpleView v(g);
  std::vector<HubMotif> hubs;
  for (int i = 0; i < static_cast<int>(v.node_count()); ++i) {
    if (v.degree(i) < 3) continue;
    HubMotif hub;
    hub.center = v.id_of(i);
    hub.degree = v.degree(i);
    for (int w : v.adjacency()[i]) hub.neighbors.push_back(v.id_of(w));
    std::sort(hub.neighbors.begin(), hub.neighbors.end());
    hubs.push_back(std::move(hub));
  }
  std::sort(hubs.begin(), hubs.end(), [](const HubMotif& x, const HubMotif& y) {
    if (x.degree != y.degree) return x.degree > y.degree;
    return x.center < y.center;
  });
  return hubs;
}

nlohmann::ordered_json stat_record_to_json(const StatRecord& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (r.graph_id) j["graph_id"] = *r.graph_id;
  j["avg_deg"] = r.avg_deg;
  if (r.aspl) {
    j["aspl"] = *r.aspl;
  } else {
    j["aspl"] = nullptr;
  }
  j["two_hop"] = r.two_hop;
  j["star"] = r.star;
  return j;
}

nlohmann::ordered_json corpus_stats_to_json(const CorpusStats& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["graph_count"] = c.graph_count;
  j["avg_deg"] = c.avg_deg;
  if (c.aspl) {
    j["aspl"] = *c.aspl;
  } else {
    j["aspl"] = nullptr;
  }
  j["two_hop"] = c.two_hop;
  j["star"] = c.star;
  j["aspl_defined_count"] = c.aspl_defined_count;
  return j;
}

}  // namespace gsub
