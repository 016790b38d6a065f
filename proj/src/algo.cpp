#include "gsub/algo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "gsub/error.hpp"

namespace gsub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostEps = 1e-9;

int require_node(const UndirectedSimpleView& v, const std::string& id) {
  int idx = v.index_of(id);
  if (idx < 0) throw Error("unknown-node", "unknown node " + id);
  return idx;
}

std::vector<int> component_ids(const UndirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  std::vector<int> comp(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : v.adjacency()[u]) {
        if (comp[w] < 0) {
          comp[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Weighted shortest-path precondition: every relation on the undirected view
// (self-loops excluded) carries a usable weight. Raw parse so a negative
// weight is reported as negative-weight rather than a general validity
// failure.
void scan_weights(const GraphState& g) {
  for (const Relation& r : g.relations) {
    if (r.subject == r.object) continue;
    std::string where =
        "relation (" + r.subject + ", " + r.predicate + ", " + r.object + ")";
    auto it = r.attrs.find(kWeightAttr);
    if (it == r.attrs.end()) {
      throw Error("missing-weight", where + " has no weight attribute");
    }
    const std::string& s = it->second;
    char* end = nullptr;
    double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
      throw Error("missing-weight", where + " has no usable weight");
    }
    if (v < 0) {
      throw Error("negative-weight", where + " has weight " + s);
    }
  }
}

// Per-unordered-pair edge cost: 1 in unweighted mode, otherwise the minimum
// weight over every relation joining the pair. Call scan_weights first in
// weighted mode.
std::map<std::pair<int, int>, double> edge_costs(const GraphState& g,
                                                 const UndirectedSimpleView& v,
                                                 bool weighted) {
  std::map<std::pair<int, int>, double> costs;
  if (!weighted) {
    for (auto [a, b] : v.edges()) costs[{a, b}] = 1.0;
    return costs;
  }
  for (const Relation& r : g.relations) {
    if (r.subject == r.object) continue;
    std::optional<double> w = relation_weight(r);
    if (!w) {
      throw Error("missing-weight", "relation (" + r.subject + ", " +
                                        r.predicate + ", " + r.object +
                                        ") has no usable weight");
    }
    int a = v.index_of(r.subject);
    int b = v.index_of(r.object);
    auto key = std::minmax(a, b);
    auto [pos, inserted] = costs.emplace(std::pair<int, int>(key), *w);
    if (!inserted) pos->second = std::min(pos->second, *w);
  }
  return costs;
}

std::vector<std::vector<std::pair<int, double>>> cost_adjacency(
    const UndirectedSimpleView& v,
    const std::map<std::pair<int, int>, double>& costs) {
  std::vector<std::vector<std::pair<int, double>>> adj(v.node_count());
  for (const auto& [key, w] : costs) {
    adj[key.first].push_back({key.second, w});
    adj[key.second].push_back({key.first, w});
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<double> dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adj, int start) {
  std::vector<double> dist(adj.size(), kInf);
  dist[start] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, start});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [w, cost] : adj[u]) {
      if (dist[u] + cost < dist[w]) {
        dist[w] = dist[u] + cost;
        pq.push({dist[w], w});
      }
    }
  }
  return dist;
}

// Depth-first walk along cost-optimal edges, taking the smallest-id next hop
// first; backtracks only when zero-weight plateaus dead-end.
bool lex_path_search(const std::vector<std::vector<std::pair<int, double>>>& adj,
                     const std::vector<double>& dist_to_target, int current,
                     int target, std::vector<char>& visited,
                     std::vector<int>& path) {
  if (current == target) return true;
  for (auto [w, cost] : adj[current]) {
    if (visited[w]) continue;
    if (std::isinf(dist_to_target[w])) continue;
    if (std::fabs(cost + dist_to_target[w] - dist_to_target[current]) >
        kCostEps) {
      continue;
    }
    visited[w] = 1;
    path.push_back(w);
    if (lex_path_search(adj, dist_to_target, w, target, visited, path)) {
      return true;
    }
    path.pop_back();
    visited[w] = 0;
  }
  return false;
}

struct Coloring {
  std::vector<int> color;          // 0/1
  std::vector<int> odd_cycle;      // nonempty when not bipartite
};

Coloring two_color(const UndirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  Coloring c;
  c.color.assign(n, -1);
  std::vector<int> parent(n, -1);
  for (int s = 0; s < n; ++s) {
    if (c.color[s] >= 0) continue;
    c.color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : v.adjacency()[u]) {
        if (c.color[w] < 0) {
          c.color[w] = 1 - c.color[u];
          parent[w] = u;
          q.push(w);
        } else if (c.color[w] == c.color[u]) {
          // Reconstruct the odd cycle through the BFS tree.
          std::vector<int> up_u, up_w;
          for (int x = u; x >= 0; x = parent[x]) up_u.push_back(x);
          for (int x = w; x >= 0; x = parent[x]) up_w.push_back(x);
          std::set<int> on_u(up_u.begin(), up_u.end());
          int lca = -1;
          for (int x : up_w) {
            if (on_u.count(x)) {
              lca = x;
              break;
            }
          }
          std::vector<int> cycle;
          for (int x : up_u) {
            cycle.push_back(x);
            if (x == lca) break;
          }
          std::vector<int> tail;
          for (int x : up_w) {
            if (x == lca) break;
            tail.push_back(x);
          }
          std::reverse(tail.begin(), tail.end());
          cycle.insert(cycle.end(), tail.begin(), tail.end());
          c.odd_cycle = std::move(cycle);
          return c;
        }
      }
    }
  }
  return c;
}

void check_part_labels(const GraphState& g) {
  bool all = true;
  std::map<std::string, std::string> part;
  for (const Entity& e : g.entities) {
    auto it = e.attrs.find("part");
    if (it == e.attrs.end()) {
      all = false;
      break;
    }
    part[e.id] = it->second;
  }
  if (!all) return;
  for (const auto& [id, value] : part) {
    if (value != "L" && value != "R") {
      throw Error("inconsistent-part-labels",
                  "entity " + id + " has part \"" + value + "\"");
    }
  }
  for (const Relation& r : g.relations) {
    if (r.subject == r.object) continue;
    if (part.at(r.subject) == part.at(r.object)) {
      throw Error("inconsistent-part-labels",
                  "entities " + r.subject + " and " + r.object +
                      " share part " + part.at(r.subject) +
                      " across a relation");
    }
  }
}

// Kuhn's augmenting-path matching over left-side nodes (color 0), skipping
// excluded vertices. Returns the match array (index -> partner or -1).
std::vector<int> kuhn_matching(const UndirectedSimpleView& v,
                               const std::vector<int>& color,
                               const std::vector<char>& excluded) {
  const int n = static_cast<int>(v.node_count());
  std::vector<int> match(n, -1);
  std::vector<char> seen(n, 0);
  std::function<bool(int)> augment = [&](int u) -> bool {
    for (int w : v.adjacency()[u]) {
      if (excluded[w] || seen[w]) continue;
      seen[w] = 1;
      if (match[w] < 0 || augment(match[w])) {
        match[w] = u;
        match[u] = w;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < n; ++u) {
    if (color[u] != 0 || excluded[u]) continue;
    std::fill(seen.begin(), seen.end(), 0);
    augment(u);
  }
  return match;
}

int matching_size(const UndirectedSimpleView& v, const std::vector<int>& color,
                  const std::vector<char>& excluded) {
  auto match = kuhn_matching(v, color, excluded);
  int size = 0;
  for (int u = 0; u < static_cast<int>(match.size()); ++u) {
    if (match[u] > u) ++size;
  }
  return size;
}

// ---------------------------------------------------------------------------
// brute-force reference internals

void require_small(const GraphState& g) {
  if (g.entities.size() > 12) {
    throw Error("too-large",
                "reference solver is limited to 12 entities, got " +
                    std::to_string(g.entities.size()));
  }
}

std::vector<std::vector<char>> closure_undirected(
    const UndirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) reach[i][i] = 1;
  for (auto [a, b] : v.edges()) reach[a][b] = reach[b][a] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  return reach;
}

bool brute_cycle_undirected(const UndirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  std::vector<int> state(n, 0), parent(n, -1);
  for (int s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<int> stack{s};
    state[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : v.adjacency()[u]) {
        if (!state[w]) {
          state[w] = 1;
          parent[w] = u;
          stack.push_back(w);
        } else if (w != parent[u]) {
          return true;
        }
      }
    }
  }
  return false;
}

bool brute_cycle_directed(const DirectedSimpleView& v) {
  const int n = static_cast<int>(v.node_count());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (auto [a, b] : v.arcs()) reach[a][b] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  for (int i = 0; i < n; ++i) {
    if (reach[i][i]) return true;
  }
  return false;
}

GarAnswer brute_shortest_path(const GraphState& g,
                              const UndirectedSimpleView& v, int iu, int iv,
                              bool weighted) {
  const int n = static_cast<int>(v.node_count());
  auto costs = edge_costs(g, v, weighted);
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, kInf));
  for (int i = 0; i < n; ++i) dist[i][i] = 0.0;
  for (const auto& [key, w] : costs) {
    auto [a, b] = key;
    dist[a][b] = dist[b][a] = std::min(dist[a][b], w);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (dist[i][k] + dist[k][j] < dist[i][j]) {
          dist[i][j] = dist[i][k] + dist[k][j];
        }
  GarAnswer a;
  if (std::isinf(dist[iu][iv])) {
    a.unreachable = true;
    return a;
  }
  a.length = dist[iu][iv];
  // Witness: walk optimal edges toward iv, largest neighbor first, so the
  // result deliberately diverges from the main solver's smallest-first walk.
  auto adj = cost_adjacency(v, costs);
  std::vector<char> visited(n, 0);
  std::function<bool(int)> walk = [&](int c) -> bool {
    a.path.push_back(v.id_of(c));
    if (c == iv) return true;
    visited[c] = 1;
    for (auto it = adj[c].rbegin(); it != adj[c].rend(); ++it) {
      auto [w, cost] = *it;
      if (visited[w] || std::isinf(dist[w][iv])) continue;
      if (std::fabs(cost + dist[w][iv] - dist[c][iv]) > kCostEps) continue;
      if (walk(w)) return true;
    }
    a.path.pop_back();
    visited[c] = 0;
    return false;
  };
  walk(iu);
  return a;
}

bool brute_bipartite(const UndirectedSimpleView& v) {
  // A graph is bipartite iff no closed walk of odd length exists.
  const int n = static_cast<int>(v.node_count());
  if (n == 0) return true;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0)), walk;
  for (auto [a, b] : v.edges()) adj[a][b] = adj[b][a] = 1;
  walk = adj;
  for (int len = 1; len <= n; ++len) {
    if (len % 2 == 1) {
      for (int i = 0; i < n; ++i) {
        if (walk[i][i]) return false;
      }
    }
    std::vector<std::vector<char>> nxt(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (walk[i][k])
          for (int j = 0; j < n; ++j)
            if (adj[k][j]) nxt[i][j] = 1;
    walk = std::move(nxt);
  }
  return true;
}

void brute_best_matching(const std::vector<std::pair<int, int>>& edges,
                         std::size_t from, std::vector<char>& used,
                         std::vector<std::pair<int, int>>& current,
                         std::vector<std::pair<int, int>>& best) {
  if (current.size() > best.size()) best = current;
  for (std::size_t i = from; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    if (used[a] || used[b]) continue;
    used[a] = used[b] = 1;
    current.push_back(edges[i]);
    brute_best_matching(edges, i + 1, used, current, best);
    current.pop_back();
    used[a] = used[b] = 0;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(GarKind k) {
  switch (k) {
    case GarKind::connectivity: return "connectivity";
    case GarKind::cycle: return "cycle";
    case GarKind::shortest_path: return "shortest-path";
    case GarKind::matching: return "matching";
  }
  return "connectivity";
}

std::optional<GarKind> gar_kind_from_string(std::string_view s) {
  if (s == "connectivity") return GarKind::connectivity;
  if (s == "cycle") return GarKind::cycle;
  if (s == "shortest-path") return GarKind::shortest_path;
  if (s == "matching") return GarKind::matching;
  return std::nullopt;
}

const char* to_string(CycleDirection d) {
  return d == CycleDirection::directed ? "directed" : "undirected";
}

bool is_connected(const GraphState& g, const std::string& u,
                  const std::string& v) {
  require_valid(g);
  if (u == v) throw Error("invalid-query", "source equals target");
  UndirectedSimpleView view(g);
  int iu = require_node(view, u);
  int iv = require_node(view, v);
  auto comp = component_ids(view);
  return comp[iu] == comp[iv];
}

bool has_cycle(const GraphState& g, CycleDirection direction) {
  require_valid(g);
  if (direction == CycleDirection::undirected) {
    UndirectedSimpleView view(g);
    auto comp = component_ids(view);
    int components = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(),
                                                              comp.end());
    return static_cast<long long>(view.edge_count()) >
           static_cast<long long>(view.node_count()) - components;
  }
  DirectedSimpleView view(g);
  const int n = static_cast<int>(view.node_count());
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
  for (int s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    state[s] = 1;
    while (!stack.empty()) {
      auto& [u, next_child] = stack.back();
      if (next_child < view.out_adjacency()[u].size()) {
        int w = view.out_adjacency()[u][next_child++];
        if (state[w] == 1) return true;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

GarAnswer shortest_path(const GraphState& g, const std::string& u,
                        const std::string& v, bool weighted) {
  if (u == v) throw Error("invalid-query", "source equals target");
  if (weighted) scan_weights(g);
  require_valid(g);
  UndirectedSimpleView view(g);
  int iu = require_node(view, u);
  int iv = require_node(view, v);
  auto adj = cost_adjacency(view, edge_costs(g, view, weighted));
  auto dist = dijkstra(adj, iv);
  GarAnswer a;
  if (std::isinf(dist[iu])) {
    a.unreachable = true;
    return a;
  }
  a.length = dist[iu];
  std::vector<char> visited(view.node_count(), 0);
  visited[iu] = 1;
  std::vector<int> path{iu};
  lex_path_search(adj, dist, iu, iv, visited, path);
  for (int idx : path) a.path.push_back(view.id_of(idx));
  return a;
}

GarAnswer max_bipartite_matching(const GraphState& g) {
  require_valid(g);
  UndirectedSimpleView view(g);
  Coloring coloring = two_color(view);
  if (!coloring.odd_cycle.empty()) {
    std::string cycle;
    for (int idx : coloring.odd_cycle) {
      if (!cycle.empty()) cycle += " -> ";
      cycle += view.id_of(idx);
    }
    cycle += " -> " + view.id_of(coloring.odd_cycle.front());
    throw Error("not-bipartite", "odd cycle: " + cycle);
  }
  check_part_labels(g);

  std::vector<char> excluded(view.node_count(), 0);
  int total = matching_size(view, coloring.color, excluded);
  GarAnswer a;
  a.size = total;
  int need = total;
  for (auto [x, y] : view.edges()) {
    if (need == 0) break;
    if (excluded[x] || excluded[y]) continue;
    std::vector<char> trial = excluded;
    trial[x] = trial[y] = 1;
    if (matching_size(view, coloring.color, trial) == need - 1) {
      excluded = std::move(trial);
      a.pairs.push_back({view.id_of(x), view.id_of(y)});
      --need;
    }
  }
  return a;
}

GarAnswer solve(const GraphState& g, const GarQuery& q) {
  switch (q.kind) {
    case GarKind::connectivity: {
      if (!q.source || !q.target) {
        throw Error("invalid-query", "connectivity needs source and target");
      }
      GarAnswer a;
      a.value = is_connected(g, *q.source, *q.target);
      return a;
    }
    case GarKind::cycle: {
      GarAnswer a;
      a.value = has_cycle(g, q.direction);
      return a;
    }
    case GarKind::shortest_path: {
      if (!q.source || !q.target) {
        throw Error("invalid-query", "shortest-path needs source and target");
      }
      return shortest_path(g, *q.source, *q.target, q.weighted);
    }
    case GarKind::matching:
      return max_bipartite_matching(g);
  }
  throw Error("invalid-query", "unknown kind");
}

GarAnswer brute_force_reference(const GraphState& g, const GarQuery& q) {
  require_small(g);
  if (q.kind == GarKind::shortest_path && q.weighted) scan_weights(g);
  require_valid(g);
  UndirectedSimpleView view(g);
  switch (q.kind) {
    case GarKind::connectivity: {
      if (!q.source || !q.target) {
        throw Error("invalid-query", "connectivity needs source and target");
      }
      if (*q.source == *q.target) {
        throw Error("invalid-query", "source equals target");
      }
      int iu = require_node(view, *q.source);
      int iv = require_node(view, *q.target);
      GarAnswer a;
      a.value = closure_undirected(view)[iu][iv] != 0;
      return a;
    }
    case GarKind::cycle: {
      GarAnswer a;
      if (q.direction == CycleDirection::undirected) {
        a.value = brute_cycle_undirected(view);
      } else {
        a.value = brute_cycle_directed(DirectedSimpleView(g));
      }
      return a;
    }
    case GarKind::shortest_path: {
      if (!q.source || !q.target) {
        throw Error("invalid-query", "shortest-path needs source and target");
      }
      if (*q.source == *q.target) {
        throw Error("invalid-query", "source equals target");
      }
      int iu = require_node(view, *q.source);
      int iv = require_node(view, *q.target);
      return brute_shortest_path(g, view, iu, iv, q.weighted);
    }
    case GarKind::matching: {
      if (!brute_bipartite(view)) {
        throw Error("not-bipartite", "odd closed walk found");
      }
      check_part_labels(g);
      std::vector<char> used(view.node_count(), 0);
      std::vector<std::pair<int, int>> current, best;
      brute_best_matching(view.edges(), 0, used, current, best);
      GarAnswer a;
      a.size = static_cast<int>(best.size());
      for (auto [x, y] : best) a.pairs.push_back({view.id_of(x), view.id_of(y)});
      return a;
    }
  }
  throw Error("invalid-query", "unknown kind");
}

bool verify_path_witness(const GraphState& g, const GarQuery& q,
                         const GarAnswer& a) {
  if (!q.source || !q.target) return false;
  if (a.unreachable) return a.path.empty() && !a.length;
  if (!a.length || a.path.size() < 2) return false;
  if (a.path.front() != *q.source || a.path.back() != *q.target) return false;

  std::set<std::string> ids;
  for (const Entity& e : g.entities) ids.insert(e.id);
  std::set<std::string> seen;
  for (const auto& id : a.path) {
    if (!ids.count(id)) return false;
    if (!seen.insert(id).second) return false;  // must be simple
  }

  // Cheapest cost per unordered pair, read straight off the relations.
  std::map<std::pair<std::string, std::string>, double> cost;
  for (const Relation& r : g.relations) {
    if (r.subject == r.object) continue;
    double w = 1.0;
    if (q.weighted) {
      auto parsed = relation_weight(r);
      if (!parsed) return false;
      w = *parsed;
    }
    auto key = std::minmax(r.subject, r.object);
    auto [pos, inserted] = cost.emplace(key, w);
    if (!inserted) pos->second = std::min(pos->second, w);
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < a.path.size(); ++i) {
    auto key = std::minmax(a.path[i], a.path[i + 1]);
    auto it = cost.find(key);
    if (it == cost.end()) return false;
    total += it->second;
  }
  return std::fabs(total - *a.length) <= kCostEps;
}

bool verify_matching_witness(const GraphState& g, const GarAnswer& a) {
  if (!a.size) return false;
  if (static_cast<int>(a.pairs.size()) != *a.size) return false;
  std::set<std::pair<std::string, std::string>> edges;
  for (const Relation& r : g.relations) {
    if (r.subject == r.object) continue;
    edges.insert(std::minmax(r.subject, r.object));
  }
  std::set<std::string> used;
  for (const auto& [x, y] : a.pairs) {
    if (!edges.count(std::minmax(x, y))) return false;
    if (!used.insert(x).second) return false;
    if (!used.insert(y).second) return false;
  }
  return true;
}

bool payload_equal(const GarAnswer& a, const GarAnswer& b) {
  if (a.value != b.value) return false;
  if (a.unreachable != b.unreachable) return false;
  if (a.length.has_value() != b.length.has_value()) return false;
  if (a.length && *a.length != *b.length) return false;
  if (a.size != b.size) return false;
  return true;
}

std::string format_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

nlohmann::ordered_json gar_query_to_json(const GarQuery& q) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["kind"] = to_string(q.kind);
  switch (q.kind) {
    case GarKind::connectivity:
      j["source"] = q.source.value_or("");
      j["target"] = q.target.value_or("");
      break;
    case GarKind::cycle:
      j["direction"] = to_string(q.direction);
      break;
    case GarKind::shortest_path:
      j["source"] = q.source.value_or("");
      j["target"] = q.target.value_or("");
      j["weighted"] = q.weighted;
      break;
    case GarKind::matching:
      break;
  }
  return j;
}

GarQuery gar_query_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error("syntax-error", "query: missing string key 'kind'");
  }
  auto kind = gar_kind_from_string(j["kind"].get<std::string>());
  if (!kind) {
    throw Error("syntax-error",
                "query: unknown kind '" + j["kind"].get<std::string>() + "'");
  }
  GarQuery q;
  q.kind = *kind;
  if (j.contains("source")) {
    if (!j["source"].is_string())
      throw Error("syntax-error", "query.source: expected string");
    q.source = j["source"].get<std::string>();
  }
  if (j.contains("target")) {
    if (!j["target"].is_string())
      throw Error("syntax-error", "query.target: expected string");
    q.target = j["target"].get<std::string>();
  }
  if (j.contains("weighted")) {
    if (!j["weighted"].is_boolean())
      throw Error("syntax-error", "query.weighted: expected boolean");
    q.weighted = j["weighted"].get<bool>();
  }
  if (j.contains("direction")) {
    std::string d = j["direction"].is_string()
                        ? j["direction"].get<std::string>()
                        : std::string();
    if (d == "directed") {
      q.direction = CycleDirection::directed;
    } else if (d == "undirected") {
      q.direction = CycleDirection::undirected;
    } else {
      throw Error("syntax-error", "query.direction: expected "
                                  "\"undirected\" or \"directed\"");
    }
  }
  return q;
}

nlohmann::ordered_json gar_answer_to_json(const GarAnswer& a) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (a.value) {
    j["value"] = *a.value;
    return j;
  }
  if (a.unreachable) {
    j["unreachable"] = true;
    return j;
  }
  if (a.length) {
    j["length"] = nlohmann::ordered_json::parse(format_decimal(*a.length));
    j["path"] = a.path;
    return j;
  }
  if (a.size) {
    j["size"] = *a.size;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& [x, y] : a.pairs) {
      pairs.push_back(nlohmann::ordered_json::array({x, y}));
    }
    j["pairs"] = std::move(pairs);
    return j;
  }
  return j;
}

GarAnswer gar_answer_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("syntax-error", "answer: expected object");
  GarAnswer a;
  if (j.contains("value")) {
    if (!j["value"].is_boolean())
      throw Error("syntax-error", "answer.value: expected boolean");
    a.value = j["value"].get<bool>();
    return a;
  }
  if (j.contains("unreachable")) {
    if (!j["unreachable"].is_boolean() || !j["unreachable"].get<bool>()) {
      throw Error("syntax-error", "answer.unreachable: expected true");
    }
    a.unreachable = true;
    return a;
  }
  if (j.contains("length")) {
    if (!j["length"].is_number())
      throw Error("syntax-error", "answer.length: expected number");
    a.length = j["length"].get<double>();
    if (j.contains("path")) {
      for (const auto& p : j["path"]) {
        if (!p.is_string())
          throw Error("syntax-error", "answer.path: expected strings");
        a.path.push_back(p.get<std::string>());
      }
    }
    return a;
  }
  if (j.contains("size")) {
    if (!j["size"].is_number_integer())
      throw Error("syntax-error", "answer.size: expected integer");
    a.size = j["size"].get<int>();
    if (j.contains("pairs")) {
      for (const auto& p : j["pairs"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() ||
            !p[1].is_string()) {
          throw Error("syntax-error", "answer.pairs: expected string pairs");
        }
        a.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
      }
    }
    return a;
  }
  throw Error("syntax-error", "answer: unrecognized payload");
}

}  // namespace gsub
