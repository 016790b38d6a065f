#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsub/algo.hpp"
#include "gsub/error.hpp"
#include "gsub/graph.hpp"
#include "gsub/rng.hpp"
#include "support/random_graph.hpp"

namespace {

using gsub::CycleDirection;
using gsub::GarAnswer;
using gsub::GarKind;
using gsub::GarQuery;
using gsub::GraphState;

GraphState letters(std::initializer_list<const char*> ids) {
  GraphState g;
  for (const char* id : ids) {
    gsub::Entity e;
    e.id = id;
    g.entities.push_back(std::move(e));
  }
  return g;
}

void link(GraphState& g, const char* s, const char* o,
          const char* weight = nullptr, const char* p = "rel") {
  gsub::Relation r;
  r.subject = s;
  r.predicate = p;
  r.object = o;
  if (weight) r.attrs["weight"] = weight;
  g.relations.push_back(std::move(r));
}

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const gsub::Error& e) {
    return e.code();
  }
  return "";
}

std::vector<std::string> split_arrows(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = s.find(" -> ", pos);
    if (hit == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, hit - pos));
    pos = hit + 4;
  }
}

std::set<std::pair<std::string, std::string>> undirected_edges(
    const GraphState& g) {
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& r : g.relations) {
    if (r.subject == r.object) continue;
    edges.insert(std::minmax(r.subject, r.object));
  }
  return edges;
}

}  // namespace

TEST_CASE("connectivity fixtures") {
  GraphState tri = letters({"A", "B", "C"});
  link(tri, "A", "B");
  link(tri, "B", "C");
  link(tri, "C", "A");
  CHECK(gsub::is_connected(tri, "A", "B"));
  CHECK(gsub::is_connected(tri, "B", "A"));

  GraphState two = letters({"A", "B", "C", "D"});
  link(two, "A", "B");
  link(two, "C", "D");
  CHECK(gsub::is_connected(two, "A", "B"));
  CHECK_FALSE(gsub::is_connected(two, "A", "C"));
  CHECK_FALSE(gsub::is_connected(two, "B", "D"));

  CHECK(code_of([&] { gsub::is_connected(two, "A", "Z"); }) == "unknown-node");
  CHECK(code_of([&] { gsub::is_connected(two, "Z", "A"); }) == "unknown-node");
  CHECK(code_of([&] { gsub::is_connected(two, "A", "A"); }) == "invalid-query");
}

TEST_CASE("cycle fixtures") {
  GraphState tri = letters({"A", "B", "C"});
  link(tri, "A", "B");
  link(tri, "B", "C");
  link(tri, "C", "A");
  CHECK(gsub::has_cycle(tri, CycleDirection::undirected));
  CHECK(gsub::has_cycle(tri, CycleDirection::directed));

  GraphState path = letters({"A", "B", "C"});
  link(path, "A", "B");
  link(path, "B", "C");
  CHECK_FALSE(gsub::has_cycle(path, CycleDirection::undirected));
  CHECK_FALSE(gsub::has_cycle(path, CycleDirection::directed));

  SUBCASE("two antiparallel arcs collapse to one undirected edge") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B");
    link(g, "B", "A");
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::undirected));
    CHECK(gsub::has_cycle(g, CycleDirection::directed));
  }

  SUBCASE("self-loop counts only in directed mode") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "A");
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::undirected));
    CHECK(gsub::has_cycle(g, CycleDirection::directed));
  }

  SUBCASE("parallel predicates collapse") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B", nullptr, "p");
    link(g, "A", "B", nullptr, "q");
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::undirected));
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::directed));
  }

  SUBCASE("directed cycle through three arcs") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "B");
    link(g, "B", "C");
    link(g, "C", "A");
    CHECK(gsub::has_cycle(g, CycleDirection::directed));
  }

  SUBCASE("diamond has an undirected cycle but no directed one") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "B");
    link(g, "A", "C");
    link(g, "B", "D");
    link(g, "C", "D");
    CHECK(gsub::has_cycle(g, CycleDirection::undirected));
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::directed));
  }

  SUBCASE("empty graph") {
    GraphState g;
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::undirected));
    CHECK_FALSE(gsub::has_cycle(g, CycleDirection::directed));
  }

  SUBCASE("invalid graph is rejected") {
    GraphState g = letters({"A"});
    link(g, "A", "Ghost");
    CHECK(code_of([&] { gsub::has_cycle(g); }) == "invalid-graph");
  }
}

TEST_CASE("shortest path fixtures") {
  SUBCASE("two-hop path") {
    GraphState g = letters({"A", "B", "C"});
    link(g, "A", "B");
    link(g, "B", "C");
    GarAnswer a = gsub::shortest_path(g, "A", "C", false);
    REQUIRE(a.length.has_value());
    CHECK(*a.length == 2.0);
    CHECK(a.path == std::vector<std::string>{"A", "B", "C"});
    GarQuery q;
    q.kind = GarKind::shortest_path;
    q.source = "A";
    q.target = "C";
    CHECK(gsub::verify_path_witness(g, q, a));
  }

  SUBCASE("weighted square avoids the heavy edge") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "B", "1");
    link(g, "B", "C", "1");
    link(g, "C", "D", "1");
    link(g, "D", "A", "10");
    GarAnswer a = gsub::shortest_path(g, "A", "D", true);
    REQUIRE(a.length.has_value());
    CHECK(*a.length == 3.0);
    CHECK(a.path == std::vector<std::string>{"A", "B", "C", "D"});

    GarAnswer hop = gsub::shortest_path(g, "A", "D", false);
    CHECK(*hop.length == 1.0);
    CHECK(hop.path == std::vector<std::string>{"A", "D"});
  }

  SUBCASE("disconnected pair is unreachable") {
    GraphState g = letters({"A", "B", "C"});
    link(g, "A", "B");
    GarAnswer a = gsub::shortest_path(g, "A", "C", false);
    CHECK(a.unreachable);
    CHECK(a.path.empty());
    CHECK_FALSE(a.length.has_value());
    GarQuery q;
    q.kind = GarKind::shortest_path;
    q.source = "A";
    q.target = "C";
    CHECK(gsub::verify_path_witness(g, q, a));
  }

  SUBCASE("parallel relations contribute their minimum weight") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B", "10", "p");
    link(g, "B", "A", "2", "q");
    GarAnswer a = gsub::shortest_path(g, "A", "B", true);
    CHECK(*a.length == 2.0);
  }

  SUBCASE("lexicographic tie-break") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "B");
    link(g, "B", "D");
    link(g, "A", "C");
    link(g, "C", "D");
    GarAnswer a = gsub::shortest_path(g, "A", "D", false);
    CHECK(a.path == std::vector<std::string>{"A", "B", "D"});
  }

  SUBCASE("zero-weight dead end forces backtracking") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "B", "0");
    link(g, "A", "C", "0");
    link(g, "C", "D", "0");
    GarAnswer a = gsub::shortest_path(g, "A", "D", true);
    REQUIRE(a.length.has_value());
    CHECK(*a.length == 0.0);
    CHECK(a.path == std::vector<std::string>{"A", "C", "D"});
  }

  SUBCASE("weight errors") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B");
    CHECK(code_of([&] { gsub::shortest_path(g, "A", "B", true); }) ==
          "missing-weight");
    CHECK(code_of([&] { gsub::shortest_path(g, "A", "B", false); }) == "");

    GraphState neg = letters({"A", "B"});
    link(neg, "A", "B", "-1");
    CHECK(code_of([&] { gsub::shortest_path(neg, "A", "B", true); }) ==
          "negative-weight");

    GraphState junk = letters({"A", "B"});
    link(junk, "A", "B", "fast");
    CHECK(code_of([&] { gsub::shortest_path(junk, "A", "B", true); }) ==
          "missing-weight");

    GraphState loop = letters({"A", "B"});
    link(loop, "A", "B", "1");
    link(loop, "A", "A");
    CHECK(code_of([&] { gsub::shortest_path(loop, "A", "B", true); }) == "");
  }

  SUBCASE("query errors") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B");
    CHECK(code_of([&] { gsub::shortest_path(g, "A", "A", false); }) ==
          "invalid-query");
    CHECK(code_of([&] { gsub::shortest_path(g, "A", "Z", false); }) ==
          "unknown-node");
  }
}

TEST_CASE("matching fixtures") {
  SUBCASE("complete bipartite on four nodes") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "C");
    link(g, "A", "D");
    link(g, "B", "C");
    link(g, "B", "D");
    GarAnswer a = gsub::max_bipartite_matching(g);
    REQUIRE(a.size.has_value());
    CHECK(*a.size == 2);
    CHECK(a.pairs == std::vector<std::pair<std::string, std::string>>{
                         {"A", "C"}, {"B", "D"}});
    CHECK(gsub::verify_matching_witness(g, a));
  }

  SUBCASE("path of three nodes") {
    GraphState g = letters({"A", "B", "C"});
    link(g, "A", "B");
    link(g, "B", "C");
    GarAnswer a = gsub::max_bipartite_matching(g);
    CHECK(*a.size == 1);
    CHECK(a.pairs == std::vector<std::pair<std::string, std::string>>{
                         {"A", "B"}});
  }

  SUBCASE("path of four nodes") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "B");
    link(g, "B", "C");
    link(g, "C", "D");
    GarAnswer a = gsub::max_bipartite_matching(g);
    CHECK(*a.size == 2);
    CHECK(a.pairs == std::vector<std::pair<std::string, std::string>>{
                         {"A", "B"}, {"C", "D"}});
  }

  SUBCASE("empty graph") {
    GraphState g;
    GarAnswer a = gsub::max_bipartite_matching(g);
    CHECK(*a.size == 0);
    CHECK(a.pairs.empty());
  }

  SUBCASE("odd cycle witness") {
    GraphState g = letters({"A", "B", "C"});
    link(g, "A", "B");
    link(g, "B", "C");
    link(g, "C", "A");
    try {
      gsub::max_bipartite_matching(g);
      FAIL("expected not-bipartite");
    } catch (const gsub::Error& e) {
      CHECK(e.code() == "not-bipartite");
      std::string msg = e.what();
      auto at = msg.find("odd cycle: ");
      REQUIRE(at != std::string::npos);
      auto nodes = split_arrows(msg.substr(at + 11));
      REQUIRE(nodes.size() >= 4);
      CHECK(nodes.front() == nodes.back());
      CHECK((nodes.size() - 1) % 2 == 1);
      auto edges = undirected_edges(g);
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        CHECK(edges.count(std::minmax(nodes[i], nodes[i + 1])) == 1);
      }
    }
  }

  SUBCASE("part labels validated when complete") {
    GraphState g = letters({"A", "B", "C", "D"});
    link(g, "A", "C");
    link(g, "B", "D");
    g.entities[0].attrs["part"] = "L";
    g.entities[1].attrs["part"] = "L";
    g.entities[2].attrs["part"] = "R";
    g.entities[3].attrs["part"] = "R";
    CHECK(*gsub::max_bipartite_matching(g).size == 2);

    g.entities[2].attrs["part"] = "L";
    CHECK(code_of([&] { gsub::max_bipartite_matching(g); }) ==
          "inconsistent-part-labels");

    g.entities[2].attrs["part"] = "X";
    CHECK(code_of([&] { gsub::max_bipartite_matching(g); }) ==
          "inconsistent-part-labels");
  }

  SUBCASE("partial part labels are ignored") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B");
    g.entities[0].attrs["part"] = "bogus";
    CHECK(*gsub::max_bipartite_matching(g).size == 1);
  }

  SUBCASE("self-loop does not affect bipartiteness of the view") {
    GraphState g = letters({"A", "B"});
    link(g, "A", "B");
    link(g, "A", "A");
    CHECK(*gsub::max_bipartite_matching(g).size == 1);
  }
}

TEST_CASE("solve dispatch applies query invariants") {
  GraphState g = letters({"A", "B"});
  link(g, "A", "B");

  GarQuery q;
  q.kind = GarKind::connectivity;
  CHECK(code_of([&] { gsub::solve(g, q); }) == "invalid-query");
  q.source = "A";
  CHECK(code_of([&] { gsub::solve(g, q); }) == "invalid-query");
  q.target = "B";
  CHECK(*gsub::solve(g, q).value);

  q.kind = GarKind::shortest_path;
  q.source.reset();
  CHECK(code_of([&] { gsub::solve(g, q); }) == "invalid-query");
  q.source = "A";
  CHECK(*gsub::solve(g, q).length == 1.0);

  q.kind = GarKind::cycle;
  CHECK_FALSE(*gsub::solve(g, q).value);

  q.kind = GarKind::matching;
  CHECK(*gsub::solve(g, q).size == 1);
}

TEST_CASE("brute force guardrails") {
  GraphState big;
  for (int i = 0; i < 13; ++i) {
    gsub::Entity e;
    e.id = "N" + std::to_string(i);
    big.entities.push_back(std::move(e));
  }
  GarQuery q;
  q.kind = GarKind::cycle;
  CHECK(code_of([&] { gsub::brute_force_reference(big, q); }) == "too-large");

  big.entities.pop_back();
  CHECK_FALSE(*gsub::brute_force_reference(big, q).value);

  GraphState tri = letters({"A", "B", "C"});
  link(tri, "A", "B");
  link(tri, "B", "C");
  link(tri, "C", "A");
  CHECK(*gsub::brute_force_reference(tri, q).value);

  GarQuery m;
  m.kind = GarKind::matching;
  GraphState k22 = letters({"A", "B", "C", "D"});
  link(k22, "A", "C");
  link(k22, "A", "D");
  link(k22, "B", "C");
  link(k22, "B", "D");
  GarAnswer a = gsub::brute_force_reference(k22, m);
  CHECK(*a.size == 2);
  CHECK(gsub::verify_matching_witness(k22, a));
}

TEST_CASE("main solvers agree with the brute force reference") {
  gsub::SeededRng rng(900101);
  int matchings = 0;
  int reachable = 0;
  int cycles = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    testsupport::GraphGenOptions o;
    o.max_entities = 12;
    o.allow_empty = true;
    o.weights = (iter % 2 == 1);
    auto g = testsupport::random_graph(rng, o);

    for (CycleDirection dir :
         {CycleDirection::undirected, CycleDirection::directed}) {
      GarQuery q;
      q.kind = GarKind::cycle;
      q.direction = dir;
      GarAnswer main = gsub::solve(g, q);
      GarAnswer ref = gsub::brute_force_reference(g, q);
      REQUIRE(gsub::payload_equal(main, ref));
      if (*main.value) ++cycles;
    }

    if (g.entities.size() >= 2) {
      auto pick = rng.below(g.entities.size());
      auto other = rng.below(g.entities.size() - 1);
      if (other >= pick) ++other;
      GarQuery q;
      q.kind = GarKind::connectivity;
      q.source = g.entities[pick].id;
      q.target = g.entities[other].id;
      GarAnswer main = gsub::solve(g, q);
      GarAnswer ref = gsub::brute_force_reference(g, q);
      REQUIRE(gsub::payload_equal(main, ref));

      q.kind = GarKind::shortest_path;
      q.weighted = o.weights;
      main = gsub::solve(g, q);
      ref = gsub::brute_force_reference(g, q);
      REQUIRE(gsub::payload_equal(main, ref));
      REQUIRE(gsub::verify_path_witness(g, q, main));
      REQUIRE(gsub::verify_path_witness(g, q, ref));
      if (!main.unreachable) {
        ++reachable;
        REQUIRE(main.path <= ref.path);
      }
    }

    GarQuery q;
    q.kind = GarKind::matching;
    std::optional<GarAnswer> main, ref;
    std::string main_code, ref_code;
    try {
      main = gsub::solve(g, q);
    } catch (const gsub::Error& e) {
      main_code = e.code();
    }
    try {
      ref = gsub::brute_force_reference(g, q);
    } catch (const gsub::Error& e) {
      ref_code = e.code();
    }
    REQUIRE(main.has_value() == ref.has_value());
    REQUIRE(main_code == ref_code);
    if (main) {
      REQUIRE(gsub::payload_equal(*main, *ref));
      REQUIRE(gsub::verify_matching_witness(g, *main));
      REQUIRE(gsub::verify_matching_witness(g, *ref));
      REQUIRE(main->pairs <= ref->pairs);
      if (*main->size > 0) ++matchings;
    }
  }
  CHECK(matchings > 200);
  CHECK(reachable > 400);
  CHECK(cycles > 200);
}

TEST_CASE("adding a relation only ever helps") {
  gsub::SeededRng rng(900202);
  int done = 0;
  for (int iter = 0; iter < 900 && done < 400; ++iter) {
    testsupport::GraphGenOptions o;
    o.max_entities = 10;
    o.allow_empty = false;
    o.weights = true;
    o.nasty_strings = false;
    o.attrs = false;
    auto g = testsupport::random_graph(rng, o);
    if (g.entities.size() < 2) continue;

    std::set<gsub::Triple> seen;
    for (const auto& r : g.relations) seen.insert(gsub::triple_of(r));
    gsub::Relation extra;
    bool found = false;
    for (int attempt = 0; attempt < 24 && !found; ++attempt) {
      extra.subject = g.entities[rng.below(g.entities.size())].id;
      extra.object = g.entities[rng.below(g.entities.size())].id;
      extra.predicate = "rel" + std::to_string(rng.below(6));
      found = !seen.count(gsub::triple_of(extra));
    }
    if (!found) continue;
    static const char* wpool[] = {"0", "1", "2", "0.5", "3.25", "10"};
    extra.attrs["weight"] = wpool[rng.below(6)];
    GraphState g2 = g;
    g2.relations.push_back(extra);

    auto u = g.entities[rng.below(g.entities.size())].id;
    auto v = g.entities[rng.below(g.entities.size())].id;
    if (u == v) continue;

    if (gsub::is_connected(g, u, v)) CHECK(gsub::is_connected(g2, u, v));
    for (CycleDirection dir :
         {CycleDirection::undirected, CycleDirection::directed}) {
      if (gsub::has_cycle(g, dir)) CHECK(gsub::has_cycle(g2, dir));
    }
    for (bool weighted : {false, true}) {
      GarAnswer before = gsub::shortest_path(g, u, v, weighted);
      GarAnswer after = gsub::shortest_path(g2, u, v, weighted);
      if (!before.unreachable) {
        REQUIRE_FALSE(after.unreachable);
        CHECK(*after.length <= *before.length);
      }
    }
    std::optional<int> m1, m2;
    try {
      m1 = *gsub::max_bipartite_matching(g).size;
    } catch (const gsub::Error& e) {
      REQUIRE(e.code() == "not-bipartite");
    }
    try {
      m2 = *gsub::max_bipartite_matching(g2).size;
    } catch (const gsub::Error& e) {
      REQUIRE(e.code() == "not-bipartite");
    }
    if (m1 && m2) CHECK(*m2 >= *m1);
    ++done;
  }
  CHECK(done >= 400);
}

TEST_CASE("shortest path length is symmetric") {
  gsub::SeededRng rng(900303);
  for (int iter = 0; iter < 400; ++iter) {
    testsupport::GraphGenOptions o;
    o.max_entities = 10;
    o.allow_empty = false;
    o.weights = (iter % 2 == 0);
    auto g = testsupport::random_graph(rng, o);
    if (g.entities.size() < 2) continue;
    auto pick = rng.below(g.entities.size());
    auto other = rng.below(g.entities.size() - 1);
    if (other >= pick) ++other;
    const auto& u = g.entities[pick].id;
    const auto& v = g.entities[other].id;
    GarAnswer fwd = gsub::shortest_path(g, u, v, o.weights);
    GarAnswer rev = gsub::shortest_path(g, v, u, o.weights);
    CHECK(fwd.unreachable == rev.unreachable);
    if (!fwd.unreachable) CHECK(*fwd.length == *rev.length);
  }
}

TEST_CASE("decimal rendering") {
  CHECK(gsub::format_decimal(2.0) == "2");
  CHECK(gsub::format_decimal(0.0) == "0");
  CHECK(gsub::format_decimal(1.5) == "1.5");
  CHECK(gsub::format_decimal(10.25) == "10.25");
  CHECK(gsub::format_decimal(1.0 / 3.0) == "0.333333");
  CHECK(gsub::format_decimal(4.0 / 3.0) == "1.333333");
  CHECK(gsub::format_decimal(3.0000004) == "3");
  CHECK(gsub::format_decimal(1e-7) == "0");
  CHECK(gsub::format_decimal(-1e-7) == "0");
  CHECK(gsub::format_decimal(123456.5) == "123456.5");
  CHECK(gsub::format_decimal(0.1 + 0.2) == "0.3");
}

TEST_CASE("query and answer codecs") {
  SUBCASE("query shapes") {
    GarQuery ct;
    ct.kind = GarKind::connectivity;
    ct.source = "A";
    ct.target = "B";
    CHECK(gsub::gar_query_to_json(ct).dump() ==
          R"({"kind":"connectivity","source":"A","target":"B"})");

    GarQuery cyc;
    cyc.kind = GarKind::cycle;
    cyc.direction = CycleDirection::directed;
    CHECK(gsub::gar_query_to_json(cyc).dump() ==
          R"({"kind":"cycle","direction":"directed"})");

    GarQuery sp;
    sp.kind = GarKind::shortest_path;
    sp.source = "A";
    sp.target = "D";
    sp.weighted = true;
    CHECK(gsub::gar_query_to_json(sp).dump() ==
          R"({"kind":"shortest-path","source":"A","target":"D","weighted":true})");

    GarQuery bm;
    bm.kind = GarKind::matching;
    CHECK(gsub::gar_query_to_json(bm).dump() == R"({"kind":"matching"})");

    for (const GarQuery& q : {ct, cyc, sp, bm}) {
      GarQuery back = gsub::gar_query_from_json(gsub::gar_query_to_json(q));
      CHECK(back.kind == q.kind);
      CHECK(back.source == q.source);
      CHECK(back.target == q.target);
      CHECK(back.weighted == q.weighted);
      CHECK(back.direction == q.direction);
    }
  }

  SUBCASE("query errors") {
    CHECK(code_of([] {
            gsub::gar_query_from_json(nlohmann::json::parse(R"({"kind":"x"})"));
          }) == "syntax-error");
    CHECK(code_of([] {
            gsub::gar_query_from_json(nlohmann::json::parse(R"({})"));
          }) == "syntax-error");
    CHECK(code_of([] {
            gsub::gar_query_from_json(nlohmann::json::parse(
                R"({"kind":"cycle","direction":"sideways"})"));
          }) == "syntax-error");
  }

  SUBCASE("answer shapes") {
    GarAnswer yes;
    yes.value = true;
    CHECK(gsub::gar_answer_to_json(yes).dump() == R"({"value":true})");

    GarAnswer no;
    no.value = false;
    CHECK(gsub::gar_answer_to_json(no).dump() == R"({"value":false})");

    GarAnswer un;
    un.unreachable = true;
    CHECK(gsub::gar_answer_to_json(un).dump() == R"({"unreachable":true})");

    GarAnswer sp;
    sp.length = 3.0;
    sp.path = {"A", "B", "C", "D"};
    CHECK(gsub::gar_answer_to_json(sp).dump() ==
          R"({"length":3,"path":["A","B","C","D"]})");

    GarAnswer frac;
    frac.length = 0.5;
    frac.path = {"A", "B"};
    CHECK(gsub::gar_answer_to_json(frac).dump() ==
          R"({"length":0.5,"path":["A","B"]})");

    GarAnswer bm;
    bm.size = 2;
    bm.pairs = {{"A", "C"}, {"B", "D"}};
    CHECK(gsub::gar_answer_to_json(bm).dump() ==
          R"({"size":2,"pairs":[["A","C"],["B","D"]]})");

    for (const GarAnswer& a : {yes, no, un, sp, frac, bm}) {
      GarAnswer back = gsub::gar_answer_from_json(gsub::gar_answer_to_json(a));
      CHECK(gsub::payload_equal(back, a));
      CHECK(back.path == a.path);
      CHECK(back.pairs == a.pairs);
    }
  }

  SUBCASE("answer errors") {
    CHECK(code_of([] {
            gsub::gar_answer_from_json(nlohmann::json::parse(R"({})"));
          }) == "syntax-error");
    CHECK(code_of([] {
            gsub::gar_answer_from_json(
                nlohmann::json::parse(R"({"value":"yes"})"));
          }) == "syntax-error");
    CHECK(code_of([] {
            gsub::gar_answer_from_json(
                nlohmann::json::parse(R"({"unreachable":false})"));
          }) == "syntax-error");
  }

  SUBCASE("kind strings") {
    for (GarKind k : {GarKind::connectivity, GarKind::cycle,
                      GarKind::shortest_path, GarKind::matching}) {
      auto back = gsub::gar_kind_from_string(gsub::to_string(k));
      REQUIRE(back.has_value());
      CHECK(*back == k);
    }
    CHECK_FALSE(gsub::gar_kind_from_string("coloring").has_value());
  }
}
