#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsub/error.hpp"
#include "gsub/forge.hpp"
#include "gsub/graph.hpp"
#include "gsub/schedule.hpp"
#include "gsub/schema_io.hpp"

namespace {

using gsub::GarKind;
using gsub::GraphState;
using gsub::Paradigm;
using gsub::ParadigmConfig;
using gsub::SchemaRealization;
using gsub::TaskCatalogEntry;
using gsub::TaskInstance;
using gsub::TaskKind;
using gsub::TaskRole;
using gsub::TrainingSchedule;

const SchemaRealization kAll[] = {
    SchemaRealization::unified_text, SchemaRealization::xml_style,
    SchemaRealization::natural_language, SchemaRealization::canonical_json};

GraphState fixture_graph(const std::string& gid, int salt) {
  GraphState g;
  g.graph_id = gid;
  for (const char* id : {"A", "B", "C"}) {
    gsub::Entity e;
    e.id = id;
    g.entities.push_back(e);
  }
  std::string tag = std::to_string(salt);
  auto rel = [&](const char* s, const char* o, std::string p) {
    gsub::Relation r;
    r.subject = s;
    r.predicate = std::move(p);
    r.object = o;
    g.relations.push_back(r);
  };
  rel("A", "B", "on-" + tag);
  rel("B", "C", "near-" + tag);
  if (salt % 2 == 0) rel("C", "A", "under-" + tag);
  return g;
}

std::vector<TaskInstance> text_corpus(int n) {
  std::vector<TaskInstance> out;
  for (int i = 0; i < n; ++i) {
    GraphState g = fixture_graph("g" + std::to_string(i), i);
    out.push_back(gsub::make_generation_instance(
        "text", "doc-" + std::to_string(i), "Alpha rests beside beta.", g,
        SchemaRealization::unified_text));
  }
  return out;
}

std::vector<TaskInstance> scene_corpus(int n) {
  std::vector<TaskInstance> out;
  for (int i = 0; i < n; ++i) {
    GraphState g = fixture_graph("h" + std::to_string(i), 10 + i);
    out.push_back(gsub::make_generation_instance(
        "image", "img-" + std::to_string(i), "", g,
        SchemaRealization::unified_text));
  }
  return out;
}

std::vector<TaskInstance> molecule_corpus(int n) {
  std::vector<TaskInstance> out;
  for (int i = 0; i < n; ++i) {
    GraphState g = fixture_graph("m" + std::to_string(i), 20 + i);
    out.push_back(gsub::make_description_instance(
        g, "CO", "A small test molecule.", SchemaRealization::unified_text));
  }
  return out;
}

struct Fixture {
  std::vector<TaskCatalogEntry> catalog;
  std::vector<std::vector<TaskInstance>> base;
};

Fixture small_fixture() {
  Fixture f;
  f.catalog = {gsub::catalog_entry(TaskKind::ere, "corpus/articles"),
               gsub::catalog_entry(TaskKind::sgg, "corpus/scenes"),
               gsub::catalog_entry(TaskKind::mgd, "corpus/molecules")};
  f.base = {text_corpus(6), scene_corpus(3), molecule_corpus(3)};
  return f;
}

std::string dump(const TaskInstance& t) {
  return gsub::task_instance_to_json(t).dump();
}

std::map<std::string, std::size_t> stream_index(
    const std::vector<TaskInstance>& stream) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    out[stream[i].instance_id] = i;
  }
  return out;
}

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const gsub::Error& e) {
    return e.code();
  }
  return "";
}

std::string violations_of(const gsub::ScheduleCheck& check) {
  std::string out;
  for (const auto& v : check.violations) {
    out += v.rule + ": " + v.detail + "\n";
  }
  return out;
}

std::set<std::string> rules_of(const gsub::ScheduleCheck& check) {
  std::set<std::string> out;
  for (const auto& v : check.violations) out.insert(v.rule);
  return out;
}

}  // namespace

TEST_CASE("paradigm labels and predicates") {
  CHECK(std::string(gsub::to_string(Paradigm::nst)) == "NST");
  CHECK(std::string(gsub::to_string(Paradigm::ust)) == "UST");
  CHECK(std::string(gsub::to_string(Paradigm::nmt)) == "NMT");
  CHECK(std::string(gsub::to_string(Paradigm::umt)) == "UMT");
  CHECK(std::string(gsub::to_string(Paradigm::nmt_i)) == "NMT-I");
  CHECK(std::string(gsub::to_string(Paradigm::g_sub)) == "G-Sub");
  for (Paradigm p : {Paradigm::nst, Paradigm::ust, Paradigm::nmt, Paradigm::umt,
                     Paradigm::nmt_i, Paradigm::g_sub}) {
    auto back = gsub::paradigm_from_string(gsub::to_string(p));
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  CHECK(gsub::paradigm_from_string("g-sub") == Paradigm::g_sub);
  CHECK(gsub::paradigm_from_string("nmt-i") == Paradigm::nmt_i);
  CHECK(!gsub::paradigm_from_string("gsb").has_value());

  CHECK(!gsub::paradigm_is_unified(Paradigm::nst));
  CHECK(gsub::paradigm_is_unified(Paradigm::ust));
  CHECK(!gsub::paradigm_is_unified(Paradigm::nmt));
  CHECK(gsub::paradigm_is_unified(Paradigm::umt));
  CHECK(!gsub::paradigm_is_unified(Paradigm::nmt_i));
  CHECK(gsub::paradigm_is_unified(Paradigm::g_sub));

  CHECK(!gsub::paradigm_interleaves(Paradigm::nst));
  CHECK(!gsub::paradigm_interleaves(Paradigm::umt));
  CHECK(gsub::paradigm_interleaves(Paradigm::nmt_i));
  CHECK(gsub::paradigm_interleaves(Paradigm::g_sub));

  CHECK(!gsub::paradigm_is_single_stream(Paradigm::nst));
  CHECK(!gsub::paradigm_is_single_stream(Paradigm::ust));
  CHECK(gsub::paradigm_is_single_stream(Paradigm::nmt));
  CHECK(gsub::paradigm_is_single_stream(Paradigm::umt));
  CHECK(gsub::paradigm_is_single_stream(Paradigm::nmt_i));
  CHECK(gsub::paradigm_is_single_stream(Paradigm::g_sub));

  CHECK(gsub::default_native_realization(TaskKind::ere) ==
        SchemaRealization::natural_language);
  CHECK(gsub::default_native_realization(TaskKind::sgg) ==
        SchemaRealization::xml_style);
  CHECK(gsub::default_native_realization(TaskKind::mgd) ==
        SchemaRealization::unified_text);
  CHECK(gsub::default_native_realization(TaskKind::gar) ==
        SchemaRealization::unified_text);

  TaskCatalogEntry e = gsub::catalog_entry(TaskKind::sgg, "corpus/scenes");
  CHECK(e.task == TaskKind::sgg);
  CHECK(e.role == TaskRole::generate);
  CHECK(e.corpus_ref == "corpus/scenes");
  CHECK(e.native_realization == SchemaRealization::xml_style);

  CHECK(std::string(gsub::to_string(gsub::SchemaMode::native)) == "native");
  CHECK(gsub::schema_mode_from_string("unified") ==
        gsub::SchemaMode::unified);
  CHECK(!gsub::schema_mode_from_string("both").has_value());
}

TEST_CASE("single task paradigms keep one stream per domain") {
  Fixture f = small_fixture();
  std::map<std::string, const TaskInstance*> base_by_id;
  for (const auto& lst : f.base) {
    for (const auto& t : lst) base_by_id[t.instance_id] = &t;
  }

  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::nst;
  cfg.seed = 5;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(s.streams.size() == 3);
  CHECK(s.trajectory_links.empty());
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& stream = s.streams[i];
    REQUIRE(stream.size() == f.base[i].size());
    std::set<std::string> ids;
    for (const TaskInstance& inst : stream) {
      CHECK(inst.task == f.catalog[i].task);
      CHECK(inst.realization == f.catalog[i].native_realization);
      ids.insert(inst.instance_id);
      const TaskInstance& orig = *base_by_id.at(inst.instance_id);
      CHECK(gsub::structural_equal(gsub::embedded_graph(inst),
                                   gsub::embedded_graph(orig)));
    }
    std::set<std::string> want;
    for (const auto& t : f.base[i]) want.insert(t.instance_id);
    CHECK(ids == want);
  }
  CHECK(s.streams[0][0].realization == SchemaRealization::natural_language);
  CHECK(s.streams[0][0].input_text !=
        base_by_id.at(s.streams[0][0].instance_id)->input_text);

  gsub::ScheduleCheck check = gsub::validate_schedule(s);
  INFO(violations_of(check));
  CHECK(check.ok());
  gsub::ScheduleStats st = gsub::interleave_stats(s);
  CHECK(st.total == 12);
  CHECK(st.interleaved == 0);
  CHECK(st.interleaved_fraction == 0.0);
  CHECK(st.trajectory_lengths.empty());
  CHECK(st.per_task.at("ere") == 6);
  CHECK(st.per_task.at("sgg") == 3);
  CHECK(st.per_task.at("mgd") == 3);
  CHECK(st.per_role.at("generate") == 9);
  CHECK(st.per_role.at("understand") == 3);

  cfg.paradigm = Paradigm::ust;
  TrainingSchedule u = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(u.streams.size() == 3);
  for (const auto& stream : u.streams) {
    for (const TaskInstance& inst : stream) {
      CHECK(inst.realization == SchemaRealization::unified_text);
      CHECK(inst.input_text == base_by_id.at(inst.instance_id)->input_text);
    }
  }
  CHECK(gsub::validate_schedule(u).ok());
}

TEST_CASE("mixed paradigms build one seeded stream") {
  Fixture f = small_fixture();

  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::umt;
  cfg.seed = 9;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(s.streams.size() == 1);
  REQUIRE(s.streams[0].size() == 12);
  CHECK(s.trajectory_links.empty());
  std::set<std::string> ids;
  for (const TaskInstance& inst : s.streams[0]) {
    CHECK(inst.realization == SchemaRealization::unified_text);
    ids.insert(inst.instance_id);
  }
  CHECK(ids.size() == 12);
  gsub::ScheduleCheck check = gsub::validate_schedule(s);
  INFO(violations_of(check));
  CHECK(check.ok());

  TrainingSchedule again = gsub::build_schedule(f.catalog, f.base, cfg);
  CHECK(gsub::schedule_to_text(again) == gsub::schedule_to_text(s));

  ParadigmConfig other = cfg;
  other.seed = 10;
  TrainingSchedule moved = gsub::build_schedule(f.catalog, f.base, other);
  auto order = [](const TrainingSchedule& sched) {
    std::vector<std::string> out;
    for (const TaskInstance& inst : sched.streams[0]) {
      out.push_back(inst.instance_id);
    }
    return out;
  };
  CHECK(order(moved) != order(s));

  cfg.paradigm = Paradigm::nmt;
  TrainingSchedule n = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(n.streams.size() == 1);
  for (const TaskInstance& inst : n.streams[0]) {
    CHECK(inst.realization == gsub::default_native_realization(inst.task));
  }
  CHECK(gsub::validate_schedule(n).ok());
}

TEST_CASE("ratio zero g-sub matches umt byte for byte") {
  Fixture f = small_fixture();
  ParadigmConfig a;
  a.paradigm = Paradigm::umt;
  a.seed = 21;
  ParadigmConfig b;
  b.paradigm = Paradigm::g_sub;
  b.interleave_ratio = 0.0;
  b.seed = 21;
  TrainingSchedule su = gsub::build_schedule(f.catalog, f.base, a);
  TrainingSchedule sg = gsub::build_schedule(f.catalog, f.base, b);
  REQUIRE(su.streams.size() == 1);
  REQUIRE(sg.streams.size() == 1);
  REQUIRE(su.streams[0].size() == sg.streams[0].size());
  for (std::size_t i = 0; i < su.streams[0].size(); ++i) {
    CHECK(dump(su.streams[0][i]) == dump(sg.streams[0][i]));
  }
  CHECK(sg.trajectory_links.empty());
}

TEST_CASE("g-sub forges interleaves at the requested ratio") {
  Fixture f = small_fixture();
  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 0.5;
  cfg.seed = 11;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(s.streams.size() == 1);
  CHECK(s.streams[0].size() == 18);
  REQUIRE(s.trajectory_links.size() == 6);

  gsub::ScheduleCheck check = gsub::validate_schedule(s);
  INFO(violations_of(check));
  REQUIRE(check.ok());

  auto pos = stream_index(s.streams[0]);
  std::map<std::string, int> forged;
  for (const auto& link : s.trajectory_links) {
    std::size_t pi = pos.at(link.producer);
    std::size_t ci = pos.at(link.consumer);
    CHECK(ci == pi + 1);
    const TaskInstance& cons = s.streams[0][ci];
    const TaskInstance& prod = s.streams[0][pi];
    ++forged[gsub::to_string(cons.task)];
    CHECK(cons.role == TaskRole::understand);
    CHECK(cons.realization == SchemaRealization::unified_text);
    CHECK(cons.provenance.trajectory_step == 1);
    CHECK(cons.provenance.source_graph_id == prod.provenance.source_graph_id);
  }
  CHECK(forged["gar"] == 3);
  CHECK(forged["cc"] == 2);
  CHECK(forged["sr"] == 1);

  gsub::ScheduleStats st = gsub::interleave_stats(s);
  CHECK(st.total == 18);
  CHECK(st.interleaved == 6);
  CHECK(st.interleaved_fraction == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(st.trajectory_lengths == std::map<int, std::size_t>{{1, 6}});
  nlohmann::ordered_json sj = gsub::stats_to_json(st);
  CHECK(sj["total"] == 18);
  CHECK(sj["per_task"]["gar"] == 3);
  CHECK(sj["interleaved"] == 6);
  CHECK(sj["trajectory_lengths"]["1"] == 6);

  TrainingSchedule again = gsub::build_schedule(f.catalog, f.base, cfg);
  CHECK(gsub::schedule_to_text(again) == gsub::schedule_to_text(s));
}

TEST_CASE("nmt-i interleaves native realizations") {
  Fixture f = small_fixture();
  TaskCatalogEntry gar_entry =
      gsub::catalog_entry(TaskKind::gar, "corpus/reasoning");
  gar_entry.native_realization = SchemaRealization::canonical_json;
  f.catalog.push_back(gar_entry);
  f.base.push_back({});

  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::nmt_i;
  cfg.interleave_ratio = 0.5;
  cfg.seed = 3;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(s.streams.size() == 1);
  CHECK(s.streams[0].size() == 18);
  CHECK(s.trajectory_links.size() == 6);
  gsub::ScheduleCheck check = gsub::validate_schedule(s);
  INFO(violations_of(check));
  CHECK(check.ok());

  auto native_of = [](TaskKind k) {
    switch (k) {
      case TaskKind::ere:
        return SchemaRealization::natural_language;
      case TaskKind::sgg:
        return SchemaRealization::xml_style;
      case TaskKind::gar:
        return SchemaRealization::canonical_json;
      default:
        return SchemaRealization::unified_text;
    }
  };
  std::map<std::string, int> forged;
  std::set<std::string> consumers;
  for (const auto& link : s.trajectory_links) consumers.insert(link.consumer);
  bool saw_gar = false;
  for (const TaskInstance& inst : s.streams[0]) {
    CHECK(inst.realization == native_of(inst.task));
    if (consumers.count(inst.instance_id)) {
      ++forged[gsub::to_string(inst.task)];
      saw_gar = saw_gar || inst.task == TaskKind::gar;
    }
  }
  CHECK(saw_gar);
  CHECK(forged["gar"] == 3);
  CHECK(forged["cc"] == 2);
  CHECK(forged["sr"] == 1);
}

TEST_CASE("interleave counts are exact for every seed and ratio") {
  Fixture f = small_fixture();
  const std::pair<double, std::size_t> table[] = {
      {0.0, 0}, {0.25, 3}, {0.5, 6}, {1.0, 12}};
  for (const auto& [ratio, want] : table) {
    for (std::uint64_t seed : {1, 2, 3}) {
      ParadigmConfig cfg;
      cfg.paradigm = Paradigm::g_sub;
      cfg.interleave_ratio = ratio;
      cfg.seed = seed;
      TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
      CHECK(s.trajectory_links.size() == want);
      CHECK(s.streams[0].size() == 12 + want);
      gsub::ScheduleCheck check = gsub::validate_schedule(s);
      INFO("ratio ", ratio, " seed ", seed, "\n", violations_of(check));
      CHECK(check.ok());
    }
  }

  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 1.0;
  cfg.seed = 1;
  gsub::ScheduleStats st =
      gsub::interleave_stats(gsub::build_schedule(f.catalog, f.base, cfg));
  CHECK(st.total == 24);
  CHECK(st.interleaved == 12);
  CHECK(st.interleaved_fraction == 0.5);
  CHECK(st.trajectory_lengths ==
        std::map<int, std::size_t>{{1, 6}, {2, 3}});
}

TEST_CASE("chain depth groups consumers onto shared producers") {
  Fixture f = small_fixture();
  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 1.0;
  cfg.chain_depth = 2;
  cfg.seed = 13;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(s.trajectory_links.size() == 12);
  gsub::ScheduleCheck check = gsub::validate_schedule(s);
  INFO(violations_of(check));
  REQUIRE(check.ok());

  gsub::ScheduleStats st = gsub::interleave_stats(s);
  CHECK(st.trajectory_lengths == std::map<int, std::size_t>{{2, 6}});

  auto pos = stream_index(s.streams[0]);
  std::map<std::string, std::vector<std::string>> by_producer;
  for (const auto& link : s.trajectory_links) {
    by_producer[link.producer].push_back(link.consumer);
  }
  CHECK(by_producer.size() == 6);
  for (const auto& [producer, linked] : by_producer) {
    REQUIRE(linked.size() == 2);
    std::size_t pi = pos.at(producer);
    CHECK(pos.at(linked[0]) == pi + 1);
    CHECK(pos.at(linked[1]) == pi + 2);
    const TaskInstance& first = s.streams[0][pi + 1];
    const TaskInstance& second = s.streams[0][pi + 2];
    CHECK(first.provenance.trajectory_step == 1);
    CHECK(second.provenance.trajectory_step == 2);
  }
}

TEST_CASE("random offset mode scatters consumers but stays valid") {
  Fixture f = small_fixture();
  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 0.5;
  cfg.random_offset = true;
  cfg.seed = 4;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(s.streams.size() == 1);
  CHECK(s.streams[0].size() == 18);
  CHECK(s.trajectory_links.size() == 6);
  gsub::ScheduleCheck check = gsub::validate_schedule(s);
  INFO(violations_of(check));
  CHECK(check.ok());

  auto pos = stream_index(s.streams[0]);
  bool scattered = false;
  for (const auto& link : s.trajectory_links) {
    if (pos.at(link.consumer) > pos.at(link.producer) + 1) scattered = true;
  }
  CHECK(scattered);

  TrainingSchedule again = gsub::build_schedule(f.catalog, f.base, cfg);
  CHECK(gsub::schedule_to_text(again) == gsub::schedule_to_text(s));
}

TEST_CASE("schedule validation flags tampering") {
  Fixture f = small_fixture();
  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 0.5;
  cfg.seed = 11;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  REQUIRE(gsub::validate_schedule(s).ok());
  auto pos = stream_index(s.streams[0]);
  const gsub::TrajectoryLink& link = s.trajectory_links.front();

  {
    TrainingSchedule t = s;
    std::swap(t.streams[0][pos.at(link.producer)],
              t.streams[0][pos.at(link.consumer)]);
    CHECK(rules_of(gsub::validate_schedule(t)).count("link order") == 1);
  }
  {
    TrainingSchedule t = s;
    t.streams[0][pos.at(link.consumer)].provenance.source_graph_id = "z9";
    CHECK(rules_of(gsub::validate_schedule(t)).count("provenance mismatch") ==
          1);
  }
  {
    // Swapping the embedded text of two consumers leaves ids and provenance
    // intact but the graphs no longer match their producers.
    std::vector<std::size_t> cc_at;
    for (const auto& l : s.trajectory_links) {
      std::size_t i = pos.at(l.consumer);
      if (s.streams[0][i].task == TaskKind::cc) cc_at.push_back(i);
    }
    REQUIRE(cc_at.size() == 2);
    TrainingSchedule t = s;
    std::swap(t.streams[0][cc_at[0]].input_text,
              t.streams[0][cc_at[1]].input_text);
    CHECK(rules_of(gsub::validate_schedule(t)).count("provenance mismatch") ==
          1);
  }
  {
    TrainingSchedule t = s;
    t.streams[0].push_back(s.streams[0].front());
    CHECK(rules_of(gsub::validate_schedule(t)).count("duplicate id") == 1);
  }
  {
    TrainingSchedule t = s;
    t.streams[0][0].role = t.streams[0][0].role == TaskRole::generate
                               ? TaskRole::understand
                               : TaskRole::generate;
    CHECK(rules_of(gsub::validate_schedule(t)).count("role mismatch") == 1);
  }
  {
    TrainingSchedule t = s;
    t.streams[0][0].realization = SchemaRealization::xml_style;
    CHECK(rules_of(gsub::validate_schedule(t)).count("realization") == 1);
  }
  {
    TrainingSchedule t = s;
    t.trajectory_links.push_back({"ghost-1", "ghost-2"});
    CHECK(rules_of(gsub::validate_schedule(t)).count("unknown id") == 1);
  }
  {
    // A link whose producer is an understand-role instance.
    std::size_t mgd_at = 0;
    bool found = false;
    for (std::size_t i = 0; i < s.streams[0].size() && !found; ++i) {
      if (s.streams[0][i].task == TaskKind::mgd &&
          i < pos.at(link.consumer)) {
        mgd_at = i;
        found = true;
      }
    }
    if (found) {
      TrainingSchedule t = s;
      t.trajectory_links.front().producer =
          s.streams[0][mgd_at].instance_id;
      CHECK(rules_of(gsub::validate_schedule(t))
                .count("provenance mismatch") == 1);
    }
  }
  {
    TrainingSchedule t = s;
    t.streams.push_back({});
    CHECK(rules_of(gsub::validate_schedule(t)).count("stream shape") == 1);
  }
  {
    ParadigmConfig ncfg;
    ncfg.paradigm = Paradigm::nst;
    ncfg.seed = 2;
    TrainingSchedule t = gsub::build_schedule(f.catalog, f.base, ncfg);
    t.trajectory_links.push_back({t.streams[0][0].instance_id,
                                  t.streams[0][1].instance_id});
    CHECK(rules_of(gsub::validate_schedule(t)).count("stream shape") == 1);
  }
}

TEST_CASE("interleave stats rejects broken schedules") {
  Fixture f = small_fixture();
  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 0.5;
  cfg.seed = 11;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  auto pos = stream_index(s.streams[0]);
  const gsub::TrajectoryLink& link = s.trajectory_links.front();
  std::swap(s.streams[0][pos.at(link.producer)],
            s.streams[0][pos.at(link.consumer)]);
  CHECK(code_of([&] { gsub::interleave_stats(s); }) == "invalid-schedule");
}

TEST_CASE("schedule configuration is checked up front") {
  Fixture f = small_fixture();
  ParadigmConfig umt;
  umt.paradigm = Paradigm::umt;
  ParadigmConfig gs;
  gs.paradigm = Paradigm::g_sub;
  gs.interleave_ratio = 0.5;

  CHECK(code_of([&] {
          gsub::build_schedule(f.catalog, {f.base[0]}, umt);
        }) == "invalid-config");
  {
    auto catalog = f.catalog;
    auto base = f.base;
    catalog.push_back(gsub::catalog_entry(TaskKind::ere, "corpus/again"));
    base.push_back({});
    CHECK(code_of([&] { gsub::build_schedule(catalog, base, umt); }) ==
          "invalid-config");
  }
  {
    auto catalog = f.catalog;
    catalog[0].role = TaskRole::understand;
    CHECK(code_of([&] { gsub::build_schedule(catalog, f.base, umt); }) ==
          "invalid-config");
  }
  {
    auto base = f.base;
    base[0].push_back(f.base[2][0]);
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, base, umt); }) ==
          "invalid-config");
  }
  for (double ratio : {-0.1, 1.5}) {
    ParadigmConfig bad = gs;
    bad.interleave_ratio = ratio;
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, f.base, bad); }) ==
          "invalid-config");
  }
  for (Paradigm p : {Paradigm::nst, Paradigm::ust, Paradigm::nmt,
                     Paradigm::umt}) {
    ParadigmConfig bad;
    bad.paradigm = p;
    bad.interleave_ratio = 0.5;
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, f.base, bad); }) ==
          "invalid-config");
  }
  {
    ParadigmConfig bad = gs;
    bad.interleave_mix = {0.5, 0.5, 0.5};
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, f.base, bad); }) ==
          "invalid-config");
  }
  {
    ParadigmConfig bad = gs;
    bad.interleave_mix = {-0.2, 0.6, 0.6};
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, f.base, bad); }) ==
          "invalid-config");
  }
  {
    ParadigmConfig bad = gs;
    bad.chain_depth = 0;
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, f.base, bad); }) ==
          "invalid-config");
  }
  {
    ParadigmConfig bad = gs;
    bad.positive_rate = 2.0;
    CHECK(code_of([&] { gsub::build_schedule(f.catalog, f.base, bad); }) ==
          "invalid-config");
  }
  CHECK(code_of([&] { gsub::build_schedule({}, {}, umt); }) == "empty-corpus");
  {
    std::vector<std::vector<TaskInstance>> empties(f.catalog.size());
    CHECK(code_of([&] {
            gsub::build_schedule(f.catalog, empties, umt);
          }) == "empty-corpus");
  }
  {
    std::vector<TaskCatalogEntry> catalog = {
        gsub::catalog_entry(TaskKind::mgd, "corpus/molecules")};
    std::vector<std::vector<TaskInstance>> base = {molecule_corpus(3)};
    ParadigmConfig cfg = gs;
    CHECK(code_of([&] { gsub::build_schedule(catalog, base, cfg); }) ==
          "no-generation-source");
  }
}

TEST_CASE("paradigm config json round trip") {
  ParadigmConfig c;
  c.paradigm = Paradigm::g_sub;
  c.interleave_ratio = 0.25;
  c.interleave_mix = {0.6, 0.2, 0.2};
  c.seed = 77;
  c.random_offset = true;
  c.chain_depth = 2;
  c.positive_rate = 0.75;

  nlohmann::ordered_json j = gsub::config_to_json(c);
  CHECK(j["paradigm"] == "G-Sub");
  CHECK(j["interleave_mix"]["gar"] == 0.6);
  ParadigmConfig back = gsub::config_from_json(j);
  CHECK(gsub::config_to_json(back).dump() == j.dump());

  {
    nlohmann::ordered_json bad = j;
    bad["extra"] = 1;
    CHECK(code_of([&] { gsub::config_from_json(bad); }) == "syntax-error");
  }
  {
    nlohmann::ordered_json bad = j;
    bad.erase("seed");
    CHECK(code_of([&] { gsub::config_from_json(bad); }) == "syntax-error");
  }
  {
    nlohmann::ordered_json bad = j;
    bad["paradigm"] = "mystery";
    CHECK(code_of([&] { gsub::config_from_json(bad); }) == "syntax-error");
  }
  {
    nlohmann::ordered_json bad = j;
    bad["seed"] = -1;
    CHECK(code_of([&] { gsub::config_from_json(bad); }) == "syntax-error");
  }
}

TEST_CASE("schedule text round trip") {
  Fixture f = small_fixture();
  ParadigmConfig cfg;
  cfg.paradigm = Paradigm::g_sub;
  cfg.interleave_ratio = 0.5;
  cfg.seed = 11;
  TrainingSchedule s = gsub::build_schedule(f.catalog, f.base, cfg);
  std::string text = gsub::schedule_to_text(s);
  TrainingSchedule back = gsub::schedule_from_text(text);
  CHECK(gsub::schedule_to_text(back) == text);
  CHECK(back.config.paradigm == Paradigm::g_sub);
  CHECK(back.config.seed == 11);
  CHECK(back.streams.size() == s.streams.size());
  CHECK(back.trajectory_links.size() == s.trajectory_links.size());
  CHECK(gsub::validate_schedule(back).ok());

  ParadigmConfig ncfg;
  ncfg.paradigm = Paradigm::nst;
  ncfg.seed = 5;
  TrainingSchedule n = gsub::build_schedule(f.catalog, f.base, ncfg);
  std::string ntext = gsub::schedule_to_text(n);
  CHECK(gsub::schedule_to_text(gsub::schedule_from_text(ntext)) == ntext);

  CHECK(code_of([] { gsub::schedule_from_text(""); }) == "syntax-error");
  CHECK(code_of([&] {
          gsub::schedule_from_text(gsub::config_to_json(cfg).dump() + "\n");
        }) == "syntax-error");
  std::string truncated =
      text.substr(0, text.find_last_of('\n', text.size() - 2) + 1);
  CHECK(code_of([&] { gsub::schedule_from_text(truncated); }) ==
        "syntax-error");
  CHECK(code_of([&] { gsub::schedule_from_text(text + "{}\n"); }) ==
        "syntax-error");
}

TEST_CASE("re-realization rewrites instances in place") {
  GraphState g = fixture_graph("rt", 42);
  const SchemaRealization U = SchemaRealization::unified_text;

  TaskInstance ere =
      gsub::make_generation_instance("text", "doc-rt", "Alpha sits near beta.",
                                     g, U);
  TaskInstance sgg = gsub::make_generation_instance("image", "img-rt", "", g, U);
  TaskInstance mgd =
      gsub::make_description_instance(g, "CO", "Carbon bound to oxygen.", U);
  TaskInstance mgd_plain =
      gsub::make_description_instance(g, std::nullopt, "Bare molecule.", U);
  TaskInstance gar =
      gsub::make_gar_instance(g, GarKind::connectivity, 5, U);
  TaskInstance ccp = gsub::make_consistency_instance("src-1", g, true, 3, U);
  TaskInstance ccn = gsub::make_consistency_instance("src-1", g, false, 3, U);
  TaskInstance srp = gsub::make_subgraph_instance(g, 3, true, 2, U);
  TaskInstance srn = gsub::make_subgraph_instance(g, 3, false, 2, U);

  GraphState ccn_embedded = gsub::embedded_graph(ccn);
  const TaskInstance* all[] = {&ere, &sgg,  &mgd, &mgd_plain, &gar,
                               &ccp, &ccn, &srp, &srn};
  for (const TaskInstance* base : all) {
    for (SchemaRealization r : kAll) {
      TaskInstance moved = gsub::re_realize(*base, r);
      CHECK(moved.instance_id == base->instance_id);
      CHECK(moved.task == base->task);
      CHECK(moved.realization == r);
      CHECK(moved.provenance.source_graph_id ==
            base->provenance.source_graph_id);
      if (base == &ccn) {
        CHECK(gsub::structural_equal(gsub::embedded_graph(moved),
                                     ccn_embedded));
        REQUIRE(moved.provenance.perturbation_applied.has_value());
        CHECK(gsub::perturbation_to_json(*moved.provenance
                                              .perturbation_applied)
                  .dump() ==
              gsub::perturbation_to_json(*base->provenance
                                              .perturbation_applied)
                  .dump());
      } else {
        CHECK(gsub::structural_equal(gsub::embedded_graph(moved), g));
      }
      if (base->role == TaskRole::generate) {
        CHECK(gsub::structural_equal(
            gsub::parse(moved.gold.get<std::string>(), r), g));
      } else {
        CHECK(moved.gold.dump() == base->gold.dump());
      }
      TaskInstance back = gsub::re_realize(moved, U);
      CHECK(dump(back) == dump(*base));
      if (r == U) CHECK(dump(moved) == dump(*base));
    }
  }

  TaskInstance xml_sgg = gsub::re_realize(sgg, SchemaRealization::xml_style);
  CHECK(xml_sgg.input_text ==
        gsub::question_template(TaskKind::sgg, SchemaRealization::xml_style));
  TaskInstance xml_mgd = gsub::re_realize(mgd, SchemaRealization::xml_style);
  CHECK(xml_mgd.input_text.find("\n\nSMILES: CO\n\n") != std::string::npos);
  TaskInstance json_gar =
      gsub::re_realize(gar, SchemaRealization::canonical_json);
  CHECK(json_gar.gold.dump() == gar.gold.dump());

  TaskInstance bad;
  bad.instance_id = "x";
  bad.task = TaskKind::ere;
  bad.role = TaskRole::generate;
  bad.realization = U;
  bad.input_text = "no template here";
  bad.gold = 7;
  bad.provenance.source_graph_id = "rt";
  CHECK(code_of([&] { gsub::embedded_graph(bad); }) == "malformed-instance");
  CHECK(code_of([&] {
          gsub::re_realize(bad, SchemaRealization::xml_style);
        }) == "malformed-instance");

  TaskInstance bad_cc = ccp;
  bad_cc.input_text = "scrambled";
  CHECK(code_of([&] { gsub::embedded_graph(bad_cc); }) ==
        "malformed-instance");

  TaskInstance bad_gar = gar;
  bad_gar.gold = "oops";
  CHECK(code_of([&] { gsub::embedded_graph(bad_gar); }) ==
        "malformed-instance");
}
