#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gsub/forge.hpp"
#include "gsub/schema_io.hpp"

namespace gsub {

enum class Paradigm { nst, ust, nmt, umt, nmt_i, g_sub };
enum class SchemaMode { native, unified };

const char* to_string(Paradigm p);
// Case-insensitive, so CLI spellings like "g-sub" work.
std::optional<Paradigm> paradigm_from_string(std::string_view s);
const char* to_string(SchemaMode m);
std::optional<SchemaMode> schema_mode_from_string(std::string_view s);

// NST and NMT keep per-domain legacy formats; everything else trains on
// unified text.
bool paradigm_is_unified(Paradigm p);
bool paradigm_interleaves(Paradigm p);
bool paradigm_is_single_stream(Paradigm p);

// Legacy formats when none are configured: natural language for ere,
// XML for sgg, unified text otherwise.
SchemaRealization default_native_realization(TaskKind k);

struct TaskCatalogEntry {
  TaskKind task = TaskKind::ere;
  TaskRole role = TaskRole::generate;
  SchemaMode schema_mode = SchemaMode::unified;
  std::string corpus_ref;
  SchemaRealization native_realization = SchemaRealization::unified_text;
};

// Entry with the role and native realization derived from the task.
TaskCatalogEntry catalog_entry(TaskKind task, const std::string& corpus_ref);

struct InterleaveMix {
  double gar = 0.5;
  double cc = 0.25;
  double sr = 0.25;
};

struct ParadigmConfig {
  Paradigm paradigm = Paradigm::umt;
  // Interleaved instances per base instance; must be 0 unless the paradigm
  // interleaves.
  double interleave_ratio = 0.0;
  InterleaveMix interleave_mix;
  std::uint64_t seed = 0;
  // Ablations. random_offset scatters consumers uniformly after their
  // producer instead of adjacent to it; chain_depth > 1 groups consecutive
  // consumers onto a shared producer; positive_rate balances cc/sr labels.
  bool random_offset = false;
  int chain_depth = 1;
  double positive_rate = 0.5;
};

struct TrajectoryLink {
  std::string producer;
  std::string consumer;
};

struct TrainingSchedule {
  ParadigmConfig config;
  std::vector<std::vector<TaskInstance>> streams;
  std::vector<TrajectoryLink> trajectory_links;
};

// NST/UST: one seeded-shuffled stream per catalog entry. NMT/UMT: a single
// seeded-shuffled mixture. NMT-I/G-Sub: the mixture plus
// floor(ratio * |base|) instances forged from the gold graphs of generation
// instances, each linked to and placed after its producer. base_instances is
// parallel to catalog; instances are re-realized to the paradigm's schema
// mode. Errors: invalid-config, empty-corpus, no-generation-source.
TrainingSchedule build_schedule(
    const std::vector<TaskCatalogEntry>& catalog,
    const std::vector<std::vector<TaskInstance>>& base_instances,
    const ParadigmConfig& config);

struct ScheduleViolation {
  std::string rule;
  std::string detail;
};

struct ScheduleCheck {
  std::vector<ScheduleViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks stream shape per paradigm, id uniqueness, role/task consistency,
// unified-paradigm realizations, and for every trajectory link: ordering
// ("link order"), matching provenance ids, and that the consumer's embedded
// graph is the producer's gold graph or its recorded perturbation
// ("provenance mismatch").
ScheduleCheck validate_schedule(const TrainingSchedule& s);

struct ScheduleStats {
  std::map<std::string, std::size_t> per_task;
  std::map<std::string, std::size_t> per_role;
  std::size_t total = 0;
  std::size_t interleaved = 0;
  double interleaved_fraction = 0.0;
  // consumers-per-producer -> number of trajectories of that length
  std::map<int, std::size_t> trajectory_lengths;
};

// Errors: invalid-schedule when validate_schedule reports violations.
ScheduleStats interleave_stats(const TrainingSchedule& s);
nlohmann::ordered_json stats_to_json(const ScheduleStats& st);

nlohmann::ordered_json config_to_json(const ParadigmConfig& c);
ParadigmConfig config_from_json(const nlohmann::ordered_json& j);

// Header JSON line (config echo plus stream sizes and link count), one
// instance per line in stream order, then one line per trajectory link.
std::string schedule_to_text(const TrainingSchedule& s);
TrainingSchedule schedule_from_text(const std::string& text);

}  // namespace gsub
