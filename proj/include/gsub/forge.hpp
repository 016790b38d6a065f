#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsub/algo.hpp"
#include "gsub/graph.hpp"
#include "gsub/schema_io.hpp"

namespace gsub {

enum class TaskKind { sgg, ere, mgd, gar, cc, sr };
enum class TaskRole { generate, understand };

const char* to_string(TaskKind k);
std::optional<TaskKind> task_kind_from_string(std::string_view s);
const char* to_string(TaskRole r);
std::optional<TaskRole> task_role_from_string(std::string_view s);

// sgg/ere produce graphs; mgd/gar/cc/sr consume them.
TaskRole role_of(TaskKind k);

enum class PerturbOp { endpoint_rewire, edge_swap, delete_insert };

const char* to_string(PerturbOp op);
std::optional<PerturbOp> perturb_op_from_string(std::string_view s);

struct PerturbationDescriptor {
  PerturbOp op = PerturbOp::endpoint_rewire;
  // (before, after) relation triples; before exists in the source graph,
  // after in the perturbed one.
  std::vector<std::pair<Triple, Triple>> touched;
  std::uint64_t seed = 0;
};

struct PerturbResult {
  GraphState graph;
  PerturbationDescriptor descriptor;
};

// Structural negative-sampling. The entity list is untouched; endpoint-rewire
// and edge-swap keep the predicate multiset; delete-insert reuses an existing
// predicate on a fresh entity pair. Deterministic given (g, op, seed): a
// bounded random search (64 attempts) runs first, then an exhaustive ordered
// scan, so no-valid-perturbation is raised only when no legal output exists
// (endpoint-rewire with fewer than 3 entities always exhausts).
// Errors: precondition-violation (invalid graph, no relations);
// no-valid-perturbation.
PerturbResult perturb(const GraphState& g, PerturbOp op, std::uint64_t seed);

struct Provenance {
  std::string source_graph_id;
  std::optional<int> trajectory_step;
  std::optional<PerturbationDescriptor> perturbation_applied;
};

struct TaskInstance {
  std::string instance_id;
  TaskKind task = TaskKind::sgg;
  TaskRole role = TaskRole::generate;
  SchemaRealization realization = SchemaRealization::unified_text;
  std::string input_text;
  std::vector<std::string> input_refs;
  nlohmann::ordered_json gold;
  Provenance provenance;
};

// Fixed question wording for a task kind under a realization; gar templates
// carry {source}/{target} placeholders filled at forge time.
extern const char* const kTemplateVersion;
const std::string& question_template(TaskKind k, SchemaRealization r);

// modality "text" -> ere (source_payload is the passage to extract from),
// "image" -> sgg (source_payload is an opaque image reference). gold is the
// serialized graph. Errors: unknown-modality, invalid-graph.
TaskInstance make_generation_instance(const std::string& modality,
                                      const std::string& source_ref,
                                      const std::string& source_payload,
                                      const GraphState& g,
                                      SchemaRealization realization);

// Molecule description task: the graph (plus optional SMILES line) is the
// input, the free-text description the gold. Errors: empty-description.
TaskInstance make_description_instance(const GraphState& g,
                                       const std::optional<std::string>& smiles,
                                       const std::string& description,
                                       SchemaRealization realization);

// Samples query endpoints from the seed, answers via the exact solvers, and
// embeds {"query":…,"answer":…} as gold. Shortest-path runs weighted iff
// every relation on the undirected view carries a usable weight.
// Errors: unsampleable-query; oracle errors propagate.
TaskInstance make_gar_instance(const GraphState& g, GarKind kind,
                               std::uint64_t seed,
                               SchemaRealization realization);

// label=true pairs the source with the faithful graph (gold "consistent");
// label=false embeds a perturbed graph (gold "inconsistent") and records the
// descriptor. The perturbation op is seed-chosen with deterministic fallback
// across the other ops. Errors: no-valid-perturbation.
TaskInstance make_consistency_instance(const std::string& source_ref,
                                       const GraphState& g, bool label,
                                       std::uint64_t seed,
                                       SchemaRealization realization);

// Induced connected subgraph with exactly k of g's entities, deterministic
// given seed. Errors: precondition-violation (k < 2 or invalid graph);
// no-component-large-enough.
GraphState sample_connected_subgraph(const GraphState& g, int k,
                                     std::uint64_t seed);

// True iff s's (id, label) entity set and relation triple set are subsets of
// g's. Errors: invalid-graph.
bool contains_subgraph(const GraphState& g, const GraphState& s);

// positive=true embeds a sampled subgraph (gold "present"); positive=false
// perturbs the sample until containment fails, up to 64 rounds (gold
// "absent"). Errors: sampling errors propagate; no-valid-negative.
TaskInstance make_subgraph_instance(const GraphState& g, int k, bool positive,
                                    std::uint64_t seed,
                                    SchemaRealization realization);

// Rewrites an instance produced by the builders above into another
// realization: embedded graph blocks are re-serialized, the question template
// swapped, and generation golds re-encoded. Ids, gold labels, and provenance
// stay put. Errors: malformed-instance when input_text does not match the
// builder anatomy.
TaskInstance re_realize(const TaskInstance& t, SchemaRealization target);

// The graph a consumer-task instance embeds (gar/mgd/cc: the graph block of
// input_text; sr: the host graph; generation tasks: the parsed gold).
// Errors: malformed-instance, plus parse errors.
GraphState embedded_graph(const TaskInstance& t);

// from_json takes ordered_json so a round trip keeps the gold payload's key
// order byte-for-byte.
nlohmann::ordered_json perturbation_to_json(const PerturbationDescriptor& d);
PerturbationDescriptor perturbation_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json task_instance_to_json(const TaskInstance& t);
TaskInstance task_instance_from_json(const nlohmann::ordered_json& j);

}  // namespace gsub
