#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gsub/algo.hpp"
#include "gsub/forge.hpp"

namespace gsub {

struct RankedTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  double score = 0.0;
};

struct Prediction {
  std::string instance_id;
  std::string text;
  std::optional<std::vector<RankedTriple>> ranked_triples;
};

// JSONL of {"instance_id","text","ranked_triples"?}; ranked triples are
// [subject, predicate, object, score] arrays. Blank lines are skipped.
// Errors: malformed-prediction-file (carries the line number).
std::vector<Prediction> read_predictions(const std::string& text);
Prediction prediction_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json prediction_to_json(const Prediction& p);

struct NormalizedAnswer {
  enum class State { boolean, number, unreachable, unparseable };
  State state = State::unparseable;
  bool truth = false;
  double value = 0.0;
};

// Boolean kinds take the last whole-word yes/no/true/false in the text;
// numeric kinds the last decimal literal. Shortest-path also accepts the
// word "unreachable" (whichever appears later wins). No match grades as
// incorrect.
NormalizedAnswer normalize_answer(const std::string& text, GarKind kind);

struct KindAccuracy {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t missing = 0;
  std::size_t unparseable = 0;
  double accuracy = 0.0;
};

// Grades the golds whose query kind matches. Missing predictions count as
// incorrect. Weighted shortest-path lengths compare within 1e-6; every other
// numeric answer compares exactly.
KindAccuracy accuracy(const std::vector<Prediction>& preds,
                      const std::vector<TaskInstance>& golds, GarKind kind);

using LabeledTriple = std::array<std::string, 3>;

// Lowercased, trimmed, internal whitespace collapsed to single spaces.
std::string normalize_label(std::string_view s);
LabeledTriple normalize_triple(const LabeledTriple& t);

// Relation triples of g as (subject label, predicate, object label),
// normalized; entities without labels fall back to their ids.
std::set<LabeledTriple> labeled_triples(const GraphState& g);

struct TripleScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Inputs are normalized triples. Empty against empty scores 1, empty against
// nonempty 0. fold_symmetric treats (s,p,o) and (o,p,s) as the same triple.
TripleScore triple_prf(const std::set<LabeledTriple>& pred,
                       const std::set<LabeledTriple>& gold,
                       bool fold_symmetric = false);

// |top-k distinct triples ∩ gold| / |gold| after a stable sort by descending
// score (ties keep input order). Errors: precondition-violation when k < 1
// or gold is empty.
double recall_at_k(const std::vector<RankedTriple>& ranked,
                   const std::set<LabeledTriple>& gold, int k);
// Mean over the instance's predicate classes of the class-restricted recall
// against the same global top-k.
double mean_recall_at_k(const std::vector<RankedTriple>& ranked,
                        const std::set<LabeledTriple>& gold, int k);

struct SggInstance {
  std::vector<RankedTriple> ranked;
  std::set<LabeledTriple> gold;
};

// Mean over instances with nonempty gold; instances with empty gold are
// excluded. Errors: empty-gold-corpus when none remain.
double corpus_recall_at_k(const std::vector<SggInstance>& instances, int k);
double corpus_mean_recall_at_k(const std::vector<SggInstance>& instances,
                               int k);

// Lowercase; maximal alphanumeric runs and single punctuation marks. Bytes
// outside ASCII are treated as word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

// Corpus BLEU-4: modified n-gram counts clipped per reference and summed over
// the corpus, times brevity penalty exp(min(0, 1 - ref_len/cand_len)). Zero
// when any corpus-level precision is zero; smooth=true adds one to every
// numerator and denominator (sentence mode). Candidates and references are
// parallel. Errors: empty-candidate-corpus when there are no instances; a
// corpus whose candidates are all empty scores 0.
double bleu4(const std::vector<std::vector<std::string>>& candidates,
             const std::vector<std::vector<std::string>>& references,
             bool smooth = false);

// LCS F-measure, maximum over references. beta=1 is plain F1; larger beta
// weights recall. Empty candidate or reference contributes 0.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references,
               double beta = 1.0);

struct EvalConfig {
  TaskKind task = TaskKind::gar;
  int k = 50;
  bool smooth_bleu = false;
  double rouge_beta = 1.0;
  bool fold_symmetric = false;
};

struct MetricReport {
  TaskKind task = TaskKind::gar;
  std::map<std::string, KindAccuracy> gar;  // keyed by query kind
  double gar_overall = 0.0;
  double bleu = 0.0;
  double rouge = 0.0;
  double recall_k = 0.0;
  double mean_recall_k = 0.0;
  int k = 50;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold_count = 0;
  std::size_t skipped_gold_count = 0;
  std::size_t prediction_count = 0;
  std::size_t missing_count = 0;
  std::size_t unmatched_count = 0;
  std::size_t unparseable_count = 0;
  std::vector<std::string> missing_ids;    // gold order
  std::vector<std::string> unmatched_ids;  // prediction order, deduplicated
  nlohmann::ordered_json config_echo;
};

// Grades predictions against gold instances of config.task (gar, mgd, sgg,
// or ere; other golds are skipped and counted). Missing predictions grade as
// wrong or empty; ere corpus values are macro-averaged P and R with f1 their
// harmonic mean. Errors: invalid-config, precondition-violation (duplicate
// gold ids); empty-gold-corpus propagates from the sgg metrics.
MetricReport evaluate_run(const std::vector<Prediction>& preds,
                          const std::vector<TaskInstance>& golds,
                          const EvalConfig& config);
nlohmann::ordered_json report_to_json(const MetricReport& r);

}  // namespace gsub
