#include "gsub/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <utility>

#include "gsub/error.hpp"
#include "gsub/schema_io.hpp"

namespace gsub {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

const std::regex& decimal_pattern() {
  static const std::regex re(R"([+-]?[0-9]+(\.[0-9]+)?)");
  return re;
}

const std::regex& boolean_pattern() {
  static const std::regex re(R"(\b(yes|no|true|false)\b)",
                             std::regex_constants::icase);
  return re;
}

const std::regex& unreachable_pattern() {
  static const std::regex re(R"(\bunreachable\b)",
                             std::regex_constants::icase);
  return re;
}

// Position and text of the last match, if any.
std::optional<std::pair<std::size_t, std::string>> last_match(
    const std::string& text, const std::regex& re) {
  std::optional<std::pair<std::size_t, std::string>> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    out = {static_cast<std::size_t>(it->position()), it->str()};
  }
  return out;
}

LabeledTriple fold_triple(const LabeledTriple& t) {
  if (t[2] < t[0]) return {t[2], t[1], t[0]};
  return t;
}

std::set<LabeledTriple> folded(const std::set<LabeledTriple>& in) {
  std::set<LabeledTriple> out;
  for (const LabeledTriple& t : in) out.insert(fold_triple(t));
  return out;
}

// Distinct normalized triples among the k best-scored entries.
std::set<LabeledTriple> top_k_set(std::vector<RankedTriple> ranked, int k) {
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedTriple& a, const RankedTriple& b) {
                     return a.score > b.score;
                   });
  std::set<LabeledTriple> out;
  std::size_t take = std::min<std::size_t>(ranked.size(),
                                           static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < take; ++i) {
    out.insert(
        normalize_triple({ranked[i].subject, ranked[i].predicate,
                          ranked[i].object}));
  }
  return out;
}

std::set<LabeledTriple> normalized(const std::set<LabeledTriple>& in) {
  std::set<LabeledTriple> out;
  for (const LabeledTriple& t : in) out.insert(normalize_triple(t));
  return out;
}

void check_rank_args(const std::set<LabeledTriple>& gold, int k) {
  if (k < 1) {
    throw Error("precondition-violation", "k must be at least 1");
  }
  if (gold.empty()) {
    throw Error("precondition-violation", "empty gold set");
  }
}

void ngram_counts(const std::vector<std::string>& tokens, std::size_t n,
                  std::map<std::string, long long>& out) {
  if (tokens.size() < n) return;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      key += tokens[i + j];
      key += '\x1f';
    }
    ++out[key];
  }
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool gar_prediction_correct(const GarQuery& q, const GarAnswer& want,
                            const NormalizedAnswer& got) {
  switch (q.kind) {
    case GarKind::connectivity:
    case GarKind::cycle:
      return got.state == NormalizedAnswer::State::boolean &&
             want.value.has_value() && got.truth == *want.value;
    case GarKind::shortest_path:
      if (want.unreachable) {
        return got.state == NormalizedAnswer::State::unreachable;
      }
      if (got.state != NormalizedAnswer::State::number ||
          !want.length.has_value()) {
        return false;
      }
      return q.weighted ? std::fabs(got.value - *want.length) <= 1e-6
                        : got.value == *want.length;
    case GarKind::matching:
      return got.state == NormalizedAnswer::State::number &&
             want.size.has_value() &&
             got.value == static_cast<double>(*want.size);
  }
  return false;
}

std::pair<GarQuery, GarAnswer> gar_gold_of(const TaskInstance& g) {
  if (!g.gold.is_object() || !g.gold.contains("query") ||
      !g.gold.contains("answer")) {
    throw Error("malformed-instance",
                g.instance_id + ": gar gold needs query and answer");
  }
  return {gar_query_from_json(g.gold.at("query")),
          gar_answer_from_json(g.gold.at("answer"))};
}

std::string gold_text_of(const TaskInstance& g) {
  if (!g.gold.is_string()) {
    throw Error("malformed-instance",
                g.instance_id + ": gold is not a string");
  }
  return g.gold.get<std::string>();
}

}  // namespace

std::vector<Prediction> read_predictions(const std::string& text) {
  std::vector<Prediction> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = end == std::string::npos
                           ? text.substr(start)
                           : text.substr(start, end - start);
    ++line_no;
    if (start >= text.size() && line.empty()) break;
    if (!line.empty()) {
      nlohmann::ordered_json j;
      try {
        j = nlohmann::ordered_json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error("malformed-prediction-file",
                    "line " + std::to_string(line_no) + ": " + e.what());
      }
      try {
        out.push_back(prediction_from_json(j));
      } catch (const Error& e) {
        std::string reason = e.what();
        const std::string prefix = "malformed-prediction-file: ";
        if (reason.rfind(prefix, 0) == 0) reason = reason.substr(prefix.size());
        throw Error("malformed-prediction-file",
                    "line " + std::to_string(line_no) + ": " + reason);
      }
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

Prediction prediction_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) {
    throw Error("malformed-prediction-file", "expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "instance_id" && key != "text" && key != "ranked_triples") {
      throw Error("malformed-prediction-file", "unexpected key '" + key + "'");
    }
  }
  if (!j.contains("instance_id") || !j["instance_id"].is_string()) {
    throw Error("malformed-prediction-file", "missing string 'instance_id'");
  }
  if (!j.contains("text") || !j["text"].is_string()) {
    throw Error("malformed-prediction-file", "missing string 'text'");
  }
  Prediction p;
  p.instance_id = j["instance_id"].get<std::string>();
  p.text = j["text"].get<std::string>();
  if (j.contains("ranked_triples")) {
    if (!j["ranked_triples"].is_array()) {
      throw Error("malformed-prediction-file",
                  "ranked_triples is not an array");
    }
    std::vector<RankedTriple> list;
    for (const auto& item : j["ranked_triples"]) {
      if (!item.is_array() || item.size() != 4 || !item[0].is_string() ||
          !item[1].is_string() || !item[2].is_string() ||
          !item[3].is_number()) {
        throw Error("malformed-prediction-file",
                    "ranked triple must be [subject, predicate, object, "
                    "score]");
      }
      double score = item[3].get<double>();
      if (!std::isfinite(score)) {
        throw Error("malformed-prediction-file", "score is not finite");
      }
      list.push_back({item[0].get<std::string>(), item[1].get<std::string>(),
                      item[2].get<std::string>(), score});
    }
    p.ranked_triples = std::move(list);
  }
  return p;
}

nlohmann::ordered_json prediction_to_json(const Prediction& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["instance_id"] = p.instance_id;
  j["text"] = p.text;
  if (p.ranked_triples) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const RankedTriple& t : *p.ranked_triples) {
      list.push_back(nlohmann::ordered_json::array(
          {t.subject, t.predicate, t.object, t.score}));
    }
    j["ranked_triples"] = std::move(list);
  }
  return j;
}

NormalizedAnswer normalize_answer(const std::string& text, GarKind kind) {
  NormalizedAnswer out;
  if (kind == GarKind::connectivity || kind == GarKind::cycle) {
    auto hit = last_match(text, boolean_pattern());
    if (!hit) return out;
    std::string word = hit->second;
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) {
                     return static_cast<char>(std::tolower(c));
                   });
    out.state = NormalizedAnswer::State::boolean;
    out.truth = word == "yes" || word == "true";
    return out;
  }
  auto number = last_match(text, decimal_pattern());
  if (kind == GarKind::shortest_path) {
    auto unreachable = last_match(text, unreachable_pattern());
    if (unreachable && (!number || unreachable->first > number->first)) {
      out.state = NormalizedAnswer::State::unreachable;
      return out;
    }
  }
  if (!number) return out;
  out.state = NormalizedAnswer::State::number;
  out.value = std::stod(number->second);
  return out;
}

KindAccuracy accuracy(const std::vector<Prediction>& preds,
                      const std::vector<TaskInstance>& golds, GarKind kind) {
  std::map<std::string, const Prediction*> by_id;
  for (const Prediction& p : preds) by_id[p.instance_id] = &p;

  KindAccuracy out;
  for (const TaskInstance& g : golds) {
    if (g.task != TaskKind::gar) continue;
    auto [query, answer] = gar_gold_of(g);
    if (query.kind != kind) continue;
    ++out.total;
    auto it = by_id.find(g.instance_id);
    if (it == by_id.end()) {
      ++out.missing;
      continue;
    }
    NormalizedAnswer got = normalize_answer(it->second->text, kind);
    if (got.state == NormalizedAnswer::State::unparseable) {
      ++out.unparseable;
      continue;
    }
    if (gar_prediction_correct(query, answer, got)) ++out.correct;
  }
  out.accuracy = out.total == 0 ? 0.0
                                : static_cast<double>(out.correct) /
                                      static_cast<double>(out.total);
  return out;
}

std::string normalize_label(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c) != 0) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

LabeledTriple normalize_triple(const LabeledTriple& t) {
  return {normalize_label(t[0]), normalize_label(t[1]), normalize_label(t[2])};
}

std::set<LabeledTriple> labeled_triples(const GraphState& g) {
  std::map<std::string, std::string> label;
  for (const Entity& e : g.entities) {
    label[e.id] = e.label.value_or(e.id);
  }
  auto of = [&](const std::string& id) {
    auto it = label.find(id);
    return it == label.end() ? id : it->second;
  };
  std::set<LabeledTriple> out;
  for (const Relation& r : g.relations) {
    out.insert(normalize_triple({of(r.subject), r.predicate, of(r.object)}));
  }
  return out;
}

TripleScore triple_prf(const std::set<LabeledTriple>& pred,
                       const std::set<LabeledTriple>& gold,
                       bool fold_symmetric) {
  std::set<LabeledTriple> p = fold_symmetric ? folded(pred) : pred;
  std::set<LabeledTriple> g = fold_symmetric ? folded(gold) : gold;
  std::size_t hit = 0;
  for (const LabeledTriple& t : p) hit += g.count(t);

  TripleScore out;
  out.precision = p.empty()
                      ? (g.empty() ? 1.0 : 0.0)
                      : static_cast<double>(hit) / static_cast<double>(p.size());
  out.recall = g.empty()
                   ? (p.empty() ? 1.0 : 0.0)
                   : static_cast<double>(hit) / static_cast<double>(g.size());
  out.f1 = out.precision + out.recall == 0.0
               ? 0.0
               : 2.0 * out.precision * out.recall /
                     (out.precision + out.recall);
  return out;
}

double recall_at_k(const std::vector<RankedTriple>& ranked,
                   const std::set<LabeledTriple>& gold, int k) {
  check_rank_args(gold, k);
  std::set<LabeledTriple> top = top_k_set(ranked, k);
  std::set<LabeledTriple> want = normalized(gold);
  std::size_t hit = 0;
  for (const LabeledTriple& t : want) hit += top.count(t);
  return static_cast<double>(hit) / static_cast<double>(want.size());
}

double mean_recall_at_k(const std::vector<RankedTriple>& ranked,
                        const std::set<LabeledTriple>& gold, int k) {
  check_rank_args(gold, k);
  std::set<LabeledTriple> top = top_k_set(ranked, k);
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_class;
  for (const LabeledTriple& t : normalized(gold)) {
    auto& [hits, total] = per_class[t[1]];
    ++total;
    hits += top.count(t);
  }
  double sum = 0.0;
  for (const auto& [predicate, counts] : per_class) {
    (void)predicate;
    sum += static_cast<double>(counts.first) /
           static_cast<double>(counts.second);
  }
  return sum / static_cast<double>(per_class.size());
}

double corpus_recall_at_k(const std::vector<SggInstance>& instances, int k) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SggInstance& inst : instances) {
    if (inst.gold.empty()) continue;
    sum += recall_at_k(inst.ranked, inst.gold, k);
    ++n;
  }
  if (n == 0) {
    throw Error("empty-gold-corpus", "no instance has gold triples");
  }
  return sum / static_cast<double>(n);
}

double corpus_mean_recall_at_k(const std::vector<SggInstance>& instances,
                               int k) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SggInstance& inst : instances) {
    if (inst.gold.empty()) continue;
    sum += mean_recall_at_k(inst.ranked, inst.gold, k);
    ++n;
  }
  if (n == 0) {
    throw Error("empty-gold-corpus", "no instance has gold triples");
  }
  return sum / static_cast<double>(n);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string run;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      run += static_cast<char>(std::tolower(c));
      continue;
    }
    if (!run.empty()) {
      out.push_back(std::move(run));
      run.clear();
    }
    if (std::isspace(c) == 0) {
      out.push_back(std::string(1, static_cast<char>(c)));
    }
  }
  if (!run.empty()) out.push_back(std::move(run));
  return out;
}

double bleu4(const std::vector<std::vector<std::string>>& candidates,
             const std::vector<std::vector<std::string>>& references,
             bool smooth) {
  if (candidates.empty()) {
    throw Error("empty-candidate-corpus", "no candidates to grade");
  }
  if (candidates.size() != references.size()) {
    throw Error("precondition-violation",
                "candidate and reference counts differ");
  }
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;
  long long match[4] = {0, 0, 0, 0};
  long long total[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cand = candidates[i];
    const auto& ref = references[i];
    cand_len += cand.size();
    ref_len += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      if (cand.size() < n) continue;
      std::map<std::string, long long> cc, rc;
      ngram_counts(cand, n, cc);
      ngram_counts(ref, n, rc);
      total[n - 1] += static_cast<long long>(cand.size() - n + 1);
      for (const auto& [gram, count] : cc) {
        auto it = rc.find(gram);
        if (it != rc.end()) match[n - 1] += std::min(count, it->second);
      }
    }
  }
  if (cand_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < 4; ++n) {
    long long num = match[n] + (smooth ? 1 : 0);
    long long den = total[n] + (smooth ? 1 : 0);
    if (num == 0 || den == 0) return 0.0;
    log_sum += std::log(static_cast<double>(num) / static_cast<double>(den));
  }
  double bp = ref_len <= cand_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_len) /
                                       static_cast<double>(cand_len));
  return bp * std::exp(log_sum / 4.0);
}

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references,
               double beta) {
  double best = 0.0;
  for (const auto& ref : references) {
    if (candidate.empty() || ref.empty()) continue;
    double l = static_cast<double>(lcs_length(candidate, ref));
    if (l == 0.0) continue;
    double p = l / static_cast<double>(candidate.size());
    double r = l / static_cast<double>(ref.size());
    double b2 = beta * beta;
    double f = (1.0 + b2) * p * r / (r + b2 * p);
    best = std::max(best, f);
  }
  return best;
}

MetricReport evaluate_run(const std::vector<Prediction>& preds,
                          const std::vector<TaskInstance>& golds,
                          const EvalConfig& config) {
  if (config.task != TaskKind::gar && config.task != TaskKind::mgd &&
      config.task != TaskKind::sgg && config.task != TaskKind::ere) {
    throw Error("invalid-config",
                std::string("no metric suite for task ") +
                    to_string(config.task));
  }
  if (config.k < 1) throw Error("invalid-config", "k must be at least 1");

  std::set<std::string> seen_gold;
  for (const TaskInstance& g : golds) {
    if (!seen_gold.insert(g.instance_id).second) {
      throw Error("precondition-violation",
                  "duplicate gold id " + g.instance_id);
    }
  }

  MetricReport r;
  r.task = config.task;
  r.k = config.k;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  echo["task"] = to_string(config.task);
  echo["k"] = config.k;
  echo["smooth_bleu"] = config.smooth_bleu;
  echo["rouge_beta"] = config.rouge_beta;
  echo["fold_symmetric"] = config.fold_symmetric;
  r.config_echo = std::move(echo);

  std::vector<TaskInstance> graded;
  for (const TaskInstance& g : golds) {
    if (g.task == config.task) {
      graded.push_back(g);
    } else {
      ++r.skipped_gold_count;
    }
  }
  r.gold_count = graded.size();
  r.prediction_count = preds.size();

  std::map<std::string, const Prediction*> by_id;
  for (const Prediction& p : preds) by_id[p.instance_id] = &p;

  std::set<std::string> graded_ids;
  for (const TaskInstance& g : graded) graded_ids.insert(g.instance_id);
  std::set<std::string> reported;
  for (const Prediction& p : preds) {
    if (graded_ids.count(p.instance_id) == 0 &&
        reported.insert(p.instance_id).second) {
      r.unmatched_ids.push_back(p.instance_id);
    }
  }
  r.unmatched_count = r.unmatched_ids.size();
  for (const TaskInstance& g : graded) {
    if (by_id.find(g.instance_id) == by_id.end()) {
      r.missing_ids.push_back(g.instance_id);
    }
  }
  r.missing_count = r.missing_ids.size();

  switch (config.task) {
    case TaskKind::gar: {
      std::size_t correct = 0;
      for (GarKind kind : {GarKind::connectivity, GarKind::cycle,
                           GarKind::shortest_path, GarKind::matching}) {
        KindAccuracy ka = accuracy(preds, graded, kind);
        if (ka.total == 0) continue;
        r.gar[to_string(kind)] = ka;
        correct += ka.correct;
        r.unparseable_count += ka.unparseable;
      }
      r.gar_overall = graded.empty()
                          ? 0.0
                          : static_cast<double>(correct) /
                                static_cast<double>(graded.size());
      break;
    }
    case TaskKind::mgd: {
      if (graded.empty()) break;
      std::vector<std::vector<std::string>> cands, refs;
      double rouge_sum = 0.0;
      for (const TaskInstance& g : graded) {
        std::vector<std::string> ref = tokenize(gold_text_of(g));
        auto it = by_id.find(g.instance_id);
        std::vector<std::string> cand =
            it == by_id.end() ? std::vector<std::string>{}
                              : tokenize(it->second->text);
        rouge_sum += rouge_l(cand, {ref}, config.rouge_beta);
        cands.push_back(std::move(cand));
        refs.push_back(std::move(ref));
      }
      r.bleu = bleu4(cands, refs, config.smooth_bleu);
      r.rouge = rouge_sum / static_cast<double>(graded.size());
      break;
    }
    case TaskKind::sgg: {
      std::vector<SggInstance> instances;
      for (const TaskInstance& g : graded) {
        SggInstance inst;
        inst.gold = labeled_triples(embedded_graph(g));
        auto it = by_id.find(g.instance_id);
        if (it != by_id.end() && it->second->ranked_triples) {
          inst.ranked = *it->second->ranked_triples;
        }
        instances.push_back(std::move(inst));
      }
      r.recall_k = corpus_recall_at_k(instances, config.k);
      r.mean_recall_k = corpus_mean_recall_at_k(instances, config.k);
      break;
    }
    case TaskKind::ere: {
      if (graded.empty()) break;
      double p_sum = 0.0;
      double r_sum = 0.0;
      for (const TaskInstance& g : graded) {
        std::set<LabeledTriple> gold = labeled_triples(embedded_graph(g));
        std::set<LabeledTriple> predicted;
        auto it = by_id.find(g.instance_id);
        if (it != by_id.end()) {
          std::string text = it->second->text;
          if (text.empty() || text.back() != '\n') text += '\n';
          try {
            predicted = labeled_triples(parse(text, g.realization));
          } catch (const Error&) {
            ++r.unparseable_count;
          }
        }
        TripleScore ts = triple_prf(predicted, gold, config.fold_symmetric);
        p_sum += ts.precision;
        r_sum += ts.recall;
      }
      double n = static_cast<double>(graded.size());
      r.precision = p_sum / n;
      r.recall = r_sum / n;
      r.f1 = r.precision + r.recall == 0.0
                 ? 0.0
                 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
      break;
    }
    default:
      break;
  }
  return r;
}

nlohmann::ordered_json report_to_json(const MetricReport& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["task"] = to_string(r.task);
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  switch (r.task) {
    case TaskKind::gar: {
      nlohmann::ordered_json acc = nlohmann::ordered_json::object();
      nlohmann::ordered_json per_kind = nlohmann::ordered_json::object();
      for (GarKind kind : {GarKind::connectivity, GarKind::cycle,
                           GarKind::shortest_path, GarKind::matching}) {
        auto it = r.gar.find(to_string(kind));
        if (it == r.gar.end()) continue;
        acc[it->first] = it->second.accuracy;
        nlohmann::ordered_json c = nlohmann::ordered_json::object();
        c["total"] = it->second.total;
        c["correct"] = it->second.correct;
        c["missing"] = it->second.missing;
        c["unparseable"] = it->second.unparseable;
        per_kind[it->first] = std::move(c);
      }
      acc["overall"] = r.gar_overall;
      metrics["accuracy"] = std::move(acc);
      counts["per_kind"] = std::move(per_kind);
      break;
    }
    case TaskKind::mgd:
      metrics["bleu4"] = r.bleu;
      metrics["rouge_l"] = r.rouge;
      break;
    case TaskKind::sgg:
      metrics["recall_at_k"] = r.recall_k;
      metrics["mean_recall_at_k"] = r.mean_recall_k;
      metrics["k"] = r.k;
      break;
    case TaskKind::ere:
      metrics["precision"] = r.precision;
      metrics["recall"] = r.recall;
      metrics["f1"] = r.f1;
      break;
    default:
      break;
  }
  j["metrics"] = std::move(metrics);
  counts["gold"] = r.gold_count;
  counts["skipped_golds"] = r.skipped_gold_count;
  counts["predictions"] = r.prediction_count;
  counts["missing"] = r.missing_count;
  counts["missing_ids"] = r.missing_ids;
  counts["unmatched"] = r.unmatched_count;
  counts["unmatched_ids"] = r.unmatched_ids;
  counts["unparseable"] = r.unparseable_count;
  j["counts"] = std::move(counts);
  j["config"] = r.config_echo;
  return j;
}

}  // namespace gsub
