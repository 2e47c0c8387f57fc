#include "crossweigh/eval.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "crossweigh/random.hpp"
#include "crossweigh/util.hpp"

namespace crossweigh {

namespace {

void fill_prf(std::size_t gold, std::size_t predicted, std::size_t correct,
              double& precision, double& recall, double& f1) {
  precision = predicted == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(predicted);
  recall = gold == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold);
  f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

std::vector<NoiseKind> canonical_kinds(const std::vector<NoiseKind>& kinds) {
  std::vector<NoiseKind> all = {NoiseKind::TypeSwap, NoiseKind::BoundaryShrink,
                                NoiseKind::BoundaryGrow, NoiseKind::EntityDrop};
  std::vector<NoiseKind> out;
  for (NoiseKind kind : all)
    if (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) out.push_back(kind);
  return out;
}

std::vector<NoiseKind> applicable_kinds(const Sentence& sentence, const EntitySpan& span,
                                        const std::vector<NoiseKind>& wanted,
                                        std::size_t num_types) {
  std::vector<NoiseKind> out;
  for (NoiseKind kind : wanted) {
    switch (kind) {
      case NoiseKind::TypeSwap:
        if (num_types >= 2) out.push_back(kind);
        break;
      case NoiseKind::BoundaryShrink:
        if (span.end - span.start >= 2) out.push_back(kind);
        break;
      case NoiseKind::BoundaryGrow: {
        const bool left = span.start > 0 && sentence.tokens[span.start - 1].tag == "O";
        const bool right =
            span.end < sentence.size() && sentence.tokens[span.end].tag == "O";
        if (left || right) out.push_back(kind);
        break;
      }
      case NoiseKind::EntityDrop:
        out.push_back(kind);
        break;
    }
  }
  return out;
}

}  // namespace

EntityScore entity_f1(const Corpus& gold,
                      const std::vector<std::vector<std::string>>& predicted) {
  if (predicted.size() != gold.size())
    throw ValidationError("entity_f1: " + std::to_string(predicted.size()) +
                          " predictions for " + std::to_string(gold.size()) + " sentences");

  EntityScore score;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Sentence& sentence = gold.sentences[i];
    if (predicted[i].size() != sentence.size())
      throw ValidationError("entity_f1: sentence " + std::to_string(i) + " has " +
                            std::to_string(sentence.size()) + " tokens but " +
                            std::to_string(predicted[i].size()) + " predicted tags");
    for (const std::string& tag : predicted[i])
      if (!valid_tag(tag))
        throw ValidationError("entity_f1: sentence " + std::to_string(i) +
                              ": bad predicted tag '" + tag + "'");

    Sentence pred_sentence = sentence;
    const std::vector<std::string> repaired = convert_iob1_to_bio(predicted[i]);
    for (std::size_t p = 0; p < repaired.size(); ++p)
      pred_sentence.tokens[p].tag = repaired[p];

    const std::vector<EntitySpan> gold_spans = extract_entities(sentence);
    const std::vector<EntitySpan> pred_spans = extract_entities(pred_sentence);

    std::set<std::tuple<std::size_t, std::size_t, std::string>> gold_keys;
    for (const EntitySpan& span : gold_spans) {
      gold_keys.emplace(span.start, span.end, span.entity_type);
      ++score.gold;
      ++score.by_type[span.entity_type].gold;
    }
    for (const EntitySpan& span : pred_spans) {
      ++score.predicted;
      TypeScore& ts = score.by_type[span.entity_type];
      ++ts.predicted;
      if (gold_keys.count({span.start, span.end, span.entity_type}) > 0) {
        ++score.correct;
        ++ts.correct;
      }
    }
  }

  fill_prf(score.gold, score.predicted, score.correct, score.precision, score.recall,
           score.f1);
  for (auto& [type, ts] : score.by_type)
    fill_prf(ts.gold, ts.predicted, ts.correct, ts.precision, ts.recall, ts.f1);
  return score;
}

DetectionMetrics mistake_detection_metrics(const std::set<std::size_t>& flagged,
                                           const std::set<std::size_t>& truth,
                                           std::size_t universe) {
  if (truth.empty()) throw ValidationError("mistake_detection_metrics: empty truth set");
  for (std::size_t idx : flagged)
    if (idx >= universe)
      throw ValidationError("mistake_detection_metrics: flagged index " +
                            std::to_string(idx) + " outside universe");
  for (std::size_t idx : truth)
    if (idx >= universe)
      throw ValidationError("mistake_detection_metrics: truth index " +
                            std::to_string(idx) + " outside universe");

  DetectionMetrics metrics;
  metrics.flagged = flagged.size();
  metrics.truth = truth.size();
  for (std::size_t idx : flagged) metrics.true_positives += truth.count(idx);
  fill_prf(metrics.truth, metrics.flagged, metrics.true_positives, metrics.precision,
           metrics.recall, metrics.f1);
  return metrics;
}

std::pair<Corpus, std::set<std::size_t>> inject_noise(const Corpus& corpus,
                                                      const NoiseSpec& spec) {
  if (!(spec.rate > 0.0 && spec.rate < 1.0))
    throw ValidationError("inject_noise: rate must be in (0, 1)");
  const std::vector<NoiseKind> wanted = canonical_kinds(spec.kinds);
  if (wanted.empty()) throw ValidationError("inject_noise: no noise kinds given");

  std::set<std::string> type_set;
  for (const std::string& tag : corpus.label_alphabet)
    if (tag != "O") type_set.insert(tag.substr(2));
  const std::vector<std::string> types(type_set.begin(), type_set.end());

  const std::size_t n = corpus.size();
  const std::size_t target =
      static_cast<std::size_t>(std::ceil(spec.rate * static_cast<double>(n)));

  // Occurrences of each surface whose span admits at least one wanted kind.
  std::vector<std::vector<EntitySpan>> spans(n);
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> occurrences;
  std::size_t eligible_sentences = 0;
  for (std::size_t i = 0; i < n; ++i) {
    spans[i] = extract_entities(corpus.sentences[i]);
    bool eligible = false;
    for (std::size_t s = 0; s < spans[i].size(); ++s) {
      if (applicable_kinds(corpus.sentences[i], spans[i][s], wanted, types.size()).empty())
        continue;
      occurrences[spans[i][s].surface].emplace_back(i, s);
      eligible = true;
    }
    if (eligible) ++eligible_sentences;
  }
  if (eligible_sentences < target)
    throw ValidationError("inject_noise: only " + std::to_string(eligible_sentences) +
                          " corruptible entity-bearing sentences for a target of " +
                          std::to_string(target));

  std::mt19937_64 rng(splitmix64(spec.seed));
  std::vector<std::string> surface_order;
  surface_order.reserve(occurrences.size());
  for (const auto& [surface, occ] : occurrences) surface_order.push_back(surface);
  shuffle_in_place(surface_order, rng);

  // sentence -> (surface, span index within sentence)
  std::map<std::size_t, std::pair<std::string, std::size_t>> designated;
  auto take_occurrence = [&](const std::string& surface,
                             const std::pair<std::size_t, std::size_t>& occ) {
    if (designated.count(occ.first) > 0) return false;
    designated.emplace(occ.first, std::make_pair(surface, occ.second));
    return true;
  };

  // First pass: most occurrences of each picked surface, so a repeated
  // name is corrupted consistently while a clean minority survives.
  for (const std::string& surface : surface_order) {
    if (designated.size() >= target) break;
    std::vector<std::pair<std::size_t, std::size_t>> occ = occurrences[surface];
    shuffle_in_place(occ, rng);
    const std::size_t take = std::max<std::size_t>(1, occ.size() * 3 / 4);
    std::size_t taken = 0;
    for (const auto& o : occ) {
      if (taken >= take || designated.size() >= target) break;
      if (take_occurrence(surface, o)) ++taken;
    }
  }
  // Second pass: top up from the occurrences the fraction cap skipped.
  if (designated.size() < target) {
    for (const std::string& surface : surface_order) {
      if (designated.size() >= target) break;
      for (const auto& o : occurrences[surface]) {
        if (designated.size() >= target) break;
        take_occurrence(surface, o);
      }
    }
  }

  Corpus noisy = corpus;
  std::set<std::size_t> corrupted;
  for (const auto& [idx, pick] : designated) {
    const auto& [surface, span_idx] = pick;
    const EntitySpan& span = spans[idx][span_idx];
    Sentence& sentence = noisy.sentences[idx];
    const std::vector<NoiseKind> kinds =
        applicable_kinds(corpus.sentences[idx], span, wanted, types.size());

    // Seeded per surface: every occurrence of a name gets the same kind of
    // mistake, and TypeSwap always swaps to the same wrong type.
    std::mt19937_64 surface_rng(derive_seed(spec.seed, fnv1a64(surface)));
    const NoiseKind kind = kinds[uniform_below(surface_rng, kinds.size())];

    switch (kind) {
      case NoiseKind::TypeSwap: {
        std::vector<std::string> others;
        for (const std::string& type : types)
          if (type != span.entity_type) others.push_back(type);
        const std::string& to = others[uniform_below(surface_rng, others.size())];
        for (std::size_t p = span.start; p < span.end; ++p)
          sentence.tokens[p].tag = (p == span.start ? "B-" : "I-") + to;
        break;
      }
      case NoiseKind::BoundaryShrink:
        sentence.tokens[span.end - 1].tag = "O";
        break;
      case NoiseKind::BoundaryGrow: {
        const bool left =
            span.start > 0 && corpus.sentences[idx].tokens[span.start - 1].tag == "O";
        const bool right = span.end < sentence.size() &&
                           corpus.sentences[idx].tokens[span.end].tag == "O";
        const bool grow_right = right && (!left || uniform_below(surface_rng, 2) == 0);
        if (grow_right) {
          sentence.tokens[span.end].tag = "I-" + span.entity_type;
        } else {
          sentence.tokens[span.start - 1].tag = "B-" + span.entity_type;
          sentence.tokens[span.start].tag = "I-" + span.entity_type;
        }
        break;
      }
      case NoiseKind::EntityDrop:
        for (std::size_t p = span.start; p < span.end; ++p) sentence.tokens[p].tag = "O";
        break;
    }
    corrupted.insert(idx);
  }

  // BoundaryGrow can mint I-X tags the original alphabet lacked.
  std::set<std::string> tags(corpus.label_alphabet.begin(), corpus.label_alphabet.end());
  for (const Sentence& s : noisy.sentences)
    for (const Token& t : s.tokens) tags.insert(t.tag);
  noisy.label_alphabet.clear();
  if (tags.erase("O") > 0) noisy.label_alphabet.push_back("O");
  noisy.label_alphabet.insert(noisy.label_alphabet.end(), tags.begin(), tags.end());

  return {std::move(noisy), std::move(corrupted)};
}

RunSummary summarize_runs(const std::vector<double>& f1s) {
  if (f1s.empty()) throw ValidationError("summarize_runs: no runs");
  RunSummary summary;
  summary.f1s = f1s;
  double sum = 0.0;
  for (double v : f1s) sum += v;
  summary.mean = sum / static_cast<double>(f1s.size());
  if (f1s.size() >= 2) {
    double ss = 0.0;
    for (double v : f1s) ss += (v - summary.mean) * (v - summary.mean);
    summary.stddev = std::sqrt(ss / static_cast<double>(f1s.size() - 1));
  }
  return summary;
}

std::string write_score_report(const EntityScore& score) {
  std::string out = "crossweigh-score 1\n";
  out += "gold_spans " + std::to_string(score.gold) + "\n";
  out += "pred_spans " + std::to_string(score.predicted) + "\n";
  out += "correct_spans " + std::to_string(score.correct) + "\n";
  out += "precision " + format_double(score.precision) + "\n";
  out += "recall " + format_double(score.recall) + "\n";
  out += "f1 " + format_double(score.f1) + "\n";
  for (const auto& [type, ts] : score.by_type) {
    out += "type " + type + " gold " + std::to_string(ts.gold) + " pred " +
           std::to_string(ts.predicted) + " correct " + std::to_string(ts.correct) +
           " precision " + format_double(ts.precision) + " recall " +
           format_double(ts.recall) + " f1 " + format_double(ts.f1) + "\n";
  }
  return out;
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::TypeSwap:
      return "type-swap";
    case NoiseKind::BoundaryShrink:
      return "boundary-shrink";
    case NoiseKind::BoundaryGrow:
      return "boundary-grow";
    case NoiseKind::EntityDrop:
      return "entity-drop";
  }
  return "?";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) {
  if (name == "type-swap") return NoiseKind::TypeSwap;
  if (name == "boundary-shrink") return NoiseKind::BoundaryShrink;
  if (name == "boundary-grow") return NoiseKind::BoundaryGrow;
  if (name == "entity-drop") return NoiseKind::EntityDrop;
  return std::nullopt;
}

}  // namespace crossweigh
