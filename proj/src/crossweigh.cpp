#include "crossweigh/crossweigh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "crossweigh/random.hpp"
#include "crossweigh/util.hpp"

namespace crossweigh {

namespace {

// Stream tags for deriving per-task seeds from the master seed.
constexpr std::uint64_t kPartitionStream = 0x7041;
constexpr std::uint64_t kDiscardStream = 0xD15C0000ULL;
constexpr std::uint64_t kFoldTrainStream = 0xF01D0000ULL;

int heuristic_confidence(int delta, int t, Heuristic heuristic) {
  switch (heuristic) {
    case Heuristic::Ratio:
      return delta;
    case Heuristic::AtLeastOne:
      return delta >= 1 ? t : 0;
    case Heuristic::Majority:
      return delta >= t / 2 + 1 ? t : 0;
    case Heuristic::All:
      return delta == t ? t : 0;
  }
  throw ValidationError("unknown heuristic");
}

void validate_config(const CrossWeighConfig& config) {
  if (config.k < 2) throw ValidationError("config: k must be >= 2");
  if (config.t < 1) throw ValidationError("config: t must be >= 1");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw ValidationError("config: epsilon must be in (0, 1)");
  if (config.jobs < 1) throw ValidationError("config: jobs must be >= 1");
}

std::vector<std::size_t> filtered_train_set(const Corpus& corpus,
                                            const std::vector<std::size_t>& fold,
                                            const std::vector<std::set<std::string>>& surfaces,
                                            const std::set<std::string>& test_entities,
                                            DisjointMode mode, std::uint64_t seed) {
  std::vector<bool> in_fold(corpus.size(), false);
  for (std::size_t idx : fold) {
    if (idx >= corpus.size())
      throw ValidationError("fold index " + std::to_string(idx) + " out of range");
    in_fold[idx] = true;
  }

  std::vector<std::size_t> complement;
  complement.reserve(corpus.size() - fold.size());
  for (std::size_t j = 0; j < corpus.size(); ++j)
    if (!in_fold[j]) complement.push_back(j);
  if (mode == DisjointMode::Off) return complement;

  std::vector<std::size_t> kept;
  std::size_t removed = 0;
  for (std::size_t j : complement) {
    bool overlaps = false;
    for (const std::string& surface : surfaces[j])
      if (test_entities.count(surface) > 0) {
        overlaps = true;
        break;
      }
    if (overlaps)
      ++removed;
    else
      kept.push_back(j);
  }
  if (mode == DisjointMode::On) return kept;

  // RandomDiscard: drop the same number of sentences as the entity-disjoint
  // filter would, chosen uniformly from the complement.
  std::vector<std::size_t> pool = complement;
  std::mt19937_64 rng(splitmix64(seed));
  shuffle_in_place(pool, rng);
  pool.resize(complement.size() - removed);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::vector<std::vector<std::size_t>> FoldPlan::folds() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assignment.size(); ++i)
    out[assignment[i]].push_back(i);
  return out;
}

FoldPlan partition(const Corpus& corpus, int k, std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (k < 1) throw ValidationError("partition: k must be >= 1");
  if (static_cast<std::size_t>(k) > n)
    throw ValidationError("partition: k = " + std::to_string(k) + " exceeds " +
                          std::to_string(n) + " sentences");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(splitmix64(seed));
  shuffle_in_place(order, rng);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(n, 0);
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i)
      plan.assignment[order[pos++]] = static_cast<std::uint32_t>(f);
  }
  return plan;
}

std::set<std::string> collect_test_entities(const Corpus& corpus,
                                            const std::vector<std::size_t>& fold) {
  std::set<std::string> entities;
  for (std::size_t idx : fold) {
    if (idx >= corpus.size())
      throw ValidationError("fold index " + std::to_string(idx) + " out of range");
    std::set<std::string> surfaces = surface_set(corpus.sentences[idx]);
    entities.merge(surfaces);
  }
  return entities;
}

std::vector<std::size_t> build_train_set(const Corpus& corpus,
                                         const std::vector<std::size_t>& fold,
                                         const std::set<std::string>& test_entities,
                                         DisjointMode mode, std::uint64_t seed) {
  std::vector<std::set<std::string>> surfaces(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    surfaces[i] = surface_set(corpus.sentences[i]);
  return filtered_train_set(corpus, fold, surfaces, test_entities, mode, seed);
}

EstimationDetail estimate_mistakes_detailed(const Corpus& corpus,
                                            const CrossWeighConfig& config,
                                            const TrainConfig& train_config) {
  validate_config(config);
  if (corpus.empty()) throw ValidationError("estimate_mistakes: corpus is empty");

  const std::size_t n = corpus.size();
  std::vector<std::set<std::string>> surfaces(n);
  std::vector<std::vector<std::string>> gold(n);
  for (std::size_t i = 0; i < n; ++i) {
    surfaces[i] = surface_set(corpus.sentences[i]);
    gold[i] = tags_of(corpus.sentences[i]);
  }

  EstimationDetail detail;
  detail.counts.delta.assign(n, 0);
  detail.counts.t = config.t;
  detail.predictions.resize(static_cast<std::size_t>(config.t));

  const std::size_t k = static_cast<std::size_t>(config.k);
  for (int iter = 0; iter < config.t; ++iter) {
    const FoldPlan plan =
        partition(corpus, config.k,
                  derive_seed(config.seed, kPartitionStream + static_cast<std::uint64_t>(iter)));
    const std::vector<std::vector<std::size_t>> folds = plan.folds();

    std::vector<std::vector<std::vector<std::string>>> fold_preds(k);
    std::vector<std::exception_ptr> errors(k);

    auto run_fold = [&](std::size_t f) {
      const std::uint64_t task = static_cast<std::uint64_t>(iter) * k + f;
      const std::set<std::string> test_entities = collect_test_entities(corpus, folds[f]);
      const std::vector<std::size_t> train_idx =
          filtered_train_set(corpus, folds[f], surfaces, test_entities,
                             config.entity_disjoint,
                             derive_seed(config.seed, kDiscardStream + task));
      if (train_idx.empty())
        throw InfeasibleError("iteration " + std::to_string(iter + 1) + " fold " +
                              std::to_string(f) +
                              ": entity-disjoint filtering left no training "
                              "sentences; increase k so folds hold fewer entities");
      const Corpus sub = subcorpus(corpus, train_idx);
      TrainConfig fold_config = train_config;
      fold_config.shuffle_seed =
          derive_seed(train_config.shuffle_seed, kFoldTrainStream + task);
      const TaggerModel model = train(sub, WeightVector::uniform(sub.size()), fold_config);

      fold_preds[f].reserve(folds[f].size());
      for (std::size_t idx : folds[f])
        fold_preds[f].push_back(predict(model, corpus.sentences[idx]));
    };

    const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), k);
    if (jobs <= 1) {
      for (std::size_t f = 0; f < k; ++f) run_fold(f);
    } else {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (;;) {
          const std::size_t f = next.fetch_add(1);
          if (f >= k) return;
          try {
            run_fold(f);
          } catch (...) {
            errors[f] = std::current_exception();
          }
        }
      };
      std::vector<std::thread> threads;
      threads.reserve(jobs);
      for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
      for (std::thread& th : threads) th.join();
      for (std::size_t f = 0; f < k; ++f)
        if (errors[f]) std::rethrow_exception(errors[f]);
    }

    // Merge by fold index; every sentence sits in exactly one fold, so it
    // receives exactly one verdict per iteration.
    auto& iter_preds = detail.predictions[static_cast<std::size_t>(iter)];
    iter_preds.resize(n);
    for (std::size_t f = 0; f < k; ++f)
      for (std::size_t pos = 0; pos < folds[f].size(); ++pos) {
        const std::size_t idx = folds[f][pos];
        iter_preds[idx] = std::move(fold_preds[f][pos]);
        if (iter_preds[idx] != gold[idx]) ++detail.counts.delta[idx];
      }
  }
  return detail;
}

MistakeCounts estimate_mistakes(const Corpus& corpus, const CrossWeighConfig& config,
                                const TrainConfig& train_config) {
  return estimate_mistakes_detailed(corpus, config, train_config).counts;
}

WeightVector compute_weights(const MistakeCounts& counts, double epsilon,
                             Heuristic heuristic) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("compute_weights: epsilon must be in (0, 1)");
  if (counts.t < 1) throw ValidationError("compute_weights: counts cover no iterations");

  WeightVector weights;
  weights.values.reserve(counts.delta.size());
  for (int delta : counts.delta) {
    if (delta < 0 || delta > counts.t)
      throw ValidationError("compute_weights: delta " + std::to_string(delta) +
                            " outside [0, t]");
    const int c = heuristic_confidence(delta, counts.t, heuristic);
    weights.values.push_back(std::pow(epsilon, static_cast<double>(c)));
  }
  return weights;
}

std::set<std::size_t> flagged_set(const MistakeCounts& counts) {
  std::set<std::size_t> flagged;
  for (std::size_t i = 0; i < counts.delta.size(); ++i)
    if (counts.delta[i] >= 1) flagged.insert(i);
  return flagged;
}

namespace {

MistakeAuditReport make_report(const Corpus& corpus, const CrossWeighConfig& config,
                               const TrainConfig& train_config,
                               const EstimationDetail& detail, const WeightVector& weights,
                               const std::optional<std::set<std::size_t>>& truth) {
  MistakeAuditReport report;
  report.config = config;
  report.train_config = train_config;
  report.sentences.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    SentenceAudit entry;
    entry.index = i;
    entry.delta = detail.counts.delta[i];
    entry.c = heuristic_confidence(entry.delta, detail.counts.t, config.heuristic);
    entry.weight = weights.values[i];
    entry.gold = tags_of(corpus.sentences[i]);
    entry.predictions.reserve(detail.predictions.size());
    for (const auto& iter_preds : detail.predictions)
      entry.predictions.push_back(iter_preds[i]);
    if (entry.delta >= 1) ++report.flagged;
    report.sentences.push_back(std::move(entry));
  }
  if (truth)
    report.detection =
        mistake_detection_metrics(flagged_set(detail.counts), *truth, corpus.size());
  return report;
}

}  // namespace

std::pair<TaggerModel, MistakeAuditReport> run(const Corpus& corpus,
                                               const CrossWeighConfig& config,
                                               const TrainConfig& train_config) {
  const EstimationDetail detail = estimate_mistakes_detailed(corpus, config, train_config);
  const WeightVector weights =
      compute_weights(detail.counts, config.epsilon, config.heuristic);
  TaggerModel final_model = train(corpus, weights, train_config);
  MistakeAuditReport report =
      make_report(corpus, config, train_config, detail, weights, std::nullopt);
  return {std::move(final_model), std::move(report)};
}

MistakeAuditReport audit(const Corpus& corpus, const CrossWeighConfig& config,
                         const TrainConfig& train_config,
                         const std::optional<std::set<std::size_t>>& truth) {
  const EstimationDetail detail = estimate_mistakes_detailed(corpus, config, train_config);
  const WeightVector weights =
      compute_weights(detail.counts, config.epsilon, config.heuristic);
  return make_report(corpus, config, train_config, detail, weights, truth);
}

std::string write_audit_report(const MistakeAuditReport& report) {
  std::string out = "crossweigh-audit 1\n";
  out += "k " + std::to_string(report.config.k) + "\n";
  out += "t " + std::to_string(report.config.t) + "\n";
  out += "epsilon " + format_double(report.config.epsilon) + "\n";
  out += "heuristic " + heuristic_name(report.config.heuristic) + "\n";
  out += "mode " + mode_name(report.config.entity_disjoint) + "\n";
  out += "seed " + std::to_string(report.config.seed) + "\n";
  out += "jobs " + std::to_string(report.config.jobs) + "\n";
  out += "epochs " + std::to_string(report.train_config.epochs) + "\n";
  out += "shuffle_seed " + std::to_string(report.train_config.shuffle_seed) + "\n";
  out += "averaging ";
  out += report.train_config.averaging ? '1' : '0';
  out += '\n';
  out += "sentences " + std::to_string(report.sentences.size()) + "\n";
  out += "flagged " + std::to_string(report.flagged) + "\n";
  if (report.detection) {
    out += "truth_size " + std::to_string(report.detection->truth) + "\n";
    out += "detection_precision " + format_double(report.detection->precision) + "\n";
    out += "detection_recall " + format_double(report.detection->recall) + "\n";
    out += "detection_f1 " + format_double(report.detection->f1) + "\n";
  }
  for (const SentenceAudit& entry : report.sentences) {
    const std::string idx = std::to_string(entry.index);
    out += "sentence " + idx + " delta " + std::to_string(entry.delta) + " c " +
           std::to_string(entry.c) + " w " + format_double(entry.weight) + "\n";
    out += "gold " + idx;
    for (const std::string& tag : entry.gold) out += " " + tag;
    out += '\n';
    for (std::size_t iter = 0; iter < entry.predictions.size(); ++iter) {
      out += "pred " + idx + " " + std::to_string(iter + 1);
      for (const std::string& tag : entry.predictions[iter]) out += " " + tag;
      out += '\n';
    }
  }
  return out;
}

std::string heuristic_name(Heuristic heuristic) {
  switch (heuristic) {
    case Heuristic::Ratio:
      return "ratio";
    case Heuristic::AtLeastOne:
      return "at-least-one";
    case Heuristic::Majority:
      return "majority";
    case Heuristic::All:
      return "all";
  }
  return "?";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  if (name == "ratio") return Heuristic::Ratio;
  if (name == "at-least-one") return Heuristic::AtLeastOne;
  if (name == "majority") return Heuristic::Majority;
  if (name == "all") return Heuristic::All;
  return std::nullopt;
}

std::string mode_name(DisjointMode mode) {
  switch (mode) {
    case DisjointMode::On:
      return "on";
    case DisjointMode::Off:
      return "off";
    case DisjointMode::RandomDiscard:
      return "random-discard";
  }
  return "?";
}

std::optional<DisjointMode> parse_mode(std::string_view name) {
  if (name == "on") return DisjointMode::On;
  if (name == "off") return DisjointMode::Off;
  if (name == "random-discard") return DisjointMode::RandomDiscard;
  return std::nullopt;
}

}  // namespace crossweigh
