#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crossweigh/corpus.hpp"
#include "crossweigh/eval.hpp"
#include "crossweigh/tagger.hpp"

namespace crossweigh {

// How each sentence's mistake confidence c is derived from its count of
// potentially-mistake verdicts delta over t estimation iterations.
enum class Heuristic { Ratio, AtLeastOne, Majority, All };

// Entity-disjoint filtering of each fold's training data: On removes every
// candidate sharing an entity surface with the fold, Off keeps the full
// complement (plain cross checking), RandomDiscard removes the same count
// as On but picks the discards uniformly at random.
enum class DisjointMode { On, Off, RandomDiscard };

struct CrossWeighConfig {
  int k = 10;              // fold count
  int t = 3;               // estimation iterations
  double epsilon = 0.7;    // weight base, in (0, 1)
  Heuristic heuristic = Heuristic::Ratio;
  DisjointMode entity_disjoint = DisjointMode::On;
  std::uint64_t seed = 1;
  int jobs = 1;            // max concurrent fold trainings

  bool operator==(const CrossWeighConfig&) const = default;
};

struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> assignment;  // sentence index -> fold id

  // Fold id -> ascending sentence indices.
  std::vector<std::vector<std::size_t>> folds() const;
};

struct MistakeCounts {
  std::vector<int> delta;  // per-sentence potentially-mistake marks
  int t = 0;               // iterations performed
};

struct SentenceAudit {
  std::size_t index = 0;
  int delta = 0;
  int c = 0;
  double weight = 1.0;
  std::vector<std::string> gold;
  std::vector<std::vector<std::string>> predictions;  // one per iteration
};

struct MistakeAuditReport {
  CrossWeighConfig config;
  TrainConfig train_config;
  std::vector<SentenceAudit> sentences;
  std::size_t flagged = 0;  // |{i : delta_i >= 1}|
  std::optional<DetectionMetrics> detection;  // when a truth set was given
};

// Uniform random permutation under seed, split into k near-equal
// contiguous blocks. Throws ValidationError when k < 1 or k > n.
FoldPlan partition(const Corpus& corpus, int k, std::uint64_t seed);

// Union of entity surface names over the fold's sentences.
std::set<std::string> collect_test_entities(const Corpus& corpus,
                                            const std::vector<std::size_t>& fold);

// Training sentences for one fold's model, per the mode above. The seed is
// only consumed by RandomDiscard.
std::vector<std::size_t> build_train_set(const Corpus& corpus,
                                         const std::vector<std::size_t>& fold,
                                         const std::set<std::string>& test_entities,
                                         DisjointMode mode, std::uint64_t seed = 0);

// Per-iteration fold predictions alongside the mistake counts; run() and
// audit() use these to assemble the report.
struct EstimationDetail {
  MistakeCounts counts;
  // predictions[iter][sentence index] = predicted tag sequence
  std::vector<std::vector<std::vector<std::string>>> predictions;
};

// The cross-checking loop: t times, partition the corpus, train one tagger
// per fold on its (filtered) complement with uniform weights, and mark
// every fold sentence whose prediction differs from its labels anywhere.
// A fold whose filtered train set is empty raises InfeasibleError (use a
// larger k). Fold trainings within an iteration may run on up to
// config.jobs threads; results are identical for any jobs value.
EstimationDetail estimate_mistakes_detailed(const Corpus& corpus,
                                            const CrossWeighConfig& config,
                                            const TrainConfig& train_config);
MistakeCounts estimate_mistakes(const Corpus& corpus, const CrossWeighConfig& config,
                                const TrainConfig& train_config);

// w_i = epsilon^{c_i} with c_i derived from delta_i per the heuristic.
WeightVector compute_weights(const MistakeCounts& counts, double epsilon,
                             Heuristic heuristic);

// Full pipeline: estimate mistakes, compute weights, train the final model
// on the complete corpus under those weights.
std::pair<TaggerModel, MistakeAuditReport> run(const Corpus& corpus,
                                               const CrossWeighConfig& config,
                                               const TrainConfig& train_config);

// Estimation only; when truth (indices of sentences known to contain
// mistakes) is given the report carries detection precision/recall/F1.
MistakeAuditReport audit(const Corpus& corpus, const CrossWeighConfig& config,
                         const TrainConfig& train_config,
                         const std::optional<std::set<std::size_t>>& truth = std::nullopt);

std::set<std::size_t> flagged_set(const MistakeCounts& counts);

// Machine-readable key-value text: config echo, summary, then one record
// per sentence (index, delta, c, w, gold tags, per-iteration predictions).
std::string write_audit_report(const MistakeAuditReport& report);

std::string heuristic_name(Heuristic heuristic);
std::optional<Heuristic> parse_heuristic(std::string_view name);
std::string mode_name(DisjointMode mode);
std::optional<DisjointMode> parse_mode(std::string_view name);

}  // namespace crossweigh
