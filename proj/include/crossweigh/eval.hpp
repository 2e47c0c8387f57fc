#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crossweigh/corpus.hpp"

namespace crossweigh {

struct TypeScore {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Entity-wise scores: a predicted span counts only on an exact
// (start, end, type) match. Overall numbers are micro-averaged.
struct EntityScore {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::map<std::string, TypeScore> by_type;
};

struct DetectionMetrics {
  std::size_t flagged = 0;
  std::size_t truth = 0;
  std::size_t true_positives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class NoiseKind { TypeSwap, BoundaryShrink, BoundaryGrow, EntityDrop };

struct NoiseSpec {
  double rate = 0.1;  // fraction of sentences to corrupt, in (0, 1)
  std::vector<NoiseKind> kinds = {NoiseKind::TypeSwap, NoiseKind::BoundaryShrink,
                                  NoiseKind::BoundaryGrow, NoiseKind::EntityDrop};
  std::uint64_t seed = 1;
};

struct RunSummary {
  std::vector<double> f1s;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
};

// Scores predicted tag sequences against the gold corpus. Predictions are
// BIO-repaired before span extraction, which reproduces conlleval's
// handling of stray I- tags. Throws ValidationError on misalignment.
EntityScore entity_f1(const Corpus& gold,
                      const std::vector<std::vector<std::string>>& predicted);

// Precision/recall/F1 of a flagged-sentence set against a known-mistake
// set. Precision is 0 when nothing is flagged; an empty truth set is a
// ValidationError.
DetectionMetrics mistake_detection_metrics(const std::set<std::size_t>& flagged,
                                           const std::set<std::size_t>& truth,
                                           std::size_t universe);

// Corrupts ceil(rate * n) entity-bearing sentences and returns the new
// corpus with the exact corrupted index set. Selection walks a shuffled
// surface list and corrupts most occurrences of each picked surface the
// same way, so repeated names acquire the consistent mistakes an
// inattentive annotator would make; a clean minority of each surface's
// occurrences is kept. Output stays BIO well-formed and every selected
// sentence's tags change. Deterministic under spec.seed.
std::pair<Corpus, std::set<std::size_t>> inject_noise(const Corpus& corpus,
                                                      const NoiseSpec& spec);

RunSummary summarize_runs(const std::vector<double>& f1s);

std::string write_score_report(const EntityScore& score);

std::string noise_kind_name(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view name);

}  // namespace crossweigh
