#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crossweigh/corpus.hpp"

namespace crossweigh {

struct TrainConfig {
  int epochs = 5;
  std::uint64_t shuffle_seed = 1;
  bool averaging = true;

  bool operator==(const TrainConfig&) const = default;
};

// Linear-chain scorer over sparse string features: per-tag emission
// weights plus first-order transition weights with explicit start/stop
// boundaries. Prediction is deterministic; score ties at each Viterbi
// decision go to the lowest tag-alphabet index.
class TaggerModel {
 public:
  TaggerModel() = default;
  explicit TaggerModel(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_labels() const { return labels_.size(); }
  bool averaged() const { return averaged_; }

  // Index of a tag in the label alphabet; throws ValidationError for an
  // unknown tag.
  std::uint32_t label_index(std::string_view tag) const;

  double feature_weight(std::string_view feature, std::string_view tag) const;
  double transition_weight(std::string_view from, std::string_view to) const;
  double start_weight(std::string_view tag) const;
  double stop_weight(std::string_view tag) const;

  void set_feature_weight(std::string_view feature, std::string_view tag, double w);
  void set_transition_weight(std::string_view from, std::string_view to, double w);
  void set_start_weight(std::string_view tag, double w);
  void set_stop_weight(std::string_view tag, double w);

  // Emission scores for one position, one entry per label.
  std::vector<double> emission_scores(const Sentence& sentence,
                                      std::size_t position) const;

 private:
  friend TaggerModel train(const Corpus&, const WeightVector&, const TrainConfig&);
  friend std::string write_model(const TaggerModel&);
  friend TaggerModel read_model(std::string_view);

  std::uint32_t intern_feature(const std::string& feature);

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> label_index_;
  std::unordered_map<std::string, std::uint32_t> feature_index_;
  std::vector<double> emission_;    // feature id * num_labels + tag
  std::vector<double> transition_;  // from * num_labels + to
  std::vector<double> start_;
  std::vector<double> stop_;
  bool averaged_ = false;
};

// Deterministic sparse features for one token: word identity of the
// current/previous/next token, lowercase form, character shape, prefixes
// and suffixes of length 1-3, and sentence boundary markers. Throws
// ValidationError when position is out of range.
std::vector<std::string> featurize(const Sentence& sentence, std::size_t position);

// Highest-scoring tag sequence (emissions + transitions, including start
// and stop). Throws ValidationError on an empty sentence.
std::vector<std::string> viterbi_decode(const TaggerModel& model,
                                        const Sentence& sentence);

// Weighted averaged structured perceptron. Sentences are visited in a
// seed-determined shuffled order each epoch; a mispredicted sentence
// updates parameters by weight * (gold features - predicted features).
// Sentences with weight 0 are skipped entirely, so they leave both the
// parameters and the visit order of the rest untouched. Deterministic
// given (corpus, weights, config).
TaggerModel train(const Corpus& corpus, const WeightVector& weights,
                  const TrainConfig& config = {});

// viterbi_decode followed by BIO repair of any illegal I-X.
std::vector<std::string> predict(const TaggerModel& model, const Sentence& sentence);

// Flat key-value serialization, versioned header, entries sorted so equal
// models serialize to identical bytes.
std::string write_model(const TaggerModel& model);
TaggerModel read_model(std::string_view text);

}  // namespace crossweigh
