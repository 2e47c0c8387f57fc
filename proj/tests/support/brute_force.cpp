#include "support/brute_force.hpp"

#include "crossweigh/random.hpp"
#include "support/generators.hpp"

namespace crossweigh::testing {

double sequence_score(const TaggerModel& model, const Sentence& sentence,
                      const std::vector<std::string>& tags) {
  double score = 0.0;
  for (std::size_t p = 0; p < sentence.size(); ++p)
    for (const std::string& feature : featurize(sentence, p))
      score += model.feature_weight(feature, tags[p]);
  score += model.start_weight(tags[0]);
  for (std::size_t p = 1; p < tags.size(); ++p)
    score += model.transition_weight(tags[p - 1], tags[p]);
  score += model.stop_weight(tags.back());
  return score;
}

std::vector<std::string> brute_force_decode(const TaggerModel& model,
                                            const Sentence& sentence) {
  const std::size_t length = sentence.size();
  const std::size_t t = model.num_labels();

  std::vector<std::size_t> assignment(length, 0);
  std::vector<std::string> best_tags;
  double best_score = 0.0;
  bool first = true;
  for (;;) {
    std::vector<std::string> tags;
    tags.reserve(length);
    for (std::size_t idx : assignment) tags.push_back(model.labels()[idx]);
    const double score = sequence_score(model, sentence, tags);
    if (first || score > best_score) {
      best_score = score;
      best_tags = tags;
      first = false;
    }
    // odometer increment
    std::size_t p = length;
    while (p > 0) {
      --p;
      if (++assignment[p] < t) break;
      assignment[p] = 0;
      if (p == 0) return best_tags;
    }
  }
}

Sentence random_sentence(std::mt19937_64& rng, std::size_t max_length) {
  static const std::vector<std::string> words = {"alpha", "Bravo", "charlie", "Delta9",
                                                 "echo",  "FOX",   "12",      "g-h"};
  const std::size_t length = 1 + uniform_below(rng, max_length);
  Sentence sentence;
  for (std::size_t p = 0; p < length; ++p)
    sentence.tokens.push_back({words[uniform_below(rng, words.size())], "O"});
  return sentence;
}

TaggerModel random_model(std::mt19937_64& rng, const std::vector<std::string>& labels,
                         const Sentence& sentence) {
  TaggerModel model(labels);
  auto weight = [&] { return uniform_unit(rng) * 4.0 - 2.0; };
  for (std::size_t p = 0; p < sentence.size(); ++p)
    for (const std::string& feature : featurize(sentence, p))
      for (const std::string& label : labels)
        if (uniform_unit(rng) < 0.7) model.set_feature_weight(feature, label, weight());
  for (const std::string& from : labels) {
    model.set_start_weight(from, weight());
    model.set_stop_weight(from, weight());
    for (const std::string& to : labels) model.set_transition_weight(from, to, weight());
  }
  return model;
}

}  // namespace crossweigh::testing
