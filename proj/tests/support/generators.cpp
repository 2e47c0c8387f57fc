#include "support/generators.hpp"

#include "crossweigh/random.hpp"

namespace crossweigh::testing {

Corpus random_bio_corpus(std::mt19937_64& rng, const RandomCorpusOptions& options) {
  const std::size_t n_sentences =
      options.min_sentences +
      uniform_below(rng, options.max_sentences - options.min_sentences + 1);

  std::vector<Sentence> sentences;
  sentences.reserve(n_sentences);
  for (std::size_t si = 0; si < n_sentences; ++si) {
    const std::size_t length = 1 + uniform_below(rng, options.max_length);
    Sentence sentence;
    std::size_t p = 0;
    while (p < length) {
      if (uniform_unit(rng) < 0.5) {
        sentence.tokens.push_back(
            {"w" + std::to_string(uniform_below(rng, options.context_vocab)), "O"});
        ++p;
      } else {
        const std::string& type =
            options.types[uniform_below(rng, options.types.size())];
        const std::size_t span_len = std::min<std::size_t>(
            length - p, 1 + uniform_below(rng, 3));
        for (std::size_t j = 0; j < span_len; ++j) {
          sentence.tokens.push_back(
              {"Ent" + std::to_string(uniform_below(rng, options.entity_vocab)),
               (j == 0 ? "B-" : "I-") + type});
          ++p;
        }
      }
    }
    sentences.push_back(std::move(sentence));
  }
  return make_corpus(std::move(sentences));
}

}  // namespace crossweigh::testing
