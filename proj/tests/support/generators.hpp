#pragma once

#include <random>
#include <string>
#include <vector>

#include "crossweigh/corpus.hpp"

namespace crossweigh::testing {

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

struct RandomCorpusOptions {
  std::size_t min_sentences = 1;
  std::size_t max_sentences = 12;
  std::size_t max_length = 10;
  std::size_t entity_vocab = 15;   // small pool so surfaces collide across sentences
  std::size_t context_vocab = 25;
  std::vector<std::string> types = {"PER", "LOC", "ORG", "MISC"};
};

// Random well-formed BIO corpus for property tests.
Corpus random_bio_corpus(std::mt19937_64& rng, const RandomCorpusOptions& options = {});

}  // namespace crossweigh::testing
