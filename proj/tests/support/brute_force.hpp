#pragma once

#include <random>
#include <string>
#include <vector>

#include "crossweigh/tagger.hpp"

namespace crossweigh::testing {

// Total path score computed from the model's public weight accessors.
double sequence_score(const TaggerModel& model, const Sentence& sentence,
                      const std::vector<std::string>& tags);

// Argmax by exhaustive enumeration of all |labels|^length tag sequences,
// in lexicographic tag-index order; independent of the Viterbi recursion.
std::vector<std::string> brute_force_decode(const TaggerModel& model,
                                            const Sentence& sentence);

Sentence random_sentence(std::mt19937_64& rng, std::size_t max_length);

// Random dense-ish model over the features of the given sentence.
TaggerModel random_model(std::mt19937_64& rng, const std::vector<std::string>& labels,
                         const Sentence& sentence);

}  // namespace crossweigh::testing
