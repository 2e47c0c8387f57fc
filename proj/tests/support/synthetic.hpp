#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossweigh/corpus.hpp"

namespace crossweigh::testing {

// Template corpus with context-determined tags: every slot's type is
// recoverable from surrounding words and token shape alone, so a tagger
// trained on entity-disjoint data can still label the fillers. Surface
// pools are fixed; corpora generated with different seeds share them, and
// a small frequent tier of each pool gives repeated names for the
// clustered-noise experiments.
struct TemplateCorpusOptions {
  std::size_t sentences = 2000;
  std::uint64_t seed = 7;
  bool multi_token = true;  // allow two-token entity surfaces
};

Corpus make_template_corpus(const TemplateCorpusOptions& options);

}  // namespace crossweigh::testing
