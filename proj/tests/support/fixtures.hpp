#pragma once

#include <string>
#include <vector>

#include "crossweigh/corpus.hpp"

namespace crossweigh::testing {

// One frozen scorer fixture from tests/data/scorer_fixtures.txt.
struct ScorerFixture {
  int id = 0;
  Corpus gold;  // synthesized surfaces; tags from the fixture
  std::vector<std::vector<std::string>> predictions;
  std::size_t expect_gold = 0;
  std::size_t expect_pred = 0;
  std::size_t expect_correct = 0;
  double expect_precision = 0.0;
  double expect_recall = 0.0;
  double expect_f1 = 0.0;
  struct TypeExpect {
    std::string type;
    std::size_t gold = 0;
    std::size_t pred = 0;
    std::size_t correct = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
  };
  std::vector<TypeExpect> types;
};

std::vector<ScorerFixture> load_scorer_fixtures(const std::string& path);

}  // namespace crossweigh::testing
