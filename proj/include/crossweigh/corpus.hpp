#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crossweigh/errors.hpp"

namespace crossweigh {

// Tag encoding of the source file. Internally every corpus is BIO; IOB1
// input is converted during parsing.
enum class TagScheme { IOB1, BIO };

struct Token {
  std::string surface;  // non-empty, no whitespace
  std::string tag;      // "O" or "B-"/"I-" followed by an entity type

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t index = 0;  // 0-based position in the owning corpus
  std::vector<Token> tokens;
  std::optional<std::string> doc_id;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

// Contiguous typed token span; `end` is exclusive. The surface string is
// the span's token surfaces joined with single spaces and is what the
// entity-disjoint machinery compares (exact, case-sensitive).
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity_type;
  std::string surface;

  bool operator==(const EntitySpan&) const = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::vector<std::string> label_alphabet;  // "O" first, rest sorted
  TagScheme scheme = TagScheme::BIO;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
  bool operator==(const Corpus&) const = default;
};

// Per-sentence training weights, aligned to corpus sentence indices.
// The sidecar file format accepts only weights in (0, 1]; a default
// constructed vector is uniform 1.0.
struct WeightVector {
  std::vector<double> values;

  static WeightVector uniform(std::size_t n) {
    return WeightVector{std::vector<double>(n, 1.0)};
  }
  std::size_t size() const { return values.size(); }
  bool operator==(const WeightVector&) const = default;
};

// Parses CoNLL-style text: one token per line, whitespace-separated
// columns, blank line between sentences, `-DOCSTART-` lines mark document
// boundaries (dropped from sentences). tag_column < 0 selects the last
// column of each line. Throws ParseError with a line number on malformed
// lines, unknown tag prefixes, or (for BIO input) broken tag sequences.
Corpus parse_conll(std::string_view text, int tag_column = -1,
                   TagScheme scheme = TagScheme::BIO);

// I-X becomes B-X where it starts a new entity (sentence start, after O,
// or after a different type). Identity on well-formed BIO input, which
// also makes it the BIO repair used on decoder output.
std::vector<std::string> convert_iob1_to_bio(const std::vector<std::string>& tags);

// Maximal B-X (I-X)* runs, ordered by start. Throws ValidationError naming
// the offending token index on a BIO violation.
std::vector<EntitySpan> extract_entities(const Sentence& sentence);

// Distinct entity surface strings of a sentence; entity types are
// discarded so "Chicago" counts once whether tagged LOC or ORG.
std::set<std::string> surface_set(const Sentence& sentence);

// Two columns (surface, tag), blank line between sentences, a
// "-DOCSTART- O" marker wherever the document id changes. Reparsing yields
// an equal corpus up to dropped extra columns.
std::string write_conll(const Corpus& corpus);

// One decimal weight per line, line i for sentence i. Weights outside
// (0, 1] are a ValidationError, in both directions.
WeightVector read_weights(std::string_view text);
std::string write_weights(const WeightVector& weights);

std::vector<std::string> tags_of(const Sentence& sentence);

// True for "O" and for "B-"/"I-" followed by a non-empty type.
bool valid_tag(std::string_view tag);

// Corpus from in-memory sentences: assigns indices 0..n-1 and derives the
// label alphabet from the tags present.
Corpus make_corpus(std::vector<Sentence> sentences, TagScheme scheme = TagScheme::BIO);

// New corpus from the given sentence indices (in the given order),
// reindexed from 0. Keeps the parent label alphabet so models trained on a
// subset still cover the full tag set.
Corpus subcorpus(const Corpus& corpus, const std::vector<std::size_t>& indices);

// Concatenation with merged label alphabets; sentences are reindexed.
Corpus concat(const Corpus& first, const Corpus& second);

}  // namespace crossweigh
