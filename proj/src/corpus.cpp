#include "crossweigh/corpus.hpp"

#include <algorithm>
#include <utility>

#include "crossweigh/util.hpp"

namespace crossweigh {

bool valid_tag(std::string_view tag) {
  if (tag == "O") return true;
  if (tag.size() < 3) return false;
  return (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-';
}

namespace {

std::string_view type_of(std::string_view tag) {
  return tag == "O" ? std::string_view{} : tag.substr(2);
}

std::vector<std::string> build_alphabet(const std::vector<Sentence>& sentences) {
  std::set<std::string> tags;
  for (const Sentence& s : sentences)
    for (const Token& t : s.tokens) tags.insert(t.tag);
  std::vector<std::string> alphabet;
  if (tags.erase("O") > 0) alphabet.push_back("O");
  alphabet.insert(alphabet.end(), tags.begin(), tags.end());
  return alphabet;
}

// Index of the first token whose tag breaks BIO order, if any.
std::optional<std::size_t> first_bio_violation(const std::vector<std::string>& tags) {
  std::string_view prev = "O";
  for (std::size_t i = 0; i < tags.size(); ++i) {
    std::string_view tag = tags[i];
    if (tag[0] == 'I' && (prev == "O" || type_of(prev) != type_of(tag))) return i;
    prev = tag;
  }
  return std::nullopt;
}

}  // namespace

Corpus parse_conll(std::string_view text, int tag_column, TagScheme scheme) {
  Corpus corpus;
  corpus.scheme = scheme;

  std::vector<Token> tokens;
  std::vector<std::size_t> token_lines;
  std::optional<std::string> doc_id;
  int doc_counter = 0;

  auto flush = [&] {
    if (tokens.empty()) return;
    Sentence s;
    s.index = corpus.sentences.size();
    s.tokens = std::move(tokens);
    s.doc_id = doc_id;
    tokens.clear();

    std::vector<std::string> tags = tags_of(s);
    if (scheme == TagScheme::IOB1) {
      tags = convert_iob1_to_bio(tags);
      for (std::size_t i = 0; i < tags.size(); ++i) s.tokens[i].tag = tags[i];
    } else if (auto bad = first_bio_violation(tags)) {
      throw ParseError("line " + std::to_string(token_lines[*bad]) +
                       ": tag " + tags[*bad] +
                       " continues no entity (broken BIO sequence)");
    }
    token_lines.clear();
    corpus.sentences.push_back(std::move(s));
  };

  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const std::vector<std::string_view> fields = split_fields(lines[li]);
    if (fields.empty()) {
      flush();
      continue;
    }
    if (fields[0] == "-DOCSTART-") {
      flush();
      doc_id = "d" + std::to_string(doc_counter++);
      continue;
    }
    const std::size_t col = tag_column < 0
                                ? fields.size() - 1
                                : static_cast<std::size_t>(tag_column);
    if (col >= fields.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(col + 1) + " columns, got " +
                       std::to_string(fields.size()));
    std::string_view tag = fields[col];
    if (!valid_tag(tag))
      throw ParseError("line " + std::to_string(line_no) + ": unknown tag '" +
                       std::string(tag) + "' (expected O, B-<type> or I-<type>)");
    tokens.push_back(Token{std::string(fields[0]), std::string(tag)});
    token_lines.push_back(line_no);
  }
  flush();

  corpus.label_alphabet = build_alphabet(corpus.sentences);
  return corpus;
}

std::vector<std::string> convert_iob1_to_bio(const std::vector<std::string>& tags) {
  std::vector<std::string> out = tags;
  std::string_view prev = "O";
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag[0] == 'I' && (prev == "O" || type_of(prev) != type_of(tag)))
      out[i] = "B" + tag.substr(1);
    prev = tag;
  }
  return out;
}

std::vector<EntitySpan> extract_entities(const Sentence& sentence) {
  std::vector<EntitySpan> spans;
  bool open = false;
  std::size_t open_start = 0;
  std::string open_type;

  auto close = [&](std::size_t end) {
    if (!open) return;
    EntitySpan span;
    span.start = open_start;
    span.end = end;
    span.entity_type = open_type;
    for (std::size_t i = span.start; i < end; ++i) {
      if (i > span.start) span.surface += ' ';
      span.surface += sentence.tokens[i].surface;
    }
    spans.push_back(std::move(span));
    open = false;
  };

  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const std::string& tag = sentence.tokens[i].tag;
    if (tag == "O") {
      close(i);
    } else if (tag[0] == 'B') {
      close(i);
      open = true;
      open_start = i;
      open_type = std::string(type_of(tag));
    } else {  // I-
      if (!open || open_type != type_of(tag))
        throw ValidationError("token " + std::to_string(i) + ": tag " + tag +
                              " continues no entity (broken BIO sequence)");
    }
  }
  close(sentence.tokens.size());
  return spans;
}

std::set<std::string> surface_set(const Sentence& sentence) {
  std::set<std::string> surfaces;
  for (EntitySpan& span : extract_entities(sentence))
    surfaces.insert(std::move(span.surface));
  return surfaces;
}

std::string write_conll(const Corpus& corpus) {
  std::string out;
  std::optional<std::string> last_doc;
  for (const Sentence& s : corpus.sentences) {
    if (s.doc_id && s.doc_id != last_doc) {
      out += "-DOCSTART- O\n\n";
      last_doc = s.doc_id;
    }
    for (const Token& t : s.tokens) {
      out += t.surface;
      out += ' ';
      out += t.tag;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

WeightVector read_weights(std::string_view text) {
  WeightVector weights;
  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (line.empty()) {
      if (li + 1 == lines.size()) break;  // trailing newline
      throw ValidationError("weights line " + std::to_string(li + 1) + ": empty line");
    }
    const std::optional<double> value = parse_double(line);
    if (!value)
      throw ValidationError("weights line " + std::to_string(li + 1) +
                            ": not a number: '" + std::string(line) + "'");
    if (!(*value > 0.0 && *value <= 1.0))
      throw ValidationError("weights line " + std::to_string(li + 1) + ": weight " +
                            std::string(line) + " outside (0, 1]");
    weights.values.push_back(*value);
  }
  return weights;
}

std::string write_weights(const WeightVector& weights) {
  std::string out;
  for (std::size_t i = 0; i < weights.values.size(); ++i) {
    const double w = weights.values[i];
    if (!(w > 0.0 && w <= 1.0))
      throw ValidationError("weight " + std::to_string(i) + " = " + format_double(w) +
                            " outside (0, 1]");
    out += format_double(w);
    out += '\n';
  }
  return out;
}

std::vector<std::string> tags_of(const Sentence& sentence) {
  std::vector<std::string> tags;
  tags.reserve(sentence.tokens.size());
  for (const Token& t : sentence.tokens) tags.push_back(t.tag);
  return tags;
}

Corpus make_corpus(std::vector<Sentence> sentences, TagScheme scheme) {
  Corpus corpus;
  corpus.scheme = scheme;
  corpus.sentences = std::move(sentences);
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) corpus.sentences[i].index = i;
  corpus.label_alphabet = build_alphabet(corpus.sentences);
  return corpus;
}

Corpus subcorpus(const Corpus& corpus, const std::vector<std::size_t>& indices) {
  Corpus sub;
  sub.label_alphabet = corpus.label_alphabet;
  sub.scheme = corpus.scheme;
  sub.sentences.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= corpus.sentences.size())
      throw ValidationError("sentence index " + std::to_string(idx) + " out of range");
    Sentence s = corpus.sentences[idx];
    s.index = sub.sentences.size();
    sub.sentences.push_back(std::move(s));
  }
  return sub;
}

Corpus concat(const Corpus& first, const Corpus& second) {
  Corpus out;
  out.scheme = first.scheme;
  out.sentences = first.sentences;
  out.sentences.insert(out.sentences.end(), second.sentences.begin(),
                       second.sentences.end());
  for (std::size_t i = 0; i < out.sentences.size(); ++i) out.sentences[i].index = i;
  out.label_alphabet = build_alphabet(out.sentences);
  return out;
}

}  // namespace crossweigh
