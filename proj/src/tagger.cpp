#include "crossweigh/tagger.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "crossweigh/random.hpp"
#include "crossweigh/util.hpp"

namespace crossweigh {

namespace {

std::string ascii_lower(const std::string& word) {
  std::string out = word;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Case/digit pattern: X for upper, x for lower, d for digit, other bytes
// kept as-is.
std::string shape_of(const std::string& word) {
  std::string out = word;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z')
      c = 'X';
    else if (c >= 'a' && c <= 'z')
      c = 'x';
    else if (c >= '0' && c <= '9')
      c = 'd';
  }
  return out;
}

// Tag sequence maximizing per-position scores plus transitions; ties go to
// the lowest tag index at every decision, including the final one.
std::vector<std::uint32_t> viterbi_ids(std::size_t num_tags,
                                       const std::vector<std::vector<double>>& scores,
                                       const std::vector<double>& transition,
                                       const std::vector<double>& start,
                                       const std::vector<double>& stop) {
  const std::size_t length = scores.size();
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(length * num_tags, 0.0);
  std::vector<std::uint32_t> backptr(length * num_tags, 0);

  for (std::size_t y = 0; y < num_tags; ++y) best[y] = start[y] + scores[0][y];
  for (std::size_t p = 1; p < length; ++p) {
    for (std::size_t y = 0; y < num_tags; ++y) {
      double best_prev = neg_inf;
      std::uint32_t arg = 0;
      for (std::size_t prev = 0; prev < num_tags; ++prev) {
        const double cand = best[(p - 1) * num_tags + prev] + transition[prev * num_tags + y];
        if (cand > best_prev) {
          best_prev = cand;
          arg = static_cast<std::uint32_t>(prev);
        }
      }
      best[p * num_tags + y] = best_prev + scores[p][y];
      backptr[p * num_tags + y] = arg;
    }
  }

  double best_total = neg_inf;
  std::uint32_t last = 0;
  for (std::size_t y = 0; y < num_tags; ++y) {
    const double cand = best[(length - 1) * num_tags + y] + stop[y];
    if (cand > best_total) {
      best_total = cand;
      last = static_cast<std::uint32_t>(y);
    }
  }

  std::vector<std::uint32_t> path(length, 0);
  path[length - 1] = last;
  for (std::size_t p = length - 1; p > 0; --p)
    path[p - 1] = backptr[p * num_tags + path[p]];
  return path;
}

}  // namespace

TaggerModel::TaggerModel(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    label_index_.emplace(labels_[i], static_cast<std::uint32_t>(i));
  const std::size_t t = labels_.size();
  transition_.assign(t * t, 0.0);
  start_.assign(t, 0.0);
  stop_.assign(t, 0.0);
}

std::uint32_t TaggerModel::label_index(std::string_view tag) const {
  auto it = label_index_.find(std::string(tag));
  if (it == label_index_.end())
    throw ValidationError("unknown tag '" + std::string(tag) + "'");
  return it->second;
}

double TaggerModel::feature_weight(std::string_view feature, std::string_view tag) const {
  auto it = feature_index_.find(std::string(feature));
  if (it == feature_index_.end()) return 0.0;
  return emission_[it->second * num_labels() + label_index(tag)];
}

double TaggerModel::transition_weight(std::string_view from, std::string_view to) const {
  return transition_[label_index(from) * num_labels() + label_index(to)];
}

double TaggerModel::start_weight(std::string_view tag) const {
  return start_[label_index(tag)];
}

double TaggerModel::stop_weight(std::string_view tag) const {
  return stop_[label_index(tag)];
}

std::uint32_t TaggerModel::intern_feature(const std::string& feature) {
  auto [it, inserted] = feature_index_.emplace(feature, static_cast<std::uint32_t>(feature_index_.size()));
  if (inserted) emission_.resize(feature_index_.size() * num_labels(), 0.0);
  return it->second;
}

void TaggerModel::set_feature_weight(std::string_view feature, std::string_view tag, double w) {
  const std::uint32_t id = intern_feature(std::string(feature));
  emission_[id * num_labels() + label_index(tag)] = w;
}

void TaggerModel::set_transition_weight(std::string_view from, std::string_view to, double w) {
  transition_[label_index(from) * num_labels() + label_index(to)] = w;
}

void TaggerModel::set_start_weight(std::string_view tag, double w) {
  start_[label_index(tag)] = w;
}

void TaggerModel::set_stop_weight(std::string_view tag, double w) {
  stop_[label_index(tag)] = w;
}

std::vector<double> TaggerModel::emission_scores(const Sentence& sentence,
                                                 std::size_t position) const {
  const std::size_t t = num_labels();
  std::vector<double> scores(t, 0.0);
  for (const std::string& feature : featurize(sentence, position)) {
    auto it = feature_index_.find(feature);
    if (it == feature_index_.end()) continue;  // unseen feature scores 0
    const double* row = emission_.data() + it->second * t;
    for (std::size_t y = 0; y < t; ++y) scores[y] += row[y];
  }
  return scores;
}

std::vector<std::string> featurize(const Sentence& sentence, std::size_t position) {
  const std::size_t length = sentence.tokens.size();
  if (position >= length)
    throw ValidationError("featurize: position " + std::to_string(position) +
                          " out of range for sentence of length " + std::to_string(length));
  const std::string& word = sentence.tokens[position].surface;

  std::vector<std::string> feats;
  feats.reserve(11);
  feats.push_back("w0=" + word);
  feats.push_back("w0.lower=" + ascii_lower(word));
  feats.push_back("shape=" + shape_of(word));
  for (std::size_t n = 1; n <= 3; ++n) {
    if (word.size() < n) break;
    feats.push_back("pre" + std::to_string(n) + "=" + word.substr(0, n));
    feats.push_back("suf" + std::to_string(n) + "=" + word.substr(word.size() - n));
  }
  if (position == 0)
    feats.push_back("bos");
  else
    feats.push_back("w-1=" + sentence.tokens[position - 1].surface);
  if (position + 1 == length)
    feats.push_back("eos");
  else
    feats.push_back("w+1=" + sentence.tokens[position + 1].surface);
  return feats;
}

std::vector<std::string> viterbi_decode(const TaggerModel& model, const Sentence& sentence) {
  if (sentence.tokens.empty())
    throw ValidationError("viterbi_decode: empty sentence");
  if (model.num_labels() == 0)
    throw ValidationError("viterbi_decode: model has no labels");

  std::vector<std::vector<double>> scores(sentence.tokens.size());
  for (std::size_t p = 0; p < sentence.tokens.size(); ++p)
    scores[p] = model.emission_scores(sentence, p);

  std::vector<double> transition(model.num_labels() * model.num_labels());
  std::vector<double> start(model.num_labels());
  std::vector<double> stop(model.num_labels());
  for (std::size_t a = 0; a < model.num_labels(); ++a) {
    start[a] = model.start_weight(model.labels()[a]);
    stop[a] = model.stop_weight(model.labels()[a]);
    for (std::size_t b = 0; b < model.num_labels(); ++b)
      transition[a * model.num_labels() + b] =
          model.transition_weight(model.labels()[a], model.labels()[b]);
  }

  std::vector<std::string> tags;
  for (std::uint32_t id : viterbi_ids(model.num_labels(), scores, transition, start, stop))
    tags.push_back(model.labels()[id]);
  return tags;
}

TaggerModel train(const Corpus& corpus, const WeightVector& weights,
                  const TrainConfig& config) {
  if (corpus.empty()) throw ValidationError("train: corpus is empty");
  if (weights.size() != corpus.size())
    throw ValidationError("train: " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(corpus.size()) + " sentences");
  if (config.epochs < 1) throw ValidationError("train: epochs must be >= 1");
  if (corpus.label_alphabet.empty())
    throw ValidationError("train: corpus has an empty label alphabet");

  TaggerModel model(corpus.label_alphabet);
  const std::size_t t = model.num_labels();

  // Intern every feature and gold tag up front; training then runs on ids.
  std::vector<std::vector<std::vector<std::uint32_t>>> feats(corpus.size());
  std::vector<std::vector<std::uint32_t>> gold(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence& s = corpus.sentences[i];
    feats[i].resize(s.size());
    gold[i].reserve(s.size());
    for (std::size_t p = 0; p < s.size(); ++p) {
      for (const std::string& f : featurize(s, p))
        feats[i][p].push_back(model.intern_feature(f));
      gold[i].push_back(model.label_index(s.tokens[p].tag));
    }
  }

  const std::size_t f_count = model.feature_index_.size();
  std::vector<double> em_u, tr_u, st_u, sp_u;
  if (config.averaging) {
    em_u.assign(f_count * t, 0.0);
    tr_u.assign(t * t, 0.0);
    st_u.assign(t, 0.0);
    sp_u.assign(t, 0.0);
  }

  std::vector<std::size_t> visit;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (weights.values[i] > 0.0) visit.push_back(i);

  std::mt19937_64 rng(splitmix64(config.shuffle_seed));
  double step = 1.0;
  std::vector<std::vector<double>> scores;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_in_place(visit, rng);
    for (std::size_t i : visit) {
      const auto& sent_feats = feats[i];
      const std::size_t length = sent_feats.size();

      scores.resize(length);
      for (std::size_t p = 0; p < length; ++p) {
        scores[p].assign(t, 0.0);
        for (std::uint32_t id : sent_feats[p]) {
          const double* row = model.emission_.data() + static_cast<std::size_t>(id) * t;
          for (std::size_t y = 0; y < t; ++y) scores[p][y] += row[y];
        }
      }
      const std::vector<std::uint32_t> pred =
          viterbi_ids(t, scores, model.transition_, model.start_, model.stop_);

      if (pred != gold[i]) {
        const double w = weights.values[i];
        auto bump = [&](std::vector<double>& main, std::vector<double>& accum,
                        std::size_t idx, double delta) {
          main[idx] += delta;
          if (config.averaging) accum[idx] += step * delta;
        };
        for (std::size_t p = 0; p < length; ++p) {
          if (gold[i][p] == pred[p]) continue;
          for (std::uint32_t id : sent_feats[p]) {
            bump(model.emission_, em_u, static_cast<std::size_t>(id) * t + gold[i][p], w);
            bump(model.emission_, em_u, static_cast<std::size_t>(id) * t + pred[p], -w);
          }
        }
        if (gold[i][0] != pred[0]) {
          bump(model.start_, st_u, gold[i][0], w);
          bump(model.start_, st_u, pred[0], -w);
        }
        for (std::size_t p = 1; p < length; ++p) {
          if (gold[i][p - 1] == pred[p - 1] && gold[i][p] == pred[p]) continue;
          bump(model.transition_, tr_u, gold[i][p - 1] * t + gold[i][p], w);
          bump(model.transition_, tr_u, static_cast<std::size_t>(pred[p - 1]) * t + pred[p], -w);
        }
        if (gold[i][length - 1] != pred[length - 1]) {
          bump(model.stop_, sp_u, gold[i][length - 1], w);
          bump(model.stop_, sp_u, pred[length - 1], -w);
        }
      }
      step += 1.0;
    }
  }

  if (config.averaging) {
    // step now counts every visit plus the initial state; subtracting the
    // update-time-weighted sums yields the trajectory average.
    for (std::size_t i = 0; i < model.emission_.size(); ++i)
      model.emission_[i] -= em_u[i] / step;
    for (std::size_t i = 0; i < model.transition_.size(); ++i)
      model.transition_[i] -= tr_u[i] / step;
    for (std::size_t i = 0; i < model.start_.size(); ++i) model.start_[i] -= st_u[i] / step;
    for (std::size_t i = 0; i < model.stop_.size(); ++i) model.stop_[i] -= sp_u[i] / step;
  }
  model.averaged_ = config.averaging;
  return model;
}

std::vector<std::string> predict(const TaggerModel& model, const Sentence& sentence) {
  return convert_iob1_to_bio(viterbi_decode(model, sentence));
}

std::string write_model(const TaggerModel& model) {
  std::string out = "crossweigh-model 1\n";
  out += "averaged ";
  out += model.averaged() ? '1' : '0';
  out += '\n';
  out += "labels " + std::to_string(model.num_labels());
  for (const std::string& label : model.labels()) out += " " + label;
  out += '\n';

  const std::size_t t = model.num_labels();
  for (std::size_t y = 0; y < t; ++y)
    if (model.start_[y] != 0.0)
      out += "start " + model.labels()[y] + " " + format_double(model.start_[y]) + "\n";
  for (std::size_t y = 0; y < t; ++y)
    if (model.stop_[y] != 0.0)
      out += "stop " + model.labels()[y] + " " + format_double(model.stop_[y]) + "\n";
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t b = 0; b < t; ++b)
      if (model.transition_[a * t + b] != 0.0)
        out += "trans " + model.labels()[a] + " " + model.labels()[b] + " " +
               format_double(model.transition_[a * t + b]) + "\n";

  std::vector<std::pair<std::string, std::uint32_t>> features(
      model.feature_index_.begin(), model.feature_index_.end());
  std::sort(features.begin(), features.end());
  for (const auto& [feature, id] : features)
    for (std::size_t y = 0; y < t; ++y) {
      const double w = model.emission_[static_cast<std::size_t>(id) * t + y];
      if (w != 0.0)
        out += "feat " + feature + " " + model.labels()[y] + " " + format_double(w) + "\n";
    }
  return out;
}

TaggerModel read_model(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  auto fail = [](std::size_t line_no, const std::string& what) -> ParseError {
    return ParseError("model line " + std::to_string(line_no) + ": " + what);
  };

  if (lines.empty() || lines[0] != "crossweigh-model 1")
    throw ParseError("model line 1: expected header 'crossweigh-model 1'");

  auto fields_at = [&](std::size_t idx) { return split_fields(lines[idx]); };
  if (lines.size() < 3) throw ParseError("model: truncated file");

  const auto averaged_fields = fields_at(1);
  if (averaged_fields.size() != 2 || averaged_fields[0] != "averaged")
    throw fail(2, "expected 'averaged 0|1'");
  const bool averaged = averaged_fields[1] == "1";

  const auto label_fields = fields_at(2);
  if (label_fields.size() < 2 || label_fields[0] != "labels")
    throw fail(3, "expected 'labels <count> <tags...>'");
  std::vector<std::string> labels;
  for (std::size_t i = 2; i < label_fields.size(); ++i)
    labels.emplace_back(label_fields[i]);
  if (std::to_string(labels.size()) != std::string(label_fields[1]))
    throw fail(3, "label count mismatch");

  TaggerModel model(std::move(labels));
  for (std::size_t li = 3; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = fields_at(li);
    auto weight_of = [&](std::string_view text_value) {
      const std::optional<double> w = parse_double(text_value);
      if (!w) throw fail(li + 1, "bad weight '" + std::string(text_value) + "'");
      return *w;
    };
    try {
      if (fields[0] == "start" && fields.size() == 3)
        model.set_start_weight(fields[1], weight_of(fields[2]));
      else if (fields[0] == "stop" && fields.size() == 3)
        model.set_stop_weight(fields[1], weight_of(fields[2]));
      else if (fields[0] == "trans" && fields.size() == 4)
        model.set_transition_weight(fields[1], fields[2], weight_of(fields[3]));
      else if (fields[0] == "feat" && fields.size() == 4)
        model.set_feature_weight(fields[1], fields[2], weight_of(fields[3]));
      else
        throw fail(li + 1, "unrecognized entry '" + std::string(fields[0]) + "'");
    } catch (const ValidationError& e) {
      throw fail(li + 1, e.what());
    }
  }
  model.averaged_ = averaged;
  return model;
}

}  // namespace crossweigh
