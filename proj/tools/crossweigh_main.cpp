#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crossweigh/crossweigh.hpp"
#include "crossweigh/manifest.hpp"
#include "crossweigh/random.hpp"
#include "crossweigh/util.hpp"

namespace cw = crossweigh;

namespace {

// Exit codes: 0 success, 2 I/O, 3 validation, 4 pipeline infeasibility.
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInfeasible = 4;

// Stream tag so every command derives the tagger shuffle seed from --seed
// the same way; `crossweigh` final training then matches a plain `train`
// run with the same seed byte for byte.
constexpr std::uint64_t kCliTrainStream = 0x7EA1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cw::IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw cw::IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cw::IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw cw::IoError("cannot write " + path);
}

cw::TagScheme parse_scheme(const std::string& name) {
  if (name == "iob1") return cw::TagScheme::IOB1;
  if (name == "bio") return cw::TagScheme::BIO;
  throw cw::ValidationError("unknown tag scheme '" + name + "' (expected iob1 or bio)");
}

struct LoadedCorpus {
  cw::Corpus corpus;
  std::string path;
  std::string digest;
};

LoadedCorpus load_corpus(const std::string& path, int tag_column,
                         const std::string& scheme) {
  const std::string text = read_file(path);
  LoadedCorpus loaded;
  loaded.path = path;
  loaded.digest = cw::to_hex(cw::fnv1a64(text));
  loaded.corpus = cw::parse_conll(text, tag_column, parse_scheme(scheme));
  return loaded;
}

std::set<std::size_t> read_truth_file(const std::string& path) {
  const std::string text = read_file(path);
  std::set<std::size_t> truth;
  const auto lines = cw::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    std::size_t value = 0;
    try {
      value = std::stoul(std::string(lines[li]));
    } catch (const std::exception&) {
      throw cw::ValidationError(path + " line " + std::to_string(li + 1) +
                                ": not a sentence index");
    }
    truth.insert(value);
  }
  return truth;
}

std::vector<cw::NoiseKind> parse_kinds_csv(const std::string& csv) {
  std::vector<cw::NoiseKind> kinds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto kind = cw::parse_noise_kind(item);
    if (!kind)
      throw cw::ValidationError("unknown noise kind '" + item +
                                "' (expected type-swap, boundary-shrink, "
                                "boundary-grow or entity-drop)");
    kinds.push_back(*kind);
  }
  return kinds;
}

double scored_f1(const cw::TaggerModel& model, const cw::Corpus& test) {
  std::vector<std::vector<std::string>> predictions;
  predictions.reserve(test.size());
  for (const cw::Sentence& s : test.sentences)
    predictions.push_back(cw::predict(model, s));
  return cw::entity_f1(test, predictions).f1;
}

// Shared flags.
struct CommonOpts {
  int tag_column = -1;
  std::string scheme = "iob1";
  std::string out_prefix;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_prefix) {
  opts.out_prefix = default_prefix;
  cmd->add_option("--tag-column", opts.tag_column,
                  "0-based tag column; -1 = last column (default)");
  cmd->add_option("--scheme", opts.scheme,
                  "input tag scheme, iob1 or bio; iob1 is converted to BIO "
                  "(a no-op on BIO data)");
  cmd->add_option("-o,--out", opts.out_prefix, "output file prefix");
}

struct CrossWeighOpts {
  int k = 10;
  int t = 3;
  double epsilon = 0.7;
  std::string heuristic = "ratio";
  std::string mode = "on";
  std::uint64_t seed = 1;
  int jobs = 1;
  int epochs = 5;
  bool no_averaging = false;
};

void add_crossweigh_opts(CLI::App* cmd, CrossWeighOpts& opts) {
  cmd->add_option("-k,--folds", opts.k, "fold count (default 10)");
  cmd->add_option("-t,--iterations", opts.t, "estimation iterations (default 3)");
  cmd->add_option("--epsilon", opts.epsilon, "weight base in (0,1) (default 0.7)");
  cmd->add_option("--heuristic", opts.heuristic,
                  "confidence heuristic: ratio, at-least-one, majority, all");
  cmd->add_option("--mode", opts.mode,
                  "entity-disjoint filtering: on, off, random-discard");
  cmd->add_option("--seed", opts.seed, "master seed; all randomness derives from it");
  cmd->add_option("--jobs", opts.jobs, "max concurrent fold trainings");
  cmd->add_option("--epochs", opts.epochs, "tagger training epochs (default 5)");
  cmd->add_flag("--no-averaging", opts.no_averaging, "disable parameter averaging");
}

cw::CrossWeighConfig to_config(const CrossWeighOpts& opts) {
  cw::CrossWeighConfig config;
  config.k = opts.k;
  config.t = opts.t;
  config.epsilon = opts.epsilon;
  const auto heuristic = cw::parse_heuristic(opts.heuristic);
  if (!heuristic) throw cw::ValidationError("unknown heuristic '" + opts.heuristic + "'");
  config.heuristic = *heuristic;
  const auto mode = cw::parse_mode(opts.mode);
  if (!mode) throw cw::ValidationError("unknown mode '" + opts.mode + "'");
  config.entity_disjoint = *mode;
  config.seed = opts.seed;
  config.jobs = opts.jobs;
  return config;
}

cw::TrainConfig to_train_config(const CrossWeighOpts& opts) {
  cw::TrainConfig config;
  config.epochs = opts.epochs;
  config.shuffle_seed = cw::derive_seed(opts.seed, kCliTrainStream);
  config.averaging = !opts.no_averaging;
  return config;
}

void append_crossweigh_params(cw::RunManifest& manifest, const CrossWeighOpts& opts,
                              const CommonOpts& common) {
  manifest.params.emplace_back("k", std::to_string(opts.k));
  manifest.params.emplace_back("t", std::to_string(opts.t));
  manifest.params.emplace_back("epsilon", cw::format_double(opts.epsilon));
  manifest.params.emplace_back("heuristic", opts.heuristic);
  manifest.params.emplace_back("mode", opts.mode);
  manifest.params.emplace_back("seed", std::to_string(opts.seed));
  manifest.params.emplace_back("jobs", std::to_string(opts.jobs));
  manifest.params.emplace_back("epochs", std::to_string(opts.epochs));
  manifest.params.emplace_back("averaging", opts.no_averaging ? "0" : "1");
  manifest.params.emplace_back("tag_column", std::to_string(common.tag_column));
  manifest.params.emplace_back("scheme", common.scheme);
}

int cmd_train(const CommonOpts& common, const std::string& train_path,
              const std::string& weights_path, const std::string& test_path,
              std::uint64_t seed, int epochs, bool no_averaging) {
  cw::RunManifest manifest;
  manifest.command = "train";

  const LoadedCorpus train_data = load_corpus(train_path, common.tag_column, common.scheme);
  manifest.inputs.emplace_back(train_data.path, train_data.digest);

  cw::WeightVector weights = cw::WeightVector::uniform(train_data.corpus.size());
  if (!weights_path.empty()) {
    const std::string text = read_file(weights_path);
    manifest.inputs.emplace_back(weights_path, cw::to_hex(cw::fnv1a64(text)));
    weights = cw::read_weights(text);
    if (weights.size() != train_data.corpus.size())
      throw cw::ValidationError(weights_path + ": " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(train_data.corpus.size()) +
                                " sentences");
  }

  cw::TrainConfig train_config;
  train_config.epochs = epochs;
  train_config.shuffle_seed = cw::derive_seed(seed, kCliTrainStream);
  train_config.averaging = !no_averaging;

  manifest.params.emplace_back("seed", std::to_string(seed));
  manifest.params.emplace_back("epochs", std::to_string(epochs));
  manifest.params.emplace_back("averaging", no_averaging ? "0" : "1");
  manifest.params.emplace_back("tag_column", std::to_string(common.tag_column));
  manifest.params.emplace_back("scheme", common.scheme);

  const cw::TaggerModel model = cw::train(train_data.corpus, weights, train_config);
  const std::string model_path = common.out_prefix + ".model";
  write_file(model_path, cw::write_model(model));
  manifest.outputs.emplace_back("model", model_path);

  if (!test_path.empty()) {
    const LoadedCorpus test_data = load_corpus(test_path, common.tag_column, common.scheme);
    manifest.inputs.emplace_back(test_data.path, test_data.digest);
    std::vector<std::vector<std::string>> predictions;
    for (const cw::Sentence& s : test_data.corpus.sentences)
      predictions.push_back(cw::predict(model, s));
    std::cout << cw::write_score_report(cw::entity_f1(test_data.corpus, predictions));
  }

  write_file(common.out_prefix + ".manifest", cw::write_manifest(manifest));
  return 0;
}

int cmd_crossweigh(const CommonOpts& common, const CrossWeighOpts& opts,
                   const std::string& train_path, const std::string& dev_path,
                   bool exclude_dev, const std::string& test_path,
                   const std::string& truth_path, bool compare_baseline) {
  cw::RunManifest manifest;
  manifest.command = "crossweigh";

  const LoadedCorpus train_data = load_corpus(train_path, common.tag_column, common.scheme);
  manifest.inputs.emplace_back(train_data.path, train_data.digest);
  cw::Corpus corpus = train_data.corpus;
  if (!dev_path.empty() && !exclude_dev) {
    const LoadedCorpus dev_data = load_corpus(dev_path, common.tag_column, common.scheme);
    manifest.inputs.emplace_back(dev_data.path, dev_data.digest);
    corpus = cw::concat(corpus, dev_data.corpus);
  }

  const cw::CrossWeighConfig config = to_config(opts);
  const cw::TrainConfig train_config = to_train_config(opts);
  append_crossweigh_params(manifest, opts, common);

  auto [model, report] = cw::run(corpus, config, train_config);

  if (!truth_path.empty()) {
    const std::set<std::size_t> truth = read_truth_file(truth_path);
    manifest.inputs.emplace_back(truth_path, cw::to_hex(cw::fnv1a64(read_file(truth_path))));
    cw::MistakeCounts counts;
    counts.t = config.t;
    for (const cw::SentenceAudit& entry : report.sentences)
      counts.delta.push_back(entry.delta);
    report.detection =
        cw::mistake_detection_metrics(cw::flagged_set(counts), truth, corpus.size());
  }

  cw::WeightVector weights;
  for (const cw::SentenceAudit& entry : report.sentences)
    weights.values.push_back(entry.weight);

  const std::string weights_out = common.out_prefix + ".weights";
  const std::string audit_out = common.out_prefix + ".audit";
  const std::string model_out = common.out_prefix + ".model";
  write_file(weights_out, cw::write_weights(weights));
  write_file(audit_out, cw::write_audit_report(report));
  write_file(model_out, cw::write_model(model));
  manifest.outputs.emplace_back("weights", weights_out);
  manifest.outputs.emplace_back("report", audit_out);
  manifest.outputs.emplace_back("model", model_out);

  std::cout << "flagged " << report.flagged << " of " << corpus.size() << " sentences\n";
  if (report.detection) {
    std::cout << "detection_precision " << cw::format_double(report.detection->precision)
              << "\ndetection_recall " << cw::format_double(report.detection->recall)
              << "\ndetection_f1 " << cw::format_double(report.detection->f1) << "\n";
  }

  if (!test_path.empty()) {
    const LoadedCorpus test_data = load_corpus(test_path, common.tag_column, common.scheme);
    manifest.inputs.emplace_back(test_data.path, test_data.digest);
    std::cout << "crossweigh_f1 " << cw::format_double(scored_f1(model, test_data.corpus))
              << "\n";
    if (compare_baseline) {
      const cw::TaggerModel baseline =
          cw::train(corpus, cw::WeightVector::uniform(corpus.size()), train_config);
      std::cout << "baseline_f1 "
                << cw::format_double(scored_f1(baseline, test_data.corpus)) << "\n";
    }
  }

  write_file(common.out_prefix + ".manifest", cw::write_manifest(manifest));
  return 0;
}

int cmd_audit(const CommonOpts& common, const CrossWeighOpts& opts,
              const std::string& train_path, const std::string& dev_path,
              bool exclude_dev, const std::string& truth_path) {
  cw::RunManifest manifest;
  manifest.command = "audit";

  const LoadedCorpus train_data = load_corpus(train_path, common.tag_column, common.scheme);
  manifest.inputs.emplace_back(train_data.path, train_data.digest);
  cw::Corpus corpus = train_data.corpus;
  if (!dev_path.empty() && !exclude_dev) {
    const LoadedCorpus dev_data = load_corpus(dev_path, common.tag_column, common.scheme);
    manifest.inputs.emplace_back(dev_data.path, dev_data.digest);
    corpus = cw::concat(corpus, dev_data.corpus);
  }

  const cw::CrossWeighConfig config = to_config(opts);
  const cw::TrainConfig train_config = to_train_config(opts);
  append_crossweigh_params(manifest, opts, common);

  std::optional<std::set<std::size_t>> truth;
  if (!truth_path.empty()) {
    truth = read_truth_file(truth_path);
    manifest.inputs.emplace_back(truth_path, cw::to_hex(cw::fnv1a64(read_file(truth_path))));
  }

  const cw::MistakeAuditReport report = cw::audit(corpus, config, train_config, truth);

  const std::string audit_out = common.out_prefix + ".audit";
  write_file(audit_out, cw::write_audit_report(report));
  manifest.outputs.emplace_back("report", audit_out);

  std::cout << "flagged " << report.flagged << " of " << corpus.size() << " sentences\n";
  if (report.detection) {
    std::cout << "detection_precision " << cw::format_double(report.detection->precision)
              << "\ndetection_recall " << cw::format_double(report.detection->recall)
              << "\ndetection_f1 " << cw::format_double(report.detection->f1) << "\n";
  }

  write_file(common.out_prefix + ".manifest", cw::write_manifest(manifest));
  return 0;
}

int cmd_inject_noise(const CommonOpts& common, const std::string& input_path, double rate,
                     const std::string& kinds_csv, std::uint64_t seed) {
  cw::RunManifest manifest;
  manifest.command = "inject-noise";

  const LoadedCorpus input = load_corpus(input_path, common.tag_column, common.scheme);
  manifest.inputs.emplace_back(input.path, input.digest);

  cw::NoiseSpec spec;
  spec.rate = rate;
  spec.seed = seed;
  if (!kinds_csv.empty()) spec.kinds = parse_kinds_csv(kinds_csv);

  manifest.params.emplace_back("rate", cw::format_double(rate));
  std::string kind_names;
  for (const cw::NoiseKind kind : spec.kinds) {
    if (!kind_names.empty()) kind_names += ',';
    kind_names += cw::noise_kind_name(kind);
  }
  manifest.params.emplace_back("kinds", kind_names);
  manifest.params.emplace_back("seed", std::to_string(seed));
  manifest.params.emplace_back("tag_column", std::to_string(common.tag_column));
  manifest.params.emplace_back("scheme", common.scheme);

  const auto [noisy, corrupted] = cw::inject_noise(input.corpus, spec);

  const std::string corpus_out = common.out_prefix + ".conll";
  const std::string truth_out = common.out_prefix + ".truth";
  write_file(corpus_out, cw::write_conll(noisy));
  std::string truth_text;
  for (std::size_t idx : corrupted) truth_text += std::to_string(idx) + "\n";
  write_file(truth_out, truth_text);
  manifest.outputs.emplace_back("corpus", corpus_out);
  manifest.outputs.emplace_back("truth", truth_out);

  std::cout << "corrupted " << corrupted.size() << " of " << input.corpus.size()
            << " sentences\n";

  write_file(common.out_prefix + ".manifest", cw::write_manifest(manifest));
  return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& gold_path,
                 const std::string& pred_path) {
  cw::RunManifest manifest;
  manifest.command = "evaluate";

  const LoadedCorpus gold = load_corpus(gold_path, common.tag_column, common.scheme);
  const LoadedCorpus pred = load_corpus(pred_path, common.tag_column, common.scheme);
  manifest.inputs.emplace_back(gold.path, gold.digest);
  manifest.inputs.emplace_back(pred.path, pred.digest);
  manifest.params.emplace_back("tag_column", std::to_string(common.tag_column));
  manifest.params.emplace_back("scheme", common.scheme);

  if (pred.corpus.size() != gold.corpus.size())
    throw cw::ValidationError("gold has " + std::to_string(gold.corpus.size()) +
                              " sentences, predictions have " +
                              std::to_string(pred.corpus.size()));
  for (std::size_t i = 0; i < gold.corpus.size(); ++i) {
    const auto& gs = gold.corpus.sentences[i];
    const auto& ps = pred.corpus.sentences[i];
    for (std::size_t p = 0; p < std::min(gs.size(), ps.size()); ++p)
      if (gs.tokens[p].surface != ps.tokens[p].surface)
        throw cw::ValidationError("sentence " + std::to_string(i) + " token " +
                                  std::to_string(p) + ": surface mismatch ('" +
                                  gs.tokens[p].surface + "' vs '" + ps.tokens[p].surface +
                                  "')");
  }

  std::vector<std::vector<std::string>> predictions;
  predictions.reserve(pred.corpus.size());
  for (const cw::Sentence& s : pred.corpus.sentences) predictions.push_back(cw::tags_of(s));

  const cw::EntityScore score = cw::entity_f1(gold.corpus, predictions);
  const std::string report = cw::write_score_report(score);
  std::cout << report;

  const std::string score_out = common.out_prefix + ".score";
  write_file(score_out, report);
  manifest.outputs.emplace_back("score", score_out);
  write_file(common.out_prefix + ".manifest", cw::write_manifest(manifest));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CrossWeigh: label-mistake detection and weighted training "
               "for CoNLL-style NER corpora"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a weighted tagger");
  CommonOpts train_common;
  std::string train_train, train_weights, train_test;
  std::uint64_t train_seed = 1;
  int train_epochs = 5;
  bool train_no_avg = false;
  train_cmd->add_option("--train", train_train, "training corpus")->required();
  train_cmd->add_option("--weights", train_weights, "weights sidecar (default uniform)");
  train_cmd->add_option("--test", train_test, "test corpus; prints entity F1");
  train_cmd->add_option("--seed", train_seed, "master seed");
  train_cmd->add_option("--epochs", train_epochs, "training epochs (default 5)");
  train_cmd->add_flag("--no-averaging", train_no_avg, "disable parameter averaging");
  add_common(train_cmd, train_common, "train");

  // crossweigh
  auto* cw_cmd = app.add_subcommand(
      "crossweigh", "estimate mistakes, reweigh, train the final model");
  CommonOpts cw_common;
  CrossWeighOpts cw_opts;
  std::string cw_train, cw_dev, cw_test, cw_truth;
  bool cw_exclude_dev = false, cw_compare = false;
  cw_cmd->add_option("--train", cw_train, "training corpus")->required();
  cw_cmd->add_option("--dev", cw_dev, "dev corpus, concatenated into training data");
  cw_cmd->add_flag("--exclude-dev", cw_exclude_dev, "ignore --dev");
  cw_cmd->add_option("--test", cw_test, "test corpus; prints final-model entity F1");
  cw_cmd->add_option("--truth", cw_truth,
                     "known-mistake sentence indices; adds detection P/R/F1");
  cw_cmd->add_flag("--compare-baseline", cw_compare,
                   "also train and score an unweighted baseline");
  add_crossweigh_opts(cw_cmd, cw_opts);
  add_common(cw_cmd, cw_common, "crossweigh");

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "mistake estimation only");
  CommonOpts audit_common;
  CrossWeighOpts audit_opts;
  std::string audit_train, audit_dev, audit_truth;
  bool audit_exclude_dev = false;
  audit_cmd->add_option("--train", audit_train, "corpus to audit")->required();
  audit_cmd->add_option("--dev", audit_dev, "dev corpus, concatenated");
  audit_cmd->add_flag("--exclude-dev", audit_exclude_dev, "ignore --dev");
  audit_cmd->add_option("--truth", audit_truth,
                        "known-mistake sentence indices; adds detection P/R/F1");
  add_crossweigh_opts(audit_cmd, audit_opts);
  add_common(audit_cmd, audit_common, "audit");

  // inject-noise
  auto* noise_cmd =
      app.add_subcommand("inject-noise", "corrupt a corpus and record ground truth");
  CommonOpts noise_common;
  std::string noise_input, noise_kinds;
  double noise_rate = 0.1;
  std::uint64_t noise_seed = 1;
  noise_cmd->add_option("--input", noise_input, "corpus to corrupt")->required();
  noise_cmd->add_option("--rate", noise_rate, "fraction of sentences to corrupt, in (0,1)");
  noise_cmd->add_option("--kinds", noise_kinds,
                        "comma list of type-swap, boundary-shrink, boundary-grow, "
                        "entity-drop (default all)");
  noise_cmd->add_option("--seed", noise_seed, "master seed");
  add_common(noise_cmd, noise_common, "noisy");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "entity-wise P/R/F1 of predictions");
  CommonOpts eval_common;
  std::string eval_gold, eval_pred;
  eval_cmd->add_option("--gold", eval_gold, "gold corpus")->required();
  eval_cmd->add_option("--pred", eval_pred, "predicted corpus, aligned to gold")->required();
  add_common(eval_cmd, eval_common, "score");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed())
      return cmd_train(train_common, train_train, train_weights, train_test, train_seed,
                       train_epochs, train_no_avg);
    if (cw_cmd->parsed())
      return cmd_crossweigh(cw_common, cw_opts, cw_train, cw_dev, cw_exclude_dev, cw_test,
                            cw_truth, cw_compare);
    if (audit_cmd->parsed())
      return cmd_audit(audit_common, audit_opts, audit_train, audit_dev, audit_exclude_dev,
                       audit_truth);
    if (noise_cmd->parsed())
      return cmd_inject_noise(noise_common, noise_input, noise_rate, noise_kinds,
                              noise_seed);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_common, eval_gold, eval_pred);
  } catch (const cw::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cw::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const cw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const cw::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
