#include "support/synthetic.hpp"

#include <array>

#include "crossweigh/random.hpp"
#include "support/generators.hpp"

namespace crossweigh::testing {

namespace {

constexpr std::array<const char*, 20> kOnsets = {
    "Bar", "Dor", "Kel", "Mir", "Tav", "Zan", "Fen",  "Gol", "Har", "Jor",
    "Lun", "Nor", "Pel", "Quin", "Ros", "Sel", "Tor", "Van", "Wex", "Yor"};
constexpr std::array<const char*, 5> kVowels = {"a", "e", "i", "o", "u"};
constexpr std::array<const char*, 10> kCodas = {"k", "l", "m", "n", "r",
                                                "s", "t", "v", "x", "z"};

std::string base_name(std::size_t i) {
  return std::string(kOnsets[i / 50]) + kVowels[(i / 10) % 5] + kCodas[i % 10];
}

struct Slice {
  std::size_t begin;
  std::size_t size;
};
constexpr Slice kPer = {0, 350};
constexpr Slice kLoc = {350, 250};
constexpr Slice kOrg = {600, 250};
constexpr Slice kMisc = {850, 150};
constexpr std::size_t kFrequentTier = 12;  // heavily reused names per type

constexpr std::array<const char*, 6> kLocPrefixes = {"North", "South", "East",
                                                     "West", "Port", "Lake"};
constexpr std::array<const char*, 6> kOrgSuffixes = {"United", "Wanderers", "Holdings",
                                                     "Industries", "Athletic", "City"};
constexpr std::array<const char*, 4> kMiscSuffixes = {"Cup", "Games", "Prize", "Open"};

const std::vector<std::vector<std::string>>& templates() {
  static const std::vector<std::vector<std::string>> all = [] {
    const std::vector<std::string> raw = {
        "{PER} scored twice for {ORG} on friday .",
        "{ORG} signed {PER} from {ORG} yesterday .",
        "{PER} flew to {LOC} after the match .",
        "the {MISC} final will be played in {LOC} .",
        "{ORG} {NUM} {ORG} {NUM}",
        "shares of {ORG} fell sharply on monday .",
        "{PER} was born in {LOC} in {NUM} .",
        "{LOC} will host the {MISC} next year .",
        "officials in {LOC} welcomed the decision .",
        "{PER} , the coach of {ORG} , resigned .",
        "{ORG} beat {ORG} {NUM} - {NUM} in {LOC} .",
        "the president of {ORG} met {PER} on tuesday .",
        "{PER} won the {MISC} for a second time .",
        "heavy rain hit {LOC} over the weekend .",
        "{ORG} announced a new deal with {ORG} .",
        "thousands gathered in {LOC} for the {MISC} .",
        "{PER} and {PER} shared the lead in {LOC} .",
        "results from the {MISC} in {LOC} on saturday .",
        "trading was quiet on thursday .",
        "{NUM} people attended the game .",
    };
    std::vector<std::vector<std::string>> split;
    for (const std::string& line : raw) {
      std::vector<std::string> items;
      std::size_t start = 0;
      while (start < line.size()) {
        std::size_t space = line.find(' ', start);
        if (space == std::string::npos) space = line.size();
        items.push_back(line.substr(start, space - start));
        start = space + 1;
      }
      split.push_back(std::move(items));
    }
    return split;
  }();
  return all;
}

// Each base maps to one fixed surface form, so repeated draws of a base
// repeat the exact surface.
std::vector<Token> surface_tokens(const std::string& type, const Slice& slice,
                                  std::size_t idx, bool multi_token) {
  const std::string head = base_name(slice.begin + idx);
  const std::size_t style = idx % 20;
  std::vector<Token> tokens;
  auto tag = [&](std::size_t pos) { return (pos == 0 ? "B-" : "I-") + type; };

  if (multi_token && type == "PER" && style < 7) {
    std::size_t partner = (idx * 7 + 13) % slice.size;
    if (partner == idx) partner = (partner + 1) % slice.size;
    tokens.push_back({head, tag(0)});
    tokens.push_back({base_name(slice.begin + partner), tag(1)});
  } else if (multi_token && type == "LOC" && style < 4) {
    tokens.push_back({kLocPrefixes[idx % kLocPrefixes.size()], tag(0)});
    tokens.push_back({head, tag(1)});
  } else if (multi_token && type == "ORG" && style < 7) {
    tokens.push_back({head, tag(0)});
    tokens.push_back({kOrgSuffixes[idx % kOrgSuffixes.size()], tag(1)});
  } else if (multi_token && type == "MISC" && style < 7) {
    tokens.push_back({head, tag(0)});
    tokens.push_back({kMiscSuffixes[idx % kMiscSuffixes.size()], tag(1)});
  } else {
    tokens.push_back({head, tag(0)});
  }
  return tokens;
}

}  // namespace

Corpus make_template_corpus(const TemplateCorpusOptions& options) {
  std::mt19937_64 rng(splitmix64(options.seed));

  auto fill_slot = [&](const std::string& type) {
    const Slice& slice = type == "PER"   ? kPer
                         : type == "LOC" ? kLoc
                         : type == "ORG" ? kOrg
                                         : kMisc;
    const std::size_t idx =
        uniform_unit(rng) < 0.45
            ? uniform_below(rng, kFrequentTier)
            : kFrequentTier + uniform_below(rng, slice.size - kFrequentTier);
    return surface_tokens(type, slice, idx, options.multi_token);
  };

  std::vector<Sentence> sentences;
  sentences.reserve(options.sentences);
  for (std::size_t si = 0; si < options.sentences; ++si) {
    const auto& tmpl = templates()[uniform_below(rng, templates().size())];
    Sentence sentence;
    for (const std::string& item : tmpl) {
      if (item == "{NUM}") {
        sentence.tokens.push_back({std::to_string(uniform_below(rng, 100)), "O"});
      } else if (item == "{PER}" || item == "{LOC}" || item == "{ORG}" ||
                 item == "{MISC}") {
        for (Token& token : fill_slot(item.substr(1, item.size() - 2)))
          sentence.tokens.push_back(std::move(token));
      } else {
        sentence.tokens.push_back({item, "O"});
      }
    }
    sentences.push_back(std::move(sentence));
  }
  return make_corpus(std::move(sentences));
}

}  // namespace crossweigh::testing
