#include "word2api/trainset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "word2api/errors.hpp"
#include "word2api/rng.hpp"

namespace word2api {

TrainingText shuffle_strategy(std::span<const WordApiTuple> tuples, int copies,
                              std::uint64_t seed) {
  if (copies < 1) throw ConfigError("copies must be >= 1");
  TrainingText text;
  text.strategy = "shuffle";
  text.seed = seed;
  text.copies = copies;
  text.lines.reserve(tuples.size() * static_cast<std::size_t>(copies));
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    std::mt19937_64 rng = seeded_stream(seed, t);
    std::vector<std::string> tokens = tuples[t].words;
    tokens.insert(tokens.end(), tuples[t].apis.begin(), tuples[t].apis.end());
    for (int c = 0; c < copies; ++c) {
      std::vector<std::string> line = tokens;
      fisher_yates(std::span<std::string>(line), rng);
      text.lines.push_back(std::move(line));
    }
  }
  return text;
}

TrainingText sequence_strategy(std::span<const WordApiTuple> tuples) {
  TrainingText text;
  text.strategy = "sequence";
  text.lines.reserve(tuples.size());
  for (const WordApiTuple& tuple : tuples) {
    std::vector<std::string> line = tuple.words;
    line.insert(line.end(), tuple.apis.begin(), tuple.apis.end());
    text.lines.push_back(std::move(line));
  }
  return text;
}

FisModel FisModel::mine(std::span<const WordApiTuple> tuples, double support) {
  if (!(support > 0.0 && support < 1.0)) {
    throw ConfigError("support must be in (0, 1)");
  }
  FisModel model;
  model.support_ = support;
  model.tuple_count_ = tuples.size();

  std::unordered_map<std::string, std::uint64_t> word_counts;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
  std::set<std::string> words_in_tuple;
  std::set<std::string> apis_in_tuple;
  for (const WordApiTuple& tuple : tuples) {
    words_in_tuple.clear();
    words_in_tuple.insert(tuple.words.begin(), tuple.words.end());
    apis_in_tuple.clear();
    apis_in_tuple.insert(tuple.apis.begin(), tuple.apis.end());
    for (const std::string& word : words_in_tuple) {
      ++word_counts[word];
      for (const std::string& api : apis_in_tuple) {
        ++pair_counts[{word, api}];
      }
    }
  }

  const auto n = static_cast<double>(tuples.size());
  for (const auto& [pair, count] : pair_counts) {
    if (static_cast<double>(count) / n < support) continue;
    const std::uint64_t word_count = word_counts.at(pair.first);
    model.pairs_.push_back({pair.first, pair.second, count, word_count,
                            static_cast<double>(count) /
                                static_cast<double>(word_count)});
  }
  for (std::size_t i = 0; i < model.pairs_.size(); ++i) {
    model.by_api_[model.pairs_[i].api].push_back(i);
  }
  for (auto& [api, candidates] : model.by_api_) {
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t ia, std::size_t ib) {
                const Pair& a = model.pairs_[ia];
                const Pair& b = model.pairs_[ib];
                if (a.confidence != b.confidence) {
                  return a.confidence > b.confidence;
                }
                if (a.pair_count != b.pair_count) {
                  return a.pair_count > b.pair_count;
                }
                return a.word < b.word;
              });
  }
  return model;
}

std::string_view FisModel::best_anchor(
    std::string_view api, std::span<const std::string> words) const {
  const auto it = by_api_.find(api);
  if (it == by_api_.end()) return {};
  for (std::size_t index : it->second) {
    const Pair& candidate = pairs_[index];
    if (std::find(words.begin(), words.end(), candidate.word) != words.end()) {
      return candidate.word;
    }
  }
  return {};
}

namespace {

struct TupleUnits {
  // one unit per word, the word first and its anchored APIs behind it
  std::vector<std::vector<std::string>> word_units;
  // APIs without a frequent partner present, original order
  std::vector<std::string> trailing;
};

TupleUnits anchor_units(const FisModel& model, const WordApiTuple& tuple) {
  TupleUnits units;
  units.word_units.reserve(tuple.words.size());
  for (const std::string& word : tuple.words) units.word_units.push_back({word});
  for (const std::string& api : tuple.apis) {
    const std::string_view anchor = model.best_anchor(api, tuple.words);
    if (anchor.empty()) {
      units.trailing.push_back(api);
      continue;
    }
    // anchored to the first occurrence of the word
    const auto at = std::find(tuple.words.begin(), tuple.words.end(), anchor);
    units.word_units[at - tuple.words.begin()].push_back(api);
  }
  return units;
}

}  // namespace

std::vector<std::string> fis_reorder_tuple(const FisModel& model,
                                           const WordApiTuple& tuple) {
  const TupleUnits units = anchor_units(model, tuple);
  std::vector<std::string> line;
  line.reserve(tuple.words.size() + tuple.apis.size());
  for (const auto& unit : units.word_units) {
    line.insert(line.end(), unit.begin(), unit.end());
  }
  line.insert(line.end(), units.trailing.begin(), units.trailing.end());
  return line;
}

TrainingText fis_reorder(std::span<const WordApiTuple> tuples, double support,
                         bool then_shuffle, std::uint64_t seed) {
  const FisModel model = FisModel::mine(tuples, support);
  TrainingText text;
  text.strategy = then_shuffle ? "fis+shuffle" : "fis";
  text.seed = seed;
  text.lines.reserve(tuples.size());
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    if (!then_shuffle) {
      text.lines.push_back(fis_reorder_tuple(model, tuples[t]));
      continue;
    }
    TupleUnits anchored = anchor_units(model, tuples[t]);
    std::vector<std::vector<std::string>> units = std::move(anchored.word_units);
    for (std::string& api : anchored.trailing) {
      units.push_back({std::move(api)});
    }
    std::mt19937_64 rng = seeded_stream(seed, t);
    fisher_yates(std::span<std::vector<std::string>>(units), rng);
    std::vector<std::string> line;
    for (auto& unit : units) {
      for (std::string& token : unit) line.push_back(std::move(token));
    }
    text.lines.push_back(std::move(line));
  }
  return text;
}

void write_training_text(const std::string& path, const TrainingText& text) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  for (const auto& line : text.lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out << ' ';
      out << line[i];
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> read_training_text(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open training text");
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ') {
        ++i;
        continue;
      }
      std::size_t j = line.find(' ', i);
      if (j == std::string::npos) j = line.size();
      tokens.emplace_back(line.substr(i, j - i));
      i = j;
    }
    lines.push_back(std::move(tokens));
  }
  return lines;
}

}  // namespace word2api
