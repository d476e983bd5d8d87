#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "word2api/corpus.hpp"

namespace word2api {

/// Training lines for the embedding trainer. Every line is a rearrangement
/// of one source tuple's tokens (words and APIs mixed).
struct TrainingText {
  std::vector<std::vector<std::string>> lines;
  std::string strategy;
  std::uint64_t seed = 0;
  int copies = 1;
};

/// `copies` independent uniform permutations of each tuple's tokens.
/// Permutations come from a per-tuple sub-stream of `seed`, so the output is
/// identical however the tuples are partitioned over workers.
TrainingText shuffle_strategy(std::span<const WordApiTuple> tuples, int copies,
                              std::uint64_t seed);

/// One line per tuple: the words in order, then the APIs in order.
TrainingText sequence_strategy(std::span<const WordApiTuple> tuples);

/// Frequent (word, API) pairs by document co-occurrence, with
/// confidence(word -> api) = pair_count / word_count. Only pairs with
/// pair_count / N >= support are retained.
class FisModel {
 public:
  struct Pair {
    std::string word;
    std::string api;
    std::uint64_t pair_count = 0;
    std::uint64_t word_count = 0;
    double confidence = 0;  // pair_count / word_count
  };

  static FisModel mine(std::span<const WordApiTuple> tuples, double support);

  double support() const { return support_; }
  std::size_t tuple_count() const { return tuple_count_; }
  const std::vector<Pair>& pairs() const { return pairs_; }

  /// Anchor word for `api` among `words`: the frequent partner with the
  /// highest confidence (ties: higher pair count, then lexicographic).
  /// Returns empty when no frequent partner is present.
  std::string_view best_anchor(std::string_view api,
                               std::span<const std::string> words) const;

 private:
  double support_ = 0;
  std::size_t tuple_count_ = 0;
  std::vector<Pair> pairs_;
  // api -> indices into pairs_, best candidate first
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_api_;
};

/// One tuple's line under the FIS ordering: each API with a frequent partner
/// word present moves immediately to the right of its anchor (multiple APIs
/// keep their original order behind a shared anchor); the rest keep the
/// words-then-APIs layout.
std::vector<std::string> fis_reorder_tuple(const FisModel& model,
                                           const WordApiTuple& tuple);

/// FIS ordering over the whole corpus. With `then_shuffle`, anchored
/// word-API groups stay adjacent while everything else is shuffled around
/// them (one line per tuple either way).
TrainingText fis_reorder(std::span<const WordApiTuple> tuples, double support,
                         bool then_shuffle, std::uint64_t seed);

void write_training_text(const std::string& path, const TrainingText& text);
std::vector<std::vector<std::string>> read_training_text(
    const std::string& path);

}  // namespace word2api
