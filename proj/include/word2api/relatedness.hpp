#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "word2api/corpus.hpp"
#include "word2api/embedding.hpp"
#include "word2api/errors.hpp"
#include "word2api/matrix.hpp"

namespace word2api {

/// Document-level co-occurrence counts over word-API tuples: presence is
/// counted once per tuple (set semantics), pairs are unordered.
class CooccurrenceStats {
 public:
  static CooccurrenceStats build(std::span<const WordApiTuple> tuples);

  std::size_t tuple_count() const { return tuple_count_; }

  /// All distinct terms, lexicographically ordered; PPMI rows use this
  /// layout.
  const std::vector<std::string>& terms() const { return terms_; }

  bool contains(std::string_view term) const { return index_of(term) >= 0; }
  int index_of(std::string_view term) const;

  std::uint64_t doc_freq(std::string_view term) const;
  std::uint64_t doc_freq_at(int index) const { return doc_freq_[index]; }

  /// Tuples containing both terms; symmetric, and pair_freq(t, t) equals
  /// doc_freq(t).
  std::uint64_t pair_freq(std::string_view a, std::string_view b) const;
  std::uint64_t pair_freq_at(int a, int b) const;

  void save(const std::string& path) const;
  static CooccurrenceStats load(const std::string& path);

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t tuple_count_ = 0;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, int, StringHash, std::equal_to<>> index_;
  std::vector<std::uint64_t> doc_freq_;
  std::unordered_map<std::uint64_t, std::uint64_t> pairs_;
};

/// Ratio IDF: tuple count divided by containing-tuple count, no logarithm
/// (>= 1, and exactly 1 for a term present in every tuple). The log variant
/// is available behind a flag for comparison with conventional TF-IDF
/// weighting.
class IdfTable {
 public:
  static IdfTable build(const CooccurrenceStats& stats,
                        bool log_variant = false);

  std::optional<double> idf(std::string_view term) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, double, StringHash, std::equal_to<>>
      values_;
};

/// ln(f(w,a) / (f(w) f(a))) over tuple-fraction estimates. Never co-occurring
/// terms score -infinity (ranked last); unseen terms are an error.
double pmi(const CooccurrenceStats& stats, std::string_view w,
           std::string_view a);

/// Normalized distance over document frequencies; smaller is more related.
/// Zero overlap scores +infinity (ranked last).
double nsd(const CooccurrenceStats& stats, std::string_view w,
           std::string_view a);

/// Row of the positive-PMI term-term matrix in terms() order (diagonal
/// included; pair_freq(t,t) = doc_freq(t)).
VectorX<double> ppmi_row(const CooccurrenceStats& stats,
                         std::string_view term);

/// Cosine of the two PPMI rows; 0 when either row is all zero.
double hal_sim(const CooccurrenceStats& stats, std::string_view w,
               std::string_view a);

/// Cosine of the two model vectors; kinds are not checked at this level.
template <class Scalar>
double sim_word_api(const EmbeddingModel<Scalar>& model, std::string_view w,
                    std::string_view a) {
  return cosine_similarity(model.vector_for(w), model.vector_for(a));
}

namespace detail {

/// Unique terms kept by both the model and the IDF table, in stable order.
template <class Scalar>
std::vector<std::string_view> usable_terms(
    const EmbeddingModel<Scalar>& model, const IdfTable& idf,
    std::span<const std::string> terms) {
  std::vector<std::string_view> out;
  out.reserve(terms.size());
  for (const std::string& t : terms) {
    if (model.vocab.contains(t) && idf.idf(t).has_value()) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Symmetric IDF-weighted max-similarity between two term sets:
///   1/2 (sum_w max_a sim(w,a) idf(w) / sum_w idf(w)
///        + sum_a max_w sim(a,w) idf(a) / sum_a idf(a)).
/// Duplicates are ignored (set semantics); terms unknown to the model or the
/// IDF table are dropped, and the result is 0 if either side empties.
template <class Scalar>
double sim_sets(const EmbeddingModel<Scalar>& model, const IdfTable& idf,
                std::span<const std::string> words,
                std::span<const std::string> apis) {
  const auto lhs = detail::usable_terms(model, idf, words);
  const auto rhs = detail::usable_terms(model, idf, apis);
  if (lhs.empty() || rhs.empty()) return 0.0;

  const auto side = [&](const std::vector<std::string_view>& from,
                        const std::vector<std::string_view>& to) {
    double weighted = 0.0;
    double weight = 0.0;
    for (std::string_view f : from) {
      double best = -1.0;
      for (std::string_view t : to) {
        best = std::max(best, sim_word_api(model, f, t));
      }
      const double w = *idf.idf(f);
      weighted += best * w;
      weight += w;
    }
    return weighted / weight;
  };
  return 0.5 * (side(lhs, rhs) + side(rhs, lhs));
}

enum class RankMethod { kWord2api, kPmi, kNsd, kHal };

std::optional<RankMethod> parse_rank_method(std::string_view name);

/// Top-k API tokens for a word under a co-occurrence baseline. PMI and HAL
/// rank descending, NSD ascending; sentinel scores sort last either way and
/// ties break lexicographically.
std::vector<Neighbor> rank_apis(const CooccurrenceStats& stats,
                                std::string_view word, RankMethod method,
                                std::size_t k);

/// Top-k API tokens by embedding cosine.
template <class Scalar>
std::vector<Neighbor> rank_apis(const EmbeddingModel<Scalar>& model,
                                std::string_view word, std::size_t k) {
  return nearest_terms(model, word, k, TermKind::kApis);
}

}  // namespace word2api
