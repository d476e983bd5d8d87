#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "word2api/corpus.hpp"
#include "word2api/embedding.hpp"
#include "word2api/relatedness.hpp"
#include "word2api/text.hpp"

namespace word2api {

/// A query expressed as its top-k related APIs with similarity weights;
/// implicitly zero on every other API.
struct ExpandedQuery {
  struct Entry {
    std::string api;
    double weight = 0;
  };
  std::vector<Entry> entries;  // descending weight, unique APIs
  std::string query_text;
};

/// API-kind tokens of the model vocabulary: the default expansion space.
template <class Scalar>
std::vector<std::string> api_terms(const EmbeddingModel<Scalar>& model) {
  std::vector<std::string> out;
  for (const VocabEntry& entry : model.vocab.entries()) {
    if (is_api_token(entry.token)) out.push_back(entry.token);
  }
  return out;
}

/// Scores every candidate API against the normalized query words with the
/// IDF-weighted set similarity and keeps the top k. A query with no word in
/// the model vocabulary is an error naming the dropped tokens.
template <class Scalar>
ExpandedQuery expand_query(const EmbeddingModel<Scalar>& model,
                           const IdfTable& idf, std::string_view query_text,
                           std::span<const std::string> api_vocabulary,
                           std::size_t k, const StopWords& stop_words) {
  ExpandedQuery expanded;
  expanded.query_text = std::string(query_text);
  const std::vector<std::string> words = normalize_text(query_text, stop_words);
  const bool any_known = std::any_of(
      words.begin(), words.end(),
      [&](const std::string& w) { return model.vocab.contains(w); });
  if (!any_known) {
    std::string dropped;
    for (const std::string& w : words) {
      if (!dropped.empty()) dropped += ", ";
      dropped += w;
    }
    throw OovError(dropped.empty() ? std::string(query_text) : dropped,
                   "embedding vocabulary (no query word survived)");
  }

  std::vector<ExpandedQuery::Entry> scored;
  scored.reserve(api_vocabulary.size());
  for (const std::string& api : api_vocabulary) {
    const std::span<const std::string> single{&api, 1};
    scored.push_back({api, sim_sets(model, idf, words, single)});
  }
  std::sort(scored.begin(), scored.end(),
            [](const ExpandedQuery::Entry& a, const ExpandedQuery::Entry& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.api < b.api;
            });
  if (scored.size() > k) scored.resize(k);
  expanded.entries = std::move(scored);
  return expanded;
}

struct RankedTuple {
  std::size_t index = 0;  // into the searched tuple list
  double score = 0;
};

/// 0-1 retrieval: each tuple's distinct-API set against the sparse expanded
/// vector, ranked by cosine. Ties prefer tuples with fewer APIs, then input
/// order.
std::vector<RankedTuple> recommend_sequences(
    const ExpandedQuery& query, std::span<const WordApiTuple> tuples,
    std::size_t k);

/// One class-level API document: the linking target.
struct ApiDocument {
  std::string class_id;
  std::vector<std::string> method_apis;
  std::string description;
  std::string doc_id;  // equals class_id in the file format
};

enum class LinkMethod { kVsm, kWe, kWord2api, kVsmWe, kVsmWord2api };

std::optional<LinkMethod> parse_link_method(std::string_view name);
std::string_view to_string(LinkMethod method);

inline bool is_integrated(LinkMethod method) {
  return method == LinkMethod::kVsmWe || method == LinkMethod::kVsmWord2api;
}

/// The embedding side of an integrated method.
inline LinkMethod base_of(LinkMethod method) {
  return method == LinkMethod::kVsmWe ? LinkMethod::kWe
                                      : LinkMethod::kWord2api;
}

struct LinkConfig {
  LinkMethod method = LinkMethod::kVsm;
  double alpha = 0.18;  // weight of the VSM side; integrated methods only
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0;
};

/// TF-IDF cosine of the question against every document (description plus
/// camel-split API names); TF is the raw count, IDF is ln(N/df) over the
/// document collection.
std::vector<double> vsm_scores(std::string_view question,
                               std::span<const ApiDocument> docs,
                               const StopWords& stop_words);

/// Rescales to [0, 1] over the collection; a constant array becomes zeros.
void min_max_normalize(std::span<double> values);

namespace detail {

inline std::vector<std::string> document_words(const ApiDocument& doc,
                                               const StopWords& stop_words) {
  std::string text = doc.description;
  for (const std::string& api : doc.method_apis) {
    text += ' ';
    text += api;
  }
  return normalize_text(text, stop_words);
}

}  // namespace detail

/// Embedding-side scores: WE reduces both sides to word sets; Word2API puts
/// the question words against the document's method-level APIs.
template <class Scalar>
std::vector<double> embedding_scores(std::string_view question,
                                     std::span<const ApiDocument> docs,
                                     LinkMethod base,
                                     const EmbeddingModel<Scalar>& model,
                                     const IdfTable& idf,
                                     const StopWords& stop_words) {
  const std::vector<std::string> qwords = normalize_text(question, stop_words);
  std::vector<double> scores;
  scores.reserve(docs.size());
  for (const ApiDocument& doc : docs) {
    if (base == LinkMethod::kWe) {
      const std::vector<std::string> dwords =
          detail::document_words(doc, stop_words);
      scores.push_back(sim_sets(model, idf, qwords, dwords));
    } else {
      scores.push_back(sim_sets(model, idf, qwords, doc.method_apis));
    }
  }
  return scores;
}

namespace detail {

std::vector<ScoredDoc> rank_docs(std::span<const ApiDocument> docs,
                                 std::span<const double> scores,
                                 std::size_t k);

}  // namespace detail

/// Ranks the document collection for a question under the configured
/// method. Integrated methods min-max normalize both score arrays over the
/// collection before mixing with weight alpha on the VSM side.
template <class Scalar>
std::vector<ScoredDoc> link_documents(std::string_view question,
                                      std::span<const ApiDocument> docs,
                                      const LinkConfig& config,
                                      const EmbeddingModel<Scalar>* model,
                                      const IdfTable* idf, std::size_t k,
                                      const StopWords& stop_words) {
  if (docs.empty()) throw ConfigError("document collection is empty");
  const bool needs_model = config.method != LinkMethod::kVsm;
  if (needs_model && (model == nullptr || idf == nullptr)) {
    throw ConfigError("method needs an embedding model and an IDF table");
  }

  std::vector<double> scores;
  switch (config.method) {
    case LinkMethod::kVsm:
      scores = vsm_scores(question, docs, stop_words);
      break;
    case LinkMethod::kWe:
    case LinkMethod::kWord2api:
      scores = embedding_scores(question, docs, config.method, *model, *idf,
                                stop_words);
      break;
    case LinkMethod::kVsmWe:
    case LinkMethod::kVsmWord2api: {
      std::vector<double> vsm = vsm_scores(question, docs, stop_words);
      std::vector<double> other = embedding_scores(
          question, docs, base_of(config.method), *model, *idf, stop_words);
      min_max_normalize(vsm);
      min_max_normalize(other);
      scores.resize(docs.size());
      for (std::size_t i = 0; i < docs.size(); ++i) {
        scores[i] = config.alpha * vsm[i] + (1.0 - config.alpha) * other[i];
      }
      break;
    }
  }
  return detail::rank_docs(docs, scores, k);
}

/// A developer question with its oracle documents (for tuning/evaluation).
struct LinkQuestion {
  std::string id;
  std::string text;
  std::vector<std::string> oracle_ids;
};

struct AlphaPoint {
  double alpha = 0;
  double map = 0;
};

namespace detail {

void validate_tuning_inputs(std::span<const LinkQuestion> questions,
                            std::span<const ApiDocument> docs);

double map_of_mixed(std::span<const LinkQuestion> questions,
                    std::span<const std::vector<double>> vsm,
                    std::span<const std::vector<double>> other,
                    std::span<const ApiDocument> docs, double alpha,
                    std::size_t k);

}  // namespace detail

/// MAP of the integrated ranker at every grid point 0.01, 0.02, ..., 1.00.
template <class Scalar>
std::vector<AlphaPoint> alpha_grid_search(
    std::span<const LinkQuestion> questions, std::span<const ApiDocument> docs,
    LinkMethod base, const EmbeddingModel<Scalar>& model, const IdfTable& idf,
    const StopWords& stop_words, std::size_t k = 10) {
  detail::validate_tuning_inputs(questions, docs);
  std::vector<std::vector<double>> vsm(questions.size());
  std::vector<std::vector<double>> other(questions.size());
  for (std::size_t q = 0; q < questions.size(); ++q) {
    vsm[q] = vsm_scores(questions[q].text, docs, stop_words);
    other[q] =
        embedding_scores(questions[q].text, docs, base, model, idf, stop_words);
    min_max_normalize(vsm[q]);
    min_max_normalize(other[q]);
  }
  std::vector<AlphaPoint> grid;
  grid.reserve(100);
  for (int step = 1; step <= 100; ++step) {
    const double alpha = step / 100.0;
    grid.push_back(
        {alpha, detail::map_of_mixed(questions, vsm, other, docs, alpha, k)});
  }
  return grid;
}

/// The grid point maximizing MAP; the smallest alpha wins ties.
template <class Scalar>
double tune_alpha(std::span<const LinkQuestion> questions,
                  std::span<const ApiDocument> docs, LinkMethod base,
                  const EmbeddingModel<Scalar>& model, const IdfTable& idf,
                  const StopWords& stop_words, std::size_t k = 10) {
  const std::vector<AlphaPoint> grid =
      alpha_grid_search(questions, docs, base, model, idf, stop_words, k);
  const AlphaPoint* best = &grid.front();
  for (const AlphaPoint& point : grid) {
    if (point.map > best->map) best = &point;
  }
  return best->alpha;
}

// --- line formats -----------------------------------------------------------
//
// Document file:  <class id> TAB <api> SP <api> ... TAB <escaped description>
// Question file:  <id> TAB <escaped text> [TAB <oracle id> SP <oracle id> ...]

std::vector<ApiDocument> read_documents(const std::string& path);
void write_documents(const std::string& path,
                     std::span<const ApiDocument> docs);

std::vector<LinkQuestion> read_questions(const std::string& path);
void write_questions(const std::string& path,
                     std::span<const LinkQuestion> questions);

}  // namespace word2api
