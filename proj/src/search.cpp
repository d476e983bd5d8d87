#include "word2api/search.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "word2api/eval.hpp"

namespace word2api {

std::vector<RankedTuple> recommend_sequences(
    const ExpandedQuery& query, std::span<const WordApiTuple> tuples,
    std::size_t k) {
  if (query.entries.empty()) {
    throw std::invalid_argument("expanded query has no APIs");
  }
  std::map<std::string, double, std::less<>> weights;
  double query_norm_sq = 0;
  for (const ExpandedQuery::Entry& entry : query.entries) {
    weights[entry.api] = entry.weight;
    query_norm_sq += entry.weight * entry.weight;
  }
  const double query_norm = std::sqrt(query_norm_sq);

  struct Candidate {
    std::size_t index;
    double score;
    std::size_t distinct_apis;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(tuples.size());
  std::set<std::string_view> distinct;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    distinct.clear();
    for (const std::string& api : tuples[i].apis) distinct.insert(api);
    double dot = 0;
    for (std::string_view api : distinct) {
      const auto it = weights.find(api);
      if (it != weights.end()) dot += it->second;
    }
    const double denom =
        query_norm * std::sqrt(static_cast<double>(distinct.size()));
    const double score = (dot == 0.0 || denom == 0.0) ? 0.0 : dot / denom;
    candidates.push_back({i, score, distinct.size()});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.distinct_apis < b.distinct_apis;
                   });
  std::vector<RankedTuple> out;
  out.reserve(std::min(k, candidates.size()));
  for (std::size_t i = 0; i < candidates.size() && i < k; ++i) {
    out.push_back({candidates[i].index, candidates[i].score});
  }
  return out;
}

std::optional<LinkMethod> parse_link_method(std::string_view name) {
  if (name == "vsm") return LinkMethod::kVsm;
  if (name == "we") return LinkMethod::kWe;
  if (name == "word2api") return LinkMethod::kWord2api;
  if (name == "vsm+we") return LinkMethod::kVsmWe;
  if (name == "vsm+word2api") return LinkMethod::kVsmWord2api;
  return std::nullopt;
}

std::string_view to_string(LinkMethod method) {
  switch (method) {
    case LinkMethod::kVsm:
      return "vsm";
    case LinkMethod::kWe:
      return "we";
    case LinkMethod::kWord2api:
      return "word2api";
    case LinkMethod::kVsmWe:
      return "vsm+we";
    case LinkMethod::kVsmWord2api:
      return "vsm+word2api";
  }
  return "unknown";
}

std::vector<double> vsm_scores(std::string_view question,
                               std::span<const ApiDocument> docs,
                               const StopWords& stop_words) {
  const std::size_t n_docs = docs.size();
  std::vector<std::unordered_map<std::string, int>> doc_tf(n_docs);
  std::unordered_map<std::string, int> df;
  for (std::size_t d = 0; d < n_docs; ++d) {
    for (std::string& token : detail::document_words(docs[d], stop_words)) {
      ++doc_tf[d][std::move(token)];
    }
    for (const auto& [term, tf] : doc_tf[d]) ++df[term];
  }
  std::unordered_map<std::string, double> idf;
  idf.reserve(df.size());
  for (const auto& [term, count] : df) {
    idf[term] = std::log(static_cast<double>(n_docs) /
                         static_cast<double>(count));
  }

  std::unordered_map<std::string, int> q_tf;
  for (std::string& token : normalize_text(question, stop_words)) {
    ++q_tf[std::move(token)];
  }
  std::unordered_map<std::string, double> q_vec;
  double q_norm_sq = 0;
  for (const auto& [term, tf] : q_tf) {
    const auto it = idf.find(term);
    if (it == idf.end()) continue;  // matches nothing in the collection
    const double w = tf * it->second;
    q_vec[term] = w;
    q_norm_sq += w * w;
  }
  const double q_norm = std::sqrt(q_norm_sq);

  std::vector<double> scores(n_docs, 0.0);
  if (q_norm == 0.0) return scores;
  for (std::size_t d = 0; d < n_docs; ++d) {
    double dot = 0;
    double norm_sq = 0;
    for (const auto& [term, tf] : doc_tf[d]) {
      const double w = tf * idf.at(term);
      norm_sq += w * w;
      const auto it = q_vec.find(term);
      if (it != q_vec.end()) dot += w * it->second;
    }
    if (norm_sq > 0 && dot != 0) {
      scores[d] = dot / (q_norm * std::sqrt(norm_sq));
    }
  }
  return scores;
}

void min_max_normalize(std::span<double> values) {
  if (values.empty()) return;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - min;
  for (double& v : values) {
    v = range > 0 ? (v - min) / range : 0.0;
  }
}

namespace detail {

std::vector<ScoredDoc> rank_docs(std::span<const ApiDocument> docs,
                                 std::span<const double> scores,
                                 std::size_t k) {
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return docs[a].doc_id < docs[b].doc_id;
  });
  std::vector<ScoredDoc> out;
  out.reserve(std::min(k, order.size()));
  for (std::size_t i = 0; i < order.size() && i < k; ++i) {
    out.push_back({docs[order[i]].doc_id, scores[order[i]]});
  }
  return out;
}

void validate_tuning_inputs(std::span<const LinkQuestion> questions,
                            std::span<const ApiDocument> docs) {
  if (questions.empty()) {
    throw std::invalid_argument("no training questions");
  }
  if (docs.empty()) throw ConfigError("document collection is empty");
  std::unordered_set<std::string_view> known;
  for (const ApiDocument& doc : docs) known.insert(doc.doc_id);
  for (const LinkQuestion& question : questions) {
    const bool any = std::any_of(question.oracle_ids.begin(),
                                 question.oracle_ids.end(),
                                 [&](const std::string& id) {
                                   return known.contains(id);
                                 });
    if (!any) {
      throw std::invalid_argument("question '" + question.id +
                                  "' has no oracle document in the collection");
    }
  }
}

double map_of_mixed(std::span<const LinkQuestion> questions,
                    std::span<const std::vector<double>> vsm,
                    std::span<const std::vector<double>> other,
                    std::span<const ApiDocument> docs, double alpha,
                    std::size_t k) {
  std::vector<std::vector<int>> flags_per_question;
  flags_per_question.reserve(questions.size());
  std::vector<double> mixed(docs.size());
  for (std::size_t q = 0; q < questions.size(); ++q) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      mixed[d] = alpha * vsm[q][d] + (1.0 - alpha) * other[q][d];
    }
    const std::vector<ScoredDoc> ranked = rank_docs(docs, mixed, k);
    const std::unordered_set<std::string_view> oracle(
        questions[q].oracle_ids.begin(), questions[q].oracle_ids.end());
    std::vector<int> flags;
    flags.reserve(ranked.size());
    for (const ScoredDoc& doc : ranked) {
      flags.push_back(oracle.contains(doc.doc_id) ? 1 : 0);
    }
    flags_per_question.push_back(std::move(flags));
  }
  return map_score(flags_per_question);
}

}  // namespace detail

// --- line formats -------------------------------------------------------------

namespace {

std::vector<std::string> split_spaces(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = text.find(' ', i);
    if (j == std::string_view::npos) j = text.size();
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  for (;;) {
    const std::size_t j = line.find('\t', i);
    if (j == std::string_view::npos) {
      fields.push_back(line.substr(i));
      return fields;
    }
    fields.push_back(line.substr(i, j - i));
    i = j + 1;
  }
}

}  // namespace

std::vector<ApiDocument> read_documents(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open document file");
  std::vector<ApiDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw FileFormatError(path, line_no,
                            "expected '<class> TAB <apis> TAB <description>'");
    }
    ApiDocument doc;
    doc.class_id = std::string(fields[0]);
    doc.doc_id = doc.class_id;
    doc.method_apis = split_spaces(fields[1]);
    doc.description = unescape_field(fields[2]);
    if (doc.class_id.empty()) {
      throw FileFormatError(path, line_no, "empty class id");
    }
    for (const std::string& api : doc.method_apis) {
      if (!api.starts_with(doc.class_id)) {
        throw FileFormatError(path, line_no,
                              "API '" + api + "' does not belong to class '" +
                                  doc.class_id + "'");
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void write_documents(const std::string& path,
                     std::span<const ApiDocument> docs) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  for (const ApiDocument& doc : docs) {
    out << doc.class_id << '\t';
    for (std::size_t i = 0; i < doc.method_apis.size(); ++i) {
      if (i > 0) out << ' ';
      out << doc.method_apis[i];
    }
    out << '\t' << escape_field(doc.description) << '\n';
  }
}

std::vector<LinkQuestion> read_questions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open question file");
  std::vector<LinkQuestion> questions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw FileFormatError(
          path, line_no, "expected '<id> TAB <text> [TAB <oracle ids>]'");
    }
    LinkQuestion question;
    question.id = std::string(fields[0]);
    question.text = unescape_field(fields[1]);
    if (fields.size() == 3) question.oracle_ids = split_spaces(fields[2]);
    questions.push_back(std::move(question));
  }
  return questions;
}

void write_questions(const std::string& path,
                     std::span<const LinkQuestion> questions) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  for (const LinkQuestion& question : questions) {
    out << question.id << '\t' << escape_field(question.text);
    if (!question.oracle_ids.empty()) {
      out << '\t';
      for (std::size_t i = 0; i < question.oracle_ids.size(); ++i) {
        if (i > 0) out << ' ';
        out << question.oracle_ids[i];
      }
    }
    out << '\n';
  }
}

}  // namespace word2api
