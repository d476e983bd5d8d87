#include "word2api/relatedness.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace word2api {

namespace {

std::uint64_t pair_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

CooccurrenceStats CooccurrenceStats::build(
    std::span<const WordApiTuple> tuples) {
  CooccurrenceStats stats;
  stats.tuple_count_ = tuples.size();

  std::set<std::string> distinct;
  for (const WordApiTuple& tuple : tuples) {
    distinct.insert(tuple.words.begin(), tuple.words.end());
    distinct.insert(tuple.apis.begin(), tuple.apis.end());
  }
  stats.terms_.assign(distinct.begin(), distinct.end());
  stats.doc_freq_.assign(stats.terms_.size(), 0);
  for (std::size_t i = 0; i < stats.terms_.size(); ++i) {
    stats.index_.emplace(stats.terms_[i], static_cast<int>(i));
  }

  std::vector<int> present;
  for (const WordApiTuple& tuple : tuples) {
    present.clear();
    for (const std::string& t : tuple.words) present.push_back(stats.index_.at(t));
    for (const std::string& t : tuple.apis) present.push_back(stats.index_.at(t));
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    for (std::size_t i = 0; i < present.size(); ++i) {
      ++stats.doc_freq_[present[i]];
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        ++stats.pairs_[pair_key(present[i], present[j])];
      }
    }
  }
  return stats;
}

int CooccurrenceStats::index_of(std::string_view term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

std::uint64_t CooccurrenceStats::doc_freq(std::string_view term) const {
  const int i = index_of(term);
  return i < 0 ? 0 : doc_freq_[i];
}

std::uint64_t CooccurrenceStats::pair_freq_at(int a, int b) const {
  if (a == b) return doc_freq_[a];
  const auto it = pairs_.find(pair_key(a, b));
  return it == pairs_.end() ? 0 : it->second;
}

std::uint64_t CooccurrenceStats::pair_freq(std::string_view a,
                                           std::string_view b) const {
  const int ia = index_of(a);
  const int ib = index_of(b);
  if (ia < 0 || ib < 0) return 0;
  return pair_freq_at(ia, ib);
}

void CooccurrenceStats::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  // pairs sorted by index for reproducible bytes
  std::vector<std::uint64_t> keys;
  keys.reserve(pairs_.size());
  for (const auto& [key, count] : pairs_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  out << tuple_count_ << ' ' << terms_.size() << ' ' << keys.size() << '\n';
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out << terms_[i] << ' ' << doc_freq_[i] << '\n';
  }
  for (std::uint64_t key : keys) {
    const auto lo = static_cast<int>(key >> 32);
    const auto hi = static_cast<int>(key & 0xffffffffULL);
    out << terms_[lo] << ' ' << terms_[hi] << ' ' << pairs_.at(key) << '\n';
  }
}

CooccurrenceStats CooccurrenceStats::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open stats file");
  CooccurrenceStats stats;
  std::string line;
  std::size_t line_no = 0;

  const auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) {
      throw FileFormatError(path, line_no + 1, "unexpected end of file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  std::size_t term_lines = 0;
  std::size_t pair_lines = 0;
  {
    std::istringstream header(next_line());
    if (!(header >> stats.tuple_count_ >> term_lines >> pair_lines)) {
      throw FileFormatError(path, 1, "malformed '<N> <terms> <pairs>' header");
    }
  }
  stats.terms_.reserve(term_lines);
  stats.doc_freq_.reserve(term_lines);
  for (std::size_t i = 0; i < term_lines; ++i) {
    std::istringstream row(next_line());
    std::string term;
    std::uint64_t count = 0;
    if (!(row >> term >> count)) {
      throw FileFormatError(path, line_no, "malformed '<term> <count>' line");
    }
    stats.terms_.push_back(term);
    stats.doc_freq_.push_back(count);
    stats.index_.emplace(term, static_cast<int>(i));
  }
  for (std::size_t i = 0; i < pair_lines; ++i) {
    std::istringstream row(next_line());
    std::string a;
    std::string b;
    std::uint64_t count = 0;
    if (!(row >> a >> b >> count)) {
      throw FileFormatError(path, line_no,
                            "malformed '<term> <term> <count>' line");
    }
    const int ia = stats.index_of(a);
    const int ib = stats.index_of(b);
    if (ia < 0 || ib < 0) {
      throw FileFormatError(path, line_no, "pair references unknown term");
    }
    stats.pairs_[pair_key(ia, ib)] = count;
  }
  return stats;
}

IdfTable IdfTable::build(const CooccurrenceStats& stats, bool log_variant) {
  IdfTable table;
  const double n = static_cast<double>(stats.tuple_count());
  for (const std::string& term : stats.terms()) {
    const double ratio = n / static_cast<double>(stats.doc_freq(term));
    table.values_.emplace(term, log_variant ? std::log(ratio) : ratio);
  }
  return table;
}

std::optional<double> IdfTable::idf(std::string_view term) const {
  const auto it = values_.find(term);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

namespace {

void require_seen(const CooccurrenceStats& stats, std::string_view term) {
  if (!stats.contains(term)) {
    throw OovError(std::string(term), "co-occurrence statistics");
  }
}

}  // namespace

double pmi(const CooccurrenceStats& stats, std::string_view w,
           std::string_view a) {
  require_seen(stats, w);
  require_seen(stats, a);
  const auto pair = static_cast<double>(stats.pair_freq(w, a));
  if (pair == 0.0) return -std::numeric_limits<double>::infinity();
  const auto n = static_cast<double>(stats.tuple_count());
  const auto fw = static_cast<double>(stats.doc_freq(w));
  const auto fa = static_cast<double>(stats.doc_freq(a));
  return std::log((pair / n) / ((fw / n) * (fa / n)));
}

double nsd(const CooccurrenceStats& stats, std::string_view w,
           std::string_view a) {
  require_seen(stats, w);
  require_seen(stats, a);
  const auto overlap = static_cast<double>(stats.pair_freq(w, a));
  if (overlap == 0.0) return std::numeric_limits<double>::infinity();
  const auto fw = static_cast<double>(stats.doc_freq(w));
  const auto fa = static_cast<double>(stats.doc_freq(a));
  const auto n = static_cast<double>(stats.tuple_count());
  const double denominator = std::log(n) - std::log(std::min(fw, fa));
  if (denominator <= 0.0) {
    throw std::domain_error(
        "nsd: undefined when a term occurs in every tuple");
  }
  return (std::log(std::max(fw, fa)) - std::log(overlap)) / denominator;
}

VectorX<double> ppmi_row(const CooccurrenceStats& stats,
                         std::string_view term) {
  require_seen(stats, term);
  const int t = stats.index_of(term);
  const auto size = static_cast<Eigen::Index>(stats.terms().size());
  const auto n = static_cast<double>(stats.tuple_count());
  const auto ft = static_cast<double>(stats.doc_freq_at(t));
  VectorX<double> row = VectorX<double>::Zero(size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const auto pair =
        static_cast<double>(stats.pair_freq_at(t, static_cast<int>(j)));
    if (pair == 0.0) continue;
    const auto fj = static_cast<double>(stats.doc_freq_at(static_cast<int>(j)));
    const double value = std::log(pair * n / (ft * fj));
    if (value > 0.0) row[j] = value;
  }
  return row;
}

double hal_sim(const CooccurrenceStats& stats, std::string_view w,
               std::string_view a) {
  const VectorX<double> rw = ppmi_row(stats, w);
  const VectorX<double> ra = ppmi_row(stats, a);
  return cosine_similarity(rw, ra);
}

std::optional<RankMethod> parse_rank_method(std::string_view name) {
  if (name == "word2api") return RankMethod::kWord2api;
  if (name == "pmi") return RankMethod::kPmi;
  if (name == "nsd") return RankMethod::kNsd;
  if (name == "hal") return RankMethod::kHal;
  return std::nullopt;
}

std::vector<Neighbor> rank_apis(const CooccurrenceStats& stats,
                                std::string_view word, RankMethod method,
                                std::size_t k) {
  require_seen(stats, word);
  const bool ascending = method == RankMethod::kNsd;

  // HAL compares the query row against every candidate row; build it once.
  VectorX<double> query_row;
  if (method == RankMethod::kHal) query_row = ppmi_row(stats, word);

  std::vector<Neighbor> scored;
  for (const std::string& term : stats.terms()) {
    if (!is_api_token(term) || term == word) continue;
    double score = 0;
    switch (method) {
      case RankMethod::kPmi:
        score = pmi(stats, word, term);
        break;
      case RankMethod::kNsd:
        score = nsd(stats, word, term);
        break;
      case RankMethod::kHal:
        score = cosine_similarity(query_row, ppmi_row(stats, term));
        break;
      case RankMethod::kWord2api:
        throw ConfigError("word2api ranking needs the embedding model");
    }
    scored.push_back({term, score});
  }
  std::sort(scored.begin(), scored.end(),
            [ascending](const Neighbor& a, const Neighbor& b) {
              if (a.score != b.score) {
                return ascending ? a.score < b.score : a.score > b.score;
              }
              return a.token < b.token;
            });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace word2api
