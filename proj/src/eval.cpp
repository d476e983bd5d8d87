#include "word2api/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "word2api/errors.hpp"

namespace word2api {

namespace {

void require_binary(std::span<const int> flags) {
  for (int f : flags) {
    if (f != 0 && f != 1) {
      throw std::invalid_argument("relevance flags must be 0 or 1");
    }
  }
}

void require_k(std::span<const int> flags, std::size_t k) {
  if (k < 1 || k > flags.size()) {
    throw std::out_of_range("k must be in [1, N]");
  }
}

}  // namespace

double precision_at_k(std::span<const int> flags, std::size_t k) {
  require_binary(flags);
  require_k(flags, k);
  int hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += flags[i];
  return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_at_k(std::span<const int> flags, std::size_t k) {
  require_binary(flags);
  require_k(flags, k);
  const auto dcg = [k](std::span<const int> r) {
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (r[i]) sum += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return sum;
  };
  std::vector<int> ideal(flags.begin(), flags.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal);
  if (idcg == 0.0) return 0.0;
  return dcg(flags) / idcg;
}

int first_rank(std::span<const int> flags, int max_k) {
  require_binary(flags);
  const std::size_t limit =
      std::min(flags.size(), static_cast<std::size_t>(std::max(max_k, 0)));
  for (std::size_t i = 0; i < limit; ++i) {
    if (flags[i]) return static_cast<int>(i) + 1;
  }
  return max_k + 1;
}

namespace {

// n-gram multiset of a token sequence, n-grams joined on an unprintable byte
std::unordered_map<std::string, int> ngram_counts(
    std::span<const std::string> seq, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(seq.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    std::string key;
    for (int j = 0; j < n; ++j) {
      if (j > 0) key.push_back('\x1f');
      key += seq[i + j];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double bleu(std::span<const std::string> rec, std::span<const std::string> orc,
            int max_n) {
  if (rec.empty()) {
    throw std::invalid_argument("recommended sequence is empty");
  }
  if (max_n < 1) throw std::invalid_argument("max_n must be >= 1");
  double log_precision = 0;
  for (int n = 1; n <= max_n; ++n) {
    const auto rec_grams = ngram_counts(rec, n);
    const auto orc_grams = ngram_counts(orc, n);
    int total = 0;
    int matched = 0;
    for (const auto& [gram, count] : rec_grams) {
      total += count;
      const auto it = orc_grams.find(gram);
      if (it != orc_grams.end()) matched += std::min(count, it->second);
    }
    log_precision += std::log(static_cast<double>(matched + 1) /
                              static_cast<double>(total + 1)) /
                     max_n;
  }
  const double bp =
      rec.size() > orc.size()
          ? 1.0
          : std::exp(1.0 - static_cast<double>(orc.size()) /
                               static_cast<double>(rec.size()));
  return bp * std::exp(log_precision);
}

double bleu_at_k(std::span<const std::vector<std::string>> recs,
                 std::span<const std::string> orc, std::size_t k) {
  if (recs.empty()) {
    throw std::invalid_argument("no recommended sequences");
  }
  const std::size_t limit = std::min(recs.size(), k);
  double best = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    best = std::max(best, bleu(recs[i], orc));
  }
  return best;
}

double average_precision(std::span<const int> flags) {
  require_binary(flags);
  double sum = 0;
  int hits = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum;
}

double standard_average_precision(std::span<const int> flags) {
  require_binary(flags);
  const int relevant =
      static_cast<int>(std::count(flags.begin(), flags.end(), 1));
  if (relevant == 0) return 0.0;
  return average_precision(flags) / relevant;
}

double map_score(std::span<const std::vector<int>> per_question_flags,
                 bool standard) {
  if (per_question_flags.empty()) {
    throw std::invalid_argument("no questions to average");
  }
  double sum = 0;
  for (const std::vector<int>& flags : per_question_flags) {
    sum += standard ? standard_average_precision(flags)
                    : average_precision(flags);
  }
  return sum / static_cast<double>(per_question_flags.size());
}

double mrr_score(std::span<const int> first_ranks) {
  if (first_ranks.empty()) {
    throw std::invalid_argument("no questions to average");
  }
  double sum = 0;
  for (int fr : first_ranks) {
    if (fr < 0) throw std::invalid_argument("first rank must be >= 0");
    if (fr > 0) sum += 1.0 / fr;
  }
  return sum / static_cast<double>(first_ranks.size());
}

// --- batch harness ------------------------------------------------------------

std::vector<QueryRanking> read_rankings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open ranking file");
  std::vector<QueryRanking> rankings;
  std::unordered_map<std::string, std::size_t> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string query_id;
    std::size_t rank = 0;
    double score = 0;
    std::string item;
    if (!(row >> query_id >> rank >> score >> item)) {
      throw FileFormatError(path, line_no,
                            "expected '<query> <rank> <score> <item>'");
    }
    const auto [it, fresh] = by_id.emplace(query_id, rankings.size());
    if (fresh) rankings.push_back({query_id, {}});
    rankings[it->second].items.push_back(item);
  }
  return rankings;
}

Judgments read_judgments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open judgments file");
  Judgments out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string query_id;
    std::string item;
    int flag = 0;
    if (!(row >> query_id >> item >> flag) || (flag != 0 && flag != 1)) {
      throw FileFormatError(path, line_no,
                            "expected '<query> <item> <0|1>'");
    }
    out[{query_id, item}] = flag;
  }
  return out;
}

MetricReport evaluate_rankings(std::span<const QueryRanking> rankings,
                               const Judgments& judgments,
                               std::span<const std::size_t> ks, int fr_max) {
  if (rankings.empty()) throw std::invalid_argument("no rankings to score");
  if (ks.empty()) throw std::invalid_argument("no cutoffs requested");
  MetricReport report;
  report.ks.assign(ks.begin(), ks.end());
  report.queries = rankings.size();
  const std::size_t max_k =
      std::max<std::size_t>(1, *std::max_element(ks.begin(), ks.end()));

  std::vector<std::vector<int>> all_flags;
  std::vector<int> frs;
  for (const QueryRanking& ranking : rankings) {
    std::vector<int> flags;
    flags.reserve(std::max(max_k, ranking.items.size()));
    for (const std::string& item : ranking.items) {
      const auto it = judgments.find({ranking.query_id, item});
      flags.push_back(it == judgments.end() ? 0 : it->second);
    }
    const int fr = first_rank(flags, fr_max);
    frs.push_back(fr == fr_max + 1 ? 0 : fr);
    report.mean_fr += fr;
    while (flags.size() < max_k) flags.push_back(0);  // absent ranks miss
    all_flags.push_back(std::move(flags));
  }
  report.mean_fr /= static_cast<double>(rankings.size());

  for (std::size_t k : ks) {
    double p_sum = 0;
    double n_sum = 0;
    for (const std::vector<int>& flags : all_flags) {
      p_sum += precision_at_k(flags, k);
      n_sum += ndcg_at_k(flags, k);
    }
    report.precision.push_back(p_sum / static_cast<double>(all_flags.size()));
    report.ndcg.push_back(n_sum / static_cast<double>(all_flags.size()));
  }
  report.map = map_score(all_flags);
  report.mrr = mrr_score(frs);
  return report;
}

std::string to_tsv(const MetricReport& report) {
  std::ostringstream out;
  out << "metric\tk\tvalue\n";
  char buffer[32];
  const auto fmt = [&buffer](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.6f", v);
    return std::string(buffer);
  };
  for (std::size_t i = 0; i < report.ks.size(); ++i) {
    out << "precision\t" << report.ks[i] << '\t' << fmt(report.precision[i])
        << '\n';
  }
  for (std::size_t i = 0; i < report.ks.size(); ++i) {
    out << "ndcg\t" << report.ks[i] << '\t' << fmt(report.ndcg[i]) << '\n';
  }
  out << "map\t-\t" << fmt(report.map) << '\n';
  out << "mrr\t-\t" << fmt(report.mrr) << '\n';
  out << "mean_fr\t-\t" << fmt(report.mean_fr) << '\n';
  return out.str();
}

}  // namespace word2api
