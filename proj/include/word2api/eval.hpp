#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace word2api {

/// Fraction of relevant items in the top k. Flags are binary, 1 <= k <= N.
double precision_at_k(std::span<const int> flags, std::size_t k);

/// DCG@k / IDCG@k with DCG@k = sum_i r_i / log2(i + 1); the ideal ordering
/// puts all relevant items first. All-zero flags score 0.
double ndcg_at_k(std::span<const int> flags, std::size_t k);

/// 1-based position of the first relevant item within the top max_k;
/// max_k + 1 when none is found there.
int first_rank(std::span<const int> flags, int max_k = 10);

/// Smoothed n-gram precision with brevity penalty:
///   exp(sum_n (1/N) ln((clipped matches_n + 1) / (rec n-grams_n + 1))) * BP,
///   BP = 1 if |rec| > |orc|, else e^(1 - |orc|/|rec|).
double bleu(std::span<const std::string> rec, std::span<const std::string> orc,
            int max_n = 4);

/// Best BLEU among the top-k recommended sequences.
double bleu_at_k(std::span<const std::vector<std::string>> recs,
                 std::span<const std::string> orc, std::size_t k);

/// sum_k r_k * Precision@k over the returned list, without normalizing by
/// the number of relevant items (the verbatim form used throughout).
double average_precision(std::span<const int> flags);

/// Conventional AP (divided by the relevant count); offered for comparison
/// with other tools, 0 when nothing is relevant.
double standard_average_precision(std::span<const int> flags);

/// Mean of per-question average precision.
double map_score(std::span<const std::vector<int>> per_question_flags,
                 bool standard = false);

/// Mean reciprocal first rank; 0 entries mark questions with no hit and
/// contribute 0.
double mrr_score(std::span<const int> first_ranks);

// --- batch harness ------------------------------------------------------------

struct QueryRanking {
  std::string query_id;
  std::vector<std::string> items;  // rank order
};

/// (query_id, item_id) -> 0/1.
using Judgments = std::map<std::pair<std::string, std::string>, int>;

/// Ranking files: "<query_id> <rank> <score> <item_id>" lines, grouped by
/// query in input order.
std::vector<QueryRanking> read_rankings(const std::string& path);

/// Judgment files: "<query_id> <item_id> <0|1>" lines.
Judgments read_judgments(const std::string& path);

struct MetricReport {
  std::vector<std::size_t> ks;
  std::vector<double> precision;  // one per k, averaged over queries
  std::vector<double> ndcg;
  double map = 0;
  double mrr = 0;
  double mean_fr = 0;  // misses counted as max_k + 1
  std::size_t queries = 0;
};

/// Scores rankings against judgments; unjudged items count as irrelevant and
/// rankings shorter than k are padded with misses.
MetricReport evaluate_rankings(std::span<const QueryRanking> rankings,
                               const Judgments& judgments,
                               std::span<const std::size_t> ks,
                               int fr_max = 10);

std::string to_tsv(const MetricReport& report);

}  // namespace word2api
