// word2api - command-line surface for the word/API relatedness toolkit.
//
// Subcommands: ingest, trainset, train, nearest, rank, expand, recommend,
// link, tune-alpha, eval. Exit codes: 0 ok, 1 data error, 2 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "word2api/corpus.hpp"
#include "word2api/embedding.hpp"
#include "word2api/errors.hpp"
#include "word2api/eval.hpp"
#include "word2api/relatedness.hpp"
#include "word2api/search.hpp"
#include "word2api/text.hpp"
#include "word2api/trainset.hpp"

namespace w2a = word2api;

namespace {

using Model = w2a::EmbeddingModel<float>;

std::string fmt_score(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

w2a::StopWords resolve_stop_words(const std::string& path) {
  return path.empty() ? w2a::default_stop_words() : w2a::load_stop_words(path);
}

w2a::Allowlist resolve_allowlist(const std::string& path) {
  return path.empty() ? w2a::default_allowlist() : w2a::load_allowlist(path);
}

// Co-occurrence statistics from either a tuple file or a cached stats file.
w2a::CooccurrenceStats resolve_stats(const std::string& tuples_path,
                                     const std::string& stats_path) {
  if (!stats_path.empty()) return w2a::CooccurrenceStats::load(stats_path);
  if (!tuples_path.empty()) {
    const auto tuples = w2a::read_tuples(tuples_path);
    return w2a::CooccurrenceStats::build(tuples);
  }
  throw w2a::ConfigError("pass --tuples or --stats");
}

void print_neighbors(const std::vector<w2a::Neighbor>& neighbors) {
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    std::cout << i + 1 << ' ' << fmt_score(neighbors[i].score) << ' '
              << neighbors[i].token << '\n';
  }
}

struct IngestOptions {
  std::string input;
  std::string output;
  std::string allowlist;
  std::string stop_words;
};

int run_ingest(const IngestOptions& opt) {
  const auto records = w2a::read_records(opt.input);
  const auto allowlist = resolve_allowlist(opt.allowlist);
  const auto stop_words = resolve_stop_words(opt.stop_words);
  std::size_t rejected = 0;
  const auto tuples = w2a::build_tuples(
      records, allowlist, stop_words,
      [&](std::string_view message) {
        ++rejected;
        std::cerr << opt.input << ": " << message << '\n';
      });
  w2a::write_tuples(opt.output, tuples);
  std::cerr << "ingest: " << records.size() << " records -> " << tuples.size()
            << " tuples (" << rejected << " malformed)\n";
  return 0;
}

struct TrainsetOptions {
  std::string input;
  std::string output;
  std::string strategy = "shuffle";
  int copies = 10;
  double support = 0.0001;
  std::uint64_t seed = 1;
};

int run_trainset(const TrainsetOptions& opt) {
  const auto tuples = w2a::read_tuples(opt.input);
  w2a::TrainingText text;
  if (opt.strategy == "shuffle") {
    text = w2a::shuffle_strategy(tuples, opt.copies, opt.seed);
  } else if (opt.strategy == "sequence") {
    text = w2a::sequence_strategy(tuples);
  } else if (opt.strategy == "fis") {
    text = w2a::fis_reorder(tuples, opt.support, false, opt.seed);
  } else if (opt.strategy == "fis-shuffle") {
    text = w2a::fis_reorder(tuples, opt.support, true, opt.seed);
  } else {
    throw w2a::ConfigError("unknown strategy '" + opt.strategy + "'");
  }
  w2a::write_training_text(opt.output, text);
  std::cerr << "trainset: " << tuples.size() << " tuples -> "
            << text.lines.size() << " lines (" << text.strategy << ")\n";
  return 0;
}

struct TrainOptions {
  std::string input;
  std::string output;
  w2a::TrainConfig config;
};

int run_train(const TrainOptions& opt) {
  const auto lines = w2a::read_training_text(opt.input);
  const Model model = w2a::train<float>(lines, opt.config);
  w2a::save_model(model, opt.output);
  std::cerr << "train: " << lines.size() << " lines, vocabulary "
            << model.vocab.size() << ", dim " << model.dim() << '\n';
  return 0;
}

struct NearestOptions {
  std::string model;
  std::string term;
  std::size_t k = 10;
  std::string kind = "all";
};

int run_nearest(const NearestOptions& opt) {
  w2a::TermKind kind = w2a::TermKind::kAll;
  if (opt.kind == "words") {
    kind = w2a::TermKind::kWords;
  } else if (opt.kind == "apis") {
    kind = w2a::TermKind::kApis;
  } else if (opt.kind != "all") {
    throw w2a::ConfigError("--kind must be words, apis, or all");
  }
  const Model model = w2a::load_model<float>(opt.model);
  print_neighbors(w2a::nearest_terms(model, opt.term, opt.k, kind));
  return 0;
}

struct RankOptions {
  std::string term;
  std::string method = "word2api";
  std::size_t k = 100;
  std::string model;
  std::string tuples;
  std::string stats;
  std::string write_stats;
};

int run_rank(const RankOptions& opt) {
  const auto method = w2a::parse_rank_method(opt.method);
  if (!method) throw w2a::ConfigError("unknown method '" + opt.method + "'");
  if (*method == w2a::RankMethod::kWord2api) {
    if (opt.model.empty()) {
      throw w2a::ConfigError("method word2api needs --model");
    }
    const Model model = w2a::load_model<float>(opt.model);
    print_neighbors(w2a::rank_apis(model, opt.term, opt.k));
    return 0;
  }
  const auto stats = resolve_stats(opt.tuples, opt.stats);
  if (!opt.write_stats.empty()) stats.save(opt.write_stats);
  print_neighbors(w2a::rank_apis(stats, opt.term, *method, opt.k));
  return 0;
}

struct ExpandOptions {
  std::string model;
  std::string query;
  std::string tuples;
  std::string stats;
  std::size_t k = 10;
  std::string stop_words;
  bool log_idf = false;
};

int run_expand(const ExpandOptions& opt) {
  const Model model = w2a::load_model<float>(opt.model);
  const auto stats = resolve_stats(opt.tuples, opt.stats);
  const auto idf = w2a::IdfTable::build(stats, opt.log_idf);
  const auto stop_words = resolve_stop_words(opt.stop_words);
  const auto apis = w2a::api_terms(model);
  const auto expanded =
      w2a::expand_query(model, idf, opt.query, apis, opt.k, stop_words);
  for (std::size_t i = 0; i < expanded.entries.size(); ++i) {
    std::cout << i + 1 << ' ' << fmt_score(expanded.entries[i].weight) << ' '
              << expanded.entries[i].api << '\n';
  }
  return 0;
}

struct RecommendOptions {
  std::string model;
  std::string query;
  std::string query_id = "q";
  std::string tuples;
  std::string stats;
  std::size_t k = 10;
  std::size_t expansion_k = 10;
  std::string stop_words;
  bool log_idf = false;
  bool show_apis = false;
};

int run_recommend(const RecommendOptions& opt) {
  if (opt.tuples.empty()) {
    throw w2a::ConfigError("recommend needs --tuples to search");
  }
  const Model model = w2a::load_model<float>(opt.model);
  const auto tuples = w2a::read_tuples(opt.tuples);
  const auto stats = opt.stats.empty()
                         ? w2a::CooccurrenceStats::build(tuples)
                         : w2a::CooccurrenceStats::load(opt.stats);
  const auto idf = w2a::IdfTable::build(stats, opt.log_idf);
  const auto stop_words = resolve_stop_words(opt.stop_words);
  const auto apis = w2a::api_terms(model);
  const auto expanded = w2a::expand_query(model, idf, opt.query, apis,
                                          opt.expansion_k, stop_words);
  const auto ranked = w2a::recommend_sequences(expanded, tuples, opt.k);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    std::cout << opt.query_id << ' ' << i + 1 << ' '
              << fmt_score(ranked[i].score) << " t" << ranked[i].index + 1;
    if (opt.show_apis) {
      std::cout << '\t';
      const auto& apis_of = tuples[ranked[i].index].apis;
      for (std::size_t j = 0; j < apis_of.size(); ++j) {
        if (j > 0) std::cout << ' ';
        std::cout << apis_of[j];
      }
    }
    std::cout << '\n';
  }
  return 0;
}

struct LinkOptions {
  std::string questions;
  std::string docs;
  std::string method = "vsm";
  double alpha = -1;  // <0: per-method default
  std::string model;
  std::string tuples;
  std::string stats;
  std::size_t k = 10;
  std::string stop_words;
  bool log_idf = false;
};

int run_link(const LinkOptions& opt) {
  const auto method = w2a::parse_link_method(opt.method);
  if (!method) throw w2a::ConfigError("unknown method '" + opt.method + "'");
  w2a::LinkConfig config;
  config.method = *method;
  if (opt.alpha >= 0) {
    config.alpha = opt.alpha;
  } else {
    config.alpha = *method == w2a::LinkMethod::kVsmWord2api ? 0.36 : 0.18;
  }
  const auto questions = w2a::read_questions(opt.questions);
  const auto docs = w2a::read_documents(opt.docs);
  const auto stop_words = resolve_stop_words(opt.stop_words);

  std::optional<Model> model;
  std::optional<w2a::IdfTable> idf;
  if (*method != w2a::LinkMethod::kVsm) {
    if (opt.model.empty()) {
      throw w2a::ConfigError("method '" + opt.method + "' needs --model");
    }
    model = w2a::load_model<float>(opt.model);
    idf = w2a::IdfTable::build(resolve_stats(opt.tuples, opt.stats),
                               opt.log_idf);
  }
  for (const w2a::LinkQuestion& question : questions) {
    const auto ranked = w2a::link_documents(
        question.text, docs, config, model ? &*model : nullptr,
        idf ? &*idf : nullptr, opt.k, stop_words);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::cout << question.id << ' ' << i + 1 << ' '
                << fmt_score(ranked[i].score) << ' ' << ranked[i].doc_id
                << '\n';
    }
  }
  return 0;
}

struct TuneAlphaOptions {
  std::string questions;
  std::string docs;
  std::string method = "word2api";
  std::string model;
  std::string tuples;
  std::string stats;
  std::size_t k = 10;
  std::string stop_words;
  bool log_idf = false;
};

int run_tune_alpha(const TuneAlphaOptions& opt) {
  w2a::LinkMethod base;
  if (opt.method == "we") {
    base = w2a::LinkMethod::kWe;
  } else if (opt.method == "word2api") {
    base = w2a::LinkMethod::kWord2api;
  } else {
    throw w2a::ConfigError("--method must be we or word2api");
  }
  const auto questions = w2a::read_questions(opt.questions);
  const auto docs = w2a::read_documents(opt.docs);
  if (opt.model.empty()) throw w2a::ConfigError("tune-alpha needs --model");
  const Model model = w2a::load_model<float>(opt.model);
  const auto idf =
      w2a::IdfTable::build(resolve_stats(opt.tuples, opt.stats), opt.log_idf);
  const auto stop_words = resolve_stop_words(opt.stop_words);
  const double alpha =
      w2a::tune_alpha(questions, docs, base, model, idf, stop_words, opt.k);
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%.2f", alpha);
  std::cout << buffer << '\n';
  return 0;
}

struct EvalOptions {
  std::string rankings;
  std::string judgments;
  std::vector<std::size_t> ks = {1, 5, 10};
  int fr_max = 10;
};

int run_eval(const EvalOptions& opt) {
  const auto rankings = w2a::read_rankings(opt.rankings);
  const auto judgments = w2a::read_judgments(opt.judgments);
  const auto report =
      w2a::evaluate_rankings(rankings, judgments, opt.ks, opt.fr_max);
  std::cout << w2a::to_tsv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint word/API embeddings: corpus tools, trainer, "
               "relatedness, retrieval, and evaluation"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();  // help shows defaults

  IngestOptions ingest_opt;
  auto* ingest = app.add_subcommand(
      "ingest", "Method records -> word-API tuple file");
  ingest->add_option("--input", ingest_opt.input, "method record file")
      ->required();
  ingest->add_option("--output", ingest_opt.output, "tuple file")->required();
  ingest->add_option("--allowlist", ingest_opt.allowlist,
                     "package prefix file (default: bundled Java SE list)");
  ingest->add_option("--stop-words", ingest_opt.stop_words,
                     "stop-word file (default: bundled English list)");

  TrainsetOptions trainset_opt;
  auto* trainset = app.add_subcommand(
      "trainset", "Word-API tuples -> training text");
  trainset->add_option("--input", trainset_opt.input, "tuple file")
      ->required();
  trainset->add_option("--output", trainset_opt.output, "training text file")
      ->required();
  trainset->add_option("--strategy", trainset_opt.strategy,
                       "shuffle | sequence | fis | fis-shuffle");
  trainset->add_option("--copies", trainset_opt.copies,
                       "shuffled copies per tuple");
  trainset->add_option("--support", trainset_opt.support,
                       "FIS support threshold");
  trainset->add_option("--seed", trainset_opt.seed, "random seed");

  TrainOptions train_opt;
  auto* train = app.add_subcommand("train", "Training text -> model file");
  train->add_option("--input", train_opt.input, "training text file")
      ->required();
  train->add_option("--output", train_opt.output, "model file")->required();
  train->add_option("--dim", train_opt.config.dim, "vector dimension");
  train->add_option("--window", train_opt.config.window, "context window");
  train->add_option("--min-count", train_opt.config.min_count,
                    "discard terms seen fewer times");
  train->add_option("--sample", train_opt.config.sample,
                    "subsampling threshold");
  train->add_option("--negative", train_opt.config.negative,
                    "negative samples per center token");
  train->add_option("--iter", train_opt.config.iterations,
                    "passes over the training text");
  train->add_option("--alpha", train_opt.config.alpha0,
                    "starting learning rate");
  train->add_option("--seed", train_opt.config.seed, "random seed");
  train->add_option("--workers", train_opt.config.workers,
                    "training threads (1 = deterministic)");

  NearestOptions nearest_opt;
  auto* nearest = app.add_subcommand("nearest",
                                     "Nearest terms by cosine similarity");
  nearest->add_option("--model", nearest_opt.model, "model file")->required();
  nearest->add_option("--term", nearest_opt.term, "query term")->required();
  nearest->add_option("--k", nearest_opt.k, "list size");
  nearest->add_option("--kind", nearest_opt.kind, "words | apis | all");

  RankOptions rank_opt;
  auto* rank = app.add_subcommand("rank", "Top-k APIs for a word");
  rank->add_option("--term", rank_opt.term, "query word")->required();
  rank->add_option("--method", rank_opt.method,
                   "word2api | pmi | nsd | hal");
  rank->add_option("--k", rank_opt.k, "list size");
  rank->add_option("--model", rank_opt.model, "model file (word2api)");
  rank->add_option("--tuples", rank_opt.tuples, "tuple file (baselines)");
  rank->add_option("--stats", rank_opt.stats, "stats cache (baselines)");
  rank->add_option("--write-stats", rank_opt.write_stats,
                   "write the stats cache after building it");

  ExpandOptions expand_opt;
  auto* expand = app.add_subcommand("expand",
                                    "Expand a query into a weighted API list");
  expand->add_option("--model", expand_opt.model, "model file")->required();
  expand->add_option("--query", expand_opt.query, "query text")->required();
  expand->add_option("--tuples", expand_opt.tuples, "tuple file (for IDF)");
  expand->add_option("--stats", expand_opt.stats, "stats cache (for IDF)");
  expand->add_option("--k", expand_opt.k, "expansion size");
  expand->add_option("--stop-words", expand_opt.stop_words, "stop-word file");
  expand->add_flag("--log-idf", expand_opt.log_idf,
                   "use ln(N/df) instead of the ratio IDF");

  RecommendOptions recommend_opt;
  auto* recommend = app.add_subcommand(
      "recommend", "Retrieve tuples for a query via API expansion");
  recommend->add_option("--model", recommend_opt.model, "model file")
      ->required();
  recommend->add_option("--query", recommend_opt.query, "query text")
      ->required();
  recommend->add_option("--query-id", recommend_opt.query_id,
                        "id printed in the ranking");
  recommend->add_option("--tuples", recommend_opt.tuples,
                        "tuple file to search")
      ->required();
  recommend->add_option("--stats", recommend_opt.stats,
                        "stats cache (for IDF; default: build from tuples)");
  recommend->add_option("--k", recommend_opt.k, "results");
  recommend->add_option("--expansion-k", recommend_opt.expansion_k,
                        "APIs in the expanded query");
  recommend->add_option("--stop-words", recommend_opt.stop_words,
                        "stop-word file");
  recommend->add_flag("--log-idf", recommend_opt.log_idf,
                      "use ln(N/df) instead of the ratio IDF");
  recommend->add_flag("--show-apis", recommend_opt.show_apis,
                      "append each tuple's API sequence");

  LinkOptions link_opt;
  auto* link = app.add_subcommand("link",
                                  "Rank API documents for questions");
  link->add_option("--questions", link_opt.questions, "question file")
      ->required();
  link->add_option("--docs", link_opt.docs, "API document file")->required();
  link->add_option("--method", link_opt.method,
                   "vsm | we | word2api | vsm+we | vsm+word2api");
  link->add_option("--alpha", link_opt.alpha,
                   "VSM weight for integrated methods "
                   "(default 0.18 for vsm+we, 0.36 for vsm+word2api)")
      ->check(CLI::Range(0.0, 1.0))
      ->default_str("");
  link->add_option("--model", link_opt.model, "model file");
  link->add_option("--tuples", link_opt.tuples, "tuple file (for IDF)");
  link->add_option("--stats", link_opt.stats, "stats cache (for IDF)");
  link->add_option("--k", link_opt.k, "documents per question");
  link->add_option("--stop-words", link_opt.stop_words, "stop-word file");
  link->add_flag("--log-idf", link_opt.log_idf,
                 "use ln(N/df) instead of the ratio IDF");

  TuneAlphaOptions tune_opt;
  auto* tune = app.add_subcommand(
      "tune-alpha", "Grid-search the integration weight by MAP");
  tune->add_option("--questions", tune_opt.questions,
                   "training questions with oracle ids")
      ->required();
  tune->add_option("--docs", tune_opt.docs, "API document file")->required();
  tune->add_option("--method", tune_opt.method, "we | word2api");
  tune->add_option("--model", tune_opt.model, "model file")->required();
  tune->add_option("--tuples", tune_opt.tuples, "tuple file (for IDF)");
  tune->add_option("--stats", tune_opt.stats, "stats cache (for IDF)");
  tune->add_option("--k", tune_opt.k, "documents per question");
  tune->add_option("--stop-words", tune_opt.stop_words, "stop-word file");
  tune->add_flag("--log-idf", tune_opt.log_idf,
                 "use ln(N/df) instead of the ratio IDF");

  EvalOptions eval_opt;
  auto* eval = app.add_subcommand("eval",
                                  "Score rankings against judgments");
  eval->add_option("--rankings", eval_opt.rankings, "ranking file")
      ->required();
  eval->add_option("--judgments", eval_opt.judgments, "judgments file")
      ->required();
  eval->add_option("--ks", eval_opt.ks, "cutoffs for precision/NDCG")
      ->delimiter(',');
  eval->add_option("--fr-max", eval_opt.fr_max,
                   "first-rank horizon (misses count as fr-max + 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "word2api: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*ingest) return run_ingest(ingest_opt);
    if (*trainset) return run_trainset(trainset_opt);
    if (*train) return run_train(train_opt);
    if (*nearest) return run_nearest(nearest_opt);
    if (*rank) return run_rank(rank_opt);
    if (*expand) return run_expand(expand_opt);
    if (*recommend) return run_recommend(recommend_opt);
    if (*link) return run_link(link_opt);
    if (*tune) return run_tune_alpha(tune_opt);
    if (*eval) return run_eval(eval_opt);
  } catch (const w2a::ConfigError& e) {
    std::cerr << "word2api: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "word2api: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
