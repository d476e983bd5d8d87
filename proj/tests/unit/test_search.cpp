#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "corpora.hpp"
#include "linking.hpp"
#include "word2api/search.hpp"

using word2api::ApiDocument;
using word2api::EmbeddingModel;
using word2api::expand_query;
using word2api::ExpandedQuery;
using word2api::IdfTable;
using word2api::link_documents;
using word2api::LinkConfig;
using word2api::LinkMethod;
using word2api::LinkQuestion;
using word2api::recommend_sequences;
using word2api::ScoredDoc;
using word2api::sim_sets;
using word2api::WordApiTuple;

namespace {

const word2api::StopWords& stop() { return word2api::default_stop_words(); }

// model + idf over a micro corpus where "sort" always co-occurs with one API
struct ExpandFixture {
  EmbeddingModel<double> model;
  IdfTable idf;
  std::vector<std::string> apis;
};

ExpandFixture expand_fixture() {
  ExpandFixture fx;
  const std::vector<std::string> terms = {
      "sort",        "list",        "p.Arrays#sort", "p.Arrays#fill",
      "p.List#add",  "p.List#size",
  };
  fx.model = testsupport::toy_model<double>(terms, 4, 11);
  // engineer: sort's vector equals its API's vector
  fx.model.input.row(fx.model.vocab.index_of("p.Arrays#sort")) =
      fx.model.input.row(fx.model.vocab.index_of("sort"));
  std::vector<WordApiTuple> tuples = {
      {{"sort", "list"}, {"p.Arrays#sort"}},
      {{"sort"}, {"p.Arrays#sort", "p.List#add"}},
      {{"list"}, {"p.List#add", "p.List#size", "p.Arrays#fill"}},
  };
  fx.idf =
      IdfTable::build(word2api::CooccurrenceStats::build(tuples));
  fx.apis = word2api::api_terms(fx.model);
  return fx;
}

}  // namespace

TEST_CASE("expand_query ranks the engineered API first") {
  const ExpandFixture fx = expand_fixture();
  const ExpandedQuery expanded =
      expand_query(fx.model, fx.idf, "sort", fx.apis, 10, stop());
  REQUIRE(!expanded.entries.empty());
  CHECK(expanded.entries[0].api == "p.Arrays#sort");
  CHECK(expanded.entries[0].weight == doctest::Approx(1.0));
  // weights descending, APIs unique
  std::set<std::string> seen;
  for (std::size_t i = 0; i < expanded.entries.size(); ++i) {
    CHECK(seen.insert(expanded.entries[i].api).second);
    if (i > 0) {
      CHECK(expanded.entries[i - 1].weight >= expanded.entries[i].weight);
    }
  }
  SUBCASE("k = 1 keeps only the best API") {
    const auto one = expand_query(fx.model, fx.idf, "sort", fx.apis, 1, stop());
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].api == "p.Arrays#sort");
  }
  SUBCASE("scores are the set similarity against each singleton API") {
    const auto got = expand_query(fx.model, fx.idf, "sort list", fx.apis, 10,
                                  stop());
    const std::vector<std::string> words = {"sort", "list"};
    for (const auto& entry : got.entries) {
      const std::span<const std::string> single{&entry.api, 1};
      CHECK(entry.weight ==
            doctest::Approx(sim_sets(fx.model, fx.idf, words, single))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("fully out-of-vocabulary queries name the dropped tokens") {
  const ExpandFixture fx = expand_fixture();
  // the message carries the normalized tokens: gener, md, hash
  CHECK_THROWS_WITH_AS(
      expand_query(fx.model, fx.idf, "generate md5 hash", fx.apis, 10, stop()),
      doctest::Contains("gener"), word2api::OovError);
  CHECK_THROWS_WITH_AS(
      expand_query(fx.model, fx.idf, "generate md5 hash", fx.apis, 10, stop()),
      doctest::Contains("hash"), word2api::OovError);
}

TEST_CASE("recommend_sequences cosine geometry") {
  ExpandedQuery expanded;
  expanded.entries = {{"p.C#a", 0.9}, {"p.C#b", 0.6}};
  const std::vector<WordApiTuple> tuples = {
      {{"w"}, {"p.C#x", "p.C#y"}},          // no overlap
      {{"w"}, {"p.C#a", "p.C#b"}},          // exactly the expansion
      {{"w"}, {"p.C#a", "p.C#b", "p.C#x"}}, // superset
  };
  const auto ranked = recommend_sequences(expanded, tuples, 10);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].index == 1);
  // parallel vectors: weights restricted to the tuple's API set
  const double norm = std::sqrt(0.9 * 0.9 + 0.6 * 0.6);
  CHECK(ranked[0].score ==
        doctest::Approx((0.9 + 0.6) / (norm * std::sqrt(2.0))));
  CHECK(ranked[1].index == 2);
  CHECK(ranked[2].index == 0);
  CHECK(ranked[2].score == 0.0);
}

TEST_CASE("recommend_sequences matches brute-force enumeration") {
  std::mt19937_64 rng = word2api::seeded_stream(71, 6);
  const auto tuples = testsupport::random_corpus(71, 50, 10, 12);
  ExpandedQuery expanded;
  for (int i = 0; i < 5; ++i) {
    expanded.entries.push_back(
        {testsupport::api_term(static_cast<int>(word2api::bounded(rng, 12))),
         1.0 - 0.1 * i});
  }
  // drop duplicate APIs the loop may have produced
  std::set<std::string> seen;
  std::erase_if(expanded.entries, [&](const ExpandedQuery::Entry& e) {
    return !seen.insert(e.api).second;
  });

  const auto ranked = recommend_sequences(expanded, tuples, tuples.size());

  // oracle: dense cosine per tuple, stable sort by the documented tie rules
  struct Row {
    std::size_t index;
    double score;
    std::size_t napis;
  };
  std::vector<Row> oracle;
  double qnorm = 0;
  for (const auto& e : expanded.entries) qnorm += e.weight * e.weight;
  qnorm = std::sqrt(qnorm);
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const std::set<std::string> apis(tuples[i].apis.begin(),
                                     tuples[i].apis.end());
    double dot = 0;
    for (const auto& e : expanded.entries) {
      if (apis.contains(e.api)) dot += e.weight;
    }
    const double score =
        dot == 0 ? 0.0 : dot / (qnorm * std::sqrt(double(apis.size())));
    oracle.push_back({i, score, apis.size()});
  }
  std::stable_sort(oracle.begin(), oracle.end(), [](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.napis < b.napis;
  });
  REQUIRE(ranked.size() == oracle.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    CHECK(ranked[i].index == oracle[i].index);
    CHECK(ranked[i].score == doctest::Approx(oracle[i].score).epsilon(1e-9));
  }
}

TEST_CASE("recommendation ranking is scale invariant") {
  const auto tuples = testsupport::random_corpus(73, 40, 8, 10);
  ExpandedQuery a;
  a.entries = {{testsupport::api_term(1), 0.8},
               {testsupport::api_term(2), 0.5},
               {testsupport::api_term(3), 0.2}};
  ExpandedQuery b = a;
  for (auto& e : b.entries) e.weight *= 3.0;
  const auto ra = recommend_sequences(a, tuples, tuples.size());
  const auto rb = recommend_sequences(b, tuples, tuples.size());
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].index == rb[i].index);
  }
}

TEST_CASE("recommend_sequences rejects an empty expansion") {
  CHECK_THROWS_AS(recommend_sequences(ExpandedQuery{}, {}, 5),
                  std::invalid_argument);
}

TEST_CASE("ties prefer tuples with fewer APIs, then input order") {
  ExpandedQuery expanded;
  expanded.entries = {{"p.C#a", 1.0}};
  const std::vector<WordApiTuple> tuples = {
      {{"w"}, {"p.C#x", "p.C#y"}},        // score 0, 2 apis
      {{"w"}, {"p.C#z"}},                 // score 0, 1 api
      {{"w"}, {"p.C#q"}},                 // score 0, 1 api, later input
  };
  const auto ranked = recommend_sequences(expanded, tuples, 3);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].index == 1);
  CHECK(ranked[1].index == 2);
  CHECK(ranked[2].index == 0);
}

TEST_CASE("vsm linking puts an identical description at rank 1") {
  const std::vector<ApiDocument> docs = {
      {"app.A", {"app.A#m"}, "parse xml documents quickly", "app.A"},
      {"app.B", {"app.B#m"}, "open network sockets", "app.B"},
      {"app.C", {"app.C#m"}, "parse settings and xml", "app.C"},
  };
  LinkConfig config;
  config.method = LinkMethod::kVsm;
  const auto ranked = link_documents<double>(
      "parse xml documents quickly", docs, config, nullptr, nullptr, 10,
      stop());
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].doc_id == "app.A");
  CHECK(ranked[0].score == doctest::Approx(1.0));
}

TEST_CASE("alpha = 1 reduces the integrated ranking to vsm") {
  const testsupport::LinkingFixture fx = testsupport::vsm_perfect_fixture();
  LinkConfig vsm;
  vsm.method = LinkMethod::kVsm;
  LinkConfig mixed;
  mixed.method = LinkMethod::kVsmWord2api;
  mixed.alpha = 1.0;
  for (const LinkQuestion& q : fx.questions) {
    const auto a =
        link_documents<double>(q.text, fx.docs, vsm, nullptr, nullptr, 10,
                               stop());
    const auto b = link_documents<double>(q.text, fx.docs, mixed, &fx.model,
                                          &fx.idf, 10, stop());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].doc_id == b[i].doc_id);
    }
  }
}

TEST_CASE("word2api linking equals direct set-similarity enumeration") {
  const auto tuples = testsupport::random_corpus(91, 60, 12, 10);
  std::vector<std::string> terms;
  for (int i = 0; i < 12; ++i) terms.push_back(testsupport::word_term(i));
  for (int i = 0; i < 10; ++i) terms.push_back(testsupport::api_term(i));
  const auto model = testsupport::toy_model<double>(terms, 5, 13);
  const auto idf =
      IdfTable::build(word2api::CooccurrenceStats::build(tuples));

  std::vector<ApiDocument> docs;
  for (int d = 0; d < 10; ++d) {
    ApiDocument doc;
    doc.class_id = "pkg.Cls";  // api_term() uses this prefix
    doc.doc_id = "doc" + std::to_string(d);
    doc.method_apis = {testsupport::api_term(d)};
    doc.description = "w" + std::to_string(d % 12);
    docs.push_back(std::move(doc));
  }
  const std::string question = "w0 w3 w7";
  LinkConfig config;
  config.method = LinkMethod::kWord2api;
  const auto ranked = link_documents<double>(question, docs, config, &model,
                                             &idf, 10, stop());

  const std::vector<std::string> qwords =
      word2api::normalize_text(question, stop());
  std::vector<ScoredDoc> oracle;
  for (const ApiDocument& doc : docs) {
    oracle.push_back(
        {doc.doc_id, sim_sets(model, idf, qwords, doc.method_apis)});
  }
  std::sort(oracle.begin(), oracle.end(),
            [](const ScoredDoc& a, const ScoredDoc& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.doc_id < b.doc_id;
            });
  REQUIRE(ranked.size() == oracle.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    CHECK(ranked[i].doc_id == oracle[i].doc_id);
    CHECK(ranked[i].score == doctest::Approx(oracle[i].score).epsilon(1e-12));
  }
}

TEST_CASE("linking is invariant to document order up to ties") {
  const testsupport::LinkingFixture fx = testsupport::vsm_perfect_fixture();
  LinkConfig config;
  config.method = LinkMethod::kVsmWord2api;
  config.alpha = 0.36;
  const auto original = link_documents<double>(
      fx.questions[0].text, fx.docs, config, &fx.model, &fx.idf, 10, stop());
  std::vector<ApiDocument> shuffled = {fx.docs[2], fx.docs[0], fx.docs[3],
                                       fx.docs[1]};
  const auto permuted = link_documents<double>(
      fx.questions[0].text, shuffled, config, &fx.model, &fx.idf, 10, stop());
  REQUIRE(original.size() == permuted.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(original[i].doc_id == permuted[i].doc_id);
  }
}

TEST_CASE("linking configuration errors") {
  const testsupport::LinkingFixture fx = testsupport::vsm_perfect_fixture();
  CHECK(!word2api::parse_link_method("cosine").has_value());
  CHECK(word2api::parse_link_method("vsm+word2api") ==
        LinkMethod::kVsmWord2api);
  LinkConfig config;
  config.method = LinkMethod::kWe;
  CHECK_THROWS_AS(link_documents<double>("q", fx.docs, config, nullptr,
                                         nullptr, 10, stop()),
                  word2api::ConfigError);
  config.method = LinkMethod::kVsm;
  CHECK_THROWS_AS(link_documents<double>("q", {}, config, nullptr, nullptr,
                                         10, stop()),
                  word2api::ConfigError);
}

TEST_CASE("alpha tuning walks the exact grid and maximizes MAP") {
  const testsupport::LinkingFixture fx = testsupport::vsm_perfect_fixture();
  const auto grid = word2api::alpha_grid_search(
      fx.questions, fx.docs, LinkMethod::kWord2api, fx.model, fx.idf, stop());
  REQUIRE(grid.size() == 100);
  for (int i = 0; i < 100; ++i) {
    CHECK(grid[i].alpha == doctest::Approx((i + 1) / 100.0).epsilon(1e-15));
  }
  const double best = word2api::tune_alpha(
      fx.questions, fx.docs, LinkMethod::kWord2api, fx.model, fx.idf, stop());
  CHECK(best == doctest::Approx(1.0));
  // exhaustive argmax: the grid itself is the brute force
  const auto max_at = std::max_element(
      grid.begin(), grid.end(), [](const auto& a, const auto& b) {
        return a.map < b.map;
      });
  CHECK(max_at->alpha == doctest::Approx(best));
  for (int i = 0; i + 1 < 100; ++i) {
    CHECK(grid[99].map > grid[i].map);  // strict optimum by construction
  }
}

TEST_CASE("alpha tuning validates its inputs") {
  const testsupport::LinkingFixture fx = testsupport::vsm_perfect_fixture();
  CHECK_THROWS_AS(
      word2api::tune_alpha(std::vector<LinkQuestion>{}, fx.docs,
                           LinkMethod::kWord2api, fx.model, fx.idf, stop()),
      std::invalid_argument);
  const std::vector<LinkQuestion> orphaned = {
      {"q9", "red green blue", {"app.Missing"}}};
  CHECK_THROWS_AS(
      word2api::tune_alpha(orphaned, fx.docs, LinkMethod::kWord2api, fx.model,
                           fx.idf, stop()),
      std::invalid_argument);
}
