#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "word2api/corpus.hpp"
#include "word2api/errors.hpp"
#include "word2api/rng.hpp"

using word2api::Allowlist;
using word2api::build_tuples;
using word2api::default_allowlist;
using word2api::default_stop_words;
using word2api::filter_tuple;
using word2api::MethodRecord;
using word2api::normalize_comment;
using word2api::TupleVerdict;
using word2api::WordApiTuple;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("w2a_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("filter_tuple classifications") {
  const auto& stop = default_stop_words();
  const auto verdict = [&](const std::string& sentence) {
    return filter_tuple(normalize_comment(sentence, stop), sentence);
  };
  CHECK(verdict("TODO remove this") == TupleVerdict::kTaskAnnotation);
  CHECK(verdict("fixme: broken on windows") == TupleVerdict::kTaskAnnotation);
  CHECK(verdict("XXX do not ship") == TupleVerdict::kTaskAnnotation);
  CHECK(verdict("testing purpose only") == TupleVerdict::kExplanatory);
  CHECK(verdict("Note that this caches") == TupleVerdict::kExplanatory);
  CHECK(verdict("read a file by lines") == TupleVerdict::kKeep);
  CHECK(verdict("parser") == TupleVerdict::kTooShort);
  CHECK(verdict("") == TupleVerdict::kTooShort);
  // the lead-word list is configurable
  word2api::FilterRules rules;
  rules.lead_words = {"note", "test", "deprecated"};
  CHECK(filter_tuple(normalize_comment("Deprecated since v2 use foo", stop),
                     "Deprecated since v2 use foo",
                     rules) == TupleVerdict::kExplanatory);
}

TEST_CASE("build_tuples worked examples") {
  const auto& stop = default_stop_words();
  const Allowlist& allow = default_allowlist();
  SUBCASE("ordinary record becomes one tuple") {
    const std::vector<MethodRecord> records = {
        {"read a file by lines",
         {"java.io.FileReader#new", "java.io.BufferedReader#new",
          "java.io.BufferedReader#readLine"}}};
    const auto tuples = build_tuples(records, allow, stop);
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].words == std::vector<std::string>{"read", "file", "line"});
    CHECK(tuples[0].apis == records[0].api_calls);
  }
  SUBCASE("no allowlisted API, no tuple") {
    const std::vector<MethodRecord> records = {
        {"read a file", {"com.example.Util#helper"}}};
    CHECK(build_tuples(records, allow, stop).empty());
  }
  SUBCASE("filtered comment, no tuple") {
    const std::vector<MethodRecord> records = {
        {"TODO fix", {"java.io.File#exists"}}};
    CHECK(build_tuples(records, allow, stop).empty());
  }
  SUBCASE("non-allowlisted calls are dropped, order kept") {
    const std::vector<MethodRecord> records = {
        {"copy bytes between streams",
         {"com.google.common.io.ByteStreams#copy", "java.io.InputStream#read",
          "java.io.OutputStream#write"}}};
    const auto tuples = build_tuples(records, allow, stop);
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].apis ==
          std::vector<std::string>{"java.io.InputStream#read",
                                   "java.io.OutputStream#write"});
  }
  SUBCASE("malformed API rejects the record and reports it") {
    const std::vector<MethodRecord> records = {
        {"read a file quickly", {"java.io.File.exists"}},  // no '#'
        {"write a file slowly", {"java.io.File#exists#oops"}},
        {"list files in a folder", {"java.io.File#listFiles"}}};
    std::vector<std::string> diagnostics;
    const auto tuples = build_tuples(
        records, allow, stop,
        [&](std::string_view m) { diagnostics.emplace_back(m); });
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].apis ==
          std::vector<std::string>{"java.io.File#listFiles"});
    REQUIRE(diagnostics.size() == 2);
    CHECK(diagnostics[0].find("record 1") != std::string::npos);
    CHECK(diagnostics[1].find("record 2") != std::string::npos);
  }
  SUBCASE("empty allowlist is refused") {
    CHECK_THROWS_AS(build_tuples({}, Allowlist{}, stop),
                    word2api::ConfigError);
  }
}

TEST_CASE("tuple invariants hold on random record streams") {
  const auto& stop = default_stop_words();
  const Allowlist& allow = default_allowlist();
  std::mt19937_64 rng = word2api::seeded_stream(31, 3);
  const std::vector<std::string> comments = {
      "Reads a line of text.",
      "TODO remove this",
      "testing purpose only",
      "parse the nextInt value",
      "",
      "note this is cached",
      "Creates buffered readers for files",
      "x",
      "Copies a file to the destination path",
  };
  const std::vector<std::string> apis = {
      "java.io.FileReader#new",      "java.io.BufferedReader#readLine",
      "com.example.Util#helper",     "java.util.Scanner#nextInt",
      "javax.swing.JFileChooser#new", "java.nio.file.Files#copy",
  };
  for (int round = 0; round < 100; ++round) {
    std::vector<MethodRecord> records;
    const std::size_t n = word2api::bounded(rng, 12);
    for (std::size_t i = 0; i < n; ++i) {
      MethodRecord record;
      record.comment_text = comments[word2api::bounded(rng, comments.size())];
      const std::size_t m = word2api::bounded(rng, 5);
      for (std::size_t j = 0; j < m; ++j) {
        record.api_calls.push_back(apis[word2api::bounded(rng, apis.size())]);
      }
      records.push_back(std::move(record));
    }
    for (const WordApiTuple& tuple : build_tuples(records, allow, stop)) {
      CHECK(!tuple.words.empty());
      CHECK(tuple.words.size() >= 2);  // the too-short filter
      CHECK(!tuple.apis.empty());
      for (const std::string& w : tuple.words) {
        CHECK(w.find('#') == std::string::npos);
      }
      for (const std::string& a : tuple.apis) {
        CHECK(a.find('#') != std::string::npos);
        CHECK(word2api::allowlisted(a, allow));
      }
    }
  }
}

TEST_CASE("field escaping round-trips") {
  std::mt19937_64 rng = word2api::seeded_stream(37, 4);
  const char alphabet[] = "ab\\\t\nc d.";
  for (int round = 0; round < 500; ++round) {
    std::string s;
    const std::size_t n = word2api::bounded(rng, 24);
    for (std::size_t i = 0; i < n; ++i) {
      s += alphabet[word2api::bounded(rng, sizeof(alphabet) - 1)];
    }
    const std::string escaped = word2api::escape_field(s);
    CHECK(escaped.find('\t') == std::string::npos);
    CHECK(escaped.find('\n') == std::string::npos);
    CHECK(word2api::unescape_field(escaped) == s);
  }
}

TEST_CASE("record files round-trip") {
  const std::vector<MethodRecord> records = {
      {"plain comment", {"java.io.File#exists"}},
      {"tab\there and\nnewline", {"java.util.UUID#randomUUID"}},
      {"backslash \\ escape", {}},
      {"", {"java.io.File#delete", "java.io.File#exists"}},
  };
  const auto path = temp_file("records.tsv");
  word2api::write_records(path.string(), records);
  CHECK(word2api::read_records(path.string()) == records);
  std::filesystem::remove(path);
}

TEST_CASE("tuple files round-trip bit-exactly") {
  std::mt19937_64 rng = word2api::seeded_stream(41, 5);
  std::vector<WordApiTuple> tuples;
  for (int i = 0; i < 50; ++i) {
    WordApiTuple tuple;
    const std::size_t nw = 1 + word2api::bounded(rng, 5);
    const std::size_t na = 1 + word2api::bounded(rng, 4);
    for (std::size_t j = 0; j < nw; ++j) {
      tuple.words.push_back("tok" + std::to_string(word2api::bounded(rng, 30)));
    }
    for (std::size_t j = 0; j < na; ++j) {
      tuple.apis.push_back("p.C#m" + std::to_string(word2api::bounded(rng, 30)));
    }
    tuples.push_back(std::move(tuple));
  }
  const auto path_a = temp_file("tuples_a.txt");
  const auto path_b = temp_file("tuples_b.txt");
  word2api::write_tuples(path_a.string(), tuples);
  const auto reread = word2api::read_tuples(path_a.string());
  CHECK(reread == tuples);
  word2api::write_tuples(path_b.string(), reread);
  CHECK(slurp(path_a) == slurp(path_b));
  std::filesystem::remove(path_a);
  std::filesystem::remove(path_b);
}

TEST_CASE("tuple parser reports malformed lines") {
  CHECK_THROWS_AS(word2api::parse_tuple_line("no separator here", "f", 3),
                  word2api::FileFormatError);
  CHECK_THROWS_AS(word2api::parse_tuple_line(" || p.C#m", "f", 1),
                  word2api::FileFormatError);
  CHECK_THROWS_AS(word2api::parse_tuple_line("word || ", "f", 1),
                  word2api::FileFormatError);
  const WordApiTuple t = word2api::parse_tuple_line("a b || p.C#m", "f", 1);
  CHECK(t.words == std::vector<std::string>{"a", "b"});
  CHECK(t.apis == std::vector<std::string>{"p.C#m"});
}
