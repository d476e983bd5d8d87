#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "word2api/text.hpp"

namespace word2api {

/// One extracted method: its raw comment plus the ordered fully-qualified
/// API calls of the body (`package.Class#method`, constructors as `#new`).
struct MethodRecord {
  std::string comment_text;
  std::vector<std::string> api_calls;

  bool operator==(const MethodRecord&) const = default;
};

/// The corpus unit: normalized comment words paired with the record's
/// allowlisted API calls, both in original order.
struct WordApiTuple {
  std::vector<std::string> words;
  std::vector<std::string> apis;

  bool operator==(const WordApiTuple&) const = default;
};

/// API tokens carry a `#`; word tokens never do.
inline bool is_api_token(std::string_view token) {
  return token.find('#') != std::string_view::npos;
}

enum class TupleVerdict {
  kKeep,
  kTaskAnnotation,  // sentence starts with TODO/FIXME/...
  kExplanatory,     // first token starts with note/test/...
  kTooShort,        // fewer than min_words tokens survive normalization
};

std::string_view to_string(TupleVerdict verdict);

struct FilterRules {
  std::vector<std::string> task_tags = {"todo",    "fixme",      "hack",
                                        "revisit", "documentme", "xxx"};
  std::vector<std::string> lead_words = {"note", "test"};
  std::size_t min_words = 2;
};

/// Classifies a normalized word list against its raw first sentence.
TupleVerdict filter_tuple(const std::vector<std::string>& words,
                          std::string_view raw_first_sentence,
                          const FilterRules& rules = {});

/// Package prefixes that keep an API call (string prefix match).
using Allowlist = std::vector<std::string>;

const Allowlist& default_allowlist();
Allowlist load_allowlist(const std::string& path);

bool allowlisted(std::string_view api, const Allowlist& allowlist);

/// Sink for per-record diagnostics (malformed API identifiers).
using Diagnostic = std::function<void(std::string_view)>;

/// Turns records into tuples: normalizes and filters the comment, restricts
/// API calls to the allowlist. Records that fail a filter, have no
/// allowlisted API, or contain a malformed API identifier yield no tuple;
/// malformed records are also reported through `diag`.
std::vector<WordApiTuple> build_tuples(std::span<const MethodRecord> records,
                                       const Allowlist& allowlist,
                                       const StopWords& stop_words,
                                       const Diagnostic& diag = {},
                                       const FilterRules& rules = {});

// --- line formats -----------------------------------------------------------
//
// Record file:  <escaped comment> TAB <api> SP <api> ...
// Tuple file:   <word> SP ... SP <word> " || " <api> SP ... SP <api>
//
// Escaping covers backslash, tab, and newline (\\, \t, \n) so records
// round-trip bit-exactly.

std::string escape_field(std::string_view text);
std::string unescape_field(std::string_view text);

std::vector<MethodRecord> read_records(const std::string& path);
void write_records(const std::string& path,
                   std::span<const MethodRecord> records);

std::vector<WordApiTuple> read_tuples(const std::string& path);
void write_tuples(const std::string& path,
                  std::span<const WordApiTuple> tuples);

void write_tuple_line(std::ostream& out, const WordApiTuple& tuple);
WordApiTuple parse_tuple_line(std::string_view line, const std::string& file,
                              std::size_t line_no);

}  // namespace word2api
