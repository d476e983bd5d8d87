#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace word2api {

using StopWords = std::unordered_set<std::string>;

/// Bundled default English stop-word list (lowercase).
const StopWords& default_stop_words();

/// Loads a stop-word file, one word per line; blank lines ignored.
StopWords load_stop_words(const std::string& path);

/// Porter suffix-stripping stemmer, original rule set. Input is expected
/// lowercase; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

/// Replaces every shortest `<...>` span with a single space.
std::string strip_html_tags(std::string_view text);

/// Text up to (excluding) the first ". " boundary; the whole text when no
/// boundary exists. Leading whitespace is trimmed.
std::string_view first_sentence(std::string_view text);

/// Splits text into alphanumeric runs, then splits each run at
/// lower-to-upper and letter-digit boundaries ("nextInt" -> next, Int;
/// "utf8" -> utf, 8). Case is preserved.
std::vector<std::string> split_identifier_words(std::string_view text);

/// Full comment pipeline: tags stripped, first sentence only, tokenized and
/// camel-split, lowercased, then filtered (stop words, numbers, single
/// letters), stemmed, and filtered again so stems obey the same rules.
std::vector<std::string> normalize_comment(std::string_view comment,
                                           const StopWords& stop_words);

/// Same token pipeline over whole free text (queries, document
/// descriptions): no first-sentence truncation.
std::vector<std::string> normalize_text(std::string_view text,
                                        const StopWords& stop_words);

}  // namespace word2api
