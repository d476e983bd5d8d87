#include "word2api/text.hpp"

#include <algorithm>
#include <fstream>
#include <span>

#include "word2api/errors.hpp"

namespace word2api {

namespace {

bool ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool ascii_alpha(char c) { return ascii_lower(c) || ascii_upper(c); }
bool ascii_alnum(char c) { return ascii_alpha(c) || ascii_digit(c); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (ascii_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), ascii_digit);
}

// Drops stop words, pure numbers, and single letters. Applied both before
// and after stemming: a stem can itself land on a stop word ("doing" ->
// "do"), and the emitted tokens must obey the same rules.
void filter_tokens(std::vector<std::string>& tokens,
                   const StopWords& stop_words) {
  std::erase_if(tokens, [&](const std::string& t) {
    return t.size() < 2 || all_digits(t) || stop_words.contains(t);
  });
}

}  // namespace

std::string strip_html_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<') {
      const std::size_t close = text.find('>', i + 1);
      if (close != std::string_view::npos) {
        out.push_back(' ');
        i = close + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string_view first_sentence(std::string_view text) {
  const std::size_t start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) return {};
  text.remove_prefix(start);
  const std::size_t end = text.find(". ");
  if (end != std::string_view::npos) text = text.substr(0, end);
  return text;
}

std::vector<std::string> split_identifier_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!ascii_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && ascii_alnum(text[j])) ++j;
    // break the run [i, j) at lower->upper and letter<->digit boundaries
    std::size_t piece = i;
    for (std::size_t k = i + 1; k < j; ++k) {
      const char prev = text[k - 1];
      const char cur = text[k];
      const bool camel = ascii_lower(prev) && ascii_upper(cur);
      const bool digit_edge = (ascii_alpha(prev) && ascii_digit(cur)) ||
                              (ascii_digit(prev) && ascii_alpha(cur));
      if (camel || digit_edge) {
        out.emplace_back(text.substr(piece, k - piece));
        piece = k;
      }
    }
    out.emplace_back(text.substr(piece, j - piece));
    i = j;
  }
  return out;
}

namespace {

std::vector<std::string> tokenize_filter_stem(std::string_view text,
                                              const StopWords& stop_words) {
  std::vector<std::string> tokens = split_identifier_words(text);
  for (std::string& t : tokens) t = to_lower(t);
  filter_tokens(tokens, stop_words);
  for (std::string& t : tokens) t = porter_stem(t);
  filter_tokens(tokens, stop_words);
  return tokens;
}

}  // namespace

std::vector<std::string> normalize_comment(std::string_view comment,
                                           const StopWords& stop_words) {
  const std::string untagged = strip_html_tags(comment);
  return tokenize_filter_stem(first_sentence(untagged), stop_words);
}

std::vector<std::string> normalize_text(std::string_view text,
                                        const StopWords& stop_words) {
  return tokenize_filter_stem(strip_html_tags(text), stop_words);
}

StopWords load_stop_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open stop-word file");
  StopWords out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.insert(to_lower(line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Porter stemmer. Straight transcription of the original rule set over
// lowercase ASCII. Each step applies at most one rule: the longest matching
// suffix is selected first, and if its condition fails the step is a no-op.

namespace porter {

bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in the [C](VC)^m[V] decomposition of the stem.
int measure(std::string_view stem) {
  int m = 0;
  bool in_vowel_run = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) {
      in_vowel_run = true;
    } else if (in_vowel_run) {
      ++m;
      in_vowel_run = false;
    }
  }
  return m;
}

bool has_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant where the final consonant is not
// w, x, or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) ||
      !is_consonant(w, n - 1)) {
    return false;
  }
  const char last = w[n - 1];
  return last != 'w' && last != 'x' && last != 'y';
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  int min_measure;  // condition: m(stem) > min_measure; -1 = unconditional
};

// Longest matching suffix wins; if its measure condition fails, the whole
// step leaves the word unchanged.
bool apply_rules(std::string& w, std::span<const Rule> rules) {
  const Rule* best = nullptr;
  for (const Rule& r : rules) {
    if (w.ends_with(r.suffix) &&
        (best == nullptr || r.suffix.size() > best->suffix.size())) {
      best = &r;
    }
  }
  if (best == nullptr) return false;
  std::string_view stem(w.data(), w.size() - best->suffix.size());
  if (best->min_measure >= 0 && measure(stem) <= best->min_measure) {
    return false;
  }
  w.resize(stem.size());
  w.append(best->replacement);
  return true;
}

void step1a(std::string& w) {
  static constexpr Rule rules[] = {
      {"sses", "ss", -1}, {"ies", "i", -1}, {"ss", "ss", -1}, {"s", "", -1}};
  apply_rules(w, rules);
}

void step1b(std::string& w) {
  if (w.ends_with("eed")) {
    std::string_view stem(w.data(), w.size() - 3);
    if (measure(stem) > 0) w.pop_back();
    return;
  }
  bool stripped = false;
  if (w.ends_with("ed")) {
    std::string_view stem(w.data(), w.size() - 2);
    if (has_vowel(stem)) {
      w.resize(stem.size());
      stripped = true;
    }
  } else if (w.ends_with("ing")) {
    std::string_view stem(w.data(), w.size() - 3);
    if (has_vowel(stem)) {
      w.resize(stem.size());
      stripped = true;
    }
  }
  if (!stripped) return;
  if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w) && w.back() != 'l' && w.back() != 's' &&
             w.back() != 'z') {
    w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (w.ends_with('y') &&
      has_vowel(std::string_view(w.data(), w.size() - 1))) {
    w.back() = 'i';
  }
}

void step2(std::string& w) {
  static constexpr Rule rules[] = {
      {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
      {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
      {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
      {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
      {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
      {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
      {"iviti", "ive", 0},   {"biliti", "ble", 0}};
  apply_rules(w, rules);
}

void step3(std::string& w) {
  static constexpr Rule rules[] = {{"icate", "ic", 0}, {"ative", "", 0},
                                   {"alize", "al", 0}, {"iciti", "ic", 0},
                                   {"ical", "ic", 0},  {"ful", "", 0},
                                   {"ness", "", 0}};
  apply_rules(w, rules);
}

void step4(std::string& w) {
  // "ion" carries an extra condition (stem ends in s or t) and cannot
  // co-match any other suffix in this step, so it is checked on its own.
  if (w.ends_with("ion")) {
    std::string_view stem(w.data(), w.size() - 3);
    if (!stem.empty() && (stem.back() == 's' || stem.back() == 't') &&
        measure(stem) > 1) {
      w.resize(stem.size());
    }
    return;
  }
  static constexpr Rule rules[] = {
      {"al", "", 1},    {"ance", "", 1}, {"ence", "", 1}, {"er", "", 1},
      {"ic", "", 1},    {"able", "", 1}, {"ible", "", 1}, {"ant", "", 1},
      {"ement", "", 1}, {"ment", "", 1}, {"ent", "", 1},  {"ou", "", 1},
      {"ism", "", 1},   {"ate", "", 1},  {"iti", "", 1},  {"ous", "", 1},
      {"ive", "", 1},   {"ize", "", 1}};
  apply_rules(w, rules);
}

void step5a(std::string& w) {
  if (!w.ends_with('e')) return;
  std::string_view stem(w.data(), w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l') {
    w.pop_back();
  }
}

}  // namespace porter

std::string porter_stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 2) return w;
  porter::step1a(w);
  porter::step1b(w);
  porter::step1c(w);
  porter::step2(w);
  porter::step3(w);
  porter::step4(w);
  porter::step5a(w);
  porter::step5b(w);
  return w;
}

}  // namespace word2api
