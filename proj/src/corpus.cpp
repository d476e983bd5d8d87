#include "word2api/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>

#include "word2api/errors.hpp"

namespace word2api {

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char a = text[i];
    char b = prefix[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
    if (a != b) return false;
  }
  return true;
}

std::string_view first_raw_token(std::string_view sentence) {
  std::size_t begin = 0;
  while (begin < sentence.size() &&
         !std::isalnum(static_cast<unsigned char>(sentence[begin]))) {
    ++begin;
  }
  std::size_t end = begin;
  while (end < sentence.size() &&
         std::isalnum(static_cast<unsigned char>(sentence[end]))) {
    ++end;
  }
  return sentence.substr(begin, end - begin);
}

}  // namespace

std::string_view to_string(TupleVerdict verdict) {
  switch (verdict) {
    case TupleVerdict::kKeep:
      return "keep";
    case TupleVerdict::kTaskAnnotation:
      return "task-annotation";
    case TupleVerdict::kExplanatory:
      return "explanatory";
    case TupleVerdict::kTooShort:
      return "too-short";
  }
  return "unknown";
}

TupleVerdict filter_tuple(const std::vector<std::string>& words,
                          std::string_view raw_first_sentence,
                          const FilterRules& rules) {
  const std::size_t lead =
      raw_first_sentence.find_first_not_of(" \t\r\n");
  const std::string_view sentence =
      lead == std::string_view::npos ? std::string_view{}
                                     : raw_first_sentence.substr(lead);
  for (const std::string& tag : rules.task_tags) {
    if (starts_with_ci(sentence, tag)) return TupleVerdict::kTaskAnnotation;
  }
  const std::string token = lower_ascii(first_raw_token(sentence));
  for (const std::string& lead_word : rules.lead_words) {
    if (token.starts_with(lead_word)) return TupleVerdict::kExplanatory;
  }
  if (words.size() < rules.min_words) return TupleVerdict::kTooShort;
  return TupleVerdict::kKeep;
}

bool allowlisted(std::string_view api, const Allowlist& allowlist) {
  return std::any_of(allowlist.begin(), allowlist.end(),
                     [&](const std::string& prefix) {
                       return api.starts_with(prefix);
                     });
}

std::vector<WordApiTuple> build_tuples(std::span<const MethodRecord> records,
                                       const Allowlist& allowlist,
                                       const StopWords& stop_words,
                                       const Diagnostic& diag,
                                       const FilterRules& rules) {
  if (allowlist.empty()) throw ConfigError("API allowlist is empty");
  std::vector<WordApiTuple> tuples;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const MethodRecord& record = records[i];
    const bool malformed = std::any_of(
        record.api_calls.begin(), record.api_calls.end(),
        [](const std::string& api) {
          return std::count(api.begin(), api.end(), '#') != 1;
        });
    if (malformed) {
      if (diag) {
        diag("record " + std::to_string(i + 1) +
             ": malformed API identifier (expected exactly one '#')");
      }
      continue;
    }
    const std::string untagged = strip_html_tags(record.comment_text);
    const std::string_view sentence = first_sentence(untagged);
    std::vector<std::string> words = normalize_comment(record.comment_text,
                                                       stop_words);
    if (filter_tuple(words, sentence, rules) != TupleVerdict::kKeep) continue;
    std::vector<std::string> apis;
    for (const std::string& api : record.api_calls) {
      if (allowlisted(api, allowlist)) apis.push_back(api);
    }
    if (apis.empty()) continue;
    tuples.push_back({std::move(words), std::move(apis)});
  }
  return tuples;
}

Allowlist load_allowlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open allowlist file");
  Allowlist out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// --- escaping ---------------------------------------------------------------

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      out.push_back(text[i]);
      continue;
    }
    ++i;
    switch (text[i]) {
      case 't':
        out.push_back('\t');
        break;
      case 'n':
        out.push_back('\n');
        break;
      case '\\':
        out.push_back('\\');
        break;
      default:  // unknown escape: keep verbatim
        out.push_back('\\');
        out.push_back(text[i]);
    }
  }
  return out;
}

// --- record io --------------------------------------------------------------

namespace {

std::vector<std::string> split_on_spaces(std::string_view text) {
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

}  // namespace

std::vector<MethodRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open record file");
  std::vector<MethodRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FileFormatError(path, line_no, "expected TAB-separated fields");
    }
    MethodRecord record;
    record.comment_text = unescape_field(std::string_view(line).substr(0, tab));
    record.api_calls = split_on_spaces(std::string_view(line).substr(tab + 1));
    out.push_back(std::move(record));
  }
  return out;
}

void write_records(const std::string& path,
                   std::span<const MethodRecord> records) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  for (const MethodRecord& record : records) {
    out << escape_field(record.comment_text) << '\t';
    for (std::size_t i = 0; i < record.api_calls.size(); ++i) {
      if (i > 0) out << ' ';
      out << record.api_calls[i];
    }
    out << '\n';
  }
}

// --- tuple io ---------------------------------------------------------------

namespace {
constexpr std::string_view kTupleSeparator = " || ";
}

void write_tuple_line(std::ostream& out, const WordApiTuple& tuple) {
  for (std::size_t i = 0; i < tuple.words.size(); ++i) {
    if (i > 0) out << ' ';
    out << tuple.words[i];
  }
  out << kTupleSeparator;
  for (std::size_t i = 0; i < tuple.apis.size(); ++i) {
    if (i > 0) out << ' ';
    out << tuple.apis[i];
  }
  out << '\n';
}

WordApiTuple parse_tuple_line(std::string_view line, const std::string& file,
                              std::size_t line_no) {
  const std::size_t sep = line.find(kTupleSeparator);
  if (sep == std::string_view::npos) {
    throw FileFormatError(file, line_no, "missing ' || ' separator");
  }
  WordApiTuple tuple;
  tuple.words = split_on_spaces(line.substr(0, sep));
  tuple.apis = split_on_spaces(line.substr(sep + kTupleSeparator.size()));
  if (tuple.words.empty() || tuple.apis.empty()) {
    throw FileFormatError(file, line_no, "tuple needs words and APIs");
  }
  return tuple;
}

std::vector<WordApiTuple> read_tuples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open tuple file");
  std::vector<WordApiTuple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(parse_tuple_line(line, path, line_no));
  }
  return out;
}

void write_tuples(const std::string& path,
                  std::span<const WordApiTuple> tuples) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  for (const WordApiTuple& tuple : tuples) write_tuple_line(out, tuple);
}

}  // namespace word2api
