#include "word2api/vocab.hpp"

#include <algorithm>

namespace word2api {

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> lines,
                             std::uint64_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& line : lines) {
    for (const std::string& token : line) ++counts[token];
  }
  std::vector<VocabEntry> entries;
  entries.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= min_count) entries.push_back({token, count});
  }
  std::sort(entries.begin(), entries.end(),
            [](const VocabEntry& a, const VocabEntry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.token < b.token;
            });
  return from_entries(std::move(entries));
}

Vocabulary Vocabulary::from_entries(std::vector<VocabEntry> entries) {
  Vocabulary vocab;
  vocab.entries_ = std::move(entries);
  vocab.index_.reserve(vocab.entries_.size());
  for (std::size_t i = 0; i < vocab.entries_.size(); ++i) {
    vocab.index_.emplace(vocab.entries_[i].token, static_cast<int>(i));
    vocab.total_count_ += vocab.entries_[i].count;
  }
  return vocab;
}

}  // namespace word2api
