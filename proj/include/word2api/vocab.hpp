#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace word2api {

struct VocabEntry {
  std::string token;
  std::uint64_t count = 0;
};

/// Token vocabulary with stable indices: descending count, then
/// lexicographic. Term vectors are stored by these indices.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Counts every token in `lines` and drops tokens below `min_count`.
  static Vocabulary build(std::span<const std::vector<std::string>> lines,
                          std::uint64_t min_count);

  /// Builds from pre-counted entries, preserving the given order (model
  /// files fix their own row order).
  static Vocabulary from_entries(std::vector<VocabEntry> entries);

  int index_of(std::string_view token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(std::string_view token) const {
    return index_.find(token) != index_.end();
  }

  const VocabEntry& entry(int index) const { return entries_[index]; }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Sum of retained counts; the denominator of subsampling frequencies.
  std::uint64_t total_count() const { return total_count_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int, StringHash, std::equal_to<>> index_;
  std::uint64_t total_count_ = 0;
};

}  // namespace word2api
