#include "word2api/embedding.hpp"

#include <cmath>

namespace word2api {

double keep_probability(std::uint64_t term_count, std::uint64_t total_count,
                        double sample) {
  if (term_count == 0 || total_count < term_count) {
    throw std::domain_error("keep_probability: counts must satisfy "
                            "1 <= term_count <= total_count");
  }
  if (!(sample > 0)) {
    throw std::domain_error("keep_probability: sample must be > 0");
  }
  const double z = static_cast<double>(term_count) /
                   static_cast<double>(total_count);
  const double p = (std::sqrt(z / sample) + 1.0) * sample / z;
  return std::min(1.0, p);
}

NoiseTable::NoiseTable(const Vocabulary& vocab, double power) {
  cdf_.reserve(vocab.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    acc += std::pow(static_cast<double>(vocab.entry(static_cast<int>(i)).count),
                    power);
    cdf_.push_back(acc);
  }
}

int NoiseTable::draw(std::mt19937_64& rng) const {
  const double u = unit_real(rng) * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t index = it - cdf_.begin();
  return static_cast<int>(std::min(index, cdf_.size() - 1));
}

}  // namespace word2api
