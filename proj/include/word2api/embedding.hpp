#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "word2api/corpus.hpp"
#include "word2api/errors.hpp"
#include "word2api/matrix.hpp"
#include "word2api/rng.hpp"
#include "word2api/vocab.hpp"

namespace word2api {

struct TrainConfig {
  int dim = 100;
  int window = 5;
  std::uint64_t min_count = 50;
  double sample = 1e-3;    // subsampling threshold
  int negative = 5;        // noise draws per center token
  int iterations = 5;
  double alpha0 = 0.05;    // starting learning rate
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Probability of keeping one occurrence of a term during subsampling:
/// min(1, (sqrt(z/sample) + 1) * sample / z) with z = term_count/total_count.
double keep_probability(std::uint64_t term_count, std::uint64_t total_count,
                        double sample);

/// Discrete noise distribution proportional to count^power (3/4 by default),
/// drawn by binary search over the cumulative weights.
class NoiseTable {
 public:
  explicit NoiseTable(const Vocabulary& vocab, double power = 0.75);
  int draw(std::mt19937_64& rng) const;

 private:
  std::vector<double> cdf_;
};

template <class Scalar = float>
struct EmbeddingModel {
  Vocabulary vocab;
  MatrixX<Scalar> input;   // published term vectors, one row per term
  MatrixX<Scalar> output;  // context-side weights; only used to resume training
  TrainConfig config;

  int dim() const { return static_cast<int>(input.cols()); }

  auto vector(int index) const { return input.row(index); }

  auto vector_for(std::string_view term) const {
    const int index = vocab.index_of(term);
    if (index < 0) throw OovError(std::string(term), "embedding vocabulary");
    return input.row(index);
  }
};

// --- per-example loss and gradients ------------------------------------------
//
// One CBOW negative-sampling example: predict `center` from the mean h of the
// context's input rows against `negatives` noise tokens.
//
//   L = -ln s(output_center . h) - sum_n ln s(-output_n . h)
//
// Gradients are taken at the given parameter point. The trainer applies them
// with step -alpha; input rows receive grad_hidden / |context| per occurrence.

namespace detail {

// ln(1 + e^x) without overflow; -ln s(x) == softplus(-x).
template <class Scalar>
Scalar softplus(Scalar x) {
  if (x > Scalar(0)) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

template <class Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

}  // namespace detail

template <class Scalar>
struct CbowGradients {
  Scalar loss = 0;
  VectorX<Scalar> hidden;       // h
  VectorX<Scalar> grad_hidden;  // dL/dh
  std::vector<std::pair<int, VectorX<Scalar>>> grad_output;  // dL/d output row
};

template <class Scalar>
CbowGradients<Scalar> cbow_gradients(const MatrixX<Scalar>& input,
                                     const MatrixX<Scalar>& output,
                                     std::span<const int> context, int center,
                                     std::span<const int> negatives) {
  const auto dim = input.cols();
  CbowGradients<Scalar> g;
  g.hidden = VectorX<Scalar>::Zero(dim);
  for (int c : context) g.hidden += input.row(c).transpose();
  g.hidden /= Scalar(context.size());
  g.grad_hidden = VectorX<Scalar>::Zero(dim);
  g.grad_output.reserve(negatives.size() + 1);

  const auto accumulate = [&](int target, Scalar label) {
    const Scalar f = output.row(target).dot(g.hidden);
    g.loss += label > Scalar(0) ? detail::softplus(-f) : detail::softplus(f);
    const Scalar slope = detail::sigmoid(f) - label;  // dL/df
    g.grad_output.emplace_back(target, (slope * g.hidden).eval());
    g.grad_hidden += slope * output.row(target).transpose();
  };
  accumulate(center, Scalar(1));
  for (int n : negatives) accumulate(n, Scalar(0));
  return g;
}

// --- training -----------------------------------------------------------------

namespace detail {

inline void validate(const TrainConfig& config) {
  if (config.dim < 1) throw ConfigError("dim must be >= 1");
  if (config.window < 1) throw ConfigError("window must be >= 1");
  if (config.min_count < 1) throw ConfigError("min-count must be >= 1");
  if (!(config.sample > 0)) throw ConfigError("sample must be > 0");
  if (config.negative < 0) throw ConfigError("negative must be >= 0");
  if (config.iterations < 1) throw ConfigError("iter must be >= 1");
  if (!(config.alpha0 > 0)) throw ConfigError("alpha must be > 0");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
}

}  // namespace detail

template <class Scalar = float>
EmbeddingModel<Scalar> train(std::span<const std::vector<std::string>> lines,
                             const TrainConfig& config) {
  detail::validate(config);
  EmbeddingModel<Scalar> model;
  model.config = config;
  model.vocab = Vocabulary::build(lines, config.min_count);
  const int vocab_size = static_cast<int>(model.vocab.size());
  if (vocab_size == 0) {
    throw std::runtime_error("training text is empty after vocabulary pruning");
  }
  const std::uint64_t total = model.vocab.total_count();

  std::vector<double> keep(vocab_size);
  for (int i = 0; i < vocab_size; ++i) {
    keep[i] = keep_probability(model.vocab.entry(i).count, total,
                               config.sample);
  }
  const NoiseTable noise(model.vocab);

  // Lines as vocabulary indices; out-of-vocabulary tokens vanish here.
  std::vector<std::vector<int>> corpus(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    corpus[i].reserve(lines[i].size());
    for (const std::string& token : lines[i]) {
      const int id = model.vocab.index_of(token);
      if (id >= 0) corpus[i].push_back(id);
    }
  }

  // word2vec-style init: input rows uniform in [-0.5/dim, 0.5/dim), output
  // rows zero. The init stream is independent of worker count.
  model.input.resize(vocab_size, config.dim);
  {
    std::mt19937_64 init_rng = seeded_stream(config.seed, 0);
    for (int r = 0; r < vocab_size; ++r) {
      for (int c = 0; c < config.dim; ++c) {
        model.input(r, c) =
            Scalar((unit_real(init_rng) - 0.5) / config.dim);
      }
    }
  }
  model.output = MatrixX<Scalar>::Zero(vocab_size, config.dim);

  const double budget =
      static_cast<double>(config.iterations) * static_cast<double>(total) + 1.0;
  std::atomic<std::uint64_t> processed{0};

  const auto worker = [&](int id) {
    std::mt19937_64 rng = seeded_stream(config.seed, 1 + id);
    const std::size_t lo = corpus.size() * id / config.workers;
    const std::size_t hi = corpus.size() * (id + 1) / config.workers;
    std::vector<int> kept;
    VectorX<Scalar> hidden(config.dim);
    VectorX<Scalar> backprop(config.dim);
    for (int pass = 0; pass < config.iterations; ++pass) {
      for (std::size_t li = lo; li < hi; ++li) {
        const std::vector<int>& ids = corpus[li];
        if (ids.empty()) continue;
        const std::uint64_t done =
            processed.fetch_add(ids.size(), std::memory_order_relaxed) +
            ids.size();
        const double alpha =
            std::max(config.alpha0 * (1.0 - static_cast<double>(done) / budget),
                     config.alpha0 * 1e-4);

        kept.clear();
        for (int id_token : ids) {
          if (keep[id_token] < 1.0 && unit_real(rng) >= keep[id_token]) {
            continue;
          }
          kept.push_back(id_token);
        }
        const int n = static_cast<int>(kept.size());
        for (int center_pos = 0; center_pos < n; ++center_pos) {
          const int center = kept[center_pos];
          const int half = 1 + static_cast<int>(bounded(
                                   rng, static_cast<std::uint64_t>(
                                            config.window)));
          const int begin = std::max(0, center_pos - half);
          const int end = std::min(n - 1, center_pos + half);
          int context_size = 0;
          hidden.setZero();
          for (int p = begin; p <= end; ++p) {
            if (p == center_pos) continue;
            hidden += model.input.row(kept[p]).transpose();
            ++context_size;
          }
          if (context_size == 0) continue;
          hidden /= Scalar(context_size);

          backprop.setZero();
          for (int d = 0; d <= config.negative; ++d) {
            int target;
            Scalar label;
            if (d == 0) {
              target = center;
              label = 1;
            } else {
              target = noise.draw(rng);
              if (target == center) continue;
              label = 0;
            }
            const Scalar f = model.output.row(target).dot(hidden);
            const Scalar slope = label - detail::sigmoid(f);
            backprop += slope * model.output.row(target).transpose();
            model.output.row(target) +=
                (Scalar(alpha) * slope) * hidden.transpose();
          }
          const Scalar step = Scalar(alpha) / Scalar(context_size);
          for (int p = begin; p <= end; ++p) {
            if (p == center_pos) continue;
            model.input.row(kept[p]) += step * backprop.transpose();
          }
        }
      }
    }
  };

  if (config.workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(config.workers);
    for (int w = 0; w < config.workers; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
  }
  return model;
}

// --- neighbor queries ---------------------------------------------------------

enum class TermKind { kWords, kApis, kAll };

struct Neighbor {
  std::string token;
  double score = 0;
};

inline bool kind_matches(TermKind kind, std::string_view token) {
  switch (kind) {
    case TermKind::kWords:
      return !is_api_token(token);
    case TermKind::kApis:
      return is_api_token(token);
    case TermKind::kAll:
      return true;
  }
  return true;
}

/// Cosine ranking of the whole vocabulary against `query`, the query itself
/// excluded; descending score, lexicographic within ties.
template <class Scalar>
std::vector<Neighbor> nearest_terms(const EmbeddingModel<Scalar>& model,
                                    std::string_view query, std::size_t k,
                                    TermKind kind = TermKind::kAll) {
  const int q = model.vocab.index_of(query);
  if (q < 0) throw OovError(std::string(query), "embedding vocabulary");
  std::vector<Neighbor> scored;
  scored.reserve(model.vocab.size());
  for (int i = 0; i < static_cast<int>(model.vocab.size()); ++i) {
    if (i == q) continue;
    const std::string& token = model.vocab.entry(i).token;
    if (!kind_matches(kind, token)) continue;
    scored.push_back(
        {token, cosine_similarity(model.input.row(q), model.input.row(i))});
  }
  std::sort(scored.begin(), scored.end(),
            [](const Neighbor& a, const Neighbor& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.token < b.token;
            });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

// --- model files ----------------------------------------------------------------
//
// Line 1: "<vocab_size> <dim>"; then one line per term: token followed by
// dim decimal floats, single-space separated. Values are printed with
// max_digits10 significant digits so a round-trip restores them exactly.

template <class Scalar>
void save_model(const EmbeddingModel<Scalar>& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path, 0, "cannot open file for writing");
  out << model.vocab.size() << ' ' << model.dim() << '\n';
  char buffer[64];
  for (std::size_t r = 0; r < model.vocab.size(); ++r) {
    out << model.vocab.entry(static_cast<int>(r)).token;
    for (int c = 0; c < model.dim(); ++c) {
      std::snprintf(buffer, sizeof(buffer), "%.*g",
                    std::numeric_limits<Scalar>::max_digits10,
                    static_cast<double>(model.input(r, c)));
      out << ' ' << buffer;
    }
    out << '\n';
  }
}

template <class Scalar = float>
EmbeddingModel<Scalar> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path, 0, "cannot open model file");
  std::string line;
  if (!std::getline(in, line)) {
    throw FileFormatError(path, 1, "missing '<vocab_size> <dim>' header");
  }
  long long vocab_size = -1;
  long long dim = -1;
  {
    const char* begin = line.data();
    const char* end = line.data() + line.size();
    auto r1 = std::from_chars(begin, end, vocab_size);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') {
      throw FileFormatError(path, 1, "malformed header: '" + line + "'");
    }
    auto r2 = std::from_chars(r1.ptr + 1, end, dim);
    if (r2.ec != std::errc{} || r2.ptr != end || vocab_size < 0 || dim < 1) {
      throw FileFormatError(path, 1, "malformed header: '" + line + "'");
    }
  }
  EmbeddingModel<Scalar> model;
  model.config.dim = static_cast<int>(dim);
  model.input.resize(vocab_size, dim);
  std::vector<VocabEntry> entries;
  entries.reserve(vocab_size);
  std::size_t line_no = 1;
  for (long long r = 0; r < vocab_size; ++r) {
    if (!std::getline(in, line)) {
      throw FileFormatError(path, line_no + 1, "unexpected end of file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first_space = line.find(' ');
    if (first_space == std::string::npos || first_space == 0) {
      throw FileFormatError(path, line_no, "expected '<token> <values...>'");
    }
    entries.push_back({line.substr(0, first_space), 0});
    const char* cursor = line.data() + first_space;
    const char* end = line.data() + line.size();
    for (long long c = 0; c < dim; ++c) {
      if (cursor == end || *cursor != ' ') {
        throw FileFormatError(path, line_no,
                              "expected " + std::to_string(dim) +
                                  " values, got " + std::to_string(c));
      }
      ++cursor;
      Scalar value;
      auto res = std::from_chars(cursor, end, value);
      if (res.ec != std::errc{}) {
        throw FileFormatError(path, line_no, "bad float value");
      }
      model.input(r, c) = value;
      cursor = res.ptr;
    }
    if (cursor != end) {
      throw FileFormatError(path, line_no,
                            "expected " + std::to_string(dim) +
                                " values, got more");
    }
  }
  model.vocab = Vocabulary::from_entries(std::move(entries));
  return model;
}

}  // namespace word2api
