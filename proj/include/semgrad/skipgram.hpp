#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "semgrad/corpus.hpp"
#include "semgrad/huffman.hpp"

namespace semgrad {

struct SkipgramConfig {
  int dim = 300;
  int window_before = 5;
  int window_after = 5;
  double learning_rate = 0.025;
  int epochs = 5;
  std::uint64_t seed = 1;
};

/// Input vectors (one row per word) plus the hierarchical-softmax inner-node
/// vectors, both dim-wide row-major.
struct EmbeddingMatrix {
  int dim = 0;
  int vocab_size = 0;
  std::vector<double> input;  // vocab_size x dim
  std::vector<double> inner;  // (vocab_size - 1) x dim

  double* input_row(int w) { return input.data() + static_cast<std::size_t>(w) * dim; }
  const double* input_row(int w) const { return input.data() + static_cast<std::size_t>(w) * dim; }
  double* inner_row(int j) { return inner.data() + static_cast<std::size_t>(j) * dim; }
  const double* inner_row(int j) const { return inner.data() + static_cast<std::size_t>(j) * dim; }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Context positions in [pos - before, pos + after] excluding pos, clipped at
/// the sequence boundaries, left to right.
inline std::vector<int> window_contexts(int pos, int length, int before, int after) {
  std::vector<int> out;
  int lo = std::max(0, pos - before);
  int hi = std::min(length - 1, pos + after);
  for (int i = lo; i <= hi; ++i)
    if (i != pos) out.push_back(i);
  return out;
}

/// One SGD step on a (center, context) pair. Bit convention: code bit 0 means
/// sigmoid target 1. The center delta accumulates against the pre-update
/// inner vectors.
inline void train_pair(EmbeddingMatrix& m, const HuffmanTree& tree, int center, int context,
                       double lr) {
  double* v = m.input_row(center);
  const auto& code = tree.codes[context];
  const auto& path = tree.paths[context];
  std::vector<double> delta(m.dim, 0.0);
  for (std::size_t j = 0; j < path.size(); ++j) {
    double* u = m.inner_row(path[j]);
    double dot = 0.0;
    for (int k = 0; k < m.dim; ++k) dot += v[k] * u[k];
    double g = (1.0 - code[j]) - sigmoid(dot);
    for (int k = 0; k < m.dim; ++k) delta[k] += g * u[k];
    for (int k = 0; k < m.dim; ++k) u[k] += lr * g * v[k];
  }
  for (int k = 0; k < m.dim; ++k) v[k] += lr * delta[k];
}

/// P(target | center) as the product of branch sigmoids along the target's
/// Huffman path.
inline double hs_probability(const EmbeddingMatrix& m, const HuffmanTree& tree, int center,
                             int target) {
  const double* v = m.input_row(center);
  const auto& code = tree.codes[target];
  const auto& path = tree.paths[target];
  double p = 1.0;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const double* u = m.inner_row(path[j]);
    double dot = 0.0;
    for (int k = 0; k < m.dim; ++k) dot += v[k] * u[k];
    double s = sigmoid(dot);
    p *= code[j] == 0 ? s : 1.0 - s;
  }
  return p;
}

inline EmbeddingMatrix init_embeddings(int vocab_size, int dim, std::uint64_t seed) {
  EmbeddingMatrix m;
  m.dim = dim;
  m.vocab_size = vocab_size;
  m.input.resize(static_cast<std::size_t>(vocab_size) * dim);
  m.inner.assign(static_cast<std::size_t>(vocab_size - 1) * dim, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5 / dim, 0.5 / dim);
  for (double& x : m.input) x = dist(rng);
  return m;
}

/// Mean -log hs_probability over every (center, context) pair the windows
/// produce.
inline double training_loss(const EmbeddingMatrix& m, const HuffmanTree& tree,
                            const std::vector<int>& tokens, int before, int after) {
  double total = 0.0;
  long long pairs = 0;
  const int n = static_cast<int>(tokens.size());
  for (int pos = 0; pos < n; ++pos) {
    for (int c : window_contexts(pos, n, before, after)) {
      total += -std::log(hs_probability(m, tree, tokens[pos], tokens[c]));
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

/// Single-threaded deterministic skip-gram training with hierarchical
/// softmax over the given token index stream.
inline EmbeddingMatrix train_skipgram(const std::vector<int>& tokens, const Vocabulary& vocab,
                                      const SkipgramConfig& config) {
  if (tokens.empty()) throw std::invalid_argument("train_skipgram: empty token sequence");
  HuffmanTree tree = HuffmanTree::build(vocab);
  EmbeddingMatrix m = init_embeddings(static_cast<int>(vocab.size()), config.dim, config.seed);
  const int n = static_cast<int>(tokens.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int pos = 0; pos < n; ++pos) {
      for (int c : window_contexts(pos, n, config.window_before, config.window_after))
        train_pair(m, tree, tokens[pos], tokens[c], config.learning_rate);
    }
  }
  return m;
}

}  // namespace semgrad
