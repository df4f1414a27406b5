#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "semgrad/embeddings.hpp"
#include "semgrad/skipgram.hpp"

using namespace semgrad;

namespace {

Vocabulary vocab_of_size(int n) {
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c <= i % 4; ++c) tokens.push_back("w" + std::to_string(i));
  return Vocabulary::build(tokens, 1);
}

EmbeddingMatrix random_matrix(int vocab_size, int dim, std::uint64_t seed, double scale) {
  EmbeddingMatrix m = init_embeddings(vocab_size, dim, seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> d(-scale, scale);
  for (double& x : m.input) x = d(rng);
  for (double& x : m.inner) x = d(rng);
  return m;
}

// Synthetic two-topic corpus: one sentence per topic, alternating; words of
// different topics never co-occur inside a window.
std::vector<std::string> two_topic_tokens(int sentences_per_topic, std::mt19937_64& rng) {
  std::vector<std::string> tokens;
  for (int s = 0; s < sentences_per_topic; ++s) {
    for (char topic : {'a', 'b'}) {
      for (int i = 0; i < 10; ++i)
        tokens.push_back(std::string(1, topic) + std::to_string(1 + rng() % 5));
      // hard sentence boundary via distinct filler runs is unnecessary: a
      // window of 5 bleeds a little across sentences, which the margin absorbs
    }
  }
  return tokens;
}

}  // namespace

TEST_CASE("window_contexts") {
  CHECK(window_contexts(0, 3, 5, 5) == std::vector<int>{1, 2});
  std::vector<int> full{0, 1, 2, 3, 4, 6, 7, 8, 9, 10};
  CHECK(window_contexts(5, 11, 5, 5) == full);
  CHECK(window_contexts(2, 3, 1, 1) == std::vector<int>{1});
  CHECK(window_contexts(0, 1, 5, 5).empty());
  CHECK(window_contexts(3, 7, 2, 1) == std::vector<int>{1, 2, 4});
}

TEST_CASE("train_pair: zero inner vectors leave center unchanged") {
  auto vocab = vocab_of_size(6);
  auto tree = HuffmanTree::build(vocab);
  auto m = init_embeddings(6, 4, 3);
  std::vector<double> before(m.input_row(2), m.input_row(2) + m.dim);
  double lr = 0.1;
  train_pair(m, tree, 2, 4, lr);
  for (int k = 0; k < m.dim; ++k) CHECK(m.input_row(2)[k] == before[k]);
  // each touched inner vector moved by +/- 0.5 * lr * v_center
  for (std::size_t j = 0; j < tree.paths[4].size(); ++j) {
    const double* u = m.inner_row(tree.paths[4][j]);
    double sign = tree.codes[4][j] == 0 ? 1.0 : -1.0;
    for (int k = 0; k < m.dim; ++k)
      CHECK(u[k] == Catch::Approx(sign * 0.5 * lr * before[k]).margin(1e-15));
  }
}

TEST_CASE("train_pair: zero learning rate is a no-op") {
  auto vocab = vocab_of_size(5);
  auto tree = HuffmanTree::build(vocab);
  auto m = random_matrix(5, 3, 11, 0.4);
  auto input = m.input;
  auto inner = m.inner;
  train_pair(m, tree, 1, 3, 0.0);
  CHECK(m.input == input);
  CHECK(m.inner == inner);
}

TEST_CASE("train_pair: repeated training converges on a single pair") {
  auto vocab = vocab_of_size(2);
  auto tree = HuffmanTree::build(vocab);
  auto m = init_embeddings(2, 2, 17);
  for (int i = 0; i < 1000; ++i) train_pair(m, tree, 0, 1, 0.1);
  CHECK(hs_probability(m, tree, 0, 1) > 0.99);
}

TEST_CASE("train_pair: matches the analytic gradient of -log hs_probability") {
  // finite differences on random small instances
  std::mt19937_64 seeds(23);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(seeds() % 6);  // |V| in [3, 8]
    int dim = 2 + static_cast<int>(seeds() % 4);
    auto vocab = vocab_of_size(n);
    auto tree = HuffmanTree::build(vocab);
    auto m = random_matrix(n, dim, seeds(), 0.8);
    int center = static_cast<int>(seeds() % n);
    int target = static_cast<int>(seeds() % n);

    const double lr = 1e-6;  // small step so the update reads as -lr * gradient
    auto stepped = m;
    train_pair(stepped, tree, center, target, lr);

    const double h = 1e-5;
    auto loss = [&](const EmbeddingMatrix& mm) {
      return -std::log(hs_probability(mm, tree, center, target));
    };
    auto check_param = [&](std::vector<double> EmbeddingMatrix::*field, std::size_t idx) {
      auto plus = m, minus = m;
      (plus.*field)[idx] += h;
      (minus.*field)[idx] -= h;
      double fd = (loss(plus) - loss(minus)) / (2 * h);
      double applied = ((stepped.*field)[idx] - (m.*field)[idx]) / lr;  // = -gradient
      if (std::abs(fd) > 1e-8)
        CHECK(std::abs(-applied - fd) / std::abs(fd) < 1e-4);
      else
        CHECK(std::abs(applied) < 1e-6);
    };
    for (int k = 0; k < dim; ++k)
      check_param(&EmbeddingMatrix::input, static_cast<std::size_t>(center) * dim + k);
    for (int node : tree.paths[target])
      for (int k = 0; k < dim; ++k)
        check_param(&EmbeddingMatrix::inner, static_cast<std::size_t>(node) * dim + k);
  }
}

TEST_CASE("hs_probability: zero vectors") {
  auto vocab = vocab_of_size(8);
  auto tree = HuffmanTree::build(vocab);
  EmbeddingMatrix m = init_embeddings(8, 3, 1);
  std::fill(m.input.begin(), m.input.end(), 0.0);
  for (int w = 0; w < 8; ++w)
    CHECK(hs_probability(m, tree, 0, w) ==
          Catch::Approx(std::pow(0.5, static_cast<double>(tree.codes[w].size()))));

  auto v2 = vocab_of_size(2);
  auto t2 = HuffmanTree::build(v2);
  EmbeddingMatrix m2 = init_embeddings(2, 3, 1);
  std::fill(m2.input.begin(), m2.input.end(), 0.0);
  CHECK(hs_probability(m2, t2, 0, 0) == Catch::Approx(0.5));
  CHECK(hs_probability(m2, t2, 0, 1) == Catch::Approx(0.5));
}

TEST_CASE("hs_probability: sums to 1 over the vocabulary") {
  std::mt19937_64 seeds(31);
  for (int n : {2, 5, 16, 40}) {
    auto vocab = vocab_of_size(n);
    auto tree = HuffmanTree::build(vocab);
    auto m = random_matrix(n, 5, seeds(), 1.0);
    for (int center : {0, n / 2, n - 1}) {
      double total = 0.0;
      for (int w = 0; w < n; ++w) total += hs_probability(m, tree, center, w);
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("train_skipgram: zero epochs returns the initialization") {
  auto vocab = vocab_of_size(4);
  SkipgramConfig cfg;
  cfg.dim = 5;
  cfg.epochs = 0;
  cfg.seed = 77;
  auto trained = train_skipgram({0, 1, 2, 3, 0, 1}, vocab, cfg);
  auto init = init_embeddings(4, 5, 77);
  CHECK(trained.input == init.input);
  CHECK(trained.inner == init.inner);
  for (double x : trained.input) {
    CHECK(x >= -0.5 / 5);
    CHECK(x <= 0.5 / 5);
  }
  CHECK_THROWS_AS(train_skipgram({}, vocab, cfg), std::invalid_argument);
}

TEST_CASE("train_skipgram: same seed gives bitwise identical matrices") {
  auto vocab = vocab_of_size(6);
  std::vector<int> tokens;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) tokens.push_back(static_cast<int>(rng() % 6));
  SkipgramConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  cfg.seed = 123;
  auto a = train_skipgram(tokens, vocab, cfg);
  auto b = train_skipgram(tokens, vocab, cfg);
  CHECK(a.input == b.input);
  CHECK(a.inner == b.inner);
}

TEST_CASE("train_skipgram: two-topic corpus separates, loss non-increasing") {
  std::mt19937_64 rng(8);
  auto tokens = two_topic_tokens(200, rng);
  auto vocab = Vocabulary::build(tokens, 1);
  auto ids = vocab.encode(tokens);
  auto tree = HuffmanTree::build(vocab);

  SkipgramConfig cfg;
  cfg.dim = 10;
  cfg.epochs = 1;
  cfg.seed = 42;
  // epoch-by-epoch to watch the loss
  auto m = init_embeddings(static_cast<int>(vocab.size()), cfg.dim, cfg.seed);
  double prev = training_loss(m, tree, ids, 5, 5);
  for (int epoch = 0; epoch < 15; ++epoch) {
    const int n = static_cast<int>(ids.size());
    for (int pos = 0; pos < n; ++pos)
      for (int c : window_contexts(pos, n, 5, 5)) train_pair(m, tree, ids[pos], ids[c], 0.025);
    double loss = training_loss(m, tree, ids, 5, 5);
    CHECK(loss <= prev + 1e-3);
    prev = loss;
  }
  for (double x : m.input) CHECK(std::isfinite(x));
  for (double x : m.inner) CHECK(std::isfinite(x));

  auto store = EmbeddingStore::from_training(vocab, m);
  std::vector<std::string> topic_a, topic_b;
  for (int i = 1; i <= 5; ++i) {
    topic_a.push_back("a" + std::to_string(i));
    topic_b.push_back("b" + std::to_string(i));
  }
  double within = (mean_pairwise_similarity(store, topic_a, topic_a) +
                   mean_pairwise_similarity(store, topic_b, topic_b)) /
                  2.0;
  double across = mean_pairwise_similarity(store, topic_a, topic_b);
  CHECK(within - across >= 0.2);
}
