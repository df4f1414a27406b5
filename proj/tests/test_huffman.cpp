#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <set>
#include <string>
#include <vector>

#include "semgrad/huffman.hpp"

using namespace semgrad;

namespace {

Vocabulary vocab_from_counts(const std::vector<long long>& counts) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (long long c = 0; c < counts[i]; ++c) tokens.push_back("w" + std::to_string(i));
  auto v = Vocabulary::build(tokens, 1);
  REQUIRE(v.size() == counts.size());
  return v;
}

// Exhaustive optimal prefix-code cost: try every pairwise merge order. The
// cost of a tree is the sum of all internal node weights.
long long optimal_cost(std::vector<long long> weights) {
  if (weights.size() == 1) return 0;
  long long best = std::numeric_limits<long long>::max();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (std::size_t j = i + 1; j < weights.size(); ++j) {
      std::vector<long long> next;
      for (std::size_t k = 0; k < weights.size(); ++k)
        if (k != i && k != j) next.push_back(weights[k]);
      long long merged = weights[i] + weights[j];
      next.push_back(merged);
      best = std::min(best, merged + optimal_cost(next));
    }
  }
  return best;
}

void check_prefix_free(const HuffmanTree& tree) {
  std::set<std::vector<std::uint8_t>> codes;
  for (const auto& c : tree.codes) {
    CHECK(codes.insert(c).second);
  }
  for (const auto& a : tree.codes) {
    for (const auto& b : tree.codes) {
      if (&a == &b || a.size() >= b.size()) continue;
      CHECK(!std::equal(a.begin(), a.end(), b.begin()));
    }
  }
}

}  // namespace

TEST_CASE("build_huffman: known code lengths") {
  auto v = vocab_from_counts({5, 2, 1, 1});
  auto tree = HuffmanTree::build(v);
  CHECK(tree.codes[v.find("w0")].size() == 1);
  CHECK(tree.codes[v.find("w1")].size() == 2);
  CHECK(tree.codes[v.find("w2")].size() == 3);
  CHECK(tree.codes[v.find("w3")].size() == 3);
  CHECK(tree.weighted_path_length(v) == 15);  // 5*1 + 2*2 + 1*3 + 1*3
  CHECK(tree.weighted_path_length(v) == optimal_cost({5, 2, 1, 1}));
  CHECK(tree.inner_count == 3);
}

TEST_CASE("build_huffman: two and four equal-weight words") {
  auto v2 = vocab_from_counts({1, 1});
  auto t2 = HuffmanTree::build(v2);
  CHECK(t2.codes[0].size() == 1);
  CHECK(t2.codes[1].size() == 1);

  auto v4 = vocab_from_counts({1, 1, 1, 1});
  auto t4 = HuffmanTree::build(v4);
  for (const auto& c : t4.codes) CHECK(c.size() == 2);
  CHECK(t4.weighted_path_length(v4) == 8);
}

TEST_CASE("build_huffman: singleton vocabulary rejected") {
  auto v = vocab_from_counts({3});
  CHECK_THROWS_AS(HuffmanTree::build(v), std::invalid_argument);
}

TEST_CASE("build_huffman: structural invariants") {
  auto v = vocab_from_counts({8, 5, 5, 3, 2, 1});
  auto tree = HuffmanTree::build(v);
  REQUIRE(tree.codes.size() == v.size());
  for (std::size_t w = 0; w < v.size(); ++w) {
    CHECK(tree.codes[w].size() == tree.paths[w].size());
    CHECK(tree.paths[w].front() == tree.inner_count - 1);  // root created last
    for (int node : tree.paths[w]) {
      CHECK(node >= 0);
      CHECK(node < tree.inner_count);
    }
  }
  check_prefix_free(tree);
}

TEST_CASE("build_huffman: optimal against exhaustive merge enumeration") {
  // every count multiset with |V| <= 5 and counts <= 6 (the acceptance
  // binary runs the full |V| <= 6, counts <= 8 sweep)
  for (int n = 2; n <= 5; ++n) {
    std::vector<long long> counts(n, 1);
    while (true) {
      auto v = vocab_from_counts(counts);
      auto tree = HuffmanTree::build(v);
      CHECK(tree.weighted_path_length(v) == optimal_cost(counts));
      // advance non-decreasing multiset odometer
      int i = n - 1;
      while (i >= 0 && counts[i] == 6) --i;
      if (i < 0) break;
      ++counts[i];
      for (int j = i + 1; j < n; ++j) counts[j] = counts[i];
    }
  }
}

TEST_CASE("build_huffman: deterministic on repeated builds") {
  auto v = vocab_from_counts({4, 4, 2, 2, 2, 1});
  auto a = HuffmanTree::build(v);
  auto b = HuffmanTree::build(v);
  CHECK(a.codes == b.codes);
  CHECK(a.paths == b.paths);
}
