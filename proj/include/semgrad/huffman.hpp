#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "semgrad/corpus.hpp"

namespace semgrad {

/// Huffman coding over vocabulary counts. For each word: code bits and the
/// inner-node index path, both root-first, with code[j] the branch taken at
/// path[j]. Inner nodes are numbered 0..|V|-2 in creation order.
struct HuffmanTree {
  std::vector<std::vector<std::uint8_t>> codes;
  std::vector<std::vector<int>> paths;
  int inner_count = 0;

  static HuffmanTree build(const Vocabulary& vocab) {
    const int n = static_cast<int>(vocab.size());
    if (n < 2) throw std::invalid_argument("Huffman tree needs at least 2 words");

    struct Node {
      long long count;
      int parent = -1;
      std::uint8_t bit = 0;  // branch label on the edge to parent
    };
    std::vector<Node> nodes;
    nodes.reserve(2 * n - 1);
    for (int i = 0; i < n; ++i) nodes.push_back({vocab.count(i)});

    // min-heap on (count, creation order): lowest combined count merges
    // first, earlier-created node wins ties
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int i = 0; i < n; ++i) heap.push({nodes[i].count, i});

    while (heap.size() > 1) {
      auto [ca, a] = heap.top();
      heap.pop();
      auto [cb, b] = heap.top();
      heap.pop();
      int merged = static_cast<int>(nodes.size());
      nodes.push_back({ca + cb});
      nodes[a].parent = merged;
      nodes[a].bit = 0;
      nodes[b].parent = merged;
      nodes[b].bit = 1;
      heap.push({ca + cb, merged});
    }

    HuffmanTree tree;
    tree.inner_count = n - 1;
    tree.codes.resize(n);
    tree.paths.resize(n);
    for (int w = 0; w < n; ++w) {
      std::vector<std::uint8_t> code;
      std::vector<int> path;
      for (int node = w; nodes[node].parent != -1; node = nodes[node].parent) {
        code.push_back(nodes[node].bit);
        path.push_back(nodes[node].parent - n);  // inner-node index
      }
      std::reverse(code.begin(), code.end());
      std::reverse(path.begin(), path.end());
      tree.codes[w] = std::move(code);
      tree.paths[w] = std::move(path);
    }
    return tree;
  }

  long long weighted_path_length(const Vocabulary& vocab) const {
    long long total = 0;
    for (std::size_t w = 0; w < codes.size(); ++w)
      total += vocab.count(static_cast<int>(w)) * static_cast<long long>(codes[w].size());
    return total;
  }
};

}  // namespace semgrad
