#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "semgrad/corpus.hpp"
#include "semgrad/skipgram.hpp"

namespace semgrad {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, long line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

class LookupError : public std::runtime_error {
 public:
  explicit LookupError(const std::string& word)
      : std::runtime_error("unknown word: " + word) {}
};

/// Immutable word -> vector table. Inner-node vectors are training-time
/// artifacts and are not stored.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  EmbeddingStore(std::vector<std::string> words, int dim, std::vector<double> data)
      : words_(std::move(words)), dim_(dim), data_(std::move(data)) {
    if (data_.size() != words_.size() * static_cast<std::size_t>(dim_))
      throw std::invalid_argument("EmbeddingStore: matrix shape does not match word list");
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (!index_.try_emplace(words_[i], static_cast<int>(i)).second)
        throw std::invalid_argument("EmbeddingStore: duplicate word " + words_[i]);
    }
    for (double x : data_)
      if (!std::isfinite(x)) throw std::invalid_argument("EmbeddingStore: non-finite entry");
  }

  static EmbeddingStore from_training(const Vocabulary& vocab, const EmbeddingMatrix& m) {
    std::vector<std::string> words;
    words.reserve(vocab.size());
    for (const auto& e : vocab.entries()) words.push_back(e.word);
    return EmbeddingStore(std::move(words), m.dim, m.input);
  }

  int size() const { return static_cast<int>(words_.size()); }
  int dim() const { return dim_; }
  const std::string& word(int i) const { return words_[i]; }

  int find(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? -1 : it->second;
  }

  bool contains(const std::string& w) const { return index_.count(w) > 0; }

  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * dim_; }

  const double* lookup(const std::string& w) const {
    int i = find(w);
    if (i < 0) throw LookupError(w);
    return row(i);
  }

  const std::vector<double>& data() const { return data_; }

  void save_text(std::ostream& out) const {
    out << words_.size() << ' ' << dim_ << '\n';
    char buf[64];
    for (std::size_t i = 0; i < words_.size(); ++i) {
      out << words_[i];
      const double* v = row(static_cast<int>(i));
      for (int k = 0; k < dim_; ++k) {
        std::snprintf(buf, sizeof buf, " %.9g", v[k]);
        out << buf;
      }
      out << '\n';
    }
  }

  static EmbeddingStore load_text(std::istream& in) {
    std::string line;
    long line_no = 1;
    if (!std::getline(in, line)) throw ParseError("malformed header: empty file", 1);
    std::istringstream header(line);
    long long count = -1, dim = -1;
    std::string extra;
    if (!(header >> count >> dim) || (header >> extra) || count < 0 || dim < 1)
      throw ParseError("malformed header: expected '<count> <dim>'", 1);
    std::vector<std::string> words;
    std::vector<double> data;
    words.reserve(count);
    data.reserve(count * dim);
    std::unordered_map<std::string, int> seen;
    for (long long i = 0; i < count; ++i) {
      ++line_no;
      if (!std::getline(in, line))
        throw ParseError("expected " + std::to_string(count) + " rows, file ends after " +
                             std::to_string(i),
                         line_no);
      std::istringstream row(line);
      std::string w;
      if (!(row >> w)) throw ParseError("empty row", line_no);
      if (!seen.try_emplace(w, 1).second) throw ParseError("duplicate word '" + w + "'", line_no);
      double x;
      long long k = 0;
      while (row >> x) {
        data.push_back(x);
        ++k;
      }
      if (k != dim)
        throw ParseError("row '" + w + "' has " + std::to_string(k) + " components, expected " +
                             std::to_string(dim),
                         line_no);
      words.push_back(std::move(w));
    }
    return EmbeddingStore(std::move(words), static_cast<int>(dim), std::move(data));
  }

  void save_binary(std::ostream& out) const {
    const char magic[8] = {'S', 'G', 'E', 'M', 'B', 'v', '1', '\n'};
    out.write(magic, 8);
    std::uint64_t n = words_.size(), d = dim_;
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    for (const auto& w : words_) {
      std::uint32_t len = static_cast<std::uint32_t>(w.size());
      out.write(reinterpret_cast<const char*>(&len), 4);
      out.write(w.data(), len);
    }
    out.write(reinterpret_cast<const char*>(data_.data()),
              static_cast<std::streamsize>(data_.size() * sizeof(double)));
  }

  static EmbeddingStore load_binary(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != "SGEMBv1\n")
      throw ParseError("malformed header: bad magic", 1);
    std::uint64_t n = 0, d = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&d), 8);
    if (!in || d == 0) throw ParseError("malformed header: bad dimensions", 1);
    std::vector<std::string> words(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint32_t len = 0;
      in.read(reinterpret_cast<char*>(&len), 4);
      if (!in) throw ParseError("truncated word table", 1);
      words[i].resize(len);
      in.read(words[i].data(), len);
    }
    std::vector<double> data(n * d);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) throw ParseError("truncated vector data", 1);
    return EmbeddingStore(std::move(words), static_cast<int>(d), std::move(data));
  }

  /// Extension dispatch: .bin is binary, anything else the text format.
  void save(const std::string& path) const {
    bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    binary ? save_binary(out) : save_text(out);
  }

  static EmbeddingStore load(const std::string& path) {
    bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return binary ? load_binary(in) : load_text(in);
  }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  int dim_ = 0;
  std::vector<double> data_;
};

/// Cosine similarity, clamped to [-1, 1] against rounding.
inline double cosine(const double* a, const double* b, int dim) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int k = 0; k < dim; ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) throw std::domain_error("cosine: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
  return cosine(a.data(), b.data(), static_cast<int>(a.size()));
}

/// The k words most similar to `word` (itself excluded), descending, ties by
/// vocabulary order.
inline std::vector<std::pair<std::string, double>> nearest_neighbors(const EmbeddingStore& store,
                                                                     const std::string& word,
                                                                     int k) {
  if (k < 1) throw std::invalid_argument("nearest_neighbors: k must be >= 1");
  int q = store.find(word);
  if (q < 0) throw LookupError(word);
  std::vector<std::pair<double, int>> scored;
  scored.reserve(store.size());
  for (int i = 0; i < store.size(); ++i) {
    if (i == q) continue;
    scored.emplace_back(cosine(store.row(q), store.row(i), store.dim()), i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<std::string, double>> out;
  for (int i = 0; i < std::min<int>(k, static_cast<int>(scored.size())); ++i)
    out.emplace_back(store.word(scored[i].second), scored[i].first);
  return out;
}

/// Mean cosine over the cartesian product set_a x set_b.
inline double mean_pairwise_similarity(const EmbeddingStore& store,
                                       const std::vector<std::string>& set_a,
                                       const std::vector<std::string>& set_b) {
  if (set_a.empty() || set_b.empty())
    throw std::invalid_argument("mean_pairwise_similarity: empty word set");
  double total = 0.0;
  for (const auto& a : set_a)
    for (const auto& b : set_b)
      total += cosine(store.lookup(a), store.lookup(b), store.dim());
  return total / (static_cast<double>(set_a.size()) * static_cast<double>(set_b.size()));
}

}  // namespace semgrad
