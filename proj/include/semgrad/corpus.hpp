#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semgrad {

enum class TokenizerMode { whitespace, per_character, pre_segmented };

struct CorpusConfig {
  int min_count = 5;
  double subsample_t = 0.0;  // 0 disables subsampling
  TokenizerMode tokenizer_mode = TokenizerMode::whitespace;
  bool lowercase = true;
};

inline TokenizerMode tokenizer_mode_from_string(const std::string& s) {
  if (s == "whitespace") return TokenizerMode::whitespace;
  if (s == "per_character") return TokenizerMode::per_character;
  if (s == "pre_segmented") return TokenizerMode::pre_segmented;
  throw std::invalid_argument("unknown tokenizer mode: " + s);
}

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t offset)
      : std::runtime_error("invalid UTF-8 byte sequence at byte offset " +
                           std::to_string(offset)),
        byte_offset(offset) {}
  std::size_t byte_offset;
};

namespace detail {

// Decodes one UTF-8 code point starting at text[i]; advances i.
inline char32_t decode_utf8(std::string_view text, std::size_t& i) {
  const std::size_t start = i;
  auto byte = [&](std::size_t k) -> unsigned { return static_cast<unsigned char>(text[k]); };
  unsigned b0 = byte(i);
  if (b0 < 0x80) { i += 1; return b0; }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
  else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
  else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
  else throw DecodeError(start);
  if (i + len > text.size()) throw DecodeError(start);
  for (int k = 1; k < len; ++k) {
    unsigned b = byte(i + k);
    if ((b & 0xC0) != 0x80) throw DecodeError(start);
    cp = (cp << 6) | (b & 0x3F);
  }
  // reject overlong encodings and surrogates
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
    throw DecodeError(start);
  i += len;
  return cp;
}

inline bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) out.push_back(static_cast<char>(cp));
  else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// simple case folding: ASCII only
inline char32_t fold_case(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
}

}  // namespace detail

/// Split UTF-8 text into word tokens. whitespace and pre_segmented split on
/// runs of Unicode whitespace; per_character emits one token per non-space
/// character. Throws DecodeError on malformed input.
inline std::vector<std::string> tokenize(std::string_view text, TokenizerMode mode,
                                         bool lowercase) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = detail::decode_utf8(text, i);
    if (detail::is_unicode_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (lowercase) cp = detail::fold_case(cp);
    if (mode == TokenizerMode::per_character) {
      std::string tok;
      detail::append_utf8(tok, cp);
      tokens.push_back(std::move(tok));
    } else {
      detail::append_utf8(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

struct VocabEntry {
  std::string word;
  long long count = 0;
};

class EmptyVocabularyError : public std::runtime_error {
 public:
  EmptyVocabularyError() : std::runtime_error("no word meets the min_count threshold") {}
};

/// Word -> (index, count) table, sorted by descending count with
/// first-occurrence order breaking ties.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const std::vector<std::string>& tokens, long long min_count) {
    std::unordered_map<std::string, long long> counts;
    std::vector<std::string> order;
    for (const auto& t : tokens) {
      auto [it, inserted] = counts.try_emplace(t, 0);
      if (inserted) order.push_back(t);
      ++it->second;
    }
    Vocabulary v;
    for (const auto& w : order) {
      long long c = counts[w];
      if (c >= min_count) v.entries_.push_back({w, c});
    }
    if (v.entries_.empty()) throw EmptyVocabularyError();
    std::stable_sort(v.entries_.begin(), v.entries_.end(),
                     [](const VocabEntry& a, const VocabEntry& b) { return a.count > b.count; });
    for (std::size_t i = 0; i < v.entries_.size(); ++i) {
      v.index_[v.entries_[i].word] = static_cast<int>(i);
      v.total_ += v.entries_[i].count;
    }
    return v;
  }

  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  long long total_tokens() const { return total_; }

  /// Index of word, or -1 if absent.
  int find(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& word(int i) const { return entries_[i].word; }
  long long count(int i) const { return entries_[i].count; }

  double relative_frequency(int i) const {
    return static_cast<double>(entries_[i].count) / static_cast<double>(total_);
  }

  /// Map tokens to indices, dropping out-of-vocabulary tokens.
  std::vector<int> encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      int i = find(t);
      if (i >= 0) ids.push_back(i);
    }
    return ids;
  }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int> index_;
  long long total_ = 0;
};

/// Retention probability min(1, sqrt(t/f)) for a word of relative frequency f.
/// Callers skip subsampling entirely when t is 0 (disabled).
inline double keep_probability(double relative_frequency, double t) {
  if (relative_frequency <= 0.0)
    throw std::domain_error("keep_probability: relative frequency must be positive");
  return std::min(1.0, std::sqrt(t / relative_frequency));
}

/// Frequency-based subsampling. Each in-vocabulary occurrence is kept
/// independently with keep_probability(f, t); out-of-vocabulary tokens are
/// always dropped. t <= 0 disables subsampling.
inline std::vector<std::string> subsample(const std::vector<std::string>& tokens,
                                          const Vocabulary& vocab, double t,
                                          std::uint64_t rng_seed) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& tok : tokens) {
    int i = vocab.find(tok);
    if (i < 0) continue;
    if (t > 0.0) {
      double p = keep_probability(vocab.relative_frequency(i), t);
      if (unit(rng) >= p) continue;
    }
    kept.push_back(tok);
  }
  return kept;
}

}  // namespace semgrad
