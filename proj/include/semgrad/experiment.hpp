#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semgrad/classifier.hpp"
#include "semgrad/embeddings.hpp"

namespace semgrad {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// training error <= this for 3 consecutive epochs counts as converged
inline constexpr double kConvergenceErrorThreshold = 0.05;
inline constexpr int kConvergenceRunLength = 3;

struct TrainingPair {
  std::string noun;
  std::string noun_b;  // second surface form, dual-form specs only
  std::string novel_word;
};

struct TestPair {
  std::string noun;
  std::string noun_b;
  std::string novel_word;
  bool grammatical = false;
};

/// Stimulus definition for one simulated behavioural experiment.
struct ExperimentSpec {
  std::string name;
  std::vector<std::string> novel_words;
  std::vector<TrainingPair> training;
  std::vector<TestPair> tests;
  bool dual_form = false;
  bool one_sided = false;   // spec explicitly declares one-sided testing
  bool complement = false;  // report mean_ungrammatical as 1 - mean_grammatical
  bool seed_in_spec = false;
  ClassifierConfig hyper;   // input_dim/output_dim resolved at run time

  int word_index(const std::string& w) const {
    auto it = std::find(novel_words.begin(), novel_words.end(), w);
    return it == novel_words.end() ? -1 : static_cast<int>(it - novel_words.begin());
  }

  void validate() const {
    if (novel_words.size() < 2) throw ValidationError("spec needs at least 2 novel words");
    {
      std::set<std::string> seen;
      for (const auto& w : novel_words)
        if (!seen.insert(w).second) throw ValidationError("duplicate novel word '" + w + "'");
    }
    if (training.empty()) throw ValidationError("spec has no training pairs");
    if (tests.empty()) throw ValidationError("spec has no test pairs");
    std::set<std::string> training_nouns;
    for (const auto& p : training) {
      if (word_index(p.novel_word) < 0)
        throw ValidationError("training pair (" + p.noun + ", " + p.novel_word +
                              ") uses an undeclared novel word");
      if (dual_form && p.noun_b.empty())
        throw ValidationError("training pair (" + p.noun + ", " + p.novel_word +
                              ") is missing its second surface form");
      training_nouns.insert(p.noun);
    }
    std::set<std::string> gram, ungram;
    for (const auto& p : tests) {
      if (word_index(p.novel_word) < 0)
        throw ValidationError("test pair (" + p.noun + ", " + p.novel_word +
                              ") uses an undeclared novel word");
      if (training_nouns.count(p.noun))
        throw ValidationError("test noun '" + p.noun +
                              "' also appears in training; test nouns must be novel");
      if (dual_form && p.noun_b.empty())
        throw ValidationError("test pair (" + p.noun + ", " + p.novel_word +
                              ") is missing its second surface form");
      (p.grammatical ? gram : ungram).insert(p.noun);
    }
    if (!one_sided) {
      for (const auto& p : tests) {
        if (!gram.count(p.noun))
          throw ValidationError("test noun '" + p.noun +
                                "' has no grammatical pairing (declare one_sided to allow)");
        if (!ungram.count(p.noun))
          throw ValidationError("test noun '" + p.noun +
                                "' has no ungrammatical pairing (declare one_sided to allow)");
      }
    }
  }
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& v, long line_no) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("expected a boolean, got '" + v + "'", line_no);
}

}  // namespace detail

/// Parse the line-oriented sectioned spec format: [novel_words], [training]
/// (noun TAB [noun_b TAB] novel_word), [test] (same plus a trailing tag
/// column), [hyper] (key = value). '#' starts a comment line.
inline ExperimentSpec parse_spec(std::istream& in, const std::string& name) {
  ExperimentSpec spec;
  spec.name = name;
  std::string section;
  std::string raw;
  long line_no = 0;
  std::optional<bool> dual;
  auto check_dual = [&](bool is_dual) {
    if (dual.has_value() && *dual != is_dual)
      throw ParseError("inconsistent column counts: mixing single- and dual-form rows", line_no);
    dual = is_dual;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section != "novel_words" && section != "training" && section != "test" &&
          section != "hyper")
        throw ParseError("unknown section [" + section + "]", line_no);
      continue;
    }
    if (section == "novel_words") {
      spec.novel_words.push_back(line);
    } else if (section == "training") {
      auto cols = detail::split_tabs(line);
      for (auto& c : cols) c = detail::trim(c);
      if (cols.size() == 2) {
        check_dual(false);
        spec.training.push_back({cols[0], "", cols[1]});
      } else if (cols.size() == 3) {
        check_dual(true);
        spec.training.push_back({cols[0], cols[1], cols[2]});
      } else {
        throw ParseError("training row needs 2 or 3 tab-separated columns", line_no);
      }
    } else if (section == "test") {
      auto cols = detail::split_tabs(line);
      for (auto& c : cols) c = detail::trim(c);
      bool tagged_3 = cols.size() == 3;
      bool tagged_4 = cols.size() == 4;
      if (!tagged_3 && !tagged_4)
        throw ParseError("test row needs 3 or 4 tab-separated columns", line_no);
      check_dual(tagged_4);
      const std::string& tag = cols.back();
      bool grammatical;
      if (tag == "grammatical") grammatical = true;
      else if (tag == "ungrammatical") grammatical = false;
      else throw ParseError("tag must be grammatical or ungrammatical, got '" + tag + "'", line_no);
      if (tagged_3) spec.tests.push_back({cols[0], "", cols[1], grammatical});
      else spec.tests.push_back({cols[0], cols[1], cols[2], grammatical});
    } else if (section == "hyper") {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("hyper line needs key = value", line_no);
      std::string key = detail::trim(line.substr(0, eq));
      std::string val = detail::trim(line.substr(eq + 1));
      try {
        if (key == "eta") spec.hyper.eta = std::stod(val);
        else if (key == "gamma") spec.hyper.gamma = std::stod(val);
        else if (key == "hidden") spec.hyper.hidden_dim = std::stoi(val);
        else if (key == "epochs") spec.hyper.epochs = std::stoi(val);
        else if (key == "seed") {
          spec.hyper.seed = std::stoull(val);
          spec.seed_in_spec = true;
        }
        else if (key == "one_sided") spec.one_sided = detail::parse_bool(val, line_no);
        else if (key == "complement") spec.complement = detail::parse_bool(val, line_no);
        else throw ParseError("unknown hyper key '" + key + "'", line_no);
      } catch (const std::invalid_argument&) {
        throw ParseError("bad value '" + val + "' for hyper key '" + key + "'", line_no);
      }
    } else {
      throw ParseError("content before any section header", line_no);
    }
  }
  spec.dual_form = dual.value_or(false);
  spec.validate();
  return spec;
}

inline ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
  return parse_spec(in, name);
}

struct EpochRecord {
  int epoch = 0;  // 1-based, contiguous
  double mean_grammatical = 0.0;
  double mean_ungrammatical = 0.0;
  double training_error = 0.0;
};

struct GradientTrace {
  std::vector<EpochRecord> records;
  std::optional<int> convergence_epoch;
};

/// First epoch of the first run of kConvergenceRunLength consecutive epochs
/// with training error at or below the threshold.
inline std::optional<int> detect_convergence(const std::vector<EpochRecord>& records) {
  int run = 0;
  for (const auto& rec : records) {
    run = rec.training_error <= kConvergenceErrorThreshold ? run + 1 : 0;
    if (run == kConvergenceRunLength) return rec.epoch - kConvergenceRunLength + 1;
  }
  return std::nullopt;
}

struct RunOptions {
  bool strict = true;           // lenient drops unknown-noun pairs
  bool use_second_form = false;
  const ClassifierNet* initial_net = nullptr;  // overrides seed-based init
  int dropped_pairs = 0;                       // out: lenient-mode drop count
};

namespace detail {

inline const std::string& surface(const std::string& a, const std::string& b, bool second) {
  return second ? b : a;
}

inline std::uint64_t epoch_shuffle_seed(std::uint64_t base, int epoch) {
  std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(epoch + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

}  // namespace detail

/// Train the classifier on the spec's training pairs and record, per epoch,
/// the mean softmax activation of grammatical and ungrammatical test pairs
/// plus the post-epoch training error.
inline GradientTrace run_experiment(const ExperimentSpec& spec, const EmbeddingStore& store,
                                    RunOptions& opts) {
  spec.validate();
  if (spec.hyper.epochs < 1) throw ValidationError("epochs must be >= 1");
  auto resolve = [&](const std::string& a, const std::string& b) -> const double* {
    const std::string& w = detail::surface(a, b, opts.use_second_form);
    int i = store.find(w);
    if (i < 0) {
      if (opts.strict) throw LookupError(w);
      return nullptr;
    }
    return store.row(i);
  };

  std::vector<LabeledPair> pairs;
  for (const auto& p : spec.training) {
    const double* v = resolve(p.noun, p.noun_b);
    if (!v) {
      ++opts.dropped_pairs;
      continue;
    }
    pairs.push_back({std::vector<double>(v, v + store.dim()), spec.word_index(p.novel_word)});
  }
  if (pairs.empty()) throw ValidationError("no training pair resolvable in the embedding store");

  struct ResolvedTest {
    std::vector<double> x;
    int word = 0;
    bool grammatical = false;
  };
  std::vector<ResolvedTest> tests;
  for (const auto& p : spec.tests) {
    const double* v = resolve(p.noun, p.noun_b);
    if (!v) {
      ++opts.dropped_pairs;
      continue;
    }
    tests.push_back({std::vector<double>(v, v + store.dim()), spec.word_index(p.novel_word),
                     p.grammatical});
  }
  if (tests.empty()) throw ValidationError("no test pair resolvable in the embedding store");

  ClassifierConfig cfg = spec.hyper;
  cfg.input_dim = store.dim();
  cfg.output_dim = static_cast<int>(spec.novel_words.size());
  ClassifierNet net = opts.initial_net ? *opts.initial_net : ClassifierNet::init(cfg);
  if (net.d != cfg.input_dim || net.n != cfg.output_dim)
    throw ValidationError("classifier dimensions do not match spec/store");

  GradientTrace trace;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochResult er = train_epoch(net, pairs, cfg.eta, cfg.gamma,
                                 detail::epoch_shuffle_seed(cfg.seed, epoch));
    double gram_sum = 0.0, ungram_sum = 0.0;
    int gram_n = 0, ungram_n = 0;
    for (const auto& t : tests) {
      double activation = predict(net, t.x)[t.word];
      if (t.grammatical) {
        gram_sum += activation;
        ++gram_n;
      } else {
        ungram_sum += activation;
        ++ungram_n;
      }
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.mean_grammatical = gram_n ? gram_sum / gram_n : 0.0;
    rec.mean_ungrammatical = spec.complement ? 1.0 - rec.mean_grammatical
                                             : (ungram_n ? ungram_sum / ungram_n : 0.0);
    rec.training_error = er.training_error;
    trace.records.push_back(rec);
  }
  trace.convergence_epoch = detect_convergence(trace.records);
  return trace;
}

inline GradientTrace run_experiment(const ExperimentSpec& spec, const EmbeddingStore& store) {
  RunOptions opts;
  return run_experiment(spec, store, opts);
}

/// mean_grammatical - mean_ungrammatical at a 1-based epoch.
inline double grammaticality_gap(const GradientTrace& trace, int epoch) {
  if (epoch < 1 || epoch > static_cast<int>(trace.records.size()))
    throw std::out_of_range("grammaticality_gap: epoch " + std::to_string(epoch) +
                            " outside trace");
  const EpochRecord& r = trace.records[epoch - 1];
  return r.mean_grammatical - r.mean_ungrammatical;
}

inline double final_gap(const GradientTrace& trace) {
  return grammaticality_gap(trace, static_cast<int>(trace.records.size()));
}

struct SimilarityRow {
  std::string noun;
  std::string novel_word;
  bool grammatical = false;
  double mean_similarity = 0.0;  // to the training nouns of the pair's class
};

struct SimilarityReport {
  std::vector<SimilarityRow> rows;  // sorted by descending similarity
  double mean_grammatical = 0.0;
  double mean_ungrammatical = 0.0;
};

/// Per test pair: mean cosine between the test noun and the training nouns
/// of the pair's novel word, aggregated per tag.
inline SimilarityReport similarity_split_report(const ExperimentSpec& spec,
                                                const EmbeddingStore& store,
                                                bool strict = true, bool second_form = false) {
  SimilarityReport report;
  double gram_sum = 0.0, ungram_sum = 0.0;
  int gram_n = 0, ungram_n = 0;
  for (const auto& t : spec.tests) {
    std::vector<std::string> class_nouns;
    for (const auto& p : spec.training)
      if (p.novel_word == t.novel_word)
        class_nouns.push_back(detail::surface(p.noun, p.noun_b, second_form));
    if (class_nouns.empty()) continue;
    const std::string& noun = detail::surface(t.noun, t.noun_b, second_form);
    if (!strict) {
      if (!store.contains(noun)) continue;
      std::erase_if(class_nouns, [&](const std::string& w) { return !store.contains(w); });
      if (class_nouns.empty()) continue;
    }
    double sim = mean_pairwise_similarity(store, {noun}, class_nouns);
    report.rows.push_back({noun, t.novel_word, t.grammatical, sim});
    if (t.grammatical) {
      gram_sum += sim;
      ++gram_n;
    } else {
      ungram_sum += sim;
      ++ungram_n;
    }
  }
  report.mean_grammatical = gram_n ? gram_sum / gram_n : 0.0;
  report.mean_ungrammatical = ungram_n ? ungram_sum / ungram_n : 0.0;
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const SimilarityRow& a, const SimilarityRow& b) {
                     return a.mean_similarity > b.mean_similarity;
                   });
  return report;
}

/// Run the same dual-form spec against two stores with identical
/// hyperparameters; returns the final-epoch grammaticality gaps.
inline std::pair<double, double> cross_lingual_contrast(const ExperimentSpec& spec,
                                                        const EmbeddingStore& store_a,
                                                        const EmbeddingStore& store_b,
                                                        GradientTrace* trace_a = nullptr,
                                                        GradientTrace* trace_b = nullptr) {
  if (!spec.dual_form)
    throw ValidationError("cross-lingual contrast needs a dual-form spec "
                          "(second surface-form column missing)");
  RunOptions oa;
  GradientTrace ta = run_experiment(spec, store_a, oa);
  RunOptions ob;
  ob.use_second_form = true;
  GradientTrace tb = run_experiment(spec, store_b, ob);
  if (trace_a) *trace_a = ta;
  if (trace_b) *trace_b = tb;
  return {final_gap(ta), final_gap(tb)};
}

/// CSV trace: epoch rows plus a convergence_epoch footer.
inline void write_trace_csv(const GradientTrace& trace, std::ostream& out) {
  out << "epoch,mean_grammatical,mean_ungrammatical,training_error\n";
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g\n", r.epoch, r.mean_grammatical,
                  r.mean_ungrammatical, r.training_error);
    out << buf;
  }
  out << "convergence_epoch,";
  if (trace.convergence_epoch) out << *trace.convergence_epoch;
  else out << "NA";
  out << "\n";
}

}  // namespace semgrad
