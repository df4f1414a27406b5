// Command-line front end: train or import embeddings, run experiment specs,
// emit gradient CSVs and summaries.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "semgrad/corpus.hpp"
#include "semgrad/embeddings.hpp"
#include "semgrad/experiment.hpp"
#include "semgrad/manifest.hpp"
#include "semgrad/skipgram.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SEMGRAD_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CorpusFlags {
  int min_count = 5;
  double subsample_t = 0.0;
  std::string tokenizer = "whitespace";
  bool lowercase = true;
};

void add_corpus_flags(CLI::App* cmd, CorpusFlags& f) {
  cmd->add_option("--min-count", f.min_count, "drop words rarer than this")->capture_default_str();
  cmd->add_option("--subsample-t", f.subsample_t, "subsampling threshold t (0 disables)")
      ->capture_default_str();
  cmd->add_option("--tokenizer", f.tokenizer, "whitespace | per_character | pre_segmented")
      ->capture_default_str();
  cmd->add_flag("--lowercase,!--no-lowercase", f.lowercase, "fold case before counting")
      ->capture_default_str();
}

int cmd_train_embeddings(const std::string& corpus_path, const CorpusFlags& cf,
                         const semgrad::SkipgramConfig& sg, const std::string& out_path) {
  using namespace semgrad;
  std::string text = read_file(corpus_path);
  CorpusConfig cc;
  cc.min_count = cf.min_count;
  cc.subsample_t = cf.subsample_t;
  cc.tokenizer_mode = tokenizer_mode_from_string(cf.tokenizer);
  cc.lowercase = cf.lowercase;
  auto tokens = tokenize(text, cc.tokenizer_mode, cc.lowercase);
  Vocabulary vocab = Vocabulary::build(tokens, cc.min_count);
  auto sampled = subsample(tokens, vocab, cc.subsample_t, sg.seed ^ 0x5u);
  auto ids = vocab.encode(sampled);
  EmbeddingMatrix matrix = train_skipgram(ids, vocab, sg);
  HuffmanTree tree = HuffmanTree::build(vocab);
  double loss = training_loss(matrix, tree, ids, sg.window_before, sg.window_after);
  EmbeddingStore store = EmbeddingStore::from_training(vocab, matrix);
  store.save(out_path);

  RunManifest manifest;
  manifest.command = "train-embeddings";
  manifest.config = {{"min_count", cc.min_count},
                     {"subsample_t", cc.subsample_t},
                     {"subsampling_enabled", cc.subsample_t > 0.0},
                     {"tokenizer", cf.tokenizer},
                     {"lowercase", cc.lowercase},
                     {"dim", sg.dim},
                     {"window_before", sg.window_before},
                     {"window_after", sg.window_after},
                     {"learning_rate", sg.learning_rate},
                     {"epochs", sg.epochs},
                     {"seed", sg.seed}};
  manifest.add_input(corpus_path);
  manifest.outputs = {out_path};
  manifest.write(out_path + ".manifest.json");

  std::cout << "vocab size: " << vocab.size() << "\n"
            << "tokens trained: " << ids.size() << "\n"
            << "final mean loss: " << loss << "\n"
            << "wrote " << out_path << "\n";
  return 0;
}

struct HyperOverrides {
  CLI::Option* eta = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* hidden = nullptr;
  CLI::Option* epochs = nullptr;
  CLI::Option* seed = nullptr;
  double eta_v = 0.0, gamma_v = 0.0;
  int hidden_v = 0, epochs_v = 0;
  std::uint64_t seed_v = 0;

  void add(CLI::App* cmd) {
    eta = cmd->add_option("--eta", eta_v, "learning rate (overrides the spec)");
    gamma = cmd->add_option("--gamma", gamma_v, "weight decay (overrides the spec)");
    hidden = cmd->add_option("--hidden", hidden_v, "hidden layer size (overrides the spec)");
    epochs = cmd->add_option("--epochs", epochs_v, "epoch budget (overrides the spec)");
    seed = cmd->add_option("--seed", seed_v, "classifier seed (overrides the spec)");
  }

  void apply(semgrad::ExperimentSpec& spec) const {
    if (*eta) spec.hyper.eta = eta_v;
    if (*gamma) spec.hyper.gamma = gamma_v;
    if (*hidden) spec.hyper.hidden_dim = hidden_v;
    if (*epochs) spec.hyper.epochs = epochs_v;
    if (*seed) spec.hyper.seed = seed_v;
    else if (!spec.seed_in_spec) spec.hyper.seed = default_seed();
  }
};

int cmd_run_experiment(const std::string& spec_path, const std::string& emb_path,
                       const std::string& out_path, bool strict, const HyperOverrides& hyper) {
  using namespace semgrad;
  ExperimentSpec spec = load_spec(spec_path);
  hyper.apply(spec);
  EmbeddingStore store = EmbeddingStore::load(emb_path);
  RunOptions opts;
  opts.strict = strict;
  GradientTrace trace = run_experiment(spec, store, opts);
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    write_trace_csv(trace, out);
  }
  RunManifest manifest;
  manifest.command = "run-experiment";
  manifest.config = {{"spec", spec.name},
                     {"strict", strict},
                     {"eta", spec.hyper.eta},
                     {"gamma", spec.hyper.gamma},
                     {"hidden", spec.hyper.hidden_dim},
                     {"epochs", spec.hyper.epochs},
                     {"seed", spec.hyper.seed}};
  manifest.add_input(spec_path);
  manifest.add_input(emb_path);
  manifest.outputs = {out_path};
  manifest.write(out_path + ".manifest.json");

  if (opts.dropped_pairs > 0)
    std::cerr << "warning: dropped " << opts.dropped_pairs << " pairs with unknown nouns\n";
  std::cout << "convergence epoch: ";
  if (trace.convergence_epoch) std::cout << *trace.convergence_epoch;
  else std::cout << "not reached";
  std::cout << "\nfinal gap: " << final_gap(trace) << "\nwrote " << out_path << "\n";
  return 0;
}

int cmd_contrast(const std::string& spec_path, const std::string& emb_a, const std::string& emb_b,
                 const std::string& out_path, const HyperOverrides& hyper) {
  using namespace semgrad;
  ExperimentSpec spec = load_spec(spec_path);
  hyper.apply(spec);
  EmbeddingStore store_a = EmbeddingStore::load(emb_a);
  EmbeddingStore store_b = EmbeddingStore::load(emb_b);
  GradientTrace trace_a, trace_b;
  auto [gap_a, gap_b] = cross_lingual_contrast(spec, store_a, store_b, &trace_a, &trace_b);
  std::string path_a = out_path + ".a.csv";
  std::string path_b = out_path + ".b.csv";
  for (auto [path, trace] : {std::pair{path_a, &trace_a}, std::pair{path_b, &trace_b}}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_trace_csv(*trace, out);
  }
  RunManifest manifest;
  manifest.command = "contrast";
  manifest.config = {{"spec", spec.name},
                     {"eta", spec.hyper.eta},
                     {"gamma", spec.hyper.gamma},
                     {"hidden", spec.hyper.hidden_dim},
                     {"epochs", spec.hyper.epochs},
                     {"seed", spec.hyper.seed},
                     {"gap_a", gap_a},
                     {"gap_b", gap_b}};
  manifest.add_input(spec_path);
  manifest.add_input(emb_a);
  manifest.add_input(emb_b);
  manifest.outputs = {path_a, path_b};
  manifest.write(out_path + ".manifest.json");

  std::cout << "gap_a: " << gap_a << "\ngap_b: " << gap_b << "\nwrote " << path_a << ", " << path_b
            << "\n";
  return 0;
}

int cmd_neighbors(const std::string& emb_path, const std::string& word, int k) {
  using namespace semgrad;
  EmbeddingStore store = EmbeddingStore::load(emb_path);
  for (const auto& [w, sim] : nearest_neighbors(store, word, k))
    std::cout << w << "\t" << sim << "\n";
  return 0;
}

int cmd_validate_spec(const std::string& spec_path, const std::string& emb_path, bool strict) {
  using namespace semgrad;
  ExperimentSpec spec = load_spec(spec_path);  // throws on invariant breach
  if (!emb_path.empty()) {
    EmbeddingStore store = EmbeddingStore::load(emb_path);
    int missing = 0;
    auto check = [&](const std::string& noun) {
      if (store.contains(noun)) return;
      if (strict) throw LookupError(noun);
      ++missing;
    };
    for (const auto& p : spec.training) check(p.noun);
    for (const auto& p : spec.tests) check(p.noun);
    if (missing > 0) std::cerr << "warning: " << missing << " nouns missing from the store\n";
  }
  std::cout << "spec '" << spec.name << "' is valid: " << spec.novel_words.size()
            << " novel words, " << spec.training.size() << " training pairs, "
            << spec.tests.size() << " test pairs\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semgrad: skip-gram embeddings + implicit-learning experiment simulations"};
  app.require_subcommand(1);

  std::string corpus_path, spec_path, emb_path, emb_b_path, out_path, word;
  CorpusFlags cf;
  semgrad::SkipgramConfig sg;
  sg.seed = default_seed();
  int k = 10;
  bool strict = true;

  auto* train = app.add_subcommand("train-embeddings", "train skip-gram embeddings on a corpus");
  train->add_option("--corpus", corpus_path, "input text file")->required();
  train->add_option("--out", out_path, "embedding file to write (.bin = binary)")->required();
  add_corpus_flags(train, cf);
  train->add_option("--dim", sg.dim)->capture_default_str();
  train->add_option("--window-before", sg.window_before)->capture_default_str();
  train->add_option("--window-after", sg.window_after)->capture_default_str();
  train->add_option("--lr", sg.learning_rate)->capture_default_str();
  train->add_option("--epochs", sg.epochs)->capture_default_str();
  train->add_option("--seed", sg.seed)->capture_default_str();

  auto* run = app.add_subcommand("run-experiment", "run a spec and write its gradient CSV");
  run->add_option("--spec", spec_path)->required();
  run->add_option("--embeddings", emb_path)->required();
  run->add_option("--out", out_path, "CSV path")->required();
  run->add_flag("--strict,!--lenient", strict, "fail on nouns missing from the store");
  HyperOverrides run_hyper;
  run_hyper.add(run);

  auto* contrast = app.add_subcommand("contrast", "run a dual-form spec against two stores");
  contrast->add_option("--spec", spec_path)->required();
  contrast->add_option("--embeddings", emb_path, "store for the first surface form")->required();
  contrast->add_option("--embeddings-b", emb_b_path, "store for the second surface form")
      ->required();
  contrast->add_option("--out", out_path, "output prefix (.a.csv / .b.csv appended)")->required();
  HyperOverrides contrast_hyper;
  contrast_hyper.add(contrast);

  auto* nn = app.add_subcommand("neighbors", "nearest neighbors of a word");
  nn->add_option("--embeddings", emb_path)->required();
  nn->add_option("--word", word)->required();
  nn->add_option("-k", k)->capture_default_str();

  auto* validate = app.add_subcommand("validate-spec", "check a spec file's invariants");
  validate->add_option("--spec", spec_path)->required();
  validate->add_option("--embeddings", emb_path, "also check noun coverage");
  validate->add_flag("--strict,!--lenient", strict, "fail on nouns missing from the store");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train_embeddings(corpus_path, cf, sg, out_path);
    if (run->parsed()) return cmd_run_experiment(spec_path, emb_path, out_path, strict, run_hyper);
    if (contrast->parsed())
      return cmd_contrast(spec_path, emb_path, emb_b_path, out_path, contrast_hyper);
    if (nn->parsed()) return cmd_neighbors(emb_path, word, k);
    if (validate->parsed()) return cmd_validate_spec(spec_path, emb_path, strict);
  } catch (const semgrad::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semgrad::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semgrad::LookupError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semgrad::EmptyVocabularyError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semgrad::DecodeError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
