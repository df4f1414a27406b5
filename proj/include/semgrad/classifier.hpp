#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace semgrad {

struct ClassifierConfig {
  int input_dim = 0;
  int hidden_dim = 100;
  int output_dim = 4;
  double eta = 0.01;    // learning rate
  double gamma = 0.01;  // weight decay
  int epochs = 200;
  std::uint64_t seed = 1;
};

struct LabeledPair {
  std::vector<double> noun_vector;
  int label = 0;  // index of the novel word; target is its 1-in-N indicator
};

/// d -> h (tanh) -> N softmax feedforward net.
struct ClassifierNet {
  int d = 0, h = 0, n = 0;
  std::vector<double> w1;  // h x d row-major
  std::vector<double> b1;  // h
  std::vector<double> w2;  // n x h row-major
  std::vector<double> b2;  // n

  static ClassifierNet init(const ClassifierConfig& cfg) {
    if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.output_dim < 1)
      throw std::invalid_argument("ClassifierNet: all dimensions must be >= 1");
    ClassifierNet net;
    net.d = cfg.input_dim;
    net.h = cfg.hidden_dim;
    net.n = cfg.output_dim;
    net.w1.resize(static_cast<std::size_t>(net.h) * net.d);
    net.b1.assign(net.h, 0.0);
    net.w2.resize(static_cast<std::size_t>(net.n) * net.h);
    net.b2.assign(net.n, 0.0);
    std::mt19937_64 rng(cfg.seed);
    double r1 = 1.0 / std::sqrt(static_cast<double>(net.d));
    std::uniform_real_distribution<double> d1(-r1, r1);
    for (double& x : net.w1) x = d1(rng);
    double r2 = 1.0 / std::sqrt(static_cast<double>(net.h));
    std::uniform_real_distribution<double> d2(-r2, r2);
    for (double& x : net.w2) x = d2(rng);
    return net;
  }

  void save(std::ostream& out) const {
    out << "SGNET 1\n" << d << ' ' << h << ' ' << n << '\n';
    char buf[64];
    auto dump = [&](const std::vector<double>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, i ? " %.17g" : "%.17g", v[i]);
        out << buf;
      }
      out << '\n';
    };
    dump(w1);
    dump(b1);
    dump(w2);
    dump(b2);
  }

  static ClassifierNet load(std::istream& in) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != "SGNET" || version != 1)
      throw std::runtime_error("bad classifier checkpoint header");
    ClassifierNet net;
    in >> net.d >> net.h >> net.n;
    if (!in || net.d < 1 || net.h < 1 || net.n < 1)
      throw std::runtime_error("bad classifier checkpoint dimensions");
    auto slurp = [&](std::vector<double>& v, std::size_t count) {
      v.resize(count);
      for (auto& x : v)
        if (!(in >> x)) throw std::runtime_error("truncated classifier checkpoint");
    };
    slurp(net.w1, static_cast<std::size_t>(net.h) * net.d);
    slurp(net.b1, net.h);
    slurp(net.w2, static_cast<std::size_t>(net.n) * net.h);
    slurp(net.b2, net.n);
    return net;
  }
};

/// Numerically stable softmax (max subtraction).
inline std::vector<double> softmax(const std::vector<double>& net_inputs) {
  double m = *std::max_element(net_inputs.begin(), net_inputs.end());
  std::vector<double> p(net_inputs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::exp(net_inputs[k] - m);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

struct ForwardResult {
  std::vector<double> hidden;
  std::vector<double> net_inputs;
  std::vector<double> probs;
};

inline ForwardResult forward(const ClassifierNet& net, const double* x, int x_dim) {
  if (x_dim != net.d) throw std::invalid_argument("forward: input dimension mismatch");
  ForwardResult r;
  r.hidden.resize(net.h);
  for (int i = 0; i < net.h; ++i) {
    double z = net.b1[i];
    const double* row = net.w1.data() + static_cast<std::size_t>(i) * net.d;
    for (int k = 0; k < net.d; ++k) z += row[k] * x[k];
    r.hidden[i] = std::tanh(z);
  }
  r.net_inputs.resize(net.n);
  for (int j = 0; j < net.n; ++j) {
    double z = net.b2[j];
    const double* row = net.w2.data() + static_cast<std::size_t>(j) * net.h;
    for (int i = 0; i < net.h; ++i) z += row[i] * r.hidden[i];
    r.net_inputs[j] = z;
  }
  r.probs = softmax(r.net_inputs);
  return r;
}

inline ForwardResult forward(const ClassifierNet& net, const std::vector<double>& x) {
  return forward(net, x.data(), static_cast<int>(x.size()));
}

inline std::vector<double> predict(const ClassifierNet& net, const std::vector<double>& x) {
  return forward(net, x).probs;
}

struct Gradients {
  std::vector<double> w1, b1, w2, b2;
  double loss = 0.0;
};

/// Backprop of the cross-entropy loss -log p_label through softmax, affine,
/// tanh, affine. Weight decay is not included here; train_step couples it
/// into the update.
inline Gradients compute_gradients(const ClassifierNet& net, const std::vector<double>& x,
                                   int label) {
  ForwardResult f = forward(net, x);
  Gradients g;
  g.loss = -std::log(f.probs[label]);
  std::vector<double> dnet(f.probs);  // softmax + cross-entropy: p - onehot
  dnet[label] -= 1.0;
  g.b2 = dnet;
  g.w2.resize(net.w2.size());
  for (int j = 0; j < net.n; ++j)
    for (int i = 0; i < net.h; ++i)
      g.w2[static_cast<std::size_t>(j) * net.h + i] = dnet[j] * f.hidden[i];
  std::vector<double> dhidden(net.h, 0.0);
  for (int i = 0; i < net.h; ++i) {
    double s = 0.0;
    for (int j = 0; j < net.n; ++j) s += net.w2[static_cast<std::size_t>(j) * net.h + i] * dnet[j];
    dhidden[i] = s * (1.0 - f.hidden[i] * f.hidden[i]);
  }
  g.b1 = dhidden;
  g.w1.resize(net.w1.size());
  for (int i = 0; i < net.h; ++i)
    for (int k = 0; k < net.d; ++k)
      g.w1[static_cast<std::size_t>(i) * net.d + k] = dhidden[i] * x[k];
  return g;
}

/// One SGD step: theta -= eta * (grad + gamma * theta) for weights, biases
/// without the decay term. Returns the pre-update loss.
inline double train_step(ClassifierNet& net, const LabeledPair& pair, double eta, double gamma) {
  Gradients g = compute_gradients(net, pair.noun_vector, pair.label);
  for (std::size_t i = 0; i < net.w1.size(); ++i) net.w1[i] -= eta * (g.w1[i] + gamma * net.w1[i]);
  for (std::size_t i = 0; i < net.b1.size(); ++i) net.b1[i] -= eta * g.b1[i];
  for (std::size_t i = 0; i < net.w2.size(); ++i) net.w2[i] -= eta * (g.w2[i] + gamma * net.w2[i]);
  for (std::size_t i = 0; i < net.b2.size(); ++i) net.b2[i] -= eta * g.b2[i];
  return g.loss;
}

struct EpochResult {
  double mean_loss = 0.0;
  double training_error = 0.0;  // misclassification rate after the updates
};

inline double misclassification_rate(const ClassifierNet& net,
                                     const std::vector<LabeledPair>& pairs) {
  int wrong = 0;
  for (const auto& p : pairs) {
    auto probs = predict(net, p.noun_vector);
    int argmax = static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (argmax != p.label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(pairs.size());
}

/// One pass over the pairs in a seeded shuffled order; training error is
/// evaluated after the epoch's updates.
inline EpochResult train_epoch(ClassifierNet& net, const std::vector<LabeledPair>& pairs,
                               double eta, double gamma, std::uint64_t shuffle_seed) {
  if (pairs.empty()) throw std::invalid_argument("train_epoch: empty pair list");
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(shuffle_seed);
  std::shuffle(order.begin(), order.end(), rng);
  double total = 0.0;
  for (std::size_t i : order) total += train_step(net, pairs[i], eta, gamma);
  EpochResult r;
  r.mean_loss = total / static_cast<double>(pairs.size());
  r.training_error = misclassification_rate(net, pairs);
  return r;
}

}  // namespace semgrad
