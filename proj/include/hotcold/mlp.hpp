#pragma once

// Small dense feedforward network: ReLU hidden layers, identity or tanh
// output, full-batch SGD on squared error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "hotcold/errors.hpp"

namespace hotcold {

enum class OutputActivation { identity, tanh };

inline std::string_view to_string(OutputActivation a) {
  return a == OutputActivation::tanh ? "tanh" : "identity";
}

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> biases;   // out

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct Batch {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
};

class Mlp {
 public:
  Mlp() = default;

  // Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  Mlp(std::vector<std::size_t> dims, OutputActivation output, std::uint64_t seed)
      : dims_(std::move(dims)), output_(output), seed_(seed) {
    if (dims_.size() < 2) throw InvalidInput("Mlp needs at least input and output dims");
    for (auto d : dims_)
      if (d == 0) throw InvalidInput("Mlp layer dims must be positive");
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      DenseLayer layer{dims_[l], dims_[l + 1], {}, {}};
      const double s = 1.0 / std::sqrt(static_cast<double>(layer.in));
      std::uniform_real_distribution<double> u(-s, s);
      layer.weights.resize(layer.in * layer.out);
      layer.biases.resize(layer.out);
      for (auto& w : layer.weights) w = u(rng);
      for (auto& b : layer.biases) b = u(rng);
      layers_.push_back(std::move(layer));
    }
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  OutputActivation output_activation() const { return output_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t input_size() const { return dims_.front(); }
  std::size_t output_size() const { return dims_.back(); }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
    return n;
  }

  // Flat view in layer order: weights then biases per layer.
  double& parameter(std::size_t i) {
    for (auto& l : layers_) {
      if (i < l.weights.size()) return l.weights[i];
      i -= l.weights.size();
      if (i < l.biases.size()) return l.biases[i];
      i -= l.biases.size();
    }
    throw InvalidInput("parameter index out of range");
  }

  bool all_finite() const {
    for (const auto& l : layers_) {
      for (double w : l.weights)
        if (!std::isfinite(w)) return false;
      for (double b : l.biases)
        if (!std::isfinite(b)) return false;
    }
    return true;
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

  // Pre-activation and activation of every layer for one input.
  struct Trace {
    std::vector<std::vector<double>> z;
    std::vector<std::vector<double>> a;  // a[0] is the input
  };

  void forward_into(std::span<const double> input, Trace& t) const {
    if (input.size() != input_size())
      throw InvalidInput("Mlp::forward: input has " + std::to_string(input.size()) +
                         " values, network expects " + std::to_string(input_size()));
    t.a.resize(layers_.size() + 1);
    t.z.resize(layers_.size());
    t.a[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const DenseLayer& layer = layers_[l];
      auto& z = t.z[l];
      const auto& x = t.a[l];
      z.assign(layer.biases.begin(), layer.biases.end());
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double* w = layer.weights.data() + o * layer.in;
        double acc = z[o];
        for (std::size_t i = 0; i < layer.in; ++i) acc += w[i] * x[i];
        z[o] = acc;
      }
      auto& a = t.a[l + 1];
      a.resize(layer.out);
      const bool last = l + 1 == layers_.size();
      for (std::size_t o = 0; o < layer.out; ++o) {
        if (!last)
          a[o] = z[o] > 0.0 ? z[o] : 0.0;
        else
          a[o] = output_ == OutputActivation::tanh ? std::tanh(z[o]) : z[o];
      }
    }
  }

  std::vector<double> forward(std::span<const double> input) const {
    Trace t;
    forward_into(input, t);
    return std::move(t.a.back());
  }

  // Scalar shortcut for single-output networks.
  double forward1(std::span<const double> input) const { return forward(input).front(); }

 private:
  std::vector<std::size_t> dims_;
  OutputActivation output_ = OutputActivation::identity;
  std::uint64_t seed_ = 0;
  std::vector<DenseLayer> layers_;
};

inline std::vector<double> forward(const Mlp& net, std::span<const double> input) {
  return net.forward(input);
}

namespace detail {

inline void check_batch(const Mlp& net, const Batch& batch) {
  if (batch.inputs.size() != batch.targets.size())
    throw InvalidInput("Batch: inputs and targets differ in length");
  for (std::size_t i = 0; i < batch.inputs.size(); ++i) {
    if (batch.inputs[i].size() != net.input_size() || batch.targets[i].size() != net.output_size())
      throw InvalidInput("Batch: sample " + std::to_string(i) + " does not match network dims");
  }
}

}  // namespace detail

// Loss is the batch mean of the squared error summed over outputs.
inline double batch_loss(const Mlp& net, const Batch& batch) {
  detail::check_batch(net, batch);
  if (batch.inputs.empty()) return 0.0;
  double total = 0.0;
  Mlp::Trace t;
  for (std::size_t b = 0; b < batch.inputs.size(); ++b) {
    net.forward_into(batch.inputs[b], t);
    const auto& y = t.a.back();
    for (std::size_t o = 0; o < y.size(); ++o) {
      const double e = y[o] - batch.targets[b][o];
      total += e * e;
    }
  }
  return total / static_cast<double>(batch.inputs.size());
}

// Gradient of batch_loss, laid out like Mlp::parameter(). Returns the loss.
inline double backprop(const Mlp& net, const Batch& batch, std::vector<double>& grad) {
  detail::check_batch(net, batch);
  grad.assign(net.parameter_count(), 0.0);
  if (batch.inputs.empty()) return 0.0;
  const auto& layers = net.layers();
  std::vector<std::size_t> offset(layers.size());
  {
    std::size_t o = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      offset[l] = o;
      o += layers[l].weights.size() + layers[l].biases.size();
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.inputs.size());
  double total = 0.0;
  Mlp::Trace t;
  std::vector<double> delta;
  std::vector<double> prev;
  for (std::size_t b = 0; b < batch.inputs.size(); ++b) {
    net.forward_into(batch.inputs[b], t);
    const auto& y = t.a.back();
    delta.resize(y.size());
    for (std::size_t o = 0; o < y.size(); ++o) {
      const double e = y[o] - batch.targets[b][o];
      total += e * e;
      double d = 2.0 * e * scale;
      if (net.output_activation() == OutputActivation::tanh) d *= 1.0 - y[o] * y[o];
      delta[o] = d;
    }
    for (std::size_t l = layers.size(); l-- > 0;) {
      const DenseLayer& layer = layers[l];
      const auto& x = t.a[l];
      double* gw = grad.data() + offset[l];
      double* gb = gw + layer.weights.size();
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        gb[o] += d;
        double* row = gw + o * layer.in;
        for (std::size_t i = 0; i < layer.in; ++i) row[i] += d * x[i];
      }
      if (l == 0) break;
      prev.assign(layer.in, 0.0);
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* w = layer.weights.data() + o * layer.in;
        for (std::size_t i = 0; i < layer.in; ++i) prev[i] += d * w[i];
      }
      const auto& z = t.z[l - 1];
      for (std::size_t i = 0; i < layer.in; ++i)
        if (z[i] <= 0.0) prev[i] = 0.0;
      delta.swap(prev);
    }
  }
  return total * scale;
}

// One full-batch gradient step. Returns the loss before the step.
inline double sgd_step(Mlp& net, const Batch& batch, double lr) {
  if (!(lr >= 0.0)) throw InvalidInput("sgd_step: learning rate must be >= 0");
  std::vector<double> grad;
  const double loss = backprop(net, batch, grad);
  if (!std::isfinite(loss)) throw NumericFailure("sgd_step: non-finite loss");
  for (double g : grad)
    if (!std::isfinite(g)) throw NumericFailure("sgd_step: non-finite gradient");
  if (lr == 0.0) return loss;
  std::size_t i = 0;
  for (auto& layer : net.layers()) {
    for (auto& w : layer.weights) w -= lr * grad[i++];
    for (auto& b : layer.biases) b -= lr * grad[i++];
  }
  if (!net.all_finite()) throw NumericFailure("sgd_step: parameters became non-finite");
  return loss;
}

using GradientFn = std::function<double(const Mlp&, const Batch&, std::vector<double>&)>;

// Max over parameters of |g_bp - g_fd| / max(|g_bp|, |g_fd|, 1e-8), with g_fd
// from central differences of step h.
inline double grad_check(const Mlp& net, const Batch& batch, double h,
                         const GradientFn& gradient = backprop) {
  if (!(h >= 1e-6 && h <= 1e-3)) throw InvalidInput("grad_check: h must be in [1e-6, 1e-3]");
  std::vector<double> analytic;
  gradient(net, batch, analytic);
  Mlp probe = net;
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.parameter_count(); ++i) {
    double& p = probe.parameter(i);
    const double saved = p;
    p = saved + h;
    const double up = batch_loss(probe, batch);
    p = saved - h;
    const double down = batch_loss(probe, batch);
    p = saved;
    const double fd = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(fd), 1e-8});
    worst = std::max(worst, std::abs(analytic[i] - fd) / denom);
  }
  return worst;
}

// Versioned text format: header lines, then per layer one line of row-major
// weights and one line of biases, printed with 17 significant digits so that
// a reload is bit-identical.
inline constexpr std::string_view kMlpFormat = "hotcold-mlp v1";

inline void save_mlp(const Mlp& net, std::ostream& os) {
  os << kMlpFormat << '\n';
  os << "dims";
  for (auto d : net.dims()) os << ' ' << d;
  os << '\n';
  os << "activations relu " << to_string(net.output_activation()) << '\n';
  os << "seed " << net.seed() << '\n';
  os << std::setprecision(17);
  for (const auto& layer : net.layers()) {
    for (std::size_t i = 0; i < layer.weights.size(); ++i) os << (i ? " " : "") << layer.weights[i];
    os << '\n';
    for (std::size_t i = 0; i < layer.biases.size(); ++i) os << (i ? " " : "") << layer.biases[i];
    os << '\n';
  }
}

namespace detail {

struct LineReader {
  std::istream& in;
  std::string what;
  int line_no = 0;

  std::string next() {
    std::string line;
    if (!std::getline(in, line))
      throw LoadError(what + ": unexpected end of file at line " + std::to_string(line_no + 1));
    ++line_no;
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw LoadError(what + ": line " + std::to_string(line_no) + ": " + msg);
  }
};

inline std::vector<double> parse_doubles(LineReader& r, const std::string& line, std::size_t expect) {
  std::vector<double> out;
  out.reserve(expect);
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') r.fail("not a number: '" + tok + "'");
    out.push_back(v);
  }
  if (out.size() != expect)
    r.fail("expected " + std::to_string(expect) + " values, found " + std::to_string(out.size()));
  return out;
}

}  // namespace detail

inline Mlp load_mlp(std::istream& is) {
  detail::LineReader r{is, "mlp", 0};
  if (r.next() != kMlpFormat) r.fail("expected header '" + std::string(kMlpFormat) + "'");
  std::vector<std::size_t> dims;
  {
    std::istringstream ss(r.next());
    std::string tag;
    ss >> tag;
    if (tag != "dims") r.fail("expected 'dims'");
    std::size_t d;
    while (ss >> d) dims.push_back(d);
    if (dims.size() < 2) r.fail("need at least two dims");
  }
  OutputActivation act = OutputActivation::identity;
  {
    std::istringstream ss(r.next());
    std::string tag, hidden, out;
    ss >> tag >> hidden >> out;
    if (tag != "activations" || hidden != "relu") r.fail("expected 'activations relu <out>'");
    if (out == "tanh")
      act = OutputActivation::tanh;
    else if (out != "identity")
      r.fail("unknown output activation '" + out + "'");
  }
  std::uint64_t seed = 0;
  {
    std::istringstream ss(r.next());
    std::string tag;
    if (!(ss >> tag >> seed) || tag != "seed") r.fail("expected 'seed <n>'");
  }
  Mlp net(dims, act, seed);
  for (auto& layer : net.layers()) {
    layer.weights = detail::parse_doubles(r, r.next(), layer.weights.size());
    layer.biases = detail::parse_doubles(r, r.next(), layer.biases.size());
  }
  return net;
}

}  // namespace hotcold
