#include "pvmppt/ann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "pvmppt/rng.hpp"

namespace pvmppt::ann {

namespace {

constexpr double kSeluLambda = 1.0507009873554804934193349852946;
constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

double sigmoid_stable(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

const char* to_string(Activation kind) {
  switch (kind) {
    case Activation::tanh: return "tanh";
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::gelu: return "gelu";
    case Activation::selu: return "selu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
    case Activation::softplus: return "softplus";
    case Activation::softsign: return "softsign";
    case Activation::swish: return "swish";
  }
  throw std::logic_error("unknown activation");
}

Activation activation_from_string(std::string_view name) {
  for (Activation kind : {Activation::tanh, Activation::linear, Activation::relu,
                          Activation::gelu, Activation::selu, Activation::sigmoid,
                          Activation::softmax, Activation::softplus, Activation::softsign,
                          Activation::swish}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown activation: " + std::string(name));
}

bool is_elementwise(Activation kind) { return kind != Activation::softmax; }

double activate(Activation kind, double v) {
  switch (kind) {
    case Activation::tanh: return std::tanh(v);
    case Activation::linear: return v;
    case Activation::relu: return v > 0.0 ? v : 0.0;
    case Activation::gelu: return 0.5 * v * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
    case Activation::selu:
      return v > 0.0 ? kSeluLambda * v : kSeluLambda * kSeluAlpha * std::expm1(v);
    case Activation::sigmoid: return sigmoid_stable(v);
    case Activation::softmax:
      throw std::invalid_argument("softmax is layer-wise; use activate_layer");
    case Activation::softplus:
      return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
    case Activation::softsign: return v / (1.0 + std::abs(v));
    case Activation::swish: return v * sigmoid_stable(v);
  }
  throw std::logic_error("unknown activation");
}

double activate_derivative(Activation kind, double v) {
  switch (kind) {
    case Activation::tanh: {
      const double t = std::tanh(v);
      return 1.0 - t * t;
    }
    case Activation::linear: return 1.0;
    case Activation::relu: return v > 0.0 ? 1.0 : 0.0;
    case Activation::gelu: {
      const double cdf = 0.5 * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
      const double pdf = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
      return cdf + v * pdf;
    }
    case Activation::selu:
      return v > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(v);
    case Activation::sigmoid: {
      const double s = sigmoid_stable(v);
      return s * (1.0 - s);
    }
    case Activation::softmax:
      throw std::invalid_argument("softmax is layer-wise; use activation_backward");
    case Activation::softplus: return sigmoid_stable(v);
    case Activation::softsign: {
      const double d = 1.0 + std::abs(v);
      return 1.0 / (d * d);
    }
    case Activation::swish: {
      const double s = sigmoid_stable(v);
      return s * (1.0 + v * (1.0 - s));
    }
  }
  throw std::logic_error("unknown activation");
}

std::vector<double> activate_layer(Activation kind, const std::vector<double>& v) {
  std::vector<double> y(v.size());
  if (kind == Activation::softmax) {
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      y[i] = std::exp(v[i] - m);
      sum += y[i];
    }
    for (double& yi : y) yi /= sum;
    return y;
  }
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = activate(kind, v[i]);
  return y;
}

std::vector<double> activation_backward(Activation kind, const std::vector<double>& v,
                                        const std::vector<double>& y,
                                        const std::vector<double>& dl_dy) {
  std::vector<double> dl_dv(v.size());
  if (kind == Activation::softmax) {
    // dy_i/dv_k = y_i (delta_ik - y_k)
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += dl_dy[i] * y[i];
    for (std::size_t k = 0; k < y.size(); ++k) dl_dv[k] = y[k] * (dl_dy[k] - dot);
    return dl_dv;
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    dl_dv[k] = dl_dy[k] * activate_derivative(kind, v[k]);
  }
  return dl_dv;
}

MlpNetwork MlpNetwork::create(const std::vector<int>& layer_sizes, Activation hidden,
                              Activation output, std::uint64_t seed) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("network needs an input and an output layer");
  for (int n : layer_sizes) {
    if (n < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  MlpNetwork net;
  net.layer_sizes = layer_sizes;
  net.hidden_activation = hidden;
  net.output_activation = output;
  std::mt19937_64 engine(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int rows = layer_sizes[l + 1];
    const int cols = layer_sizes[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    std::vector<double> w(static_cast<std::size_t>(rows) * cols);
    for (double& x : w) x = rng::uniform(engine, -bound, bound);
    std::vector<double> b(rows);
    for (double& x : b) x = rng::uniform(engine, -bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

std::size_t MlpNetwork::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

Activation MlpNetwork::layer_activation(std::size_t layer) const {
  return layer + 1 == layer_count() ? output_activation : hidden_activation;
}

void MlpNetwork::validate() const {
  if (layer_sizes.size() < 2) throw std::invalid_argument("network needs at least two layers");
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size())
    throw std::invalid_argument("layer count mismatch");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const std::size_t rows = static_cast<std::size_t>(layer_sizes[l + 1]);
    const std::size_t cols = static_cast<std::size_t>(layer_sizes[l]);
    if (weights[l].size() != rows * cols)
      throw std::invalid_argument("weight matrix shape mismatch at layer " + std::to_string(l + 1));
    if (biases[l].size() != rows)
      throw std::invalid_argument("bias vector shape mismatch at layer " + std::to_string(l + 1));
    for (double w : weights[l]) {
      if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
    }
    for (double b : biases[l]) {
      if (!std::isfinite(b)) throw std::invalid_argument("non-finite bias");
    }
  }
}

std::vector<double> forward(const MlpNetwork& net, const std::vector<double>& input,
                            ForwardTrace* trace) {
  if (static_cast<int>(input.size()) != net.input_size())
    throw std::invalid_argument("input size mismatch: expected " +
                                std::to_string(net.input_size()) + ", got " +
                                std::to_string(input.size()));
  if (trace) {
    trace->input = input;
    trace->u.clear();
    trace->v.clear();
    trace->y.clear();
  }
  std::vector<double> x = input;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    const std::vector<double>& w = net.weights[l];
    std::vector<double> u(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
      u[r] = acc;
    }
    std::vector<double> v(rows);
    for (int r = 0; r < rows; ++r) v[r] = u[r] + net.biases[l][r];
    std::vector<double> y = activate_layer(net.layer_activation(l), v);
    if (trace) {
      trace->u.push_back(std::move(u));
      trace->v.push_back(v);
      trace->y.push_back(y);
    }
    x = std::move(y);
  }
  return x;
}

namespace {

// Per-layer dL/dv of the half-squared error, from a forward trace.
std::vector<std::vector<double>> backprop_dl_dv(const MlpNetwork& net, const ForwardTrace& trace,
                                                double error) {
  const std::size_t layers = net.layer_count();
  std::vector<std::vector<double>> dl_dv(layers);
  std::vector<double> dl_dy{-error};  // L = 0.5 (d - y)^2  =>  dL/dy = -(d - y)
  for (std::size_t l = layers; l-- > 0;) {
    dl_dv[l] = activation_backward(net.layer_activation(l), trace.v[l], trace.y[l], dl_dy);
    if (l > 0) {
      const int rows = net.layer_sizes[l + 1];
      const int cols = net.layer_sizes[l];
      const std::vector<double>& w = net.weights[l];
      dl_dy.assign(cols, 0.0);
      for (int r = 0; r < rows; ++r) {
        const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
        const double d = dl_dv[l][r];
        for (int c = 0; c < cols; ++c) dl_dy[c] += d * wr[c];
      }
    }
  }
  return dl_dv;
}

}  // namespace

Gradients loss_gradients(const MlpNetwork& net, const TrainSample& sample) {
  if (net.output_size() != 1)
    throw std::invalid_argument("scalar-target gradients require an output layer of size 1");
  ForwardTrace trace;
  const std::vector<double> out = forward(net, sample.input, &trace);
  const double error = sample.target - out[0];
  const auto dl_dv = backprop_dl_dv(net, trace, error);

  Gradients grads;
  grads.weights.resize(net.layer_count());
  grads.biases.resize(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    const std::vector<double>& x = l == 0 ? trace.input : trace.y[l - 1];
    grads.weights[l].resize(static_cast<std::size_t>(rows) * cols);
    grads.biases[l].resize(rows);
    for (int r = 0; r < rows; ++r) {
      const double d = dl_dv[l][r];
      for (int c = 0; c < cols; ++c) {
        grads.weights[l][static_cast<std::size_t>(r) * cols + c] = d * x[c];
      }
      grads.biases[l][r] = d;
    }
  }
  return grads;
}

double backward_update(MlpNetwork& net, const TrainSample& sample, const ForwardTrace& trace,
                       double learning_rate) {
  if (net.output_size() != 1)
    throw std::invalid_argument("scalar-target update requires an output layer of size 1");
  const double error = sample.target - trace.y.back()[0];
  const auto dl_dv = backprop_dl_dv(net, trace, error);

  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    const std::vector<double>& x = l == 0 ? trace.input : trace.y[l - 1];
    std::vector<double>& w = net.weights[l];
    std::vector<double>& b = net.biases[l];
    for (int r = 0; r < rows; ++r) {
      const double delta = -dl_dv[l][r];  // local gradient, e * phi'(v) at the output
      if (!std::isfinite(delta)) throw std::runtime_error("divergent update: non-finite gradient");
      double* wr = w.data() + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) wr[c] += learning_rate * delta * x[c];
      b[r] += learning_rate * delta;  // bias as a unit-input weight
    }
  }
  return error;
}

std::vector<double> train(MlpNetwork& net, const std::vector<TrainSample>& samples,
                          const TrainConfig& config) {
  if (config.learning_rate < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (samples.empty()) throw std::invalid_argument("training set is empty");

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(config.seed);

  std::vector<double> history;
  history.reserve(config.epochs);
  ForwardTrace trace;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle_each_epoch) rng::shuffle(order, engine);
    double sum = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const TrainSample& sample = samples[order[k]];
      forward(net, sample.input, &trace);
      double error;
      try {
        error = backward_update(net, sample, trace, config.learning_rate);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (epoch " + std::to_string(epoch + 1) +
                                 ", sample " + std::to_string(order[k]) + ")");
      }
      sum += loss(error);
    }
    history.push_back(sum / static_cast<double>(samples.size()));
  }
  return history;
}

ValidationReport validate(const MlpNetwork& net, const std::vector<TrainSample>& samples) {
  if (samples.empty()) throw std::runtime_error("validation set is empty");
  ValidationReport report;
  report.pairs.reserve(samples.size());
  std::vector<double> abs_errors;
  abs_errors.reserve(samples.size());
  double sum = 0.0;
  report.within_0002 = 0;
  for (const TrainSample& sample : samples) {
    const double y = forward(net, sample.input)[0];
    const double e = sample.target - y;
    sum += loss(e);
    report.pairs.emplace_back(y, sample.target);
    abs_errors.push_back(std::abs(e));
    if (std::abs(e) < 0.002) ++report.within_0002;
  }
  report.total = samples.size();
  report.mse = sum / static_cast<double>(samples.size());
  report.mse_percent = report.mse * 100.0;
  report.abs_error_hist = dataset::make_histogram(abs_errors, 50);
  return report;
}

Candidate Candidate::with_activation(std::vector<int> layers, Activation kind) {
  const bool symmetric_range = kind == Activation::tanh || kind == Activation::softsign;
  return Candidate{std::move(layers), kind,
                   symmetric_range ? kind : Activation::linear};
}

SearchResult architecture_search(const std::vector<TrainSample>& train_set,
                                 const std::vector<TrainSample>& validation_set,
                                 const std::vector<Candidate>& candidates,
                                 const TrainConfig& config) {
  if (candidates.empty()) throw std::invalid_argument("need at least one candidate");

  struct Entry {
    CandidateResult result;
    MlpNetwork net;
  };
  std::vector<Entry> entries;
  std::string failures;
  for (const Candidate& candidate : candidates) {
    MlpNetwork net = MlpNetwork::create(candidate.layer_sizes, candidate.hidden_activation,
                                        candidate.output_activation, config.seed);
    try {
      CandidateResult result;
      result.candidate = candidate;
      result.parameter_count = net.parameter_count();
      result.epoch_mse = train(net, train_set, config);
      result.final_train_mse = result.epoch_mse.back();
      result.validation_mse_percent = validate(net, validation_set).mse_percent;
      entries.push_back({std::move(result), std::move(net)});
    } catch (const std::runtime_error& e) {
      if (!failures.empty()) failures += "; ";
      failures += std::string(to_string(candidate.hidden_activation)) + ": " + e.what();
    }
  }
  if (entries.empty())
    throw std::runtime_error("all candidates diverged: " + failures);

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.result.validation_mse_percent != b.result.validation_mse_percent)
      return a.result.validation_mse_percent < b.result.validation_mse_percent;
    return a.result.parameter_count < b.result.parameter_count;
  });

  SearchResult search;
  search.best = entries.front().net;
  search.ranked.reserve(entries.size());
  for (auto& entry : entries) search.ranked.push_back(std::move(entry.result));
  return search;
}

}  // namespace pvmppt::ann
