#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pvmppt/dataset.hpp"

namespace pvmppt::ann {

enum class Activation {
  tanh,
  linear,
  relu,
  gelu,
  selu,
  sigmoid,
  softmax,
  softplus,
  softsign,
  swish,
};

const char* to_string(Activation kind);
Activation activation_from_string(std::string_view name);

// softmax normalizes a whole layer; every other kind is element-wise.
bool is_elementwise(Activation kind);

double activate(Activation kind, double v);
double activate_derivative(Activation kind, double v);

std::vector<double> activate_layer(Activation kind, const std::vector<double>& v);

/// Maps dL/dy to dL/dv given the layer pre-activations v and outputs y
/// (softmax needs the full Jacobian, the rest are diagonal).
std::vector<double> activation_backward(Activation kind, const std::vector<double>& v,
                                        const std::vector<double>& y,
                                        const std::vector<double>& dl_dy);

struct MlpNetwork {
  std::vector<int> layer_sizes;              // e.g. {3, 6, 3, 1}
  std::vector<std::vector<double>> weights;  // per layer, row-major (rows x prev size)
  std::vector<std::vector<double>> biases;
  Activation hidden_activation = Activation::tanh;
  Activation output_activation = Activation::tanh;

  /// Seeded init, uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
  static MlpNetwork create(const std::vector<int>& layer_sizes, Activation hidden,
                           Activation output, std::uint64_t seed);

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t parameter_count() const;
  Activation layer_activation(std::size_t layer) const;
  void validate() const;
};

struct ForwardTrace {
  std::vector<double> input;
  std::vector<std::vector<double>> u;  // weighted sums
  std::vector<std::vector<double>> v;  // u + bias
  std::vector<std::vector<double>> y;  // activations
};

std::vector<double> forward(const MlpNetwork& net, const std::vector<double>& input,
                            ForwardTrace* trace = nullptr);

inline double loss(double error) { return 0.5 * error * error; }

struct TrainSample {
  std::vector<double> input;
  double target;
};

struct Gradients {
  std::vector<std::vector<double>> weights;  // dL/dw
  std::vector<std::vector<double>> biases;   // dL/db
};

/// Analytic gradient of the half-squared error for one sample.
Gradients loss_gradients(const MlpNetwork& net, const TrainSample& sample);

/// Online delta-rule update in place; returns the pre-update error d - y.
double backward_update(MlpNetwork& net, const TrainSample& sample, const ForwardTrace& trace,
                       double learning_rate);

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 14;
  std::uint64_t seed = 1;
  bool shuffle_each_epoch = true;
};

/// Per-sample online training; returns the mean half-squared error of each
/// epoch (measured on the pre-update predictions).
std::vector<double> train(MlpNetwork& net, const std::vector<TrainSample>& samples,
                          const TrainConfig& config);

struct ValidationReport {
  double mse;          // mean of 0.5 e^2
  double mse_percent;  // mse * 100
  std::vector<std::pair<double, double>> pairs;  // (predicted, desired)
  dataset::Histogram abs_error_hist;
  std::size_t within_0002;  // |error| < 0.002
  std::size_t total;
};

ValidationReport validate(const MlpNetwork& net, const std::vector<TrainSample>& samples);

struct Candidate {
  std::vector<int> layer_sizes;
  Activation hidden_activation;
  Activation output_activation;

  /// Output head keeps the candidate activation when its range covers
  /// [-1, 1] (tanh, softsign); unbounded/positive kinds get a linear head.
  static Candidate with_activation(std::vector<int> layers, Activation kind);
};

struct CandidateResult {
  Candidate candidate;
  std::size_t parameter_count;
  double validation_mse_percent;
  double final_train_mse;
  std::vector<double> epoch_mse;
};

struct SearchResult {
  std::vector<CandidateResult> ranked;  // ascending validation MSE, ties by fewer parameters
  MlpNetwork best;
};

SearchResult architecture_search(const std::vector<TrainSample>& train_set,
                                 const std::vector<TrainSample>& validation_set,
                                 const std::vector<Candidate>& candidates,
                                 const TrainConfig& config);

enum class ExportFormat { portable_text, c_source };

std::string export_weights(const MlpNetwork& net, const dataset::NormalizationParams& norm,
                           ExportFormat format,
                           const std::vector<std::pair<std::string, std::string>>& meta = {});

struct ImportedNetwork {
  MlpNetwork net;
  dataset::NormalizationParams norm;
  std::map<std::string, std::string, std::less<>> meta;
};

ImportedNetwork import_weights(std::string_view text);

}  // namespace pvmppt::ann
