#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sdcl {

enum class Activation { relu, tanh };

std::string to_string(Activation a);
Activation parse_activation(const std::string& name);

/// Architecture of a fully connected softmax classifier.
struct ModelSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;  // empty: multinomial logistic regression
  std::size_t num_classes = 2;
  Activation activation = Activation::relu;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t num_layers() const noexcept { return hidden_dims.size() + 1; }
  /// Width of layer boundary `i`: 0 is the input, num_layers() the logits.
  std::size_t width(std::size_t i) const noexcept;
  std::size_t parameter_count() const noexcept;

  bool operator==(const ModelSpec&) const = default;
};

/// Flat parameters laid out layer by layer; each layer stores its weight
/// matrix row-major (fan_out x fan_in) followed by its bias vector.
struct ModelState {
  ModelSpec spec;
  std::vector<double> parameters;
  std::uint64_t epoch_tag = 0;

  bool operator==(const ModelState&) const = default;
};

/// Representations seen by the prediction-depth probes: the input, each
/// hidden activation, and the post-softmax output (|hidden_dims| + 2 entries).
struct LayerActivations {
  std::vector<std::vector<double>> per_layer;
};

struct ForwardResult {
  std::vector<double> probs;
  LayerActivations acts;
};

/// Glorot-uniform weights in [-s, s], s = sqrt(6 / (fan_in + fan_out)),
/// drawn from SplitMix64 stream (spec.seed, init); biases start at zero.
ModelState init_model(const ModelSpec& spec);

ForwardResult forward(const ModelState& state, std::span<const double> x);

/// Class probabilities only; cheaper than forward().
std::vector<double> predict_proba(const ModelState& state, std::span<const double> x);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> v) noexcept;

/// Cross-entropy of one sample, computed through log-sum-exp.
double sample_loss(const ModelState& state, std::span<const double> x, int label);

struct Prediction {
  std::vector<double> probs;
  double loss = 0.0;
};

/// Probabilities and cross-entropy of one labelled sample in a single pass.
Prediction predict(const ModelState& state, std::span<const double> x, int label);

/// Borrowed mini-batch: `rows` index into a row-major feature matrix.
struct BatchView {
  std::span<const double> features;  // N x dim, row-major
  std::size_t dim = 0;
  std::span<const int> labels;       // N
  std::span<const std::size_t> rows; // subset of 0..N-1, repeats allowed
};

struct LossAndGrad {
  double mean_loss = 0.0;
  std::vector<double> grad;
};

/// Mean cross-entropy over the batch and its gradient w.r.t. `parameters`
/// (which must match the layout of `spec`).
LossAndGrad loss_and_grad(const ModelSpec& spec, std::span<const double> parameters,
                          const BatchView& batch);

inline LossAndGrad loss_and_grad(const ModelState& state, const BatchView& batch) {
  return loss_and_grad(state.spec, state.parameters, batch);
}

}  // namespace sdcl
