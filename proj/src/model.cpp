#include "sdcl/model.hpp"

#include <algorithm>
#include <cmath>

#include "sdcl/error.hpp"
#include "sdcl/rng.hpp"

namespace sdcl {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation '" + name + "' (expected relu or tanh)");
}

void ModelSpec::validate() const {
  if (input_dim == 0) throw ConfigError("model input_dim must be positive");
  if (num_classes < 2) throw ConfigError("model num_classes must be at least 2");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw ConfigError("model hidden layer widths must be positive");
  }
}

std::size_t ModelSpec::width(std::size_t i) const noexcept {
  if (i == 0) return input_dim;
  if (i <= hidden_dims.size()) return hidden_dims[i - 1];
  return num_classes;
}

std::size_t ModelSpec::parameter_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t l = 0; l < num_layers(); ++l) n += width(l + 1) * (width(l) + 1);
  return n;
}

namespace {

double activate(Activation a, double z) {
  return a == Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the activation output.
double activate_grad(Activation a, double out) {
  return a == Activation::relu ? (out > 0.0 ? 1.0 : 0.0) : 1.0 - out * out;
}

void check_input(const ModelSpec& spec, std::span<const double> x) {
  if (x.size() != spec.input_dim) {
    throw InputError("input has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(spec.input_dim));
  }
}

// Runs every layer, storing post-activation outputs; the last entry holds
// the logits.
void run_layers(const ModelSpec& spec, std::span<const double> params, std::span<const double> x,
                std::vector<std::vector<double>>& outs) {
  const std::size_t layers = spec.num_layers();
  outs.resize(layers + 1);
  outs[0].assign(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t fan_in = spec.width(l);
    const std::size_t fan_out = spec.width(l + 1);
    const double* w = params.data() + offset;
    const double* b = w + fan_out * fan_in;
    const std::vector<double>& in = outs[l];
    std::vector<double>& out = outs[l + 1];
    out.resize(fan_out);
    const bool hidden = l + 1 < layers;
    for (std::size_t o = 0; o < fan_out; ++o) {
      double z = b[o];
      const double* row = w + o * fan_in;
      for (std::size_t i = 0; i < fan_in; ++i) z += row[i] * in[i];
      out[o] = hidden ? activate(spec.activation, z) : z;
    }
    offset += fan_out * (fan_in + 1);
  }
}

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

std::vector<double> softmax(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    p[j] = std::exp(z[j] - m);
    s += p[j];
  }
  for (double& v : p) v /= s;
  return p;
}

}  // namespace

ModelState init_model(const ModelSpec& spec) {
  spec.validate();
  ModelState state{spec, std::vector<double>(spec.parameter_count(), 0.0), 0};
  SplitMix64 rng = make_stream(spec.seed, {stream_tag::kInit});
  std::size_t offset = 0;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const std::size_t fan_in = spec.width(l);
    const std::size_t fan_out = spec.width(l + 1);
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t k = 0; k < fan_in * fan_out; ++k) {
      state.parameters[offset + k] = (2.0 * rng.uniform() - 1.0) * s;
    }
    offset += fan_out * (fan_in + 1);
  }
  return state;
}

ForwardResult forward(const ModelState& state, std::span<const double> x) {
  check_input(state.spec, x);
  std::vector<std::vector<double>> outs;
  run_layers(state.spec, state.parameters, x, outs);
  ForwardResult result;
  result.probs = softmax(outs.back());
  outs.back() = result.probs;
  result.acts.per_layer = std::move(outs);
  return result;
}

std::vector<double> predict_proba(const ModelState& state, std::span<const double> x) {
  check_input(state.spec, x);
  std::vector<std::vector<double>> outs;
  run_layers(state.spec, state.parameters, x, outs);
  return softmax(outs.back());
}

std::size_t argmax(std::span<const double> v) noexcept {
  std::size_t best = 0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) best = j;
  }
  return best;
}

double sample_loss(const ModelState& state, std::span<const double> x, int label) {
  check_input(state.spec, x);
  if (label < 0 || static_cast<std::size_t>(label) >= state.spec.num_classes) {
    throw InputError("label " + std::to_string(label) + " out of range");
  }
  std::vector<std::vector<double>> outs;
  run_layers(state.spec, state.parameters, x, outs);
  const std::vector<double>& z = outs.back();
  return log_sum_exp(z) - z[static_cast<std::size_t>(label)];
}

Prediction predict(const ModelState& state, std::span<const double> x, int label) {
  check_input(state.spec, x);
  if (label < 0 || static_cast<std::size_t>(label) >= state.spec.num_classes) {
    throw InputError("label " + std::to_string(label) + " out of range");
  }
  std::vector<std::vector<double>> outs;
  run_layers(state.spec, state.parameters, x, outs);
  const std::vector<double>& z = outs.back();
  return {softmax(z), log_sum_exp(z) - z[static_cast<std::size_t>(label)]};
}

LossAndGrad loss_and_grad(const ModelSpec& spec, std::span<const double> parameters,
                          const BatchView& batch) {
  if (batch.rows.empty()) throw InputError("loss_and_grad needs a non-empty batch");
  if (batch.dim != spec.input_dim) throw InputError("batch dimensionality does not match model");
  if (parameters.size() != spec.parameter_count()) {
    throw InputError("parameter vector does not match model layout");
  }
  const std::size_t layers = spec.num_layers();
  LossAndGrad result{0.0, std::vector<double>(parameters.size(), 0.0)};

  std::vector<std::size_t> offsets(layers);
  for (std::size_t l = 0, off = 0; l < layers; ++l) {
    offsets[l] = off;
    off += spec.width(l + 1) * (spec.width(l) + 1);
  }

  std::vector<std::vector<double>> outs;
  std::vector<double> delta;
  std::vector<double> prev_delta;
  for (std::size_t row : batch.rows) {
    const int label = batch.labels[row];
    if (label < 0 || static_cast<std::size_t>(label) >= spec.num_classes) {
      throw InputError("label " + std::to_string(label) + " out of range");
    }
    run_layers(spec, parameters, batch.features.subspan(row * batch.dim, batch.dim), outs);
    const std::vector<double>& z = outs.back();
    const double lse = log_sum_exp(z);
    result.mean_loss += lse - z[static_cast<std::size_t>(label)];

    // dL/dz = softmax(z) - onehot(label)
    delta.resize(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) delta[j] = std::exp(z[j] - lse);
    delta[static_cast<std::size_t>(label)] -= 1.0;

    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t fan_in = spec.width(l);
      const std::size_t fan_out = spec.width(l + 1);
      const std::vector<double>& in = outs[l];
      double* gw = result.grad.data() + offsets[l];
      double* gb = gw + fan_out * fan_in;
      for (std::size_t o = 0; o < fan_out; ++o) {
        const double d = delta[o];
        double* grow = gw + o * fan_in;
        for (std::size_t i = 0; i < fan_in; ++i) grow[i] += d * in[i];
        gb[o] += d;
      }
      if (l == 0) break;
      const double* w = parameters.data() + offsets[l];
      prev_delta.assign(fan_in, 0.0);
      for (std::size_t o = 0; o < fan_out; ++o) {
        const double d = delta[o];
        const double* row = w + o * fan_in;
        for (std::size_t i = 0; i < fan_in; ++i) prev_delta[i] += row[i] * d;
      }
      for (std::size_t i = 0; i < fan_in; ++i) {
        prev_delta[i] *= activate_grad(spec.activation, in[i]);
      }
      delta.swap(prev_delta);
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.rows.size());
  result.mean_loss *= inv;
  for (double& g : result.grad) g *= inv;
  return result;
}

}  // namespace sdcl
