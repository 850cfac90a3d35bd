#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sdcl/model.hpp"

namespace sdcl {

enum class OptimizerFamily { sgd_momentum, adam, sam };

std::string to_string(OptimizerFamily f);
OptimizerFamily parse_optimizer(const std::string& name);

struct OptimizerSpec {
  OptimizerFamily family = OptimizerFamily::sgd_momentum;
  double learning_rate = 0.01;
  double momentum = 0.9;  // sgd_momentum, and the base of sam
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double sam_rho = 0.05;

  void validate() const;
  bool operator==(const OptimizerSpec&) const = default;
};

/// Gradient oracle: fills `grad` at `params` and returns the loss there.
using GradientFn = std::function<double(std::span<const double> params, std::vector<double>& grad)>;

/// Below this gradient norm SAM skips its ascent step.
inline constexpr double kSamMinGradNorm = 1e-12;

/// Stateful optimizer owning its moment buffers. SGD follows the
/// heavy-ball convention v <- momentum * v + g, p <- p - lr * v. Adam uses
/// the bias-corrected moments. SAM ascends to p + rho * g / |g|, takes the
/// gradient there, and applies the SGD-momentum update at p.
class Optimizer {
 public:
  Optimizer(const OptimizerSpec& spec, std::size_t parameter_count);

  /// One update in place. Returns the loss at the incoming parameters.
  /// Throws NumericError on a non-finite gradient, leaving `params` and
  /// the internal buffers untouched.
  double step(std::vector<double>& params, const GradientFn& grad_fn);

  /// Value-semantic variant; bumps nothing but the parameters.
  ModelState step(const ModelState& state, const GradientFn& grad_fn);

  const OptimizerSpec& spec() const noexcept { return spec_; }
  std::size_t steps_taken() const noexcept { return steps_; }

 private:
  void sgd_update(std::vector<double>& params, const std::vector<double>& grad);
  void adam_update(std::vector<double>& params, const std::vector<double>& grad);

  OptimizerSpec spec_;
  std::vector<double> velocity_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::vector<double> grad_;
  std::vector<double> perturbed_;
  std::size_t steps_ = 0;
};

}  // namespace sdcl
