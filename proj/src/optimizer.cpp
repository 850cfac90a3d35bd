#include "sdcl/optimizer.hpp"

#include <cmath>

#include "sdcl/error.hpp"

namespace sdcl {

std::string to_string(OptimizerFamily f) {
  switch (f) {
    case OptimizerFamily::sgd_momentum: return "sgd_momentum";
    case OptimizerFamily::adam: return "adam";
    case OptimizerFamily::sam: return "sam";
  }
  return "unknown";
}

OptimizerFamily parse_optimizer(const std::string& name) {
  if (name == "sgd" || name == "sgd_momentum") return OptimizerFamily::sgd_momentum;
  if (name == "adam") return OptimizerFamily::adam;
  if (name == "sam") return OptimizerFamily::sam;
  throw ConfigError("unknown optimizer '" + name + "' (expected sgd_momentum, adam or sam)");
}

void OptimizerSpec::validate() const {
  // A zero learning rate is accepted: it freezes the model, which is useful
  // for no-op baselines.
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and non-negative");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam_beta1 must lie in (0, 1)");
  if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam_beta2 must lie in (0, 1)");
  if (!(adam_eps > 0.0)) throw ConfigError("adam_eps must be positive");
  if (!(sam_rho >= 0.0) || !std::isfinite(sam_rho)) throw ConfigError("sam_rho must be non-negative");
}

Optimizer::Optimizer(const OptimizerSpec& spec, std::size_t parameter_count) : spec_(spec) {
  spec_.validate();
  if (spec_.family == OptimizerFamily::adam) {
    first_moment_.assign(parameter_count, 0.0);
    second_moment_.assign(parameter_count, 0.0);
  } else {
    velocity_.assign(parameter_count, 0.0);
  }
  grad_.resize(parameter_count);
}

namespace {

void require_finite(const std::vector<double>& grad) {
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericError("non-finite gradient");
  }
}

}  // namespace

void Optimizer::sgd_update(std::vector<double>& params, const std::vector<double>& grad) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    velocity_[i] = spec_.momentum * velocity_[i] + grad[i];
    params[i] -= spec_.learning_rate * velocity_[i];
  }
}

void Optimizer::adam_update(std::vector<double>& params, const std::vector<double>& grad) {
  const double t = static_cast<double>(steps_ + 1);
  const double c1 = 1.0 - std::pow(spec_.adam_beta1, t);
  const double c2 = 1.0 - std::pow(spec_.adam_beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_moment_[i] = spec_.adam_beta1 * first_moment_[i] + (1.0 - spec_.adam_beta1) * grad[i];
    second_moment_[i] =
        spec_.adam_beta2 * second_moment_[i] + (1.0 - spec_.adam_beta2) * grad[i] * grad[i];
    const double m_hat = first_moment_[i] / c1;
    const double v_hat = second_moment_[i] / c2;
    params[i] -= spec_.learning_rate * m_hat / (std::sqrt(v_hat) + spec_.adam_eps);
  }
}

double Optimizer::step(std::vector<double>& params, const GradientFn& grad_fn) {
  if (params.size() != grad_.size()) {
    throw InputError("optimizer buffers sized for a different parameter count");
  }
  grad_.assign(params.size(), 0.0);
  const double loss = grad_fn(params, grad_);
  if (grad_.size() != params.size()) throw InputError("gradient length mismatch");
  require_finite(grad_);

  switch (spec_.family) {
    case OptimizerFamily::sgd_momentum:
      sgd_update(params, grad_);
      break;
    case OptimizerFamily::adam:
      adam_update(params, grad_);
      break;
    case OptimizerFamily::sam: {
      double norm_sq = 0.0;
      for (double g : grad_) norm_sq += g * g;
      const double norm = std::sqrt(norm_sq);
      if (norm >= kSamMinGradNorm) {
        const double scale = spec_.sam_rho / norm;
        perturbed_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) perturbed_[i] = params[i] + scale * grad_[i];
        std::vector<double> sharp_grad(params.size(), 0.0);
        grad_fn(perturbed_, sharp_grad);
        require_finite(sharp_grad);
        grad_.swap(sharp_grad);
      }
      sgd_update(params, grad_);
      break;
    }
  }
  ++steps_;
  return loss;
}

ModelState Optimizer::step(const ModelState& state, const GradientFn& grad_fn) {
  ModelState next = state;
  step(next.parameters, grad_fn);
  return next;
}

}  // namespace sdcl
