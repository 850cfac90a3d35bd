#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdcl {

struct SvcConfig {
  double lambda = 1e-3;          // L2 regularization strength
  std::size_t iterations = 500;  // full-batch subgradient steps per class
  double learning_rate = 0.5;    // step size eta_t = learning_rate / sqrt(t + 1)
  bool standardize = true;       // z-score features before fitting
};

/// One-vs-rest linear support vector classifier. Each class c minimizes
/// lambda/2 |w_c|^2 + mean_i max(0, 1 - y_ic (w_c . x_i + b_c)) with
/// y_ic = +1 for class c and -1 otherwise, by deterministic full-batch
/// subgradient descent; the iterate with the lowest objective is kept.
class LinearSvc {
 public:
  static LinearSvc fit(std::span<const double> features, std::size_t dim, std::span<const int> labels,
                       std::size_t num_classes, const SvcConfig& cfg = {});

  /// Builds a classifier from explicit weights (num_classes x dim) and biases.
  LinearSvc(std::size_t dim, std::vector<double> weights, std::vector<double> biases);

  std::vector<double> decision(std::span<const double> x) const;

  /// f_y(x) - max_{c != y} f_c(x); positive on the correct side.
  double margin(std::span<const double> x, int label) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_classes() const noexcept { return biases_.size(); }

 private:
  LinearSvc() = default;

  std::size_t dim_ = 0;
  std::vector<double> weights_;
  std::vector<double> biases_;
  std::vector<double> mean_;   // standardization, empty when disabled
  std::vector<double> scale_;
};

}  // namespace sdcl
