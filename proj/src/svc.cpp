#include "sdcl/svc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sdcl/error.hpp"

namespace sdcl {

LinearSvc::LinearSvc(std::size_t dim, std::vector<double> weights, std::vector<double> biases)
    : dim_(dim), weights_(std::move(weights)), biases_(std::move(biases)) {
  if (weights_.size() != dim_ * biases_.size()) throw InputError("svc weights do not match dim x classes");
}

LinearSvc LinearSvc::fit(std::span<const double> features, std::size_t dim, std::span<const int> labels,
                         std::size_t num_classes, const SvcConfig& cfg) {
  const std::size_t n = labels.size();
  if (dim == 0 || features.size() != n * dim) throw InputError("svc features do not match labels");
  if (!(cfg.lambda > 0.0) || cfg.iterations == 0 || !(cfg.learning_rate > 0.0)) {
    throw ConfigError("svc needs positive lambda, iterations and learning_rate");
  }
  std::set<int> present(labels.begin(), labels.end());
  if (present.size() < 2) throw InputError("svc fit needs at least two classes in the target data");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) throw InputError("svc label out of range");
  }

  LinearSvc svc;
  svc.dim_ = dim;
  std::vector<double> x(features.begin(), features.end());
  if (cfg.standardize) {
    svc.mean_.assign(dim, 0.0);
    svc.scale_.assign(dim, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) svc.mean_[d] += x[i * dim + d];
    for (double& m : svc.mean_) m /= static_cast<double>(n);
    std::vector<double> var(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) {
        const double c = x[i * dim + d] - svc.mean_[d];
        var[d] += c * c;
      }
    for (std::size_t d = 0; d < dim; ++d) {
      const double sd = std::sqrt(var[d] / static_cast<double>(n));
      svc.scale_[d] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) x[i * dim + d] = (x[i * dim + d] - svc.mean_[d]) * svc.scale_[d];
  }

  svc.weights_.assign(num_classes * dim, 0.0);
  svc.biases_.assign(num_classes, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> w(dim);
  std::vector<double> gw(dim);
  std::vector<double> best_w(dim);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::fill(w.begin(), w.end(), 0.0);
    double b = 0.0;
    double best_obj = std::numeric_limits<double>::infinity();
    double best_b = 0.0;
    for (std::size_t t = 0; t <= cfg.iterations; ++t) {
      double hinge = 0.0;
      double gb = 0.0;
      for (std::size_t d = 0; d < dim; ++d) gw[d] = cfg.lambda * w[d];
      for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<std::size_t>(labels[i]) == c ? 1.0 : -1.0;
        const double* xi = x.data() + i * dim;
        double f = b;
        for (std::size_t d = 0; d < dim; ++d) f += w[d] * xi[d];
        const double slack = 1.0 - y * f;
        if (slack > 0.0) {
          hinge += slack;
          for (std::size_t d = 0; d < dim; ++d) gw[d] -= inv_n * y * xi[d];
          gb -= inv_n * y;
        }
      }
      double norm_sq = 0.0;
      for (double v : w) norm_sq += v * v;
      const double obj = 0.5 * cfg.lambda * norm_sq + hinge * inv_n;
      if (obj < best_obj) {
        best_obj = obj;
        best_w = w;
        best_b = b;
      }
      if (t == cfg.iterations) break;
      const double eta = cfg.learning_rate / std::sqrt(static_cast<double>(t + 1));
      for (std::size_t d = 0; d < dim; ++d) w[d] -= eta * gw[d];
      b -= eta * gb;
    }
    std::copy(best_w.begin(), best_w.end(), svc.weights_.begin() + static_cast<std::ptrdiff_t>(c * dim));
    svc.biases_[c] = best_b;
  }
  return svc;
}

std::vector<double> LinearSvc::decision(std::span<const double> x) const {
  if (x.size() != dim_) throw InputError("svc input dimensionality mismatch");
  std::vector<double> z(x.begin(), x.end());
  if (!mean_.empty()) {
    for (std::size_t d = 0; d < dim_; ++d) z[d] = (z[d] - mean_[d]) * scale_[d];
  }
  std::vector<double> f(biases_);
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double* wc = weights_.data() + c * dim_;
    for (std::size_t d = 0; d < dim_; ++d) f[c] += wc[d] * z[d];
  }
  return f;
}

double LinearSvc::margin(std::span<const double> x, int label) const {
  const auto f = decision(x);
  if (label < 0 || static_cast<std::size_t>(label) >= f.size()) throw InputError("svc label out of range");
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < f.size(); ++c) {
    if (c != static_cast<std::size_t>(label)) other = std::max(other, f[c]);
  }
  return f[static_cast<std::size_t>(label)] - other;
}

}  // namespace sdcl
