#include "sdcl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "sdcl/error.hpp"

namespace sdcl {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && values[idx[end]] == values[idx[start]]) ++end;
    // Positions start..end-1 hold 1-based ranks start+1..end.
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks[idx[k]] = rank;
    start = end;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("correlation inputs differ in length");
  if (x.size() < 2) throw InputError("correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericError("correlation undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("correlation inputs differ in length");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

double spearman(const DifficultyScores& a, const DifficultyScores& b) {
  if (a.size() != b.size()) throw InputError("score sets '" + a.sf_name + "' and '" + b.sf_name + "' differ in size");
  std::unordered_map<std::size_t, std::size_t> pos;
  pos.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) pos.emplace(b.ids[i], i);
  std::vector<double> aligned(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto it = pos.find(a.ids[i]);
    if (it == pos.end()) throw InputError("score sets cover different id sets");
    aligned[i] = b.values[it->second];
  }
  return spearman(a.values, aligned);
}

CorrelationReport pairwise_report(std::span<const DifficultyScores> scores, std::span<const std::string> labels) {
  if (scores.size() < 2) throw InputError("pairwise report needs at least two score sets");
  if (!labels.empty() && labels.size() != scores.size()) throw InputError("one label per score set required");
  auto label = [&](std::size_t i) {
    return labels.empty() ? scores[i].sf_name + "#" + std::to_string(i) : labels[i];
  };
  CorrelationReport report;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      report.pairs.push_back({label(i), label(j), spearman(scores[i], scores[j])});
    }
  }
  const double m = static_cast<double>(report.pairs.size());
  for (const auto& p : report.pairs) report.mean += p.rho;
  report.mean /= m;
  double var = 0.0;
  for (const auto& p : report.pairs) var += (p.rho - report.mean) * (p.rho - report.mean);
  report.std = std::sqrt(var / m);
  return report;
}

std::vector<double> correlation_matrix(std::span<const DifficultyScores> scores) {
  const std::size_t n = scores.size();
  std::vector<double> m(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = spearman(scores[i], scores[j]);
    }
  }
  return m;
}

GranularityReport granularity(std::span<const double> values) {
  if (values.empty()) throw InputError("granularity of an empty score set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  GranularityReport r;
  for (std::size_t start = 0; start < sorted.size();) {
    std::size_t end = start + 1;
    while (end < sorted.size() && sorted[end] == sorted[start]) ++end;
    ++r.unique_values;
    r.max_bin = std::max(r.max_bin, end - start);
    start = end;
  }
  return r;
}

std::vector<EnsembleRobustness> robustness_vs_ensemble(std::span<const DifficultyScores> pool,
                                                       std::span<const std::size_t> sizes, std::size_t replicas) {
  if (replicas == 0) throw ConfigError("need at least one replica per ensemble size");
  std::vector<EnsembleRobustness> out;
  for (std::size_t size : sizes) {
    if (size == 0) throw ConfigError("ensemble size must be positive");
    if (size * replicas > pool.size()) {
      throw ConfigError("ensemble size " + std::to_string(size) + " x " + std::to_string(replicas) +
                        " replicas needs more than the " + std::to_string(pool.size()) + " pooled score sets");
    }
    EnsembleRobustness row;
    row.size = size;
    std::vector<DifficultyScores> ensembles;
    for (std::size_t r = 0; r < replicas; ++r) {
      std::vector<std::size_t> members(size);
      std::iota(members.begin(), members.end(), r * size);
      ensembles.push_back(build_ensemble(pool.subspan(r * size, size)));
      row.members.push_back(std::move(members));
    }
    row.mean_spearman = replicas < 2 ? 1.0 : pairwise_report(ensembles).mean;
    out.push_back(std::move(row));
  }
  return out;
}

FusionResult late_fuse(std::span<const ModelState> states, const Dataset& eval_set) {
  if (states.empty()) throw InputError("late fusion needs at least one model");
  if (eval_set.empty()) throw InputError("late fusion needs a non-empty eval set");
  const std::size_t c = states.front().spec.num_classes;
  for (const auto& s : states) {
    if (s.spec.num_classes != c) throw InputError("late fusion members disagree on the number of classes");
  }
  const std::size_t n = eval_set.size();
  FusionResult result;
  result.probs.assign(n * c, 0.0);
  result.predictions.resize(n);
  const double inv = 1.0 / static_cast<double>(states.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> fused(result.probs.data() + i * c, c);
    for (const auto& s : states) {
      const auto p = predict_proba(s, eval_set.row(i));
      for (std::size_t j = 0; j < c; ++j) fused[j] += p[j];
    }
    for (double& v : fused) v *= inv;
    result.predictions[i] = static_cast<int>(argmax(fused));
    hits += result.predictions[i] == eval_set.labels[i] ? 1 : 0;
  }
  result.accuracy = static_cast<double>(hits) / static_cast<double>(n);
  return result;
}

PccSummary robustness_performance_pcc(std::span<const RobustnessPoint> points) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::vector<double> all_r;
  std::vector<double> all_a;
  for (const auto& p : points) {
    groups[p.sf_name].first.push_back(p.robustness);
    groups[p.sf_name].second.push_back(p.accuracy);
    all_r.push_back(p.robustness);
    all_a.push_back(p.accuracy);
  }
  PccSummary out;
  if (groups.empty()) throw InputError("no robustness points");
  for (const auto& [name, xy] : groups) {
    out.per_sf.emplace_back(name, pearson(xy.first, xy.second));
    out.macro += out.per_sf.back().second;
  }
  out.macro /= static_cast<double>(out.per_sf.size());
  out.micro = pearson(all_r, all_a);
  return out;
}

}  // namespace sdcl
