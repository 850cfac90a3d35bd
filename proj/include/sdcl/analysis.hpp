#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sdcl/dataset.hpp"
#include "sdcl/model.hpp"
#include "sdcl/scores.hpp"

namespace sdcl {

/// Fractional ranks (1-based); tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Sample Pearson correlation. Throws InputError on length mismatch or
/// fewer than two points, NumericError when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of the average ranks.
double spearman(std::span<const double> a, std::span<const double> b);
/// Aligns the two score sets by id first; id sets must be identical.
double spearman(const DifficultyScores& a, const DifficultyScores& b);

struct CorrelationPair {
  std::string label_a;
  std::string label_b;
  double rho = 0.0;
};

struct CorrelationReport {
  std::vector<CorrelationPair> pairs;  // every unordered pair once, i < j
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over pairs
};

/// Spearman correlation over all unordered pairs. Labels default to
/// "<sf_name>#<index>".
CorrelationReport pairwise_report(std::span<const DifficultyScores> scores,
                                  std::span<const std::string> labels = {});

/// Symmetric matrix of pairwise Spearman correlations (unit diagonal),
/// row-major, for heatmap output.
std::vector<double> correlation_matrix(std::span<const DifficultyScores> scores);

struct GranularityReport {
  std::size_t unique_values = 0;
  std::size_t max_bin = 0;  // largest number of samples sharing one value
};

GranularityReport granularity(std::span<const double> values);
inline GranularityReport granularity(const DifficultyScores& s) { return granularity(s.values); }

struct EnsembleRobustness {
  std::size_t size = 0;
  double mean_spearman = 0.0;
  std::vector<std::vector<std::size_t>> members;  // pool indices per replica
};

/// For each ensemble size s, builds `replicas` ensembles from disjoint
/// slices of the pool (replica r takes pool[r*s, (r+1)*s)) and reports the
/// mean pairwise Spearman among them. A single-replica size reports 1.
std::vector<EnsembleRobustness> robustness_vs_ensemble(std::span<const DifficultyScores> pool,
                                                       std::span<const std::size_t> sizes,
                                                       std::size_t replicas = 3);

struct FusionResult {
  double accuracy = 0.0;
  std::vector<double> probs;  // N x C, row-major
  std::vector<int> predictions;
};

/// Averages the members' softmax outputs; prediction is the argmax with
/// ties to the lower class.
FusionResult late_fuse(std::span<const ModelState> states, const Dataset& eval_set);

/// One (robustness, accuracy) observation belonging to a scoring function.
struct RobustnessPoint {
  std::string sf_name;
  double robustness = 0.0;
  double accuracy = 0.0;
};

struct PccSummary {
  double macro = 0.0;  // mean of per-SF Pearson coefficients
  double micro = 0.0;  // Pearson over all points pooled
  std::vector<std::pair<std::string, double>> per_sf;
};

PccSummary robustness_performance_pcc(std::span<const RobustnessPoint> points);

}  // namespace sdcl
