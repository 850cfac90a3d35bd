#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdcl/dataset.hpp"
#include "sdcl/model.hpp"
#include "sdcl/scores.hpp"
#include "sdcl/svc.hpp"
#include "sdcl/training.hpp"

namespace sdcl {

// Scoring-function names as they appear in files and on the command line.
namespace sf {
inline constexpr const char* kCScore = "cscore";
inline constexpr const char* kCVLoss = "cvloss";
inline constexpr const char* kCumAcc = "cumacc";
inline constexpr const char* kFit = "fit";
inline constexpr const char* kCELoss = "celoss";
inline constexpr const char* kTT = "tt";
inline constexpr const char* kPD = "pd";
}  // namespace sf

std::vector<std::string> scoring_function_names();

/// Cross-entropy of every sample under `state`.
DifficultyScores score_celoss(const ModelState& state, const Dataset& ds);
/// CELoss under the run's best state.
DifficultyScores score_celoss(const RunRecord& run, const Dataset& ds);

/// 1 - (epochs correct) / T.
DifficultyScores score_cumacc(const TrainingTrace& trace);

/// e / T where e is the first 1-based epoch from which the sample stays
/// correct through epoch T; never-learned samples get (T + 1) / T.
DifficultyScores score_fit(const TrainingTrace& trace);

struct CvLossResult {
  DifficultyScores scores;
  std::vector<Fold> folds;
  std::vector<RunRecord> runs;  // one per fold
};

/// Trains one model per fold on the other k - 1 folds, using the held-out
/// fold for best-state selection; each sample is scored by its loss under
/// the best state of the model that never saw it. All folds share the
/// model and shuffle seeds of `spec` / `cfg`.
CvLossResult score_cvloss(const Dataset& ds, const ModelSpec& spec, const TrainConfig& cfg,
                          const KFoldSpec& kfold, std::size_t jobs = 1);

struct CScoreSpec {
  std::vector<double> subset_ratios{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t subsets_per_ratio = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CScoreResult {
  DifficultyScores scores;
  /// runs x N table: -1 if the sample was in the training subset, else 1 if
  /// it was classified correctly by that run's best state and 0 otherwise.
  /// Row r = ratio_index * subsets_per_ratio + subset_index.
  std::vector<std::int8_t> table;
  std::size_t runs = 0;
  std::vector<std::size_t> uncovered;  // ids never held out; scored 1
};

/// Consistency score: for every (ratio, subset) a model is trained on a
/// uniformly drawn subset of round(ratio * N) samples (clamped to
/// [1, N - 1]) and evaluated on the excluded rest, which also selects its
/// best state. value(i) = 1 - mean correctness over the runs excluding i.
CScoreResult score_cscore(const Dataset& ds, const ModelSpec& spec, const TrainConfig& cfg,
                          const CScoreSpec& cscore, std::size_t jobs = 1);

/// Last hidden activation of every sample, row-major (the raw input for a
/// model without hidden layers).
std::vector<double> penultimate_features(const ModelState& state, const Dataset& ds);

/// Transfer teacher: fits a one-vs-rest linear SVC on the teacher's
/// penultimate features of the target data; value(i) = -margin(i).
DifficultyScores score_tt(const Dataset& target, const ModelState& teacher, const SvcConfig& svc = {});

struct ProbeSpec {
  std::size_t knn_k = 30;
  std::size_t max_rep_dim = 8192;
};

/// Mean-pools a representation over contiguous chunks of
/// ceil(width / max_dim) entries so that the result has at most max_dim entries.
std::vector<double> pool_representation(std::span<const double> rep, std::size_t max_dim);

/// kNN vote among the k nearest rows of `reps` (row-major, n x dim) to row
/// `query`, excluding the query itself. Distance ties go to the smaller row;
/// vote ties to the lower class.
int knn_predict(std::span<const double> reps, std::size_t dim, std::span<const int> labels,
                std::size_t num_classes, std::size_t query, std::size_t k);

/// Smallest probe index from which every probe agrees with the model's
/// prediction; agreement.size() when the deepest probe disagrees.
std::size_t prediction_depth(std::span<const bool> agreement);

struct PdResult {
  DifficultyScores scores;
  std::size_t probes = 0;          // L
  std::vector<std::size_t> depth;  // per sample, in 0..L
};

/// Prediction depth under `state` with kNN probes at the input, every
/// hidden activation and the softmax output; value(i) = PD(i) / L.
PdResult score_pd(const ModelState& state, const Dataset& ds, const ProbeSpec& probe = {});
inline PdResult score_pd(const RunRecord& run, const Dataset& ds, const ProbeSpec& probe = {}) {
  return score_pd(run.best_state, ds, probe);
}

}  // namespace sdcl
