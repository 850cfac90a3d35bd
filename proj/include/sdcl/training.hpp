#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdcl/dataset.hpp"
#include "sdcl/error.hpp"
#include "sdcl/model.hpp"
#include "sdcl/optimizer.hpp"

namespace sdcl {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 16;
  OptimizerSpec optimizer;
  std::uint64_t shuffle_seed = 0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

/// Per-sample learning dynamics of one run. Column t (0-based) holds the
/// state of every training sample at the end of epoch t + 1, measured by a
/// dedicated evaluation pass over the full training set.
struct TrainingTrace {
  std::vector<std::size_t> ids;
  std::size_t epochs = 0;
  std::vector<std::uint8_t> correct;  // ids.size() x epochs, row-major
  std::vector<double> loss;           // ids.size() x epochs, row-major
  std::vector<double> eval_accuracy;  // epochs
  std::vector<double> train_accuracy; // epochs
  std::size_t best_epoch = 0;         // 1-based; first maximum of eval_accuracy

  std::size_t size() const noexcept { return ids.size(); }
  bool correct_at(std::size_t sample, std::size_t epoch) const {
    return correct[sample * epochs + epoch] != 0;
  }
  double loss_at(std::size_t sample, std::size_t epoch) const { return loss[sample * epochs + epoch]; }
};

struct RunRecord {
  TrainingTrace trace;
  ModelState best_state;
  ModelState final_state;
  std::string config_digest;
};

struct Evaluation {
  double accuracy = 0.0;
  std::vector<double> per_sample_loss;
  std::vector<std::uint8_t> per_sample_correct;
  std::vector<double> probs;  // size() x num_classes, row-major
};

/// Raised when a loss or gradient becomes non-finite; the run is abandoned.
class TrainingDiverged : public NumericError {
 public:
  TrainingDiverged(const std::string& what, std::size_t epoch, std::size_t step)
      : NumericError(what + " at epoch " + std::to_string(epoch) + ", step " + std::to_string(step)),
        epoch_(epoch),
        step_(step) {}

  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t epoch_;
  std::size_t step_;
};

Evaluation evaluate(const ModelState& state, const Dataset& ds);

/// Shuffle of 0..n-1 for one epoch (0-based), from stream (seed, epoch).
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t epoch, std::uint64_t shuffle_seed);

inline std::size_t steps_per_epoch(std::size_t n, std::size_t batch_size) {
  return (n + batch_size - 1) / batch_size;
}

/// Canonical one-line descriptions used for run digests.
std::string describe(const ModelSpec& spec);
std::string describe(const TrainConfig& cfg);
std::string run_digest(const Dataset& train, const ModelSpec& spec, const TrainConfig& cfg);

/// Baseline training: cfg.epochs full passes in shuffled mini-batches.
RunRecord train(const Dataset& train_set, const Dataset& eval_set, const ModelSpec& spec,
                const TrainConfig& cfg);

/// Returns the ascending row positions to train on during the next pass,
/// given the number of optimizer steps already taken.
using PassScheduler = std::function<std::vector<std::size_t>(std::size_t step)>;

/// Shared training engine. Runs exactly cfg.epochs * steps_per_epoch(N)
/// optimizer steps. Each pass draws a fresh subset from `next_subset`,
/// shuffles it with epoch_order(|subset|, pass, shuffle_seed) and walks it
/// in mini-batches; the budget may end a pass early. Every steps_per_epoch
/// steps the full training and eval sets are evaluated.
RunRecord run_training(const Dataset& train_set, const Dataset& eval_set, const ModelSpec& spec,
                       const TrainConfig& cfg, const PassScheduler& next_subset);

}  // namespace sdcl
