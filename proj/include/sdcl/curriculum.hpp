#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sdcl/dataset.hpp"
#include "sdcl/model.hpp"
#include "sdcl/scores.hpp"
#include "sdcl/training.hpp"

namespace sdcl {

enum class PacingFamily { log, root, linear, exp };

std::string to_string(PacingFamily f);
PacingFamily parse_pacing(const std::string& name);
/// Fastest to slowest initial growth.
inline constexpr PacingFamily kAllPacingFamilies[] = {PacingFamily::log, PacingFamily::root,
                                                      PacingFamily::linear, PacingFamily::exp};

struct PacingSpec {
  PacingFamily family = PacingFamily::linear;
  double b = 0.2;  // initial fraction of the training set
  double a = 0.8;  // fraction of the iteration budget after which the full set is used

  void validate() const;
};

/// Fraction of the ordered training set available at iteration t.
/// With x = min(t / (a T), 1):
///   linear  b + (1 - b) x
///   root    b + (1 - b) sqrt(x)
///   exp     b + (1 - b) (e^{10x} - 1) / (e^{10} - 1)
///   log     clamp(b + (1 - b) (1 + 0.1 ln(x + e^{-10})), b, 1)
/// Returns exactly b at t = 0 and exactly 1 once t >= a T.
double pacing_fraction(const PacingSpec& spec, double t, double total_iterations);

/// True when every present class has the same number of samples.
bool is_class_balanced(std::span<const int> labels, std::size_t num_classes);

/// Class-balanced target subset for `fraction` of the ordering. Class c
/// contributes its floor(fraction * N_c) easiest ids; the remaining seats up
/// to ceil(fraction * N) go one each to classes in ascending index, taking
/// that class's next-easiest id. Unbalanced data falls back to the plain
/// ceil(fraction * N) prefix of the ordering. Returned in ordering order.
/// `labels_by_id[id]` gives each id's class.
std::vector<std::size_t> subset_target(std::span<const std::size_t> ordering, double fraction,
                                       std::span<const int> labels_by_id, std::size_t num_classes);

/// Overload resolving labels through the dataset's ids.
std::vector<std::size_t> subset_target(const DifficultyOrdering& ordering, double fraction, const Dataset& ds);

struct SubsetEvent {
  std::size_t step = 0;  // optimizer steps taken before the pass
  double fraction = 0.0;
  std::size_t size = 0;
};

struct CurriculumRun {
  RunRecord record;
  std::vector<SubsetEvent> schedule;  // one entry per pass
  std::size_t total_iterations = 0;
  bool class_balanced = true;
};

/// Curriculum training over `ordering`. The budget is
/// cfg.epochs * ceil(N / batch_size) optimizer steps. At each pass boundary
/// (after every sample of the current subset was used once) the subset is
/// recomputed as subset_target(pacing_fraction(t)); within a pass it is
/// frozen. Bookkeeping (per-epoch-equivalent trace, best state) matches train().
CurriculumRun curriculum_train(const Dataset& train_set, const Dataset& eval_set,
                               const DifficultyOrdering& ordering, const PacingSpec& pacing,
                               const ModelSpec& spec, const TrainConfig& cfg);

}  // namespace sdcl
