#include "sdcl/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sdcl/error.hpp"

namespace sdcl {

std::string to_string(PacingFamily f) {
  switch (f) {
    case PacingFamily::log: return "log";
    case PacingFamily::root: return "root";
    case PacingFamily::linear: return "linear";
    case PacingFamily::exp: return "exp";
  }
  return "unknown";
}

PacingFamily parse_pacing(const std::string& name) {
  if (name == "log") return PacingFamily::log;
  if (name == "root") return PacingFamily::root;
  if (name == "linear") return PacingFamily::linear;
  if (name == "exp") return PacingFamily::exp;
  throw ConfigError("unknown pacing function '" + name + "' (expected log, root, linear or exp)");
}

void PacingSpec::validate() const {
  if (!(b > 0.0 && b <= 1.0)) throw ConfigError("pacing b must lie in (0, 1]");
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError("pacing a must lie in (0, 1]");
}

double pacing_fraction(const PacingSpec& spec, double t, double total_iterations) {
  if (t <= 0.0) return spec.b;
  const double saturation = spec.a * total_iterations;
  if (t >= saturation) return 1.0;
  const double x = t / saturation;
  const double b = spec.b;
  double f = 0.0;
  switch (spec.family) {
    case PacingFamily::linear:
      f = b + (1.0 - b) * x;
      break;
    case PacingFamily::root:
      f = b + (1.0 - b) * std::sqrt(x);
      break;
    case PacingFamily::exp:
      f = b + (1.0 - b) * std::expm1(10.0 * x) / std::expm1(10.0);
      break;
    case PacingFamily::log:
      f = b + (1.0 - b) * (1.0 + 0.1 * std::log(x + std::exp(-10.0)));
      break;
  }
  return std::clamp(f, b, 1.0);
}

bool is_class_balanced(std::span<const int> labels, std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  std::size_t common = 0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    if (common == 0) common = c;
    if (c != common) return false;
  }
  return true;
}

namespace {

// Guards floor/ceil against representation error, e.g. 0.3 * 10 = 3.0000000000000004.
constexpr double kCountSlack = 1e-9;

std::size_t floor_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + kCountSlack));
}

std::size_t ceil_count(double fraction, std::size_t n) {
  return std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - kCountSlack)));
}

}  // namespace

std::vector<std::size_t> subset_target(std::span<const std::size_t> ordering, double fraction,
                                       std::span<const int> labels_by_id, std::size_t num_classes) {
  const std::size_t n = ordering.size();
  if (fraction >= 1.0) return {ordering.begin(), ordering.end()};
  const std::size_t total = ceil_count(fraction, n);

  std::vector<int> labels(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t id = ordering[k];
    if (id >= labels_by_id.size() || labels_by_id[id] < 0) {
      throw InputError("ordering id " + std::to_string(id) + " has no label");
    }
    labels[k] = labels_by_id[id];
  }
  if (!is_class_balanced(labels, num_classes)) {
    return {ordering.begin(), ordering.begin() + static_cast<std::ptrdiff_t>(total)};
  }

  std::vector<std::size_t> class_size(num_classes, 0);
  for (int y : labels) ++class_size[static_cast<std::size_t>(y)];
  std::vector<std::size_t> quota(num_classes, 0);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    quota[c] = floor_count(fraction, class_size[c]);
    assigned += quota[c];
  }
  for (std::size_t c = 0; c < num_classes && assigned < total; ++c) {
    if (quota[c] < class_size[c]) {
      ++quota[c];
      ++assigned;
    }
  }

  std::vector<std::size_t> taken(num_classes, 0);
  std::vector<std::size_t> out;
  out.reserve(assigned);
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = static_cast<std::size_t>(labels[k]);
    if (taken[c] < quota[c]) {
      ++taken[c];
      out.push_back(ordering[k]);
    }
  }
  return out;
}

namespace {

std::vector<int> labels_by_id(const Dataset& ds) {
  std::size_t max_id = 0;
  for (std::size_t id : ds.ids) max_id = std::max(max_id, id);
  std::vector<int> out(ds.empty() ? 0 : max_id + 1, -1);
  for (std::size_t i = 0; i < ds.size(); ++i) out[ds.ids[i]] = ds.labels[i];
  return out;
}

}  // namespace

std::vector<std::size_t> subset_target(const DifficultyOrdering& ordering, double fraction, const Dataset& ds) {
  return subset_target(ordering.order, fraction, labels_by_id(ds), ds.num_classes);
}

CurriculumRun curriculum_train(const Dataset& train_set, const Dataset& eval_set,
                               const DifficultyOrdering& ordering, const PacingSpec& pacing,
                               const ModelSpec& spec, const TrainConfig& cfg) {
  pacing.validate();
  cfg.validate();
  const std::size_t n = train_set.size();
  std::unordered_map<std::size_t, std::size_t> position;
  position.reserve(n);
  for (std::size_t i = 0; i < n; ++i) position.emplace(train_set.ids[i], i);
  if (ordering.order.size() != n) throw InputError("ordering does not cover the training set");
  for (std::size_t id : ordering.order) {
    if (!position.contains(id)) throw InputError("ordering id " + std::to_string(id) + " is not in the training set");
  }

  CurriculumRun run;
  run.total_iterations = cfg.epochs * steps_per_epoch(n, cfg.batch_size);
  run.class_balanced = is_class_balanced(train_set.labels, train_set.num_classes);
  const std::vector<int> by_id = labels_by_id(train_set);
  const auto total = static_cast<double>(run.total_iterations);

  const PassScheduler scheduler = [&](std::size_t step) {
    const double fraction = pacing_fraction(pacing, static_cast<double>(step), total);
    const auto ids = subset_target(ordering.order, fraction, by_id, train_set.num_classes);
    std::vector<std::size_t> rows;
    rows.reserve(ids.size());
    for (std::size_t id : ids) rows.push_back(position.at(id));
    std::sort(rows.begin(), rows.end());
    run.schedule.push_back({step, fraction, rows.size()});
    return rows;
  };
  run.record = run_training(train_set, eval_set, spec, cfg, scheduler);
  return run;
}

}  // namespace sdcl
