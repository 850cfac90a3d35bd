#include "sdcl/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "sdcl/digest.hpp"
#include "sdcl/error.hpp"
#include "sdcl/parallel.hpp"
#include "sdcl/rng.hpp"

namespace sdcl {

std::vector<std::string> scoring_function_names() {
  return {sf::kCScore, sf::kCVLoss, sf::kCumAcc, sf::kFit, sf::kCELoss, sf::kTT, sf::kPD};
}

namespace {

DifficultyScores blank_scores(const char* name, std::string dataset, std::vector<std::size_t> ids,
                              std::string transform) {
  DifficultyScores s;
  s.sf_name = name;
  s.dataset = std::move(dataset);
  s.ids = std::move(ids);
  s.transform = std::move(transform);
  s.values.reserve(s.ids.size());
  return s;
}

}  // namespace

DifficultyScores score_celoss(const ModelState& state, const Dataset& ds) {
  DifficultyScores s = blank_scores(sf::kCELoss, ds.name, ds.ids, "none: cross-entropy loss");
  for (std::size_t i = 0; i < ds.size(); ++i) s.values.push_back(sample_loss(state, ds.row(i), ds.labels[i]));
  return s;
}

DifficultyScores score_celoss(const RunRecord& run, const Dataset& ds) {
  DifficultyScores s = score_celoss(run.best_state, ds);
  s.provenance = {run.config_digest};
  return s;
}

DifficultyScores score_cumacc(const TrainingTrace& trace) {
  if (trace.epochs == 0 || trace.size() == 0) throw InputError("cumacc needs a non-empty trace");
  DifficultyScores s = blank_scores(sf::kCumAcc, "", trace.ids, "complement: 1 - correct_epochs / T");
  const double t = static_cast<double>(trace.epochs);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::size_t hits = 0;
    for (std::size_t e = 0; e < trace.epochs; ++e) hits += trace.correct_at(i, e) ? 1 : 0;
    s.values.push_back(1.0 - static_cast<double>(hits) / t);
  }
  return s;
}

DifficultyScores score_fit(const TrainingTrace& trace) {
  if (trace.epochs == 0 || trace.size() == 0) throw InputError("fit needs a non-empty trace");
  DifficultyScores s = blank_scores(sf::kFit, "", trace.ids, "first stable epoch / T; never learned = (T+1)/T");
  const double t = static_cast<double>(trace.epochs);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::size_t first = trace.epochs + 1;  // 1-based; sentinel when never stable
    for (std::size_t e = trace.epochs; e-- > 0;) {
      if (!trace.correct_at(i, e)) break;
      first = e + 1;
    }
    s.values.push_back(static_cast<double>(first) / t);
  }
  return s;
}

CvLossResult score_cvloss(const Dataset& ds, const ModelSpec& spec, const TrainConfig& cfg,
                          const KFoldSpec& kfold, std::size_t jobs) {
  CvLossResult result;
  result.folds = kfold_partitions(ds, kfold);
  result.runs.resize(result.folds.size());
  parallel_for(result.folds.size(), jobs, [&](std::size_t f) {
    const Dataset train_part = ds.subset(result.folds[f].train);
    const Dataset held_part = ds.subset(result.folds[f].heldout);
    try {
      result.runs[f] = train(train_part, held_part, spec, cfg);
    } catch (const NumericError& e) {
      throw NumericError("cvloss fold " + std::to_string(f) + " diverged: " + e.what());
    }
  });

  std::vector<double> values(ds.size(), 0.0);
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    for (std::size_t pos : result.folds[f].heldout) {
      values[pos] = sample_loss(result.runs[f].best_state, ds.row(pos), ds.labels[pos]);
    }
    result.scores.provenance.push_back(result.runs[f].config_digest);
  }
  result.scores.sf_name = sf::kCVLoss;
  result.scores.dataset = ds.name;
  result.scores.transform = "none: held-out cross-entropy loss, k=" + std::to_string(kfold.k);
  result.scores.ids = ds.ids;
  result.scores.values = std::move(values);
  return result;
}

void CScoreSpec::validate() const {
  if (subset_ratios.empty()) throw ConfigError("cscore needs at least one subset ratio");
  for (double r : subset_ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("cscore subset ratios must lie in (0, 1)");
  }
  if (subsets_per_ratio == 0) throw ConfigError("cscore subsets_per_ratio must be positive");
}

CScoreResult score_cscore(const Dataset& ds, const ModelSpec& spec, const TrainConfig& cfg,
                          const CScoreSpec& cscore, std::size_t jobs) {
  cscore.validate();
  const std::size_t n = ds.size();
  if (n < 2) throw ConfigError("cscore needs at least two samples");
  CScoreResult result;
  result.runs = cscore.subset_ratios.size() * cscore.subsets_per_ratio;
  result.table.assign(result.runs * n, -1);
  std::vector<std::string> digests(result.runs);

  parallel_for(result.runs, jobs, [&](std::size_t r) {
    const std::size_t ratio_index = r / cscore.subsets_per_ratio;
    const std::size_t subset_index = r % cscore.subsets_per_ratio;
    const double ratio = cscore.subset_ratios[ratio_index];
    auto size = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    size = std::clamp<std::size_t>(size, 1, n - 1);
    SplitMix64 rng = make_stream(cscore.seed, {stream_tag::kCScore, ratio_index, subset_index});
    const auto perm = random_permutation(n, rng);
    std::vector<std::size_t> in(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(size));
    std::vector<std::size_t> out(perm.begin() + static_cast<std::ptrdiff_t>(size), perm.end());
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    const Dataset held = ds.subset(out);
    RunRecord run = train(ds.subset(in), held, spec, cfg);
    const Evaluation ev = evaluate(run.best_state, held);
    for (std::size_t k = 0; k < out.size(); ++k) {
      result.table[r * n + out[k]] = static_cast<std::int8_t>(ev.per_sample_correct[k]);
    }
    digests[r] = run.config_digest;
  });

  DifficultyScores& s = result.scores;
  s.sf_name = sf::kCScore;
  s.dataset = ds.name;
  s.transform = "complement: 1 - mean held-out correctness";
  s.ids = ds.ids;
  s.values.resize(n);
  s.provenance = std::move(digests);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t contributing = 0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < result.runs; ++r) {
      const std::int8_t v = result.table[r * n + i];
      if (v < 0) continue;
      ++contributing;
      hits += static_cast<std::size_t>(v);
    }
    if (contributing == 0) {
      s.values[i] = 1.0;
      result.uncovered.push_back(ds.ids[i]);
    } else {
      s.values[i] = 1.0 - static_cast<double>(hits) / static_cast<double>(contributing);
    }
  }
  s.flagged = result.uncovered;
  return result;
}

std::vector<double> penultimate_features(const ModelState& state, const Dataset& ds) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ForwardResult fr = forward(state, ds.row(i));
    const auto& layers = fr.acts.per_layer;
    const auto& rep = layers[layers.size() - 2];
    out.insert(out.end(), rep.begin(), rep.end());
  }
  return out;
}

DifficultyScores score_tt(const Dataset& target, const ModelState& teacher, const SvcConfig& svc_cfg) {
  if (target.empty()) throw InputError("tt needs a non-empty target dataset");
  const std::vector<double> feats = penultimate_features(teacher, target);
  const std::size_t dim = feats.size() / target.size();
  const LinearSvc svc = LinearSvc::fit(feats, dim, target.labels, target.num_classes, svc_cfg);
  DifficultyScores s = blank_scores(sf::kTT, target.name, target.ids, "negated: -(f_y - max_{c!=y} f_c)");
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double m = svc.margin(std::span<const double>(feats).subspan(i * dim, dim), target.labels[i]);
    s.values.push_back(m == 0.0 ? 0.0 : -m);
  }
  return s;
}

std::vector<double> pool_representation(std::span<const double> rep, std::size_t max_dim) {
  if (max_dim == 0) throw ConfigError("max_rep_dim must be positive");
  if (rep.size() <= max_dim) return {rep.begin(), rep.end()};
  const std::size_t chunk = (rep.size() + max_dim - 1) / max_dim;
  std::vector<double> out;
  for (std::size_t start = 0; start < rep.size(); start += chunk) {
    const std::size_t end = std::min(start + chunk, rep.size());
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += rep[k];
    out.push_back(sum / static_cast<double>(end - start));
  }
  return out;
}

int knn_predict(std::span<const double> reps, std::size_t dim, std::span<const int> labels,
                std::size_t num_classes, std::size_t query, std::size_t k) {
  const std::size_t n = labels.size();
  if (k == 0 || k >= n) throw ConfigError("knn_k must lie in [1, N - 1]");
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n - 1);
  const double* q = reps.data() + query * dim;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == query) continue;
    const double* r = reps.data() + j * dim;
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = q[d] - r[d];
      d2 += diff * diff;
    }
    dist.emplace_back(d2, j);
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
  std::vector<std::size_t> votes(num_classes, 0);
  // nth_element leaves the k smallest (by distance, then row) in front.
  for (std::size_t m = 0; m < k; ++m) ++votes[static_cast<std::size_t>(labels[dist[m].second])];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::size_t prediction_depth(std::span<const bool> agreement) {
  std::size_t depth = agreement.size();
  for (std::size_t l = agreement.size(); l-- > 0;) {
    if (!agreement[l]) break;
    depth = l;
  }
  return depth;
}

PdResult score_pd(const ModelState& state, const Dataset& ds, const ProbeSpec& probe) {
  const std::size_t n = ds.size();
  if (probe.knn_k == 0 || probe.knn_k >= n) {
    throw ConfigError("knn_k=" + std::to_string(probe.knn_k) + " must be below the sample count " +
                      std::to_string(n));
  }
  const std::size_t probes = state.spec.hidden_dims.size() + 2;
  std::vector<std::vector<double>> reps(probes);
  std::vector<std::size_t> dims(probes, 0);
  std::vector<std::size_t> predicted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ForwardResult fr = forward(state, ds.row(i));
    predicted[i] = argmax(fr.probs);
    for (std::size_t l = 0; l < probes; ++l) {
      const auto pooled = pool_representation(fr.acts.per_layer[l], probe.max_rep_dim);
      dims[l] = pooled.size();
      reps[l].insert(reps[l].end(), pooled.begin(), pooled.end());
    }
  }

  PdResult result;
  result.probes = probes;
  result.depth.resize(n);
  result.scores = blank_scores(sf::kPD, ds.name, ds.ids, "depth / L; deepest-probe disagreement = L");
  std::vector<bool> agree_flat(n * probes);
  for (std::size_t l = 0; l < probes; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      const int p = knn_predict(reps[l], dims[l], ds.labels, state.spec.num_classes, i, probe.knn_k);
      agree_flat[i * probes + l] = static_cast<std::size_t>(p) == predicted[i];
    }
  }
  const auto row = std::make_unique<bool[]>(probes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < probes; ++l) row[l] = agree_flat[i * probes + l];
    result.depth[i] = prediction_depth(std::span<const bool>(row.get(), probes));
    result.scores.values.push_back(static_cast<double>(result.depth[i]) / static_cast<double>(probes));
  }
  return result;
}

}  // namespace sdcl
