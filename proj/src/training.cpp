#include "sdcl/training.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sdcl/digest.hpp"
#include "sdcl/rng.hpp"

namespace sdcl {

void TrainConfig::validate() const {
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  optimizer.validate();
}

Evaluation evaluate(const ModelState& state, const Dataset& ds) {
  if (ds.dim != state.spec.input_dim) throw InputError("dataset dimensionality does not match model");
  const std::size_t n = ds.size();
  const std::size_t c = state.spec.num_classes;
  Evaluation ev;
  ev.per_sample_loss.resize(n);
  ev.per_sample_correct.resize(n);
  ev.probs.resize(n * c);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Prediction p = predict(state, ds.row(i), ds.labels[i]);
    std::copy(p.probs.begin(), p.probs.end(), ev.probs.begin() + static_cast<std::ptrdiff_t>(i * c));
    ev.per_sample_loss[i] = p.loss;
    const bool ok = argmax(p.probs) == static_cast<std::size_t>(ds.labels[i]);
    ev.per_sample_correct[i] = ok ? 1 : 0;
    hits += ok ? 1 : 0;
  }
  ev.accuracy = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
  return ev;
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t epoch, std::uint64_t shuffle_seed) {
  SplitMix64 rng = make_stream(shuffle_seed, {stream_tag::kEpochOrder, epoch});
  return random_permutation(n, rng);
}

namespace {

std::string real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string describe(const ModelSpec& spec) {
  std::ostringstream os;
  os << "model(in=" << spec.input_dim << ",hidden=[";
  for (std::size_t i = 0; i < spec.hidden_dims.size(); ++i) os << (i ? "," : "") << spec.hidden_dims[i];
  os << "],classes=" << spec.num_classes << ",act=" << to_string(spec.activation) << ",seed=" << spec.seed
     << ")";
  return os.str();
}

std::string describe(const TrainConfig& cfg) {
  const auto& o = cfg.optimizer;
  std::ostringstream os;
  os << "train(epochs=" << cfg.epochs << ",batch=" << cfg.batch_size << ",shuffle_seed=" << cfg.shuffle_seed
     << ",opt=" << to_string(o.family) << ",lr=" << real(o.learning_rate) << ",momentum=" << real(o.momentum)
     << ",b1=" << real(o.adam_beta1) << ",b2=" << real(o.adam_beta2) << ",eps=" << real(o.adam_eps)
     << ",rho=" << real(o.sam_rho) << ")";
  return os.str();
}

std::string run_digest(const Dataset& train, const ModelSpec& spec, const TrainConfig& cfg) {
  std::uint64_t ids_hash = kFnvOffset;
  for (std::size_t id : train.ids) ids_hash = fnv1a64(std::to_string(id) + ";", ids_hash);
  return digest_of("data(" + train.name + ",n=" + std::to_string(train.size()) + ",ids=" + to_hex(ids_hash) +
                   ")" + describe(spec) + describe(cfg));
}

RunRecord run_training(const Dataset& train_set, const Dataset& eval_set, const ModelSpec& spec,
                       const TrainConfig& cfg, const PassScheduler& next_subset) {
  cfg.validate();
  spec.validate();
  train_set.validate();
  eval_set.validate();
  if (train_set.empty() || eval_set.empty()) throw InputError("training and eval sets must be non-empty");
  if (train_set.dim != spec.input_dim || eval_set.dim != spec.input_dim) {
    throw InputError("dataset dimensionality does not match model input_dim");
  }
  if (train_set.num_classes > spec.num_classes || eval_set.num_classes > spec.num_classes) {
    throw InputError("dataset has more classes than the model outputs");
  }

  const std::size_t n = train_set.size();
  const std::size_t per_epoch = steps_per_epoch(n, cfg.batch_size);
  const std::size_t total_steps = cfg.epochs * per_epoch;

  RunRecord record;
  record.config_digest = run_digest(train_set, spec, cfg);
  TrainingTrace& trace = record.trace;
  trace.ids = train_set.ids;
  trace.epochs = cfg.epochs;
  trace.correct.assign(n * cfg.epochs, 0);
  trace.loss.assign(n * cfg.epochs, 0.0);

  ModelState state = init_model(spec);
  Optimizer optimizer(cfg.optimizer, state.parameters.size());
  double best_accuracy = -1.0;

  std::size_t step = 0;
  std::vector<std::size_t> batch_rows;
  batch_rows.reserve(cfg.batch_size);
  for (std::uint64_t pass = 0; step < total_steps; ++pass) {
    const std::vector<std::size_t> subset = next_subset(step);
    if (subset.empty()) throw InputError("pass scheduler returned an empty subset");
    const auto order = epoch_order(subset.size(), pass, cfg.shuffle_seed);
    for (std::size_t start = 0; start < subset.size() && step < total_steps; start += cfg.batch_size) {
      batch_rows.clear();
      for (std::size_t k = start; k < std::min(start + cfg.batch_size, subset.size()); ++k) {
        batch_rows.push_back(subset[order[k]]);
      }
      const BatchView batch{train_set.features, train_set.dim, train_set.labels, batch_rows};
      const GradientFn grad_fn = [&](std::span<const double> params, std::vector<double>& grad) {
        auto lg = loss_and_grad(spec, params, batch);
        grad = std::move(lg.grad);
        return lg.mean_loss;
      };
      double loss = 0.0;
      try {
        loss = optimizer.step(state.parameters, grad_fn);
      } catch (const NumericError& e) {
        throw TrainingDiverged(e.what(), step / per_epoch + 1, step);
      }
      if (!std::isfinite(loss)) throw TrainingDiverged("non-finite loss", step / per_epoch + 1, step);
      ++step;

      if (step % per_epoch == 0) {
        const std::size_t epoch = step / per_epoch;  // 1-based
        state.epoch_tag = epoch;
        const Evaluation tr = evaluate(state, train_set);
        for (std::size_t i = 0; i < n; ++i) {
          if (!std::isfinite(tr.per_sample_loss[i])) {
            throw TrainingDiverged("non-finite per-sample loss", epoch, step);
          }
          trace.correct[i * cfg.epochs + epoch - 1] = tr.per_sample_correct[i];
          trace.loss[i * cfg.epochs + epoch - 1] = tr.per_sample_loss[i];
        }
        trace.train_accuracy.push_back(tr.accuracy);
        const double acc = evaluate(state, eval_set).accuracy;
        trace.eval_accuracy.push_back(acc);
        if (acc > best_accuracy) {
          best_accuracy = acc;
          trace.best_epoch = epoch;
          record.best_state = state;
        }
      }
    }
  }
  record.final_state = std::move(state);
  return record;
}

RunRecord train(const Dataset& train_set, const Dataset& eval_set, const ModelSpec& spec,
                const TrainConfig& cfg) {
  std::vector<std::size_t> all(train_set.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return run_training(train_set, eval_set, spec, cfg, [&all](std::size_t) { return all; });
}

}  // namespace sdcl
