#include "sdcl/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sdcl/artifacts.hpp"
#include "sdcl/digest.hpp"
#include "sdcl/error.hpp"

namespace sdcl {

namespace {

void check_keys(const Config& cfg, const std::string& section, const std::set<std::string>& known) {
  const auto it = cfg.sections().find(section);
  if (it == cfg.sections().end()) return;
  for (const auto& [key, value] : it->second) {
    if (!known.contains(key)) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("unknown key '" + key + "' in [" + section + "] (known: " + list + ")");
    }
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const Config& cfg) {
  check_keys(cfg, "dataset",
             {"source", "path", "label_column", "n_per_class", "num_classes", "dim", "separation", "noise", "seed",
              "eval_fraction", "split_seed"});
  check_keys(cfg, "model", {"hidden", "activation", "seed"});
  check_keys(cfg, "train",
             {"epochs", "batch_size", "optimizer", "lr", "momentum", "beta1", "beta2", "eps", "rho", "shuffle_seed"});
  check_keys(cfg, "scoring",
             {"sf", "run", "teacher", "k", "fold_seed", "ratios", "subsets", "cscore_seed", "svc_lambda",
              "svc_iterations", "svc_lr", "svc_standardize", "knn_k", "max_rep_dim"});
  check_keys(cfg, "curriculum", {"variant", "ordering", "seed", "pacing", "b", "a"});

  ExperimentConfig e;
  e.raw = cfg;

  auto& d = e.dataset;
  d.source = cfg.get_string("dataset", "source", d.source);
  if (d.source != "planted" && d.source != "csv") {
    throw ConfigError("[dataset] source must be 'planted' or 'csv', got '" + d.source + "'");
  }
  d.path = cfg.get_string("dataset", "path", "");
  if (d.source == "csv" && d.path.empty()) throw ConfigError("[dataset] path is required for source = csv");
  d.label_column = cfg.get_string("dataset", "label_column", d.label_column);
  d.planted.n_per_class = cfg.get_size("dataset", "n_per_class", d.planted.n_per_class);
  d.planted.num_classes = cfg.get_size("dataset", "num_classes", d.planted.num_classes);
  d.planted.dim = cfg.get_size("dataset", "dim", d.planted.dim);
  d.planted.class_separation = cfg.get_real("dataset", "separation", d.planted.class_separation);
  d.planted.noise_fraction = cfg.get_real("dataset", "noise", d.planted.noise_fraction);
  d.planted.seed = cfg.get_uint("dataset", "seed", d.planted.seed);
  d.eval_fraction = cfg.get_real("dataset", "eval_fraction", d.eval_fraction);
  d.split_seed = cfg.get_uint("dataset", "split_seed", d.split_seed);

  e.model.hidden_dims = cfg.get_size_list("model", "hidden", {32});
  e.model.activation = parse_activation(cfg.get_string("model", "activation", "relu"));
  e.model.seed = cfg.get_uint("model", "seed", 0);

  auto& t = e.train;
  t.epochs = cfg.get_size("train", "epochs", t.epochs);
  t.batch_size = cfg.get_size("train", "batch_size", t.batch_size);
  t.shuffle_seed = cfg.get_uint("train", "shuffle_seed", t.shuffle_seed);
  auto& o = t.optimizer;
  o.family = parse_optimizer(cfg.get_string("train", "optimizer", to_string(o.family)));
  o.learning_rate = cfg.get_real("train", "lr", o.learning_rate);
  o.momentum = cfg.get_real("train", "momentum", o.momentum);
  o.adam_beta1 = cfg.get_real("train", "beta1", o.adam_beta1);
  o.adam_beta2 = cfg.get_real("train", "beta2", o.adam_beta2);
  o.adam_eps = cfg.get_real("train", "eps", o.adam_eps);
  o.sam_rho = cfg.get_real("train", "rho", o.sam_rho);
  t.validate();

  auto& s = e.scoring;
  s.sf = cfg.get_string("scoring", "sf", "");
  s.run = cfg.get_optional_string("scoring", "run");
  s.teacher = cfg.get_optional_string("scoring", "teacher");
  s.kfold.k = cfg.get_size("scoring", "k", s.kfold.k);
  s.kfold.seed = cfg.get_uint("scoring", "fold_seed", s.kfold.seed);
  s.cscore.subset_ratios = cfg.get_real_list("scoring", "ratios", s.cscore.subset_ratios);
  s.cscore.subsets_per_ratio = cfg.get_size("scoring", "subsets", s.cscore.subsets_per_ratio);
  s.cscore.seed = cfg.get_uint("scoring", "cscore_seed", s.cscore.seed);
  s.svc.lambda = cfg.get_real("scoring", "svc_lambda", s.svc.lambda);
  s.svc.iterations = cfg.get_size("scoring", "svc_iterations", s.svc.iterations);
  s.svc.learning_rate = cfg.get_real("scoring", "svc_lr", s.svc.learning_rate);
  s.svc.standardize = cfg.get_bool("scoring", "svc_standardize", s.svc.standardize);
  s.probe.knn_k = cfg.get_size("scoring", "knn_k", s.probe.knn_k);
  s.probe.max_rep_dim = cfg.get_size("scoring", "max_rep_dim", s.probe.max_rep_dim);

  auto& c = e.curriculum;
  c.variant = cfg.get_string("curriculum", "variant", c.variant);
  if (c.variant != "cl" && c.variant != "acl" && c.variant != "rcl") {
    throw ConfigError("[curriculum] variant must be cl, acl or rcl, got '" + c.variant + "'");
  }
  c.ordering = cfg.get_optional_string("curriculum", "ordering");
  if (cfg.has("curriculum", "seed")) c.seed = cfg.get_uint("curriculum", "seed", 0);
  const auto pacing = cfg.get_string_list("curriculum", "pacing", {"linear"});
  c.families.clear();
  for (const auto& name : pacing) {
    if (name == "all") {
      c.families.assign(std::begin(kAllPacingFamilies), std::end(kAllPacingFamilies));
    } else {
      c.families.push_back(parse_pacing(name));
    }
  }
  c.b = cfg.get_real("curriculum", "b", c.b);
  c.saturations = cfg.get_real_list("curriculum", "a", c.saturations);
  if (c.saturations.empty() || c.families.empty()) throw ConfigError("[curriculum] pacing and a must not be empty");
  return e;
}

void ExperimentConfig::override_seed(std::uint64_t seed) {
  model.seed = seed;
  train.shuffle_seed = seed;
  raw.set("model", "seed", ConfigValue::integer(static_cast<std::int64_t>(seed)));
  raw.set("train", "shuffle_seed", ConfigValue::integer(static_cast<std::int64_t>(seed)));
}

LoadedData ExperimentConfig::load_data() const {
  LoadedData out;
  std::ostringstream desc;
  if (dataset.source == "planted") {
    out.full = generate_planted(dataset.planted).dataset;
    const auto& p = dataset.planted;
    desc << "planted(n_per_class=" << p.n_per_class << ",classes=" << p.num_classes << ",dim=" << p.dim
         << ",separation=" << format_real(p.class_separation) << ",noise=" << format_real(p.noise_fraction)
         << ",seed=" << p.seed << ")";
  } else {
    std::ifstream in(dataset.path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset file " + dataset.path, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    CsvSchema schema;
    schema.label_column = dataset.label_column;
    out.full = parse_csv(text, schema, std::filesystem::path(dataset.path).stem().string());
    desc << "csv(content=" << digest_of(text) << ",label=" << dataset.label_column << ")";
  }
  desc << "split(eval=" << format_real(dataset.eval_fraction) << ",seed=" << dataset.split_seed << ")";
  out.split = stratified_split(out.full, dataset.eval_fraction, dataset.split_seed);
  out.description = desc.str();
  return out;
}

ModelSpec ExperimentConfig::model_for(const Dataset& ds) const {
  ModelSpec spec = model;
  spec.input_dim = ds.dim;
  spec.num_classes = ds.num_classes;
  spec.validate();
  return spec;
}

std::string ExperimentConfig::train_digest(const LoadedData& data) const {
  return digest_of(data.description + describe(model_for(data.full)) + describe(train));
}

}  // namespace sdcl
