#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdcl/analysis.hpp"
#include "sdcl/artifacts.hpp"
#include "sdcl/checkpoint.hpp"
#include "sdcl/curriculum.hpp"
#include "sdcl/digest.hpp"
#include "sdcl/error.hpp"
#include "sdcl/experiment.hpp"
#include "sdcl/parallel.hpp"
#include "sdcl/scoring.hpp"

namespace sdcl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool force = false;
  std::size_t jobs = 1;
  std::vector<std::string> sets;
  std::string sf;
};

struct Context {
  Options opt;
  ExperimentConfig exp;
  fs::path root;
  std::ostream& out;
  std::ostream& err;
};

// Write-once directory <root>/<digest>; files go to a staging sibling that
// replaces the final directory on commit.
class ArtifactDir {
 public:
  ArtifactDir(const fs::path& root, const std::string& digest, bool force)
      : final_(root / digest), staging_(root / (digest + ".partial")) {
    exists_ = fs::exists(final_);
    skip_ = exists_ && !force;
    if (!skip_) {
      fs::remove_all(staging_);
      fs::create_directories(staging_);
    }
  }

  bool skip() const noexcept { return skip_; }
  const fs::path& path() const noexcept { return staging_; }
  const fs::path& final_path() const noexcept { return final_; }

  void commit() {
    if (fs::exists(final_)) fs::remove_all(final_);
    fs::rename(staging_, final_);
  }

 private:
  fs::path final_;
  fs::path staging_;
  bool exists_ = false;
  bool skip_ = false;
};

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

void report_skip(Context& ctx, const std::string& digest) {
  ctx.err << "artifact " << digest << " already exists; nothing to do (use --force to rebuild)\n";
}

fs::path require_run(const Context& ctx, const std::string& digest) {
  const fs::path dir = ctx.root / digest;
  for (const char* file : {"summary.json", "correct.csv", "loss.csv", "best.ckpt"}) {
    if (!fs::exists(dir / file)) {
      throw InputError("run " + digest + " not found under " + ctx.root.string() +
                       " (missing " + file + "); train it first with `sdcl train` using the same [dataset], [model] "
                       "and [train] settings");
    }
  }
  return dir;
}

json config_json(const Config& cfg, const std::vector<std::string>& sections) {
  return json(cfg.canonical(sections));
}

void record_run(const fs::path& dir, RunRecord& run, const std::string& digest) {
  run.config_digest = digest;
  write_run_files(dir, run);
}

// ---------------------------------------------------------------- train

int cmd_train(Context& ctx) {
  const LoadedData data = ctx.exp.load_data();
  const ModelSpec spec = ctx.exp.model_for(data.full);
  const std::string digest = ctx.exp.train_digest(data);
  ArtifactDir dir(ctx.root, digest, ctx.opt.force);
  if (dir.skip()) {
    report_skip(ctx, digest);
    ctx.out << digest << "\n";
    return 0;
  }
  RunRecord run = train(data.split.train, data.split.eval, spec, ctx.exp.train);
  record_run(dir.path(), run, digest);
  json m;
  m["kind"] = "train";
  m["digest"] = digest;
  m["data"] = data.description;
  m["model"] = describe(spec);
  m["train"] = describe(ctx.exp.train);
  m["config"] = config_json(ctx.exp.raw, {"dataset", "model", "train"});
  m["train_samples"] = data.split.train.size();
  m["eval_samples"] = data.split.eval.size();
  m["best_epoch"] = run.trace.best_epoch;
  m["eval_accuracy"] = run.trace.eval_accuracy;
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
  ctx.out << digest << "\n";
  return 0;
}

// ---------------------------------------------------------------- score

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string describe_reals(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(format_real(x));
  return "[" + join(parts, ",") + "]";
}

std::string table_csv(const CScoreResult& r, const CScoreSpec& spec, std::span<const std::size_t> ids) {
  std::string out = "run,ratio,subset";
  for (std::size_t id : ids) out += "," + std::to_string(id);
  out += "\n";
  const std::size_t n = ids.size();
  for (std::size_t run = 0; run < r.runs; ++run) {
    out += std::to_string(run) + "," + format_real(spec.subset_ratios[run / spec.subsets_per_ratio]) + "," +
           std::to_string(run % spec.subsets_per_ratio);
    for (std::size_t i = 0; i < n; ++i) out += "," + std::to_string(static_cast<int>(r.table[run * n + i]));
    out += "\n";
  }
  return out;
}

int cmd_score(Context& ctx) {
  const std::string sf = ctx.opt.sf.empty() ? ctx.exp.scoring.sf : ctx.opt.sf;
  const auto names = scoring_function_names();
  if (std::find(names.begin(), names.end(), sf) == names.end()) {
    throw UsageError("unknown scoring function '" + sf + "'; valid names: " + join(names, ", "));
  }
  const auto& sc = ctx.exp.scoring;
  const LoadedData data = ctx.exp.load_data();
  const ModelSpec spec = ctx.exp.model_for(data.full);
  const std::string base = ctx.exp.train_digest(data);
  const Dataset& train_set = data.split.train;
  const std::string run_digest_ref = sc.run.value_or(base);

  std::string what;
  if (sf == sf::kCumAcc || sf == sf::kFit || sf == sf::kCELoss) {
    what = "run=" + run_digest_ref;
  } else if (sf == sf::kPD) {
    what = "run=" + run_digest_ref + ",knn_k=" + std::to_string(sc.probe.knn_k) +
           ",max_rep_dim=" + std::to_string(sc.probe.max_rep_dim);
  } else if (sf == sf::kCVLoss) {
    what = "base=" + base + ",k=" + std::to_string(sc.kfold.k) + ",fold_seed=" + std::to_string(sc.kfold.seed);
  } else if (sf == sf::kCScore) {
    what = "base=" + base + ",ratios=" + describe_reals(sc.cscore.subset_ratios) +
           ",subsets=" + std::to_string(sc.cscore.subsets_per_ratio) + ",seed=" + std::to_string(sc.cscore.seed);
  } else {
    if (!sc.teacher) throw ConfigError("sf = tt needs [scoring] teacher = <run digest>");
    what = "teacher=" + *sc.teacher + ",target=" + data.description + ",svc(lambda=" + format_real(sc.svc.lambda) +
           ",iterations=" + std::to_string(sc.svc.iterations) + ",lr=" + format_real(sc.svc.learning_rate) +
           ",standardize=" + (sc.svc.standardize ? "1" : "0") + ")";
  }
  // Fail on missing prerequisites before deciding anything else.
  if (sf == sf::kCumAcc || sf == sf::kFit || sf == sf::kCELoss || sf == sf::kPD) require_run(ctx, run_digest_ref);
  if (sf == sf::kTT) require_run(ctx, *sc.teacher);

  const std::string digest = digest_of("score(" + sf + "," + what + ")");
  ArtifactDir dir(ctx.root, digest, ctx.opt.force);
  if (dir.skip()) {
    report_skip(ctx, digest);
    ctx.out << digest << "\n";
    return 0;
  }

  json m;
  m["kind"] = "score";
  m["digest"] = digest;
  m["sf"] = sf;
  m["data"] = data.description;
  DifficultyScores scores;
  if (sf == sf::kCumAcc || sf == sf::kFit) {
    const TrainingTrace trace = read_trace(ctx.root / run_digest_ref);
    scores = sf == sf::kCumAcc ? score_cumacc(trace) : score_fit(trace);
    scores.provenance = {run_digest_ref};
  } else if (sf == sf::kCELoss || sf == sf::kPD) {
    const ModelState state = load_state(ctx.root / run_digest_ref / "best.ckpt");
    if (sf == sf::kCELoss) {
      scores = score_celoss(state, train_set);
    } else {
      const PdResult pd = score_pd(state, train_set, sc.probe);
      scores = pd.scores;
      m["probes"] = pd.probes;
    }
    scores.provenance = {run_digest_ref};
  } else if (sf == sf::kTT) {
    const ModelState teacher = load_state(ctx.root / *sc.teacher / "best.ckpt");
    scores = score_tt(train_set, teacher, sc.svc);
    scores.provenance = {*sc.teacher};
  } else if (sf == sf::kCVLoss) {
    CvLossResult cv = score_cvloss(train_set, spec, ctx.exp.train, sc.kfold, ctx.opt.jobs);
    std::vector<std::string> fold_digests;
    for (std::size_t f = 0; f < cv.runs.size(); ++f) {
      const std::string fd = digest_of(base + "|cvloss-fold(" + std::to_string(f) + "/" + std::to_string(sc.kfold.k) +
                                       ",seed=" + std::to_string(sc.kfold.seed) + ")");
      fold_digests.push_back(fd);
      ArtifactDir fold_dir(ctx.root, fd, ctx.opt.force);
      if (fold_dir.skip()) continue;
      record_run(fold_dir.path(), cv.runs[f], fd);
      json fm;
      fm["kind"] = "cvloss_fold";
      fm["digest"] = fd;
      fm["base"] = base;
      fm["fold"] = f;
      fm["k"] = sc.kfold.k;
      std::vector<std::size_t> heldout;
      for (std::size_t pos : cv.folds[f].heldout) heldout.push_back(train_set.ids[pos]);
      fm["heldout_ids"] = heldout;
      write_json(fold_dir.path() / "manifest.json", fm);
      fold_dir.commit();
    }
    scores = std::move(cv.scores);
    scores.provenance = fold_digests;
    m["fold_runs"] = fold_digests;
  } else {
    const CScoreResult cs = score_cscore(train_set, spec, ctx.exp.train, sc.cscore, ctx.opt.jobs);
    write_text_file(dir.path() / "cscore_table.csv", table_csv(cs, sc.cscore, train_set.ids));
    m["runs"] = cs.runs;
    m["uncovered"] = cs.uncovered;
    if (!cs.uncovered.empty()) {
      ctx.err << "warning: " << cs.uncovered.size() << " samples were never held out and were scored 1\n";
    }
    scores = cs.scores;
  }
  scores.dataset = data.full.name;
  write_scores(dir.path() / "scores.csv", scores);
  m["scores_digest"] = scores.digest();
  m["samples"] = scores.size();
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
  ctx.out << digest << "\n";
  return 0;
}

// ---------------------------------------------------------------- ensemble

std::vector<DifficultyScores> read_score_files(const std::vector<std::string>& paths) {
  std::vector<DifficultyScores> out;
  for (const auto& p : paths) out.push_back(read_scores(p));
  return out;
}

int cmd_ensemble(Context& ctx) {
  const auto paths = ctx.exp.raw.get_string_list("ensemble", "members", {});
  if (paths.empty()) throw ConfigError("[ensemble] members must list at least one score file");
  const auto members = read_score_files(paths);
  std::vector<std::string> digests;
  for (const auto& s : members) digests.push_back(s.digest());
  std::vector<std::string> sorted = digests;
  std::sort(sorted.begin(), sorted.end());
  const std::string digest = digest_of("ensemble(" + join(sorted, ",") + ")");
  ArtifactDir dir(ctx.root, digest, ctx.opt.force);
  if (dir.skip()) {
    report_skip(ctx, digest);
    ctx.out << digest << "\n";
    return 0;
  }
  DifficultyScores ens = build_ensemble(members);
  write_scores(dir.path() / "scores.csv", ens);
  json m;
  m["kind"] = "ensemble";
  m["digest"] = digest;
  m["sf"] = ens.sf_name;
  m["members"] = sorted;
  m["scores_digest"] = ens.digest();
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
  ctx.out << digest << "\n";
  return 0;
}

// ---------------------------------------------------------------- order

int cmd_order(Context& ctx) {
  const auto& raw = ctx.exp.raw;
  const std::string mode = raw.get_string("order", "mode", "easy_first");
  const auto scores_path = raw.get_optional_string("order", "scores");
  DifficultyOrdering ordering;
  std::string what;
  if (mode == "easy_first" || mode == "reversed") {
    if (!scores_path) throw ConfigError("[order] scores is required for mode = " + mode);
    const DifficultyScores s = read_scores(*scores_path);
    ordering = make_ordering(s);
    if (mode == "reversed") ordering = reverse_ordering(ordering);
    what = s.digest();
  } else if (mode == "random") {
    if (!raw.has("order", "seed")) throw UsageError("mode = random needs [order] seed");
    const std::uint64_t seed = raw.get_uint("order", "seed", 0);
    std::vector<std::size_t> ids;
    if (scores_path) {
      const DifficultyScores s = read_scores(*scores_path);
      ids = s.ids;
      what = s.digest();
    } else {
      const LoadedData data = ctx.exp.load_data();
      ids = data.split.train.ids;
      what = data.description;
    }
    ordering = random_ordering(ids, seed);
    what += ",seed=" + std::to_string(seed);
  } else {
    throw ConfigError("[order] mode must be easy_first, reversed or random");
  }
  const std::string digest = digest_of("order(" + mode + "," + what + ")");
  ArtifactDir dir(ctx.root, digest, ctx.opt.force);
  if (dir.skip()) {
    report_skip(ctx, digest);
    ctx.out << digest << "\n";
    return 0;
  }
  write_ordering(dir.path() / "ordering.txt", ordering);
  json m;
  m["kind"] = "order";
  m["digest"] = digest;
  m["mode"] = mode;
  m["ordering_digest"] = ordering.digest();
  m["source"] = ordering.source;
  m["size"] = ordering.order.size();
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
  ctx.out << digest << "\n";
  return 0;
}

// ---------------------------------------------------------------- curriculum

int cmd_curriculum(Context& ctx) {
  const auto& cc = ctx.exp.curriculum;
  const LoadedData data = ctx.exp.load_data();
  const ModelSpec spec = ctx.exp.model_for(data.full);
  const std::string base = ctx.exp.train_digest(data);
  const Dataset& train_set = data.split.train;

  DifficultyOrdering ordering;
  std::string source_digest;
  if (cc.variant == "rcl") {
    if (!cc.seed) throw UsageError("variant rcl needs [curriculum] seed");
    ordering = random_ordering(train_set.ids, *cc.seed);
  } else {
    if (!cc.ordering) throw ConfigError("variant " + cc.variant + " needs [curriculum] ordering = <file>");
    ordering = read_ordering(*cc.ordering);
    source_digest = ordering.digest();
    if (cc.variant == "acl") ordering = reverse_ordering(ordering);
  }

  struct Cell {
    PacingSpec pacing;
    std::string digest;
  };
  std::vector<Cell> cells;
  for (PacingFamily f : cc.families) {
    for (double a : cc.saturations) {
      Cell cell;
      cell.pacing = {f, cc.b, a};
      cell.pacing.validate();
      cell.digest = digest_of(base + "|curriculum(" + cc.variant + ",ordering=" + ordering.digest() +
                              ",pacing=" + to_string(f) + ",b=" + format_real(cc.b) + ",a=" + format_real(a) + ")");
      cells.push_back(cell);
    }
  }

  if (!is_class_balanced(train_set.labels, train_set.num_classes)) {
    ctx.err << "warning: training set is not class-balanced; curriculum subsets use plain ordering prefixes\n";
  }

  std::vector<char> skipped(cells.size(), 0);
  parallel_for(cells.size(), ctx.opt.jobs, [&](std::size_t k) {
    const Cell& cell = cells[k];
    ArtifactDir dir(ctx.root, cell.digest, ctx.opt.force);
    if (dir.skip()) {
      skipped[k] = 1;
      return;
    }
    CurriculumRun run = curriculum_train(train_set, data.split.eval, ordering, cell.pacing, spec, ctx.exp.train);
    record_run(dir.path(), run.record, cell.digest);
    json m;
    m["kind"] = "curriculum";
    m["digest"] = cell.digest;
    m["base"] = base;
    m["variant"] = cc.variant;
    m["ordering_digest"] = ordering.digest();
    m["ordering_source"] = ordering.source;
    if (!source_digest.empty()) m["source_ordering_digest"] = source_digest;
    if (cc.seed && cc.variant == "rcl") m["ordering_seed"] = *cc.seed;
    m["pacing"] = {{"family", to_string(cell.pacing.family)}, {"b", cell.pacing.b}, {"a", cell.pacing.a}};
    m["total_iterations"] = run.total_iterations;
    m["class_balanced"] = run.class_balanced;
    json series = json::array();
    for (const auto& e : run.schedule) series.push_back({{"step", e.step}, {"fraction", e.fraction}, {"size", e.size}});
    m["subset_schedule"] = series;
    m["eval_accuracy"] = run.record.trace.eval_accuracy;
    m["best_epoch"] = run.record.trace.best_epoch;
    write_json(dir.path() / "manifest.json", m);
    dir.commit();
  });

  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (skipped[k]) report_skip(ctx, cells[k].digest);
    const json summary = json::parse(read_text_file(ctx.root / cells[k].digest / "summary.json"));
    ctx.out << cells[k].digest << " " << cc.variant << " " << to_string(cells[k].pacing.family) << " a="
            << format_real(cells[k].pacing.a) << " best_eval_accuracy="
            << format_real(summary.at("best_eval_accuracy").get<double>()) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(Context& ctx) {
  const auto& raw = ctx.exp.raw;
  const auto paths = raw.get_string_list("analyze", "scores", {});
  if (paths.empty()) throw ConfigError("[analyze] scores must list score files");
  const auto scores = read_score_files(paths);
  auto labels = raw.get_string_list("analyze", "labels", {});
  if (labels.empty()) {
    for (std::size_t i = 0; i < scores.size(); ++i) labels.push_back(scores[i].sf_name + "#" + std::to_string(i));
  }
  if (labels.size() != scores.size()) throw ConfigError("[analyze] labels must name every score file");
  const auto sizes = raw.get_size_list("analyze", "ensemble_sizes", {});
  const std::size_t replicas = raw.get_size("analyze", "replicas", 3);

  std::vector<std::string> digests;
  for (const auto& s : scores) digests.push_back(s.digest());
  std::vector<std::string> size_text;
  for (std::size_t s : sizes) size_text.push_back(std::to_string(s));
  const std::string digest = digest_of("analyze(" + join(digests, ",") + "|" + join(labels, ",") + "|" +
                                       join(size_text, ",") + "|" + std::to_string(replicas) + ")");
  ArtifactDir dir(ctx.root, digest, ctx.opt.force);
  if (dir.skip()) {
    report_skip(ctx, digest);
    ctx.out << digest << "\n";
    return 0;
  }

  json report;
  report["kind"] = "analyze";
  report["inputs"] = digests;
  report["labels"] = labels;
  json gran = json::array();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto g = granularity(scores[i]);
    gran.push_back({{"label", labels[i]}, {"unique_values", g.unique_values}, {"max_bin", g.max_bin}});
  }
  report["granularity"] = gran;
  if (scores.size() >= 2) {
    const CorrelationReport cr = pairwise_report(scores, labels);
    json pairs = json::array();
    for (const auto& p : cr.pairs) pairs.push_back({{"a", p.label_a}, {"b", p.label_b}, {"rho", p.rho}});
    report["spearman"] = {{"pairs", pairs}, {"mean", cr.mean}, {"std", cr.std}, {"std_kind", "population"}};
    write_text_file(dir.path() / "matrix.csv", matrix_csv(labels, correlation_matrix(scores)));
  }
  if (!sizes.empty()) {
    json rows = json::array();
    for (const auto& r : robustness_vs_ensemble(scores, sizes, replicas)) {
      rows.push_back({{"size", r.size}, {"mean_spearman", r.mean_spearman}, {"members", r.members}});
    }
    report["ensemble_robustness"] = rows;
  }
  write_json(dir.path() / "report.json", report);
  json m;
  m["kind"] = "analyze";
  m["digest"] = digest;
  m["files"] = scores.size() >= 2 ? json{"report.json", "matrix.csv"} : json{"report.json"};
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
  ctx.out << digest << "\n";
  return 0;
}

// ---------------------------------------------------------------- fuse

int cmd_fuse(Context& ctx) {
  const auto runs = ctx.exp.raw.get_string_list("fuse", "runs", {});
  if (runs.empty()) throw ConfigError("[fuse] runs must list at least one run digest");
  for (const auto& r : runs) require_run(ctx, r);
  const LoadedData data = ctx.exp.load_data();
  const std::string digest = digest_of("fuse(" + join(runs, ",") + "|" + data.description + ")");
  ArtifactDir dir(ctx.root, digest, ctx.opt.force);
  if (dir.skip()) {
    report_skip(ctx, digest);
    ctx.out << digest << "\n";
    return 0;
  }
  std::vector<ModelState> states;
  json members = json::array();
  double mean = 0.0;
  for (const auto& r : runs) {
    states.push_back(load_state(ctx.root / r / "best.ckpt"));
    const double acc = evaluate(states.back(), data.split.eval).accuracy;
    mean += acc;
    members.push_back({{"run", r}, {"accuracy", acc}});
  }
  mean /= static_cast<double>(runs.size());
  const FusionResult fused = late_fuse(states, data.split.eval);
  json report;
  report["kind"] = "fuse";
  report["digest"] = digest;
  report["data"] = data.description;
  report["members"] = members;
  report["mean_member_accuracy"] = mean;
  report["fused_accuracy"] = fused.accuracy;
  write_json(dir.path() / "fusion.json", report);
  write_json(dir.path() / "manifest.json", {{"kind", "fuse"}, {"digest", digest}, {"runs", runs}});
  dir.commit();
  ctx.out << digest << " fused_accuracy=" << format_real(fused.accuracy) << "\n";
  return 0;
}

fs::path resolve_root(const Options& opt, const Config& cfg) {
  if (!opt.out.empty()) return opt.out;
  if (auto dir = cfg.get_optional_string("output", "dir")) return *dir;
  if (const char* env = std::getenv("SDCL_OUT"); env && *env) return env;
  return "sdcl_out";
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e)) return 2;
  return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample difficulty scoring and curriculum learning experiments"};
  app.require_subcommand(1);
  Options opt;

  using Handler = std::function<int(Context&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opt.config, "experiment configuration file");
    sub->add_option("-o,--out", opt.out, "artifact root (default: [output] dir, $SDCL_OUT, ./sdcl_out)");
    sub->add_option("--seed", opt.seed, "override the model and shuffle seeds");
    sub->add_flag("--force", opt.force, "rebuild artifacts that already exist");
    sub->add_option("-j,--jobs", opt.jobs, "parallel jobs for independent runs")->check(CLI::PositiveNumber);
    sub->add_option("--set", opt.sets, "override a config value: section.key=value");
    commands.emplace_back(sub, std::move(h));
    return sub;
  };
  add("train", "train a baseline run and record its learning dynamics", cmd_train);
  auto* score = add("score", "compute difficulty scores", cmd_score);
  score->add_option("--sf", opt.sf, "scoring function (overrides [scoring] sf)");
  add("ensemble", "average score files of one scoring function", cmd_ensemble);
  add("order", "turn scores into a difficulty ordering", cmd_order);
  add("curriculum", "run curriculum training over a pacing grid", cmd_curriculum);
  add("analyze", "correlation, granularity and robustness reports", cmd_analyze);
  add("fuse", "late fusion of trained runs", cmd_fuse);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    Config cfg = opt.config.empty() ? Config{} : Config::load(opt.config);
    for (const auto& s : opt.sets) cfg.apply_override(s);
    Context ctx{opt, ExperimentConfig::from(cfg), resolve_root(opt, cfg), out, err};
    if (opt.seed) ctx.exp.override_seed(*opt.seed);
    fs::create_directories(ctx.root);
    for (auto& [sub, handler] : commands) {
      if (sub->parsed()) return handler(ctx);
    }
    return 2;
  } catch (const InputError& e) {
    // An unreadable config file is a usage problem, not a runtime failure.
    err << "error: " << e.what() << "\n";
    return opt.config.empty() || fs::exists(opt.config) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }
}

}  // namespace sdcl::cli
