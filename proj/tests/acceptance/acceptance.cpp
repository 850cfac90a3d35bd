// Acceptance run: one PASS/FAIL line per criterion.
//
//   sdcl_acceptance [--sdcl PATH] [--only 1,7,...]
//
// Criterion 11 drives the command line tool at PATH; it fails when no
// binary is given.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reference.hpp"
#include "sdcl/analysis.hpp"
#include "sdcl/artifacts.hpp"
#include "sdcl/curriculum.hpp"
#include "sdcl/experiment.hpp"
#include "sdcl/dataset.hpp"
#include "sdcl/model.hpp"
#include "sdcl/optimizer.hpp"
#include "sdcl/scores.hpp"
#include "sdcl/scoring.hpp"
#include "sdcl/training.hpp"

using namespace sdcl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ------------------------------------------------------------------ 1

Outcome pacing_suite() {
  std::size_t failures = 0;
  const double total = 1000.0;
  for (PacingFamily fam : kAllPacingFamilies) {
    for (double b : {0.1, 0.2, 0.5}) {
      for (double a : {0.5, 0.8}) {
        const PacingSpec p{fam, b, a};
        if (pacing_fraction(p, 0.0, total) != b) ++failures;
        for (double t : {a * total, a * total + 1.0, total}) {
          if (pacing_fraction(p, t, total) != 1.0) ++failures;
        }
        double prev = -1.0;
        for (int k = 0; k <= 10000; ++k) {
          const double f = pacing_fraction(p, total * k / 10000.0, total);
          if (f < prev) ++failures;
          prev = f;
        }
      }
    }
  }
  // Speed ordering on x = t / (aT) in [0.01, 1].
  for (double b : {0.1, 0.2, 0.5}) {
    for (double a : {0.5, 0.8}) {
      for (int k = 0; k <= 10000; ++k) {
        const double x = 0.01 + 0.99 * k / 10000.0;
        const double t = x * a * total;
        double f[4];
        for (std::size_t i = 0; i < 4; ++i) f[i] = pacing_fraction({kAllPacingFamilies[i], b, a}, t, total);
        if (!(f[0] >= f[1] && f[1] >= f[2] && f[2] >= f[3])) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(failures) + " violations"};
}

// ------------------------------------------------------------------ 2

Outcome scoring_oracles() {
  std::mt19937_64 gen(2024);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + gen() % 50;
    const std::size_t t = 1 + gen() % 20;
    const TrainingTrace trace = ref::random_trace(n, t, gen);
    const auto ca = score_cumacc(trace);
    const auto ft = score_fit(trace);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> row;
      for (std::size_t e = 0; e < t; ++e) row.push_back(trace.correct_at(i, e) ? 1 : 0);
      if (ca.values[i] != ref::cumacc(row)) ++mismatches;
      if (ft.values[i] != ref::fit(row)) ++mismatches;
    }
  }

  double celoss_err = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ModelSpec spec;
    spec.input_dim = 5;
    spec.hidden_dims = {7, 4};
    spec.num_classes = 4;
    spec.activation = seed % 2 ? Activation::tanh : Activation::relu;
    const ModelState st = ref::random_state(spec, seed);
    const Dataset ds = ref::random_dataset(25, 5, 4, seed + 1);
    const auto s = score_celoss(st, ds);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double want = ref::sample_loss(st, ds.row(i), ds.labels[i]);
      celoss_err = std::max(celoss_err, std::abs(s.values[i] - want) / std::max(1.0, std::abs(want)));
    }
  }

  Dataset toy;
  toy.name = "toy";
  toy.dim = 2;
  toy.num_classes = 2;
  toy.features = {0.0, 1.0, 1.0, 0.0, 0.2, 0.9, 0.8, 0.1};
  toy.labels = {0, 1, 0, 1};
  toy.ids = {0, 1, 2, 3};
  ModelSpec spec;
  spec.input_dim = 2;
  spec.hidden_dims = {3};
  spec.num_classes = 2;
  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.batch_size = 2;
  cfg.optimizer.learning_rate = 0.1;
  const KFoldSpec loo{4, 5};
  const CvLossResult cv = score_cvloss(toy, spec, cfg, loo);
  double cv_err = 0.0;
  for (const Fold& f : kfold_partitions(4, loo)) {
    const std::size_t pos = f.heldout.at(0);
    const RunRecord manual = train(toy.subset(f.train), toy.subset(f.heldout), spec, cfg);
    cv_err = std::max(cv_err, std::abs(cv.scores.values[pos] - ref::sample_loss(manual.best_state, toy.row(pos),
                                                                                 toy.labels[pos])));
  }
  const bool ok = mismatches == 0 && celoss_err <= 1e-12 && cv_err <= 1e-12;
  return {ok, "trace mismatches=" + std::to_string(mismatches) + " celoss_err=" + fmt("%.2e", celoss_err) +
                  " cvloss_err=" + fmt("%.2e", cv_err)};
}

// ------------------------------------------------------------------ 3

Outcome gradient_check() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(seed);
    ModelSpec spec;
    spec.input_dim = 2 + gen() % 4;
    spec.num_classes = 2 + gen() % 3;
    const std::size_t depth = gen() % 3;
    for (std::size_t l = 0; l < depth; ++l) spec.hidden_dims.push_back(2 + gen() % 5);
    spec.activation = seed % 2 ? Activation::tanh : Activation::relu;
    const ModelState st = ref::random_state(spec, seed, 0.8);
    const Dataset ds = ref::random_dataset(5, spec.input_dim, spec.num_classes, seed + 1000);
    std::vector<std::size_t> rows(ds.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const auto lg = loss_and_grad(st, BatchView{ds.features, ds.dim, ds.labels, rows});
    const auto fd = ref::fd_gradient(st, ds, rows);
    for (std::size_t k = 0; k < fd.size(); ++k) {
      const double denom = std::max({std::abs(fd[k]), std::abs(lg.grad[k]), 1e-8});
      worst = std::max(worst, std::abs(fd[k] - lg.grad[k]) / denom);
    }
  }
  return {worst < 1e-4, "max relative error " + fmt("%.2e", worst)};
}

// ------------------------------------------------------------------ 4

Outcome sam_degeneracy() {
  ModelSpec spec;
  spec.input_dim = 4;
  spec.hidden_dims = {6};
  spec.num_classes = 3;
  spec.seed = 3;
  const Dataset ds = ref::random_dataset(12, 4, 3, 9);
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const GradientFn grad_fn = [&](std::span<const double> params, std::vector<double>& grad) {
    auto lg = loss_and_grad(spec, params, BatchView{ds.features, ds.dim, ds.labels, rows});
    grad = std::move(lg.grad);
    return lg.mean_loss;
  };
  OptimizerSpec sgd;
  sgd.learning_rate = 0.05;
  OptimizerSpec sam = sgd;
  sam.family = OptimizerFamily::sam;
  sam.sam_rho = 0.0;
  std::vector<double> p1 = init_model(spec).parameters;
  std::vector<double> p2 = p1;
  Optimizer o1(sgd, p1.size());
  Optimizer o2(sam, p2.size());
  double drift = 0.0;
  for (int step = 0; step < 10; ++step) {
    o1.step(p1, grad_fn);
    o2.step(p2, grad_fn);
    for (std::size_t k = 0; k < p1.size(); ++k) drift = std::max(drift, std::abs(p1[k] - p2[k]));
  }
  return {drift <= 1e-12, "max drift " + fmt("%.2e", drift)};
}

// ------------------------------------------------------------------ 5

Outcome correlation_suite() {
  std::mt19937_64 gen(55);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + gen() % 60;
    std::uniform_int_distribution<int> level(0, 2 + trial % 8);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(level(gen));
      y.push_back(trial % 3 == 0 ? std::uniform_real_distribution<double>(0, 1)(gen) : level(gen));
    }
    const auto rx = ref::midranks(x);
    const auto ry = ref::midranks(y);
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
      --trial;
      continue;
    }
    worst = std::max(worst, std::abs(spearman(x, y) - ref::pearson(rx, ry)));
  }
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4}, r{4, 3, 2, 1};
  const double ex = spearman(a, b);
  const double rev = spearman(a, r);
  std::vector<DifficultyScores> six(6);
  for (std::size_t k = 0; k < 6; ++k) {
    six[k].sf_name = "celoss";
    for (std::size_t i = 0; i < 10; ++i) {
      six[k].ids.push_back(i);
      six[k].values.push_back(std::uniform_real_distribution<double>(0, 1)(gen));
    }
  }
  const std::size_t pairs = pairwise_report(six).pairs.size();
  const bool ok = worst <= 1e-12 && std::abs(ex - 0.8) <= 1e-12 && std::abs(rev + 1.0) <= 1e-12 && pairs == 15;
  return {ok, "oracle err=" + fmt("%.2e", worst) + " example=" + fmt("%.15g", ex) + " reversal=" + fmt("%.15g", rev) +
                  " pairs=" + std::to_string(pairs)};
}

// ------------------------------------------------------------------ planted experiment (6, 7, 9, 10)

constexpr std::size_t kScoreRuns = 15;
constexpr std::size_t kCurriculumSeeds = 5;

struct Planted {
  LoadedData data;
  ModelSpec spec;
  TrainConfig cfg;
  std::vector<RunRecord> runs;
  std::vector<DifficultyScores> celoss;
  std::vector<DifficultyScores> cumacc;
};

Planted& planted() {
  static std::optional<Planted> cache;
  if (cache) return *cache;
  Planted p;
  PlantedSpec ps;
  ps.n_per_class = 200;
  ps.num_classes = 10;
  ps.dim = 10;
  ps.class_separation = 3.0;
  ps.noise_fraction = 0.1;
  ps.seed = 1;
  p.data.full = generate_planted(ps).dataset;
  p.data.full.name = "planted";
  p.data.split = stratified_split(p.data.full, 0.2, 0);
  p.spec.input_dim = ps.dim;
  p.spec.hidden_dims = {32};
  p.spec.num_classes = ps.num_classes;
  p.cfg.epochs = 20;
  p.cfg.batch_size = 16;
  p.cfg.optimizer.learning_rate = 0.01;
  p.runs.resize(kScoreRuns);
  for (std::size_t s = 0; s < kScoreRuns; ++s) {
    ModelSpec spec = p.spec;
    TrainConfig cfg = p.cfg;
    spec.seed = s;
    cfg.shuffle_seed = s;
    p.runs[s] = train(p.data.split.train, p.data.split.eval, spec, cfg);
    p.celoss.push_back(score_celoss(p.runs[s], p.data.split.train));
    p.cumacc.push_back(score_cumacc(p.runs[s].trace));
  }
  cache = std::move(p);
  return *cache;
}

Outcome ensemble_robustness() {
  Planted& p = planted();
  const std::vector<std::size_t> sizes{1, 5};
  std::string detail;
  bool ok = true;
  for (const auto* pool : {&p.celoss, &p.cumacc}) {
    const auto res = robustness_vs_ensemble(*pool, sizes, 3);
    ok = ok && res[1].mean_spearman > res[0].mean_spearman;
    detail += pool->front().sf_name + " size1=" + fmt("%.4f", res[0].mean_spearman) +
              " size5=" + fmt("%.4f", res[1].mean_spearman) + " ";
  }
  return {ok, detail};
}

struct CurriculumResults {
  std::vector<double> cl, acl, rcl, fused;
};

double best_accuracy(const RunRecord& r) {
  return *std::max_element(r.trace.eval_accuracy.begin(), r.trace.eval_accuracy.end());
}

CurriculumResults& curriculum_results() {
  static std::optional<CurriculumResults> cache;
  if (cache) return *cache;
  Planted& p = planted();
  const DifficultyOrdering easy = make_ordering(build_ensemble(p.celoss));
  const DifficultyOrdering hard = reverse_ordering(easy);
  const PacingSpec pacing{PacingFamily::exp, 0.2, 0.8};
  CurriculumResults out;
  for (std::size_t k = 0; k < kCurriculumSeeds; ++k) {
    ModelSpec spec = p.spec;
    TrainConfig cfg = p.cfg;
    spec.seed = 100 + k;
    cfg.shuffle_seed = 100 + k;
    const auto& tr = p.data.split.train;
    const auto& ev = p.data.split.eval;
    const CurriculumRun cl = curriculum_train(tr, ev, easy, pacing, spec, cfg);
    const CurriculumRun acl = curriculum_train(tr, ev, hard, pacing, spec, cfg);
    const CurriculumRun rcl = curriculum_train(tr, ev, random_ordering(tr.ids, 100 + k), pacing, spec, cfg);
    out.cl.push_back(best_accuracy(cl.record));
    out.acl.push_back(best_accuracy(acl.record));
    out.rcl.push_back(best_accuracy(rcl.record));
    const ModelState pair[] = {cl.record.best_state, acl.record.best_state};
    out.fused.push_back(late_fuse(pair, ev).accuracy);
  }
  cache = std::move(out);
  return *cache;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

Outcome curriculum_direction() {
  const CurriculumResults& r = curriculum_results();
  const double cl = mean(r.cl), acl = mean(r.acl), rcl = mean(r.rcl);
  // Equal group sizes: the pooled variance is the mean of the group variances.
  const double eps = std::sqrt((sample_variance(r.cl) + sample_variance(r.acl) + sample_variance(r.rcl)) / 3.0);
  const bool ok = cl > acl && rcl >= acl - eps && rcl <= cl + eps;
  return {ok, "CL=" + fmt("%.4f", cl) + " ACL=" + fmt("%.4f", acl) + " RCL=" + fmt("%.4f", rcl) +
                  " eps=" + fmt("%.4f", eps)};
}

// ------------------------------------------------------------------ 8

Outcome degenerate_curriculum() {
  PlantedSpec ps;
  ps.n_per_class = 30;
  ps.num_classes = 4;
  ps.dim = 4;
  ps.class_separation = 3.0;
  ps.seed = 8;
  const Dataset ds = generate_planted(ps).dataset;
  const Split split = stratified_split(ds, 0.2, 1);
  ModelSpec spec;
  spec.input_dim = 4;
  spec.hidden_dims = {8};
  spec.num_classes = 4;
  spec.seed = 4;
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 7;
  cfg.shuffle_seed = 4;
  const DifficultyOrdering ord = random_ordering(split.train.ids, 2);
  const RunRecord base = train(split.train, split.eval, spec, cfg);
  std::size_t differing = 0;
  for (PacingFamily fam : kAllPacingFamilies) {
    const CurriculumRun cl = curriculum_train(split.train, split.eval, ord, {fam, 1.0, 0.8}, spec, cfg);
    for (std::size_t k = 0; k < base.final_state.parameters.size(); ++k) {
      if (std::bit_cast<std::uint64_t>(cl.record.final_state.parameters[k]) !=
          std::bit_cast<std::uint64_t>(base.final_state.parameters[k])) {
        ++differing;
      }
    }
  }
  return {differing == 0, std::to_string(differing) + " differing parameters over 4 families"};
}

// ------------------------------------------------------------------ 9

Outcome pd_granularity() {
  Planted& p = planted();
  ProbeSpec probe;
  probe.knn_k = 30;
  const PdResult pd = score_pd(p.runs[0], p.data.split.train, probe);
  const double l = static_cast<double>(pd.probes);
  std::size_t off_grid = 0;
  for (double v : pd.scores.values) {
    const double k = v * l;
    if (std::abs(k - std::round(k)) > 1e-12 || v < 0.0 || v > 1.0) ++off_grid;
  }
  const auto g_pd = granularity(pd.scores);
  const auto g_ca = granularity(p.cumacc[0]);
  const std::size_t t = p.runs[0].trace.epochs;
  const bool ok = off_grid == 0 && g_pd.unique_values <= pd.probes + 1 && g_ca.unique_values <= t + 1;
  return {ok, "L=" + std::to_string(pd.probes) + " pd_unique=" + std::to_string(g_pd.unique_values) +
                  " pd_max_bin=" + std::to_string(g_pd.max_bin) + " cumacc_unique=" +
                  std::to_string(g_ca.unique_values) + " (T=" + std::to_string(t) + ")"};
}

// ------------------------------------------------------------------ 10

Outcome late_fusion() {
  Planted& p = planted();
  const Dataset& ev = p.data.split.eval;
  std::vector<ModelState> members;
  for (std::size_t s = 0; s < 3; ++s) members.push_back(p.runs[s].best_state);
  const FusionResult f = late_fuse(members, ev);
  double simplex_err = 0.0;
  const std::size_t c = p.spec.num_classes;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double v = f.probs[i * c + j];
      if (v < 0.0) simplex_err = std::max(simplex_err, -v);
      total += v;
    }
    simplex_err = std::max(simplex_err, std::abs(total - 1.0));
  }
  const std::vector<ModelState> copies(4, p.runs[0].best_state);
  const double copy_acc = late_fuse(copies, ev).accuracy;
  const double single_acc = evaluate(p.runs[0].best_state, ev).accuracy;

  const CurriculumResults& r = curriculum_results();
  std::vector<double> pair_mean;
  for (std::size_t k = 0; k < r.cl.size(); ++k) pair_mean.push_back((r.cl[k] + r.acl[k]) / 2.0);
  const double fused = mean(r.fused), individual = mean(pair_mean);
  const bool ok = simplex_err <= 1e-9 && copy_acc == single_acc && fused >= individual;
  return {ok, "simplex_err=" + fmt("%.2e", simplex_err) + " copies=" + fmt("%.4f", copy_acc) + "/" +
                  fmt("%.4f", single_acc) + " fused(CL+ACL)=" + fmt("%.4f", fused) + " mean(CL,ACL)=" +
                  fmt("%.4f", individual)};
}

// ------------------------------------------------------------------ 11

std::string sdcl_binary;

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_text_file(e.path());
  }
  return files;
}

int sh(const std::string& cmd, std::string* first_line = nullptr) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return -1;
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  if (first_line) *first_line = out.substr(0, out.find('\n'));
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_reproducibility() {
  if (sdcl_binary.empty()) return {false, "no sdcl binary given (--sdcl PATH)"};
  const fs::path work = fs::temp_directory_path() / "sdcl_acceptance_cli";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path out = work / "out";
  const std::string base =
      "[dataset]\nn_per_class = 20\nnum_classes = 4\ndim = 4\nseparation = 3.0\nnoise = 0.1\n"
      "[model]\nhidden = [8]\n[train]\nepochs = 6\nbatch_size = 8\nlr = 0.05\n"
      "[scoring]\nk = 3\nratios = [0.3, 0.6]\nsubsets = 2\nknn_k = 5\n";
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(work / name) << base << text;
    return (work / name).string();
  };
  const std::string exp = write("exp.cfg", "");
  const std::string bin = "\"" + sdcl_binary + "\"";
  const std::string o = " --out \"" + out.string() + "\"";

  const auto pipeline = [&](const std::string& extra) -> bool {
    std::string digest;
    if (sh(bin + " train -c " + exp + o + extra, &digest) != 0) return false;
    const std::string teacher = digest;
    const std::string tt = write("tt.cfg", "teacher = \"" + teacher + "\"\n");
    std::vector<std::string> score_files;
    for (const char* sf : {"cumacc", "fit", "celoss", "cvloss", "cscore", "pd", "tt"}) {
      const std::string& cfg = std::string(sf) == "tt" ? tt : exp;
      if (sh(bin + " score --sf " + sf + " -c " + cfg + o + extra, &digest) != 0) return false;
      score_files.push_back("\"" + (out / digest / "scores.csv").string() + "\"");
    }
    const std::string ord = write("order.cfg", "[order]\nscores = " + score_files[2] + "\n");
    if (sh(bin + " order -c " + ord + o + extra, &digest) != 0) return false;
    const std::string ordering = (out / digest / "ordering.txt").string();
    const std::string cur =
        write("cur.cfg", "[curriculum]\nvariant = cl\nordering = \"" + ordering + "\"\npacing = [exp, linear]\n");
    if (sh(bin + " curriculum -c " + cur + o + extra, &digest) != 0) return false;
    const std::string cl_run = digest.substr(0, digest.find(' '));
    std::string list;
    for (std::size_t i = 0; i < score_files.size(); ++i) list += (i ? ", " : "") + score_files[i];
    const std::string an = write("an.cfg", "[analyze]\nscores = [" + list + "]\n");
    if (sh(bin + " analyze -c " + an + o + extra) != 0) return false;
    const std::string fu = write("fu.cfg", "[fuse]\nruns = [\"" + cl_run + "\"]\n");
    if (sh(bin + " fuse -c " + fu + o + extra) != 0) return false;
    return true;
  };

  if (!pipeline("")) return {false, "first pipeline run failed"};
  const auto first = snapshot(out);
  fs::remove_all(out);
  if (!pipeline("")) return {false, "second pipeline run failed"};
  const auto second = snapshot(out);
  if (!pipeline(" --force")) return {false, "forced pipeline run failed"};
  const auto forced = snapshot(out);
  std::size_t differing = 0;
  for (const auto* other : {&second, &forced}) {
    if (other->size() != first.size()) ++differing;
    for (const auto& [name, bytes] : first) {
      const auto it = other->find(name);
      if (it == other->end() || it->second != bytes) ++differing;
    }
  }
  fs::remove_all(work);
  return {differing == 0, std::to_string(first.size()) + " files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--sdcl" && i + 1 < argc) {
      sdcl_binary = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: %s [--sdcl PATH] [--only 1,2,...]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"pacing suite", pacing_suite},
      {"scoring oracles", scoring_oracles},
      {"gradient check", gradient_check},
      {"sam degeneracy", sam_degeneracy},
      {"correlation suite", correlation_suite},
      {"ensemble robustness trend", ensemble_robustness},
      {"cl vs acl directionality", curriculum_direction},
      {"degenerate curriculum identity", degenerate_curriculum},
      {"pd bounds and granularity", pd_granularity},
      {"late fusion", late_fusion},
      {"cli reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %-32s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
