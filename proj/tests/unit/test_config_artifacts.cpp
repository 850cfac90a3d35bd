#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "reference.hpp"
#include "sdcl/artifacts.hpp"
#include "sdcl/checkpoint.hpp"
#include "sdcl/config.hpp"
#include "sdcl/error.hpp"
#include "sdcl/experiment.hpp"

using namespace sdcl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sdcl_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config values") {
  CHECK(parse_config_value("true").kind == ConfigValue::Kind::boolean);
  CHECK(parse_config_value("42").i == 42);
  CHECK(parse_config_value("-3").i == -3);
  CHECK(parse_config_value("0.25").r == 0.25);
  CHECK(parse_config_value("1e-3").kind == ConfigValue::Kind::real);
  CHECK(parse_config_value("\"a # b\"").s == "a # b");
  CHECK(parse_config_value("relu").s == "relu");
  const ConfigValue l = parse_config_value("[1, 2.5, x, [true]]");
  REQUIRE(l.kind == ConfigValue::Kind::list);
  REQUIRE(l.items.size() == 4);
  CHECK(l.items[3].items[0].b);
  CHECK(l.canonical() == "[1, 2.5, \"x\", [true]]");
  CHECK(ConfigValue::real(2.0).canonical() == "2.0");
  CHECK(ConfigValue::real(0.1).canonical() == "0.10000000000000001");
  CHECK_THROWS_AS(parse_config_value("[1, 2"), ParseError);
}

TEST_CASE("config parsing") {
  const Config c = Config::parse(
      "# experiment\n"
      "[train]\n"
      "epochs = 12   # trailing comment\n"
      "lr = 0.05\n"
      "\n"
      "[model]\n"
      "hidden = [16, 8]\n"
      "activation = tanh\n");
  CHECK(c.get_int("train", "epochs", 0) == 12);
  CHECK(c.get_real("train", "lr", 0) == 0.05);
  CHECK(c.get_real("train", "epochs", 0) == 12.0);
  CHECK(c.get_size_list("model", "hidden", {}) == std::vector<std::size_t>{16, 8});
  CHECK(c.get_string("model", "activation", "") == "tanh");
  CHECK(c.get_int("train", "missing", 7) == 7);
  CHECK(c.get_real_list("train", "lr", {}) == std::vector<double>{0.05});
  CHECK_THROWS_AS(c.get_int("model", "activation", 0), ConfigError);
  CHECK_THROWS_AS(c.get_uint("train", "lr", 0), ConfigError);

  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      Config::parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("[a]\nx = 1\n[b\n") == 3);
  CHECK(line_of("[a]\nx 1\n") == 2);
  CHECK(line_of("x = 1\n") == 1);
  CHECK(line_of("[a]\nx = 1\nx = 2\n") == 3);
  CHECK(line_of("[a]\nx = [1,\n") == 2);
}

TEST_CASE("config overrides and canonical form") {
  Config a = Config::parse("[train]\nlr = 0.1\nepochs = 3\n[model]\nseed = 1\n");
  Config b = Config::parse("[model]\nseed   =   1\n\n[train]\nepochs=3\nlr=0.1\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.digest() == b.digest());
  CHECK(a.canonical({"model"}) == "[model]\nseed = 1\n");
  a.apply_override("train.epochs=4");
  CHECK(a.get_int("train", "epochs", 0) == 4);
  CHECK(a.digest() != b.digest());
  CHECK_THROWS_AS(a.apply_override("epochs=4"), ConfigError);
  CHECK_THROWS_AS(a.apply_override("train.epochs"), ConfigError);
}

TEST_CASE("experiment config resolves defaults") {
  const auto ec = ExperimentConfig::from(Config::parse("[train]\nepochs = 50\n"));
  const auto plain = ExperimentConfig::from(Config::parse(""));
  const LoadedData d = ec.load_data();
  // Spelling out a default leaves the digest unchanged.
  CHECK(ec.train_digest(d) == plain.train_digest(plain.load_data()));
  CHECK_THROWS_AS(ExperimentConfig::from(Config::parse("[train]\nepoch = 5\n")), ConfigError);

  auto seeded = ec;
  seeded.override_seed(9);
  CHECK(seeded.model.seed == 9);
  CHECK(seeded.train.shuffle_seed == 9);
  CHECK(seeded.train_digest(d) != ec.train_digest(d));
}

TEST_CASE("trace files round trip") {
  std::mt19937_64 gen(1);
  TrainingTrace t = ref::random_trace(5, 4, gen);
  for (std::size_t k = 0; k < t.loss.size(); ++k) t.loss[k] = 0.1 * static_cast<double>(k) + 1e-17;
  t.eval_accuracy = {0.1, 0.7, 0.7, 0.3};
  t.best_epoch = 2;
  RunRecord run;
  run.trace = t;
  run.config_digest = "abc";
  const TrainingTrace back = parse_trace(trace_correct_csv(t), trace_loss_csv(t), run_summary_json(run));
  CHECK(back.ids == t.ids);
  CHECK(back.correct == t.correct);
  CHECK(back.loss == t.loss);
  CHECK(back.eval_accuracy == t.eval_accuracy);
  CHECK(back.best_epoch == 2);
  CHECK(trace_correct_csv(t).rfind("id,e1,e2,e3,e4\n", 0) == 0);
}

TEST_CASE("run directory") {
  const fs::path dir = scratch("run");
  PlantedSpec p;
  p.n_per_class = 5;
  p.num_classes = 2;
  const Dataset ds = generate_planted(p).dataset;
  ModelSpec spec;
  spec.input_dim = ds.dim;
  spec.num_classes = 2;
  TrainConfig cfg;
  cfg.epochs = 3;
  const RunRecord run = train(ds, ds, spec, cfg);
  write_run_files(dir, run);
  const TrainingTrace back = read_trace(dir);
  CHECK(back.correct == run.trace.correct);
  CHECK(back.loss == run.trace.loss);
  CHECK(load_state(dir / "best.ckpt").parameters == run.best_state.parameters);
  const auto summary = nlohmann::json::parse(read_text_file(dir / "summary.json"));
  CHECK(summary.at("config_digest") == run.config_digest);
  CHECK(summary.at("epochs") == 3);
  fs::remove_all(dir);
}

TEST_CASE("scores files round trip") {
  const fs::path dir = scratch("scores");
  DifficultyScores s;
  s.sf_name = "fit";
  s.dataset = "toy";
  s.provenance = {"r1", "r2"};
  s.transform = "t";
  s.ids = {3, 1, 2};
  s.values = {0.1, 1.0 / 3.0, 1.2};
  s.flagged = {1};
  write_scores(dir / "scores.csv", s);
  const DifficultyScores back = read_scores(dir / "scores.csv");
  CHECK(back.ids == s.ids);
  CHECK(back.values == s.values);
  CHECK(back.sf_name == "fit");
  CHECK(back.provenance == s.provenance);
  CHECK(back.flagged == s.flagged);
  CHECK(back.digest() == s.digest());
  CHECK(scores_csv(s).rfind("id,score\n", 0) == 0);
  CHECK_THROWS_AS(parse_scores("id,score\n1,x\n", scores_sidecar_json(s)), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("ordering files round trip") {
  const fs::path dir = scratch("ordering");
  DifficultyOrdering o;
  o.order = {4, 0, 2};
  o.source = "scores:x";
  write_ordering(dir / "ordering.txt", o);
  const DifficultyOrdering back = read_ordering(dir / "ordering.txt");
  CHECK(back.order == o.order);
  CHECK(back.source == o.source);
  CHECK(parse_ordering(ordering_text(o)).order == o.order);
  CHECK_THROWS_AS(parse_ordering("1\n2\n1\n"), InputError);
  fs::remove_all(dir);
}

TEST_CASE("matrix csv") {
  const std::vector<std::string> labels{"a", "b"};
  const std::vector<double> m{1.0, 0.5, 0.5, 1.0};
  CHECK(matrix_csv(labels, m) == "label,a,b\na,1,0.5\nb,0.5,1\n");
}
