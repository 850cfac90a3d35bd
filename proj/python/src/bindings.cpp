#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sdcl/analysis.hpp"
#include "sdcl/artifacts.hpp"
#include "sdcl/checkpoint.hpp"
#include "sdcl/curriculum.hpp"
#include "sdcl/dataset.hpp"
#include "sdcl/error.hpp"
#include "sdcl/model.hpp"
#include "sdcl/optimizer.hpp"
#include "sdcl/scores.hpp"
#include "sdcl/scoring.hpp"
#include "sdcl/training.hpp"

namespace py = pybind11;
using namespace sdcl;

namespace {

Dataset make_dataset(std::vector<std::vector<double>> rows, std::vector<int> labels, std::size_t num_classes,
                     std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  ds.dim = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != ds.dim) throw InputError("all rows must have the same length");
    ds.features.insert(ds.features.end(), r.begin(), r.end());
  }
  if (num_classes == 0) {
    for (int y : labels) num_classes = std::max<std::size_t>(num_classes, static_cast<std::size_t>(y) + 1);
  }
  ds.num_classes = num_classes;
  ds.labels = std::move(labels);
  for (std::size_t i = 0; i < ds.labels.size(); ++i) ds.ids.push_back(i);
  ds.validate();
  return ds;
}

std::vector<std::vector<double>> rows_of(const Dataset& ds) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < ds.size(); ++i) out.emplace_back(ds.row(i).begin(), ds.row(i).end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_sdcl, m) {
  m.doc() = "Sample difficulty scoring and curriculum learning";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());

  py::enum_<Activation>(m, "Activation").value("relu", Activation::relu).value("tanh", Activation::tanh);
  py::enum_<OptimizerFamily>(m, "OptimizerFamily")
      .value("sgd_momentum", OptimizerFamily::sgd_momentum)
      .value("adam", OptimizerFamily::adam)
      .value("sam", OptimizerFamily::sam);
  py::enum_<PacingFamily>(m, "PacingFamily")
      .value("log", PacingFamily::log)
      .value("root", PacingFamily::root)
      .value("linear", PacingFamily::linear)
      .value("exp", PacingFamily::exp);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("rows"), py::arg("labels"), py::arg("num_classes") = 0,
           py::arg("name") = "data")
      .def_readwrite("name", &Dataset::name)
      .def_readonly("dim", &Dataset::dim)
      .def_readonly("num_classes", &Dataset::num_classes)
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("ids", &Dataset::ids)
      .def_property_readonly("rows", &rows_of)
      .def("class_counts", &Dataset::class_counts)
      .def("subset", [](const Dataset& d, std::vector<std::size_t> pos) { return d.subset(pos); })
      .def("__len__", &Dataset::size);

  py::class_<PlantedSpec>(m, "PlantedSpec")
      .def(py::init<>())
      .def_readwrite("n_per_class", &PlantedSpec::n_per_class)
      .def_readwrite("num_classes", &PlantedSpec::num_classes)
      .def_readwrite("dim", &PlantedSpec::dim)
      .def_readwrite("class_separation", &PlantedSpec::class_separation)
      .def_readwrite("noise_fraction", &PlantedSpec::noise_fraction)
      .def_readwrite("seed", &PlantedSpec::seed);
  py::class_<PlantedData>(m, "PlantedData")
      .def_readonly("dataset", &PlantedData::dataset)
      .def_readonly("planted_hard", &PlantedData::planted_hard)
      .def_readonly("centers", &PlantedData::centers);
  m.def("generate_planted", &generate_planted);
  m.def("load_csv", [](const std::filesystem::path& p) { return load_csv(p); });

  py::class_<Split>(m, "Split").def_readonly("train", &Split::train).def_readonly("eval", &Split::eval);
  m.def("stratified_split", &stratified_split, py::arg("dataset"), py::arg("eval_fraction"), py::arg("seed") = 0);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init<>())
      .def_readwrite("input_dim", &ModelSpec::input_dim)
      .def_readwrite("hidden_dims", &ModelSpec::hidden_dims)
      .def_readwrite("num_classes", &ModelSpec::num_classes)
      .def_readwrite("activation", &ModelSpec::activation)
      .def_readwrite("seed", &ModelSpec::seed)
      .def("parameter_count", &ModelSpec::parameter_count);
  py::class_<ModelState>(m, "ModelState")
      .def_readonly("spec", &ModelState::spec)
      .def_readwrite("parameters", &ModelState::parameters)
      .def("predict_proba", [](const ModelState& s, std::vector<double> x) { return predict_proba(s, x); });
  m.def("init_model", &init_model);
  m.def("save_state", &save_state);
  m.def("load_state", &load_state);

  py::class_<OptimizerSpec>(m, "OptimizerSpec")
      .def(py::init<>())
      .def_readwrite("family", &OptimizerSpec::family)
      .def_readwrite("learning_rate", &OptimizerSpec::learning_rate)
      .def_readwrite("momentum", &OptimizerSpec::momentum)
      .def_readwrite("adam_beta1", &OptimizerSpec::adam_beta1)
      .def_readwrite("adam_beta2", &OptimizerSpec::adam_beta2)
      .def_readwrite("adam_eps", &OptimizerSpec::adam_eps)
      .def_readwrite("sam_rho", &OptimizerSpec::sam_rho);
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("optimizer", &TrainConfig::optimizer)
      .def_readwrite("shuffle_seed", &TrainConfig::shuffle_seed);

  py::class_<TrainingTrace>(m, "TrainingTrace")
      .def_readonly("ids", &TrainingTrace::ids)
      .def_readonly("epochs", &TrainingTrace::epochs)
      .def_readonly("eval_accuracy", &TrainingTrace::eval_accuracy)
      .def_readonly("train_accuracy", &TrainingTrace::train_accuracy)
      .def_readonly("best_epoch", &TrainingTrace::best_epoch)
      .def("correct_at", &TrainingTrace::correct_at)
      .def("loss_at", &TrainingTrace::loss_at);
  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("trace", &RunRecord::trace)
      .def_readonly("best_state", &RunRecord::best_state)
      .def_readonly("final_state", &RunRecord::final_state)
      .def_readonly("config_digest", &RunRecord::config_digest);
  m.def("train", &train, py::arg("train_set"), py::arg("eval_set"), py::arg("spec"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("evaluate_accuracy", [](const ModelState& s, const Dataset& d) { return evaluate(s, d).accuracy; });

  py::class_<DifficultyScores>(m, "DifficultyScores")
      .def(py::init<>())
      .def_readwrite("sf_name", &DifficultyScores::sf_name)
      .def_readwrite("ids", &DifficultyScores::ids)
      .def_readwrite("values", &DifficultyScores::values)
      .def_readonly("flagged", &DifficultyScores::flagged)
      .def_readonly("provenance", &DifficultyScores::provenance)
      .def("digest", &DifficultyScores::digest);
  py::class_<DifficultyOrdering>(m, "DifficultyOrdering")
      .def_readonly("order", &DifficultyOrdering::order)
      .def_readonly("source", &DifficultyOrdering::source);
  m.def("read_scores", &read_scores);
  m.def("write_scores", &write_scores);

  m.def("scoring_function_names", &scoring_function_names);
  m.def("score_cumacc", &score_cumacc);
  m.def("score_fit", &score_fit);
  m.def("score_celoss", py::overload_cast<const ModelState&, const Dataset&>(&score_celoss));
  m.def(
      "score_cvloss",
      [](const Dataset& ds, const ModelSpec& spec, const TrainConfig& cfg, std::size_t k, std::uint64_t seed) {
        return score_cvloss(ds, spec, cfg, KFoldSpec{k, seed}).scores;
      },
      py::arg("dataset"), py::arg("spec"), py::arg("config"), py::arg("k") = 3, py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "score_pd",
      [](const ModelState& s, const Dataset& ds, std::size_t knn_k) {
        ProbeSpec p;
        p.knn_k = knn_k;
        return score_pd(s, ds, p).scores;
      },
      py::arg("state"), py::arg("dataset"), py::arg("knn_k") = 30);
  m.def("build_ensemble", [](const std::vector<DifficultyScores>& m) { return build_ensemble(m); });
  m.def("make_ordering", &make_ordering);
  m.def("reverse_ordering", &reverse_ordering);
  m.def("random_ordering", [](std::vector<std::size_t> ids, std::uint64_t seed) { return random_ordering(ids, seed); });

  py::class_<PacingSpec>(m, "PacingSpec")
      .def(py::init([](PacingFamily f, double b, double a) { return PacingSpec{f, b, a}; }),
           py::arg("family") = PacingFamily::linear, py::arg("b") = 0.2, py::arg("a") = 0.8)
      .def_readwrite("family", &PacingSpec::family)
      .def_readwrite("b", &PacingSpec::b)
      .def_readwrite("a", &PacingSpec::a);
  m.def("pacing_fraction", &pacing_fraction, py::arg("spec"), py::arg("t"), py::arg("total_iterations"));
  py::class_<CurriculumRun>(m, "CurriculumRun")
      .def_readonly("record", &CurriculumRun::record)
      .def_readonly("total_iterations", &CurriculumRun::total_iterations)
      .def_readonly("class_balanced", &CurriculumRun::class_balanced)
      .def_property_readonly("subset_sizes", [](const CurriculumRun& r) {
        std::vector<std::size_t> out;
        for (const auto& e : r.schedule) out.push_back(e.size);
        return out;
      });
  m.def("curriculum_train", &curriculum_train, py::arg("train_set"), py::arg("eval_set"), py::arg("ordering"),
        py::arg("pacing"), py::arg("spec"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def("spearman", [](const std::vector<double>& a, const std::vector<double>& b) { return spearman(a, b); });
  m.def("spearman_scores", py::overload_cast<const DifficultyScores&, const DifficultyScores&>(&spearman));
  m.def("late_fuse_accuracy",
        [](const std::vector<ModelState>& states, const Dataset& ds) { return late_fuse(states, ds).accuracy; });
}
