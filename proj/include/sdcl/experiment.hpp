#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdcl/config.hpp"
#include "sdcl/curriculum.hpp"
#include "sdcl/dataset.hpp"
#include "sdcl/model.hpp"
#include "sdcl/scoring.hpp"
#include "sdcl/training.hpp"

namespace sdcl {

struct DatasetConfig {
  std::string source = "planted";  // planted | csv
  std::string path;
  std::string label_column = "label";
  PlantedSpec planted;
  double eval_fraction = 0.2;
  std::uint64_t split_seed = 0;
};

struct ScoringConfig {
  std::string sf;
  std::optional<std::string> run;      // run digest to score; defaults to this config's train run
  std::optional<std::string> teacher;  // run digest of the transfer teacher
  KFoldSpec kfold;
  CScoreSpec cscore;
  SvcConfig svc;
  ProbeSpec probe;
};

struct CurriculumConfig {
  std::string variant = "cl";  // cl | acl | rcl
  std::optional<std::string> ordering;
  std::optional<std::uint64_t> seed;
  std::vector<PacingFamily> families{PacingFamily::linear};
  double b = 0.2;
  std::vector<double> saturations{0.8};
};

struct LoadedData {
  Dataset full;
  Split split;
  std::string description;  // stable text identifying the data and split
};

/// Typed view of an experiment configuration file. Sections: [dataset],
/// [model], [train], [scoring], [curriculum], [ensemble], [order],
/// [analyze], [fuse], [output]. Unknown keys in the typed sections are
/// rejected.
struct ExperimentConfig {
  Config raw;
  DatasetConfig dataset;
  ModelSpec model;  // input_dim / num_classes are filled from the data
  TrainConfig train;
  ScoringConfig scoring;
  CurriculumConfig curriculum;

  static ExperimentConfig from(const Config& cfg);

  /// Sets both the model initialisation seed and the shuffle seed.
  void override_seed(std::uint64_t seed);

  LoadedData load_data() const;
  /// Model spec completed with the data's dimensions.
  ModelSpec model_for(const Dataset& ds) const;
  /// Digest of the baseline run for this data, model and training setup.
  std::string train_digest(const LoadedData& data) const;
};

}  // namespace sdcl
