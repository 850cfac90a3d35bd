#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdcl {

/// Labelled samples. `ids` are the stable sample identities: 0..N-1 in
/// generation/file order for a root dataset; splits and subsets keep the
/// ids of their parent, in ascending order.
struct Dataset {
  std::string name;
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;  // size() x dim, row-major
  std::vector<int> labels;
  std::vector<std::size_t> ids;
  std::vector<std::string> label_names;  // optional; index = label

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }

  /// Number of samples per class, indexed by label.
  std::vector<std::size_t> class_counts() const;

  /// Rows at the given positions, in the given order.
  Dataset subset(std::span<const std::size_t> positions) const;

  /// Throws InputError if the fields disagree in size or labels are out of range.
  void validate() const;
};

struct PlantedSpec {
  std::size_t n_per_class = 100;
  std::size_t num_classes = 10;
  std::size_t dim = 10;
  double class_separation = 4.0;
  double noise_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedData {
  Dataset dataset;
  std::vector<std::size_t> planted_hard;  // ids whose label was flipped, ascending
  std::vector<std::vector<double>> centers;
};

/// Isotropic unit-variance Gaussian clusters. Class c is centred at
/// sign * (class_separation / sqrt 2) * e_axis with axis = c mod dim and sign
/// negative for c >= dim, so every pair of centres is at least
/// class_separation apart (requires num_classes <= 2 * dim). Samples are
/// interleaved: id j * num_classes + c is the j-th draw of class c. Exactly
/// floor(noise_fraction * N) ids, drawn without replacement, get their
/// label replaced by a uniformly chosen different class.
PlantedData generate_planted(const PlantedSpec& spec);

struct CsvSchema {
  std::string label_column = "label";
  /// When set, only these labels are accepted, indexed in this order.
  std::optional<std::vector<std::string>> labels;
};

/// Reads a UTF-8, comma-separated file with a header row. Every column
/// except `label_column` is a numeric feature. No quoting; surrounding
/// blanks are trimmed. Labels are indexed by first occurrence unless the
/// schema fixes them.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
Dataset parse_csv(const std::string& text, const CsvSchema& schema = {}, std::string name = "csv");

struct Split {
  Dataset train;
  Dataset eval;
};

/// Per class, round(eval_fraction * count) randomly chosen samples go to eval.
Split stratified_split(const Dataset& ds, double eval_fraction, std::uint64_t seed);

struct KFoldSpec {
  std::size_t k = 3;
  std::uint64_t seed = 0;
};

struct Fold {
  std::vector<std::size_t> train;    // row positions, ascending
  std::vector<std::size_t> heldout;  // row positions, ascending
};

/// Random k-fold partition of row positions. Fold sizes differ by at most
/// one; the first N mod k folds get the extra sample.
std::vector<Fold> kfold_partitions(std::size_t n, const KFoldSpec& spec);
inline std::vector<Fold> kfold_partitions(const Dataset& ds, const KFoldSpec& spec) {
  return kfold_partitions(ds.size(), spec);
}

}  // namespace sdcl
