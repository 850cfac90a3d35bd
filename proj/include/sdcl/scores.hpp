#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sdcl {

/// Per-sample difficulty. Every scoring function follows the same
/// direction: lower values mean easier samples.
struct DifficultyScores {
  std::string sf_name;
  std::string dataset;
  std::vector<std::string> provenance;  // digests of the runs that produced the values
  std::string transform;                // how raw statistics were mapped to difficulty
  std::vector<std::size_t> ids;
  std::vector<double> values;
  std::vector<std::size_t> flagged;     // ids with a fallback value (e.g. C-score coverage)

  std::size_t size() const noexcept { return ids.size(); }
  /// Throws InputError on duplicate ids, size mismatch, or non-finite values.
  void validate() const;
  /// Content digest over (sf_name, ids, values).
  std::string digest() const;
};

/// Permutation of sample ids, easiest first.
struct DifficultyOrdering {
  std::vector<std::size_t> order;
  std::string source;

  std::string digest() const;
};

/// Arithmetic mean of member values per id. Members must share the scoring
/// function name and the id set; the result follows the first member's id
/// order.
DifficultyScores build_ensemble(std::span<const DifficultyScores> members);

/// Stable sort by (value, id).
DifficultyOrdering make_ordering(const DifficultyScores& scores);
DifficultyOrdering reverse_ordering(const DifficultyOrdering& ordering);
/// Seeded shuffle of `ids` (taken in ascending order first).
DifficultyOrdering random_ordering(std::span<const std::size_t> ids, std::uint64_t seed);

}  // namespace sdcl
