#include "sdcl/scores.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "sdcl/digest.hpp"
#include "sdcl/error.hpp"
#include "sdcl/rng.hpp"

namespace sdcl {

void DifficultyScores::validate() const {
  if (ids.size() != values.size()) throw InputError("scores '" + sf_name + "': ids and values differ in length");
  std::unordered_set<std::size_t> seen;
  seen.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.insert(ids[i]).second) {
      throw InputError("scores '" + sf_name + "': duplicate id " + std::to_string(ids[i]));
    }
    if (!std::isfinite(values[i])) {
      throw InputError("scores '" + sf_name + "': non-finite value for id " + std::to_string(ids[i]));
    }
  }
}

std::string DifficultyScores::digest() const {
  std::uint64_t h = fnv1a64(sf_name);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    h = fnv1a64(std::to_string(ids[i]) + ":" + to_hex(std::bit_cast<std::uint64_t>(values[i])) + ";", h);
  }
  return to_hex(h);
}

std::string DifficultyOrdering::digest() const {
  std::uint64_t h = kFnvOffset;
  for (std::size_t id : order) h = fnv1a64(std::to_string(id) + "\n", h);
  return to_hex(h);
}

DifficultyScores build_ensemble(std::span<const DifficultyScores> members) {
  if (members.empty()) throw InputError("ensemble needs at least one member");
  const DifficultyScores& first = members.front();
  first.validate();
  std::unordered_map<std::size_t, std::size_t> index;
  index.reserve(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) index.emplace(first.ids[i], i);

  DifficultyScores out;
  out.sf_name = first.sf_name;
  out.dataset = first.dataset;
  out.transform = first.transform;
  out.ids = first.ids;
  // Column j collects every member's value for id j; summing each column in
  // sorted order makes the mean independent of member order, bit for bit.
  std::vector<std::vector<double>> columns(first.size());
  for (const DifficultyScores& m : members) {
    m.validate();
    if (m.sf_name != first.sf_name) {
      throw InputError("ensemble members mix scoring functions '" + first.sf_name + "' and '" + m.sf_name + "'");
    }
    if (m.size() != first.size()) throw InputError("ensemble members cover different id sets");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto it = index.find(m.ids[i]);
      if (it == index.end()) throw InputError("ensemble members cover different id sets");
      columns[it->second].push_back(m.values[i]);
    }
    out.provenance.insert(out.provenance.end(), m.provenance.begin(), m.provenance.end());
    for (std::size_t id : m.flagged) {
      if (std::find(out.flagged.begin(), out.flagged.end(), id) == out.flagged.end()) out.flagged.push_back(id);
    }
  }
  const double n = static_cast<double>(members.size());
  out.values.reserve(columns.size());
  for (auto& col : columns) {
    if (col.size() != members.size()) throw InputError("ensemble members cover different id sets");
    std::sort(col.begin(), col.end());
    out.values.push_back(std::accumulate(col.begin(), col.end(), 0.0) / n);
  }
  std::sort(out.flagged.begin(), out.flagged.end());
  return out;
}

DifficultyOrdering make_ordering(const DifficultyScores& scores) {
  scores.validate();
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores.values[a] != scores.values[b]) return scores.values[a] < scores.values[b];
    return scores.ids[a] < scores.ids[b];
  });
  DifficultyOrdering out;
  out.order.reserve(idx.size());
  for (std::size_t i : idx) out.order.push_back(scores.ids[i]);
  out.source = "scores:" + scores.digest();
  return out;
}

DifficultyOrdering reverse_ordering(const DifficultyOrdering& ordering) {
  DifficultyOrdering out;
  out.order.assign(ordering.order.rbegin(), ordering.order.rend());
  out.source = "reversed:" + ordering.digest();
  return out;
}

DifficultyOrdering random_ordering(std::span<const std::size_t> ids, std::uint64_t seed) {
  std::vector<std::size_t> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  SplitMix64 rng = make_stream(seed, {stream_tag::kRandomOrdering});
  const auto perm = random_permutation(sorted.size(), rng);
  DifficultyOrdering out;
  out.order.reserve(sorted.size());
  for (std::size_t p : perm) out.order.push_back(sorted[p]);
  out.source = "random:" + std::to_string(seed);
  return out;
}

}  // namespace sdcl
