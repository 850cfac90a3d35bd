#include "sdcl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "sdcl/error.hpp"
#include "sdcl/rng.hpp"

namespace sdcl {

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> positions) const {
  Dataset out;
  out.name = name;
  out.dim = dim;
  out.num_classes = num_classes;
  out.label_names = label_names;
  out.features.reserve(positions.size() * dim);
  out.labels.reserve(positions.size());
  out.ids.reserve(positions.size());
  for (std::size_t p : positions) {
    if (p >= size()) throw InputError("subset position out of range");
    const auto r = row(p);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(labels[p]);
    out.ids.push_back(ids[p]);
  }
  return out;
}

void Dataset::validate() const {
  if (ids.size() != labels.size() || features.size() != labels.size() * dim) {
    throw InputError("dataset fields have inconsistent sizes");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw InputError("dataset label " + std::to_string(y) + " out of range");
    }
  }
}

void PlantedSpec::validate() const {
  if (n_per_class == 0) throw ConfigError("n_per_class must be positive");
  if (num_classes < 2) throw ConfigError("num_classes must be at least 2");
  if (dim == 0) throw ConfigError("dim must be positive");
  if (num_classes > 2 * dim) throw ConfigError("planted generator needs num_classes <= 2 * dim");
  if (!(class_separation > 0.0)) throw ConfigError("class_separation must be positive");
  if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) {
    throw ConfigError("noise_fraction must lie in [0, 1)");
  }
}

PlantedData generate_planted(const PlantedSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_per_class * spec.num_classes;
  const double scale = spec.class_separation / std::numbers::sqrt2;

  PlantedData out;
  out.centers.assign(spec.num_classes, std::vector<double>(spec.dim, 0.0));
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    out.centers[c][c % spec.dim] = c < spec.dim ? scale : -scale;
  }

  Dataset& ds = out.dataset;
  ds.name = "planted";
  ds.dim = spec.dim;
  ds.num_classes = spec.num_classes;
  ds.features.resize(n * spec.dim);
  ds.labels.resize(n);
  ds.ids.resize(n);
  SplitMix64 rng = make_stream(spec.seed, {stream_tag::kPlanted, 0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % spec.num_classes;
    ds.ids[i] = i;
    ds.labels[i] = static_cast<int>(c);
    for (std::size_t d = 0; d < spec.dim; ++d) {
      ds.features[i * spec.dim + d] = out.centers[c][d] + rng.normal();
    }
  }

  const auto flips = static_cast<std::size_t>(std::floor(spec.noise_fraction * static_cast<double>(n)));
  SplitMix64 noise_rng = make_stream(spec.seed, {stream_tag::kPlanted, 1});
  std::vector<std::size_t> perm = random_permutation(n, noise_rng);
  out.planted_hard.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(flips));
  std::sort(out.planted_hard.begin(), out.planted_hard.end());
  for (std::size_t id : out.planted_hard) {
    const auto shift = 1 + noise_rng.below(spec.num_classes - 1);
    ds.labels[id] = static_cast<int>((static_cast<std::size_t>(ds.labels[id]) + shift) % spec.num_classes);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvSchema& schema, std::string name) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw ParseError("empty CSV file: missing header row", line_no == 0 ? 1 : line_no);
  const auto label_it = std::find(header.begin(), header.end(), schema.label_column);
  if (label_it == header.end()) {
    throw ParseError("header has no '" + schema.label_column + "' column", line_no);
  }
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());
  if (header.size() < 2) throw ParseError("header declares no feature columns", line_no);

  Dataset ds;
  ds.name = std::move(name);
  ds.dim = header.size() - 1;
  std::map<std::string, int, std::less<>> label_index;
  if (schema.labels) {
    for (const auto& l : *schema.labels) {
      label_index.emplace(l, static_cast<int>(ds.label_names.size()));
      ds.label_names.push_back(l);
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string_view f = fields[c];
      if (c == label_col) {
        if (f.empty()) throw ParseError("empty label", line_no);
        auto it = label_index.find(f);
        if (it == label_index.end()) {
          if (schema.labels) throw ParseError("unknown label '" + std::string(f) + "'", line_no);
          it = label_index.emplace(std::string(f), static_cast<int>(ds.label_names.size())).first;
          ds.label_names.emplace_back(f);
        }
        ds.labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw ParseError("non-numeric feature '" + std::string(f) + "' in column '" + header[c] + "'",
                         line_no);
      }
      ds.features.push_back(v);
    }
    ds.ids.push_back(ds.ids.size());
  }
  if (ds.labels.empty()) throw ParseError("CSV file has a header but no data rows", line_no);
  ds.num_classes = ds.label_names.size();
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), schema, path.stem().string());
}

Split stratified_split(const Dataset& ds, double eval_fraction, std::uint64_t seed) {
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw ConfigError("eval_fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

  std::vector<std::size_t> train_pos;
  std::vector<std::size_t> eval_pos;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const auto& members = by_class[c];
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw ConfigError("cannot stratify: class " + std::to_string(c) + " has a single sample");
    }
    SplitMix64 rng = make_stream(seed, {stream_tag::kSplit, c});
    const auto perm = random_permutation(members.size(), rng);
    const auto n_eval = static_cast<std::size_t>(std::llround(eval_fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < members.size(); ++k) {
      (k < n_eval ? eval_pos : train_pos).push_back(members[perm[k]]);
    }
  }
  std::sort(train_pos.begin(), train_pos.end());
  std::sort(eval_pos.begin(), eval_pos.end());
  return {ds.subset(train_pos), ds.subset(eval_pos)};
}

std::vector<Fold> kfold_partitions(std::size_t n, const KFoldSpec& spec) {
  if (spec.k < 2) throw ConfigError("k-fold needs k >= 2");
  if (spec.k > n) {
    throw ConfigError("k-fold with k=" + std::to_string(spec.k) + " exceeds sample count " + std::to_string(n));
  }
  SplitMix64 rng = make_stream(spec.seed, {stream_tag::kKFold});
  const auto perm = random_permutation(n, rng);
  std::vector<Fold> folds(spec.k);
  const std::size_t base = n / spec.k;
  const std::size_t extra = n % spec.k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < spec.k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    std::vector<bool> held(n, false);
    for (std::size_t j = 0; j < size; ++j) held[perm[pos + j]] = true;
    pos += size;
    for (std::size_t i = 0; i < n; ++i) (held[i] ? folds[f].heldout : folds[f].train).push_back(i);
  }
  return folds;
}

}  // namespace sdcl
