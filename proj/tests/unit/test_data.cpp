#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "sdcl/dataset.hpp"
#include "sdcl/error.hpp"

using namespace sdcl;

TEST_CASE("planted generator") {
  PlantedSpec spec;
  spec.n_per_class = 100;
  spec.num_classes = 10;
  spec.noise_fraction = 0.1;
  spec.seed = 4;
  const PlantedData a = generate_planted(spec);
  CHECK(a.dataset.size() == 1000);
  CHECK(a.planted_hard.size() == 100);
  for (std::size_t i = 0; i < a.dataset.size(); ++i) CHECK(a.dataset.ids[i] == i);

  // Flipped labels differ from the generating class; all others match it.
  const std::set<std::size_t> hard(a.planted_hard.begin(), a.planted_hard.end());
  for (std::size_t i = 0; i < a.dataset.size(); ++i) {
    const bool same = a.dataset.labels[i] == static_cast<int>(i % 10);
    CHECK(same != hard.contains(i));
  }

  const PlantedData b = generate_planted(spec);
  CHECK(a.dataset.features == b.dataset.features);
  CHECK(a.dataset.labels == b.dataset.labels);
  CHECK(a.planted_hard == b.planted_hard);

  spec.noise_fraction = 0.0;
  CHECK(generate_planted(spec).planted_hard.empty());
}

TEST_CASE("planted class centers are at least the separation apart") {
  for (std::size_t classes : {2u, 5u, 8u}) {
    PlantedSpec spec;
    spec.num_classes = classes;
    spec.dim = 4;
    spec.class_separation = 3.0;
    spec.n_per_class = 2;
    const auto centers = generate_planted(spec).centers;
    for (std::size_t i = 0; i < classes; ++i) {
      for (std::size_t j = i + 1; j < classes; ++j) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < 4; ++k) d2 += (centers[i][k] - centers[j][k]) * (centers[i][k] - centers[j][k]);
        CHECK(std::sqrt(d2) >= 3.0 - 1e-12);
      }
    }
  }
  PlantedSpec bad;
  bad.num_classes = 9;
  bad.dim = 4;
  CHECK_THROWS_AS(generate_planted(bad), ConfigError);
  bad = {};
  bad.noise_fraction = 1.0;
  CHECK_THROWS_AS(generate_planted(bad), ConfigError);
}

TEST_CASE("csv parsing") {
  SUBCASE("labels indexed by first occurrence") {
    const Dataset ds = parse_csv("x,y,label\n1,2,a\n3,4,b\n5,6,a\n");
    CHECK(ds.size() == 3);
    CHECK(ds.dim == 2);
    CHECK(ds.num_classes == 2);
    CHECK(ds.labels == std::vector<int>{0, 1, 0});
    CHECK(ds.label_names == std::vector<std::string>{"a", "b"});
    CHECK(ds.ids == std::vector<std::size_t>{0, 1, 2});
    CHECK(ds.features == std::vector<double>{1, 2, 3, 4, 5, 6});
  }
  SUBCASE("label column may sit anywhere and fields are trimmed") {
    const Dataset ds = parse_csv("label, f1\n cat , 0.5\r\ndog,-1e-3\n");
    CHECK(ds.labels == std::vector<int>{0, 1});
    CHECK(ds.features == std::vector<double>{0.5, -1e-3});
  }
  SUBCASE("empty file") { CHECK_THROWS_AS(parse_csv(""), ParseError); }
  SUBCASE("short row names its line") {
    try {
      parse_csv("a,b,label\n1,2,x\n1,x\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("non-numeric feature") {
    try {
      parse_csv("a,label\n1,x\nfoo,y\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("unknown label under a fixed schema") {
    CsvSchema schema;
    schema.labels = std::vector<std::string>{"a", "b"};
    CHECK_THROWS_AS(parse_csv("f,label\n1,a\n2,c\n", schema), ParseError);
  }
  SUBCASE("missing label column") { CHECK_THROWS_AS(parse_csv("f,g\n1,2\n"), ParseError); }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), ParseError); }
  SUBCASE("load from disk") {
    const auto path = std::filesystem::temp_directory_path() / "sdcl_test_data.csv";
    {
      std::ofstream out(path);
      out << "f,label\n0.25,a\n0.75,b\n";
    }
    const Dataset ds = load_csv(path);
    CHECK(ds.name == "sdcl_test_data");
    CHECK(ds.size() == 2);
    std::filesystem::remove(path);
  }
}

namespace {

Dataset balanced(std::size_t per_class, std::size_t classes) {
  Dataset ds;
  ds.dim = 1;
  ds.num_classes = classes;
  for (std::size_t i = 0; i < per_class * classes; ++i) {
    ds.features.push_back(static_cast<double>(i));
    ds.labels.push_back(static_cast<int>(i % classes));
    ds.ids.push_back(i);
  }
  return ds;
}

}  // namespace

TEST_CASE("stratified split") {
  const Dataset ds = balanced(100, 3);
  const Split s = stratified_split(ds, 0.2, 9);
  CHECK(s.eval.size() == 60);
  for (std::size_t c : s.eval.class_counts()) CHECK(c == 20);
  std::vector<std::size_t> all = s.train.ids;
  all.insert(all.end(), s.eval.ids.begin(), s.eval.ids.end());
  std::sort(all.begin(), all.end());
  CHECK(all == ds.ids);
  CHECK(std::is_sorted(s.train.ids.begin(), s.train.ids.end()));
  // Features travel with their ids.
  for (std::size_t i = 0; i < s.train.size(); ++i) CHECK(s.train.features[i] == static_cast<double>(s.train.ids[i]));

  const Split again = stratified_split(ds, 0.2, 9);
  CHECK(again.eval.ids == s.eval.ids);
  CHECK(stratified_split(ds, 0.2, 10).eval.ids != s.eval.ids);

  const Split pairs = stratified_split(balanced(2, 4), 0.5, 1);
  for (std::size_t c : pairs.eval.class_counts()) CHECK(c == 1);
  for (std::size_t c : pairs.train.class_counts()) CHECK(c == 1);

  Dataset lonely = balanced(2, 2);
  lonely.labels[3] = 2;
  lonely.num_classes = 3;
  CHECK_THROWS_AS(stratified_split(lonely, 0.5, 0), ConfigError);
  CHECK_THROWS_AS(stratified_split(ds, 1.0, 0), ConfigError);
}

TEST_CASE("k-fold partitions") {
  const auto check_partition = [](const std::vector<Fold>& folds, std::size_t n) {
    std::vector<std::size_t> seen;
    for (const auto& f : folds) {
      CHECK(f.train.size() + f.heldout.size() == n);
      seen.insert(seen.end(), f.heldout.begin(), f.heldout.end());
      std::vector<std::size_t> both = f.train;
      both.insert(both.end(), f.heldout.begin(), f.heldout.end());
      std::sort(both.begin(), both.end());
      CHECK(std::adjacent_find(both.begin(), both.end()) == both.end());
    }
    std::sort(seen.begin(), seen.end());
    std::vector<std::size_t> expect(n);
    for (std::size_t i = 0; i < n; ++i) expect[i] = i;
    CHECK(seen == expect);
  };
  const auto nine = kfold_partitions(9, {3, 1});
  CHECK(nine.size() == 3);
  for (const auto& f : nine) CHECK(f.heldout.size() == 3);
  check_partition(nine, 9);

  const auto ten = kfold_partitions(10, {3, 1});
  CHECK(ten[0].heldout.size() == 4);
  CHECK(ten[1].heldout.size() == 3);
  CHECK(ten[2].heldout.size() == 3);
  check_partition(ten, 10);

  const auto again = kfold_partitions(10, {3, 1});
  for (std::size_t f = 0; f < 3; ++f) CHECK(again[f].heldout == ten[f].heldout);

  CHECK_THROWS_AS(kfold_partitions(2, {3, 0}), ConfigError);
  CHECK_THROWS_AS(kfold_partitions(5, {1, 0}), ConfigError);
}

TEST_CASE("dataset validation and subsets") {
  Dataset ds = balanced(3, 2);
  const std::vector<std::size_t> pos{4, 1};
  const Dataset sub = ds.subset(pos);
  CHECK(sub.ids == std::vector<std::size_t>{4, 1});
  CHECK(sub.labels == std::vector<int>{0, 1});
  CHECK_THROWS_AS(ds.subset(std::vector<std::size_t>{6}), InputError);
  ds.labels[0] = 5;
  CHECK_THROWS_AS(ds.validate(), InputError);
}
