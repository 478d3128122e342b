#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "ovr/dataset.hpp"
#include "ovr/errors.hpp"

using namespace ovr;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("./" + name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("format names") {
  CHECK(data_format_from_string("csv") == DataFormat::csv);
  CHECK(data_format_from_string("libsvm") == DataFormat::libsvm);
  CHECK_THROWS_AS(data_format_from_string("tsv"), UsageError);
}

TEST_CASE("labeled csv") {
  TempFile f("t_labeled.csv", "1,0.5,2\n-1,1.5,-3\n\n2,0,0\n");
  const Dataset data = load_csv(f.path, true);
  CHECK(data.size() == 3);
  CHECK(data.dim() == 2);
  CHECK(data.labeled());
  CHECK(data.y[0] == 1.0);
  CHECK(data.y[1] == -1.0);
  CHECK(data.y[2] == 1.0);  // positive labels collapse to +1
  CHECK(data.x(0, 0) == 0.5);
  CHECK(data.x(1, 1) == -3.0);
}

TEST_CASE("unlabeled csv") {
  TempFile f("t_plain.csv", "0.5,2\n1.5,-3\n");
  const Dataset data = load_csv(f.path, false);
  CHECK(data.size() == 2);
  CHECK(data.dim() == 2);
  CHECK_FALSE(data.labeled());
}

TEST_CASE("csv parse failures carry line numbers") {
  TempFile ragged("t_ragged.csv", "1,2,3\n1,2\n");
  CHECK_THROWS_WITH_AS(load_csv(ragged.path, false), doctest::Contains("line 2"), ParseError);

  TempFile bad("t_bad.csv", "1,2\n1,zebra\n");
  CHECK_THROWS_WITH_AS(load_csv(bad.path, false), doctest::Contains("line 2"), ParseError);

  TempFile zero("t_zero.csv", "0,1,2\n");
  CHECK_THROWS_AS(load_csv(zero.path, true), ParseError);

  TempFile lonely("t_lonely.csv", "1\n");
  CHECK_THROWS_AS(load_csv(lonely.path, true), ParseError);

  CHECK_THROWS_AS(load_csv("./no_such_file.csv", false), IoFailure);
}

TEST_CASE("libsvm") {
  TempFile f("t_sparse.libsvm", "1 3:0.5\n-1 1:2 2:1\n");
  const Dataset data = load_libsvm(f.path);
  CHECK(data.size() == 2);
  CHECK(data.dim() == 3);
  CHECK(data.y[0] == 1.0);
  CHECK(data.y[1] == -1.0);
  CHECK(data.x(0, 0) == 0.0);
  CHECK(data.x(0, 2) == 0.5);
  CHECK(data.x(1, 0) == 2.0);
  CHECK(data.x(1, 1) == 1.0);
  CHECK(data.x(1, 2) == 0.0);
}

TEST_CASE("libsvm parse failures") {
  TempFile zero_index("t_zi.libsvm", "1 0:2\n");
  CHECK_THROWS_AS(load_libsvm(zero_index.path), ParseError);

  TempFile garbage("t_garbage.libsvm", "1 5\n");
  CHECK_THROWS_AS(load_libsvm(garbage.path), ParseError);

  TempFile zero_label("t_zl.libsvm", "0 1:2\n");
  CHECK_THROWS_AS(load_libsvm(zero_label.path), ParseError);
}

TEST_CASE("load_dataset dispatches on format") {
  TempFile f("t_dispatch.csv", "1,0.5\n-1,1.5\n");
  const Dataset data = load_dataset(f.path, DataFormat::csv, true);
  CHECK(data.size() == 2);
  CHECK(data.labeled());
}

TEST_CASE("synthetic imbalanced mixture") {
  const Eigen::Index n = 5000;
  const Dataset data = synth_imbalanced(n, 4, {0.95, 0.04, 0.01}, 17);
  CHECK(data.size() == n);
  CHECK(data.dim() == 4);
  REQUIRE(data.labeled());

  Eigen::Index minority = 0;
  double majority_norm = 0.0, minority_norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.y[i] > 0) {
      ++minority;
      minority_norm += data.x.row(i).norm();
    } else {
      majority_norm += data.x.row(i).norm();
    }
  }
  const double expected = 0.05 * static_cast<double>(n);
  const double sigma = std::sqrt(static_cast<double>(n) * 0.05 * 0.95);
  CHECK(std::abs(static_cast<double>(minority) - expected) <= 3.0 * sigma);
  // Minority points sit at radius >= 4, so their norms dominate.
  CHECK(minority_norm / static_cast<double>(minority) >
        2.0 * majority_norm / static_cast<double>(n - minority));

  const Dataset again = synth_imbalanced(n, 4, {0.95, 0.04, 0.01}, 17);
  CHECK((data.x.array() == again.x.array()).all());
  const Dataset other = synth_imbalanced(n, 4, {0.95, 0.04, 0.01}, 18);
  CHECK_FALSE((data.x.array() == other.x.array()).all());
}

TEST_CASE("synthetic mixture validation") {
  CHECK_THROWS_AS(synth_imbalanced(10, 2, {1.0}, 0), BadMix);
  CHECK_THROWS_AS(synth_imbalanced(10, 2, {0.5, 0.4}, 0), BadMix);
  CHECK_THROWS_AS(synth_imbalanced(10, 2, {1.2, -0.2}, 0), BadMix);
  CHECK_THROWS_AS(synth_imbalanced(0, 2, {0.5, 0.5}, 0), BadMix);
}

TEST_CASE("train test split") {
  const Dataset data = synth_imbalanced(10, 2, {0.9, 0.1}, 3);
  const Split split = train_test_split(data, 0.2, 5);
  CHECK(split.test.size() == 2);
  CHECK(split.train.size() == 8);
  CHECK(split.train.labeled());
  CHECK(split.test.labeled());

  // Every original row appears exactly once across the two sides.
  Eigen::VectorXd seen = Eigen::VectorXd::Zero(10);
  auto mark = [&](const Dataset& side) {
    for (Eigen::Index i = 0; i < side.size(); ++i)
      for (Eigen::Index j = 0; j < 10; ++j)
        if ((side.x.row(i) - data.x.row(j)).norm() == 0.0) seen[j] += 1.0;
  };
  mark(split.train);
  mark(split.test);
  CHECK(seen.minCoeff() == 1.0);
  CHECK(seen.maxCoeff() == 1.0);

  const Split again = train_test_split(data, 0.2, 5);
  CHECK((split.train.x.array() == again.train.x.array()).all());

  CHECK_THROWS_AS(train_test_split(data, 0.0, 5), OutOfRange);
  CHECK_THROWS_AS(train_test_split(data, 1.0, 5), OutOfRange);
  Dataset tiny;
  tiny.x.resize(1, 2);
  CHECK_THROWS_AS(train_test_split(tiny, 0.2, 5), TooFewPoints);
}

TEST_CASE("tiny fractions still yield one test point") {
  const Dataset data = synth_imbalanced(50, 2, {0.9, 0.1}, 3);
  const Split split = train_test_split(data, 0.001, 5);
  CHECK(split.test.size() == 1);
  CHECK(split.train.size() == 49);
}
