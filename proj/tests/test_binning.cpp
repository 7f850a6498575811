#include "doctest.h"

#include "cdlab/binning.hpp"

#include <random>

using namespace cdlab;

namespace {

Dataset column(std::vector<double> v) {
  Eigen::MatrixXd m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return Dataset(m, default_labels(1));
}

std::vector<double> bins_of(const Dataset& d) {
  return std::vector<double>(d.values.data(), d.values.data() + d.values.size());
}

}  // namespace

TEST_CASE("equal-width examples") {
  const Dataset d = column({0.0, 0.1, 0.5, 0.51, 1.0});
  CHECK(bins_of(bin_equal_width(d, BinSpec::bins(2))) == std::vector<double>{1, 1, 1, 2, 2});
  CHECK(bins_of(bin_equal_width(d, BinSpec::bins(10))) == std::vector<double>{1, 1, 5, 6, 10});

  const Dataset b = bin_equal_width(d, BinSpec::bins(5));
  CHECK(b.bins == 5);
  CHECK(b.labels == d.labels);

  // Constant column collapses to bin 1.
  CHECK(bins_of(bin_equal_width(column({3, 3, 3}), BinSpec::bins(15))) == std::vector<double>{1, 1, 1});
}

TEST_CASE("continuous spec is the identity") {
  const Dataset d = column({0.3, -2.0, 7.5});
  CHECK(bin_equal_width(d, BinSpec::continuous()) == d);
}

TEST_CASE("binning properties on random columns") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd m(200, 3);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    const Dataset d(m, default_labels(3));
    for (int k : {2, 5, 10, 15}) {
      const Dataset b = bin_equal_width(d, BinSpec::bins(k));
      CHECK(b.values.minCoeff() == 1.0);
      CHECK(b.values.maxCoeff() == double(k));
      int inversions = 0;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          for (Eigen::Index j = 0; j < m.rows(); ++j) {
            inversions += m(i, c) <= m(j, c) && b.values(i, c) > b.values(j, c);
          }
        }
      }
      CHECK(inversions == 0);
      // Positive affine maps of a column keep its bins.
      Eigen::MatrixXd shifted = m;
      shifted.col(1) = shifted.col(1) * 2.0 + Eigen::VectorXd::Constant(m.rows(), 3.0);
      const Dataset bs = bin_equal_width(Dataset(shifted, default_labels(3)), BinSpec::bins(k));
      int differ = 0;
      for (Eigen::Index i = 0; i < m.rows(); ++i) differ += bs.values(i, 1) != b.values(i, 1);
      // Floating rounding can move a value sitting exactly on an edge.
      CHECK(differ <= 1);
    }
  }
}

TEST_CASE("BinSpec parsing and errors") {
  CHECK(BinSpec::parse("continuous").is_continuous());
  CHECK(BinSpec::parse("5").count() == 5);
  CHECK(BinSpec::bins(10).to_string() == "10");
  CHECK(BinSpec::continuous().to_string() == "continuous");
  CHECK_THROWS(BinSpec::bins(1));
  CHECK_THROWS(BinSpec::parse("x"));
  CHECK_THROWS(BinSpec::parse("0"));

  const Dataset b = bin_equal_width(column({1, 2, 3}), BinSpec::bins(2));
  CHECK_THROWS_AS(bin_equal_width(b, BinSpec::bins(2)), std::invalid_argument);
}
