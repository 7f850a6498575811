#pragma once

#include "cdlab/dataset.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace cdlab {

/// Number of equal-width bins, or continuous (no binning).
class BinSpec {
 public:
  static BinSpec continuous() { return BinSpec(); }
  static BinSpec bins(int k);
  /// Accepts "continuous" or an integer >= 2.
  static BinSpec parse(const std::string& text);

  bool is_continuous() const { return !count_; }
  int count() const { return *count_; }
  std::string to_string() const;

  bool operator==(const BinSpec&) const = default;

 private:
  std::optional<int> count_;
};

/// Equal-width bin indices in 1..k for one column: ceil((v - min) / width),
/// clamped so that v = min lands in bin 1 and v = max in bin k. A constant
/// column maps entirely to bin 1.
template <typename Derived>
Eigen::VectorXd equal_width_indices(const Eigen::MatrixBase<Derived>& column, int k) {
  const double lo = column.minCoeff();
  const double hi = column.maxCoeff();
  const double width = (hi - lo) / k;
  Eigen::VectorXd out(column.size());
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    double bin = 1.0;
    if (width > 0.0) bin = std::clamp(std::ceil((column(i) - lo) / width), 1.0, double(k));
    out(i) = bin;
  }
  return out;
}

/// Bins every column independently. Continuous spec returns the input unchanged.
/// Throws std::invalid_argument if `data` is already binned.
Dataset bin_equal_width(const Dataset& data, const BinSpec& spec);

}  // namespace cdlab
