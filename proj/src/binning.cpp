#include "cdlab/binning.hpp"

#include <stdexcept>

namespace cdlab {

BinSpec BinSpec::bins(int k) {
  if (k < 2) throw std::invalid_argument("bin count must be at least 2");
  BinSpec s;
  s.count_ = k;
  return s;
}

BinSpec BinSpec::parse(const std::string& text) {
  if (text == "continuous") return continuous();
  std::size_t used = 0;
  int k = 0;
  try {
    k = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("bin condition must be 'continuous' or an integer, got '" + text + "'");
  }
  return bins(k);
}

std::string BinSpec::to_string() const {
  return is_continuous() ? "continuous" : std::to_string(*count_);
}

Dataset bin_equal_width(const Dataset& data, const BinSpec& spec) {
  if (!data.continuous()) throw std::invalid_argument("dataset is already binned");
  if (spec.is_continuous()) return data;
  Eigen::MatrixXd out(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    out.col(j) = equal_width_indices(data.values.col(j), spec.count());
  }
  return Dataset(std::move(out), data.labels, spec.count());
}

}  // namespace cdlab
