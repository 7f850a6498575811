#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdlab {

/// n x p sample matrix with column labels. Binned datasets hold bin indices 1..k as reals.
struct Dataset {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;
  /// Bin count when the values are bin indices; empty for continuous data.
  std::optional<int> bins;

  Dataset() = default;
  Dataset(Eigen::MatrixXd v, std::vector<std::string> l, std::optional<int> k = std::nullopt);

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  bool continuous() const { return !bins.has_value(); }

  /// Throws std::invalid_argument unless n >= 1, labels match columns and are unique,
  /// and all values are finite.
  void validate() const;

  bool operator==(const Dataset& other) const {
    return values == other.values && labels == other.labels && bins == other.bins;
  }
};

std::vector<std::string> default_labels(int p);

/// CSV with a header row of labels and 17 significant digits per value.
std::string format_csv(const Dataset& data);
Dataset parse_csv(const std::string& text);
Dataset read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const Dataset& data);

/// FNV-1a over the value bytes; identifies a draw across derived variants.
std::uint64_t content_hash(const Dataset& data);

}  // namespace cdlab
