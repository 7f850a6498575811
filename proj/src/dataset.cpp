#include "cdlab/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cdlab {

Dataset::Dataset(Eigen::MatrixXd v, std::vector<std::string> l, std::optional<int> k)
    : values(std::move(v)), labels(std::move(l)), bins(k) {
  validate();
}

void Dataset::validate() const {
  if (values.rows() < 1 || values.cols() < 1) {
    throw std::invalid_argument("dataset needs at least one row and one column");
  }
  if (static_cast<Eigen::Index>(labels.size()) != values.cols()) {
    throw std::invalid_argument("label count does not match column count");
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw std::invalid_argument("column labels must be unique");
  }
  if (!values.allFinite()) throw std::invalid_argument("dataset contains non-finite values");
  if (bins && *bins < 2) throw std::invalid_argument("bin count must be at least 2");
}

std::vector<std::string> default_labels(int p) {
  std::vector<std::string> out;
  out.reserve(p);
  for (int j = 0; j < p; ++j) out.push_back("X" + std::to_string(j));
  return out;
}

std::string format_csv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.labels.size(); ++j) {
    if (j) out += ',';
    out += data.labels[j];
  }
  out += '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", data.values(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> labels = split(line);
  const std::size_t p = labels.size();

  std::vector<double> flat;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != p) {
      throw std::invalid_argument("row " + std::to_string(n + 1) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(p));
    }
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        throw std::invalid_argument("row " + std::to_string(n + 1) + ": bad number '" + c + "'");
      }
      flat.push_back(v);
    }
    ++n;
  }
  Eigen::MatrixXd values(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) values(i, j) = flat[i * p + j];
  }
  return Dataset(std::move(values), std::move(labels));
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void write_csv_file(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_csv(data);
}

std::uint64_t content_hash(const Dataset& data) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t dims[2] = {data.rows(), data.cols()};
  mix(dims, sizeof dims);
  mix(data.values.data(), sizeof(double) * static_cast<std::size_t>(data.values.size()));
  return h;
}

}  // namespace cdlab
