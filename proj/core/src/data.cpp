#include "srca/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "srca/rng.hpp"

namespace srca {

void DataMatrix::validate() const {
  if (!values.allFinite()) {
    throw std::invalid_argument("DataMatrix contains NaN or Inf entries");
  }
  if (labels && static_cast<Eigen::Index>(labels->size()) != values.rows()) {
    throw std::invalid_argument("label vector length does not match row count");
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

DataMatrix load_csv(const std::string& path, bool has_header,
                    std::optional<int> label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && has_header) {
      first = false;
      continue;
    }
    first = false;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) throw std::runtime_error("empty file: " + path);

  const std::size_t ncols = rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) {
      throw std::runtime_error("ragged row " + std::to_string(i + 1) + " in " +
                               path + ": expected " + std::to_string(ncols) +
                               " cells, got " + std::to_string(rows[i].size()));
    }
  }
  if (label_column && (*label_column < 0 ||
                       static_cast<std::size_t>(*label_column) >= ncols)) {
    throw std::runtime_error("label column out of range");
  }
  if (label_column && ncols < 2) {
    throw std::runtime_error("no numeric columns left after label extraction");
  }

  const std::size_t d = label_column ? ncols - 1 : ncols;
  DataMatrix X;
  X.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(d));
  std::vector<int> labels;
  std::map<std::string, int> label_ids;  // dense ids in first-appearance order

  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t jout = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (label_column && static_cast<std::size_t>(*label_column) == j) {
        auto it = label_ids.find(rows[i][j]);
        if (it == label_ids.end()) {
          it = label_ids.emplace(rows[i][j],
                                 static_cast<int>(label_ids.size())).first;
        }
        labels.push_back(it->second);
        continue;
      }
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(rows[i][j], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      // allow trailing spaces only
      while (pos < rows[i][j].size() && std::isspace(static_cast<unsigned char>(
                                            rows[i][j][pos]))) {
        ++pos;
      }
      if (pos == 0 || pos != rows[i][j].size()) {
        throw std::runtime_error("parse failure at row " +
                                 std::to_string(i + 1) + ", column " +
                                 std::to_string(j + 1) + ": '" + rows[i][j] +
                                 "'");
      }
      X.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jout++)) =
          v;
    }
  }
  if (label_column) X.labels = std::move(labels);
  X.validate();
  return X;
}

void write_csv(const DataMatrix& X, const std::string& path, bool with_labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", X.values(i, j));
      out << buf;
      if (j + 1 < X.cols()) out << ',';
    }
    if (with_labels && X.labels) out << ',' << (*X.labels)[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

std::pair<DataMatrix, StandardizationRecord> standardize(const DataMatrix& X,
                                                         StandardizeMode mode) {
  if (X.rows() < 1) throw std::invalid_argument("standardize: empty matrix");
  StandardizationRecord rec;
  rec.mode = mode;
  rec.mean = Eigen::VectorXd::Zero(X.cols());
  rec.scale = Eigen::VectorXd::Ones(X.cols());
  DataMatrix out = X;
  if (mode == StandardizeMode::none) return {out, rec};

  rec.mean = X.values.colwise().mean();
  out.values = X.values.rowwise() - rec.mean.transpose();
  if (mode == StandardizeMode::zscore) {
    const double denom = static_cast<double>(X.rows() > 1 ? X.rows() - 1 : 1);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double var = out.values.col(j).squaredNorm() / denom;
      if (var <= 0.0) {
        throw std::invalid_argument("zscore: column " + std::to_string(j + 1) +
                                    " has zero variance");
      }
      rec.scale(j) = std::sqrt(var);
      out.values.col(j) /= rec.scale(j);
    }
  }
  return {out, rec};
}

DataMatrix unstandardize(const DataMatrix& X, const StandardizationRecord& rec) {
  DataMatrix out = X;
  if (rec.mode == StandardizeMode::none) return out;
  if (rec.mean.size() != X.cols()) {
    throw std::invalid_argument("unstandardize: dimension mismatch");
  }
  if (rec.mode == StandardizeMode::zscore) {
    out.values = out.values.array().rowwise() * rec.scale.transpose().array();
  }
  out.values = out.values.rowwise() + rec.mean.transpose();
  return out;
}

std::pair<DataMatrix, DataMatrix> split_train_test(const DataMatrix& X,
                                                   double test_fraction,
                                                   std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0,1)");
  }
  const Eigen::Index n = X.rows();
  if (n < 2) throw std::invalid_argument("split_train_test: need n >= 2");
  Eigen::Index n_test = static_cast<Eigen::Index>(
      std::llround(test_fraction * static_cast<double>(n)));
  n_test = std::clamp<Eigen::Index>(n_test, 1, n - 1);

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) {  // Fisher-Yates
    std::swap(perm[i - 1], perm[rng.uniform_int(i)]);
  }

  auto take = [&](std::size_t begin, std::size_t count) {
    DataMatrix out;
    out.values.resize(static_cast<Eigen::Index>(count), X.cols());
    if (X.labels) out.labels = std::vector<int>(count);
    for (std::size_t k = 0; k < count; ++k) {
      out.values.row(static_cast<Eigen::Index>(k)) = X.values.row(perm[begin + k]);
      if (X.labels) (*out.labels)[k] = (*X.labels)[perm[begin + k]];
    }
    return out;
  };
  const std::size_t test_count = static_cast<std::size_t>(n_test);
  return {take(test_count, static_cast<std::size_t>(n) - test_count),
          take(0, test_count)};
}

}  // namespace srca
