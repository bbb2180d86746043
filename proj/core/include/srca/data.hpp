#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace srca {

/// Row-per-sample matrix with optional dense integer class labels.
struct DataMatrix {
  Eigen::MatrixXd values;               // n x d
  std::optional<std::vector<int>> labels;

  DataMatrix() = default;
  explicit DataMatrix(Eigen::MatrixXd v) : values(std::move(v)) {}
  DataMatrix(Eigen::MatrixXd v, std::vector<int> l)
      : values(std::move(v)), labels(std::move(l)) {}

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  /// Throws std::invalid_argument on NaN/Inf entries or a label-length mismatch.
  void validate() const;
};

enum class StandardizeMode { none, center, zscore };

struct StandardizationRecord {
  StandardizeMode mode = StandardizeMode::none;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // all ones unless zscore
};

/// Reads a comma-separated file. `label_column` is a 0-based column index; that
/// column is mapped to dense ids 0..k-1 in first-appearance order.
DataMatrix load_csv(const std::string& path, bool has_header,
                    std::optional<int> label_column = std::nullopt);

/// Writes the same dialect load_csv reads, values at 17 significant digits.
/// Labels, when present, are appended as a last integer column.
void write_csv(const DataMatrix& X, const std::string& path,
               bool with_labels = true);

std::pair<DataMatrix, StandardizationRecord> standardize(const DataMatrix& X,
                                                         StandardizeMode mode);

DataMatrix unstandardize(const DataMatrix& X, const StandardizationRecord& rec);

/// Deterministic seeded split; labels travel with their rows.
std::pair<DataMatrix, DataMatrix> split_train_test(const DataMatrix& X,
                                                   double test_fraction,
                                                   std::uint64_t seed);

}  // namespace srca
