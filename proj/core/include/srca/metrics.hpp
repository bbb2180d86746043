#pragma once

#include <Eigen/Dense>
#include <optional>
#include <tuple>
#include <vector>

#include "srca/data.hpp"

namespace srca {

/// (1/n) sum_i ||x_i - xhat_i||^2.
double mse(const DataMatrix& X, const DataMatrix& X_hat);

double silhouette(const DataMatrix& X_hat, const std::vector<int>& labels);
double calinski_harabasz(const DataMatrix& X_hat,
                         const std::vector<int>& labels);
double davies_bouldin(const DataMatrix& X_hat, const std::vector<int>& labels);

/// Joint histogram of neighbor ranks before/after reduction. counts(k-1,l-1)
/// is the number of ordered pairs (i,j) with original rank k and reduced
/// rank l; ranks use strict tie-breaking (equal distances favor the smaller
/// index), so every row and column sums to n.
struct CorankingMatrix {
  Eigen::MatrixXi counts;  // (n-1) x (n-1)
  int n = 0;
};

CorankingMatrix coranking_matrix(const DataMatrix& X, const DataMatrix& X_hat);

struct CorankingScores {
  double cc = 0.0;    // Pearson correlation of pairwise-distance vectors
  double auc = 0.0;   // unweighted mean of R_NX over K = 1..n-2
  double wauc = 0.0;  // 1/K-weighted mean of R_NX
  std::vector<double> r_nx;  // R_NX(K), K = 1..n-2
};

CorankingScores coranking_scores(const CorankingMatrix& Q, const DataMatrix& X,
                                 const DataMatrix& X_hat);

struct EvaluationReport {
  double mse = 0.0;
  std::optional<double> oos_mse;
  std::optional<double> sc;
  std::optional<double> chi;
  std::optional<double> dbi;
  double cc = 0.0;
  double auc = 0.0;
  double wauc = 0.0;
};

/// Full report; the cluster indices are filled only when labels are given.
EvaluationReport evaluate(const DataMatrix& X, const DataMatrix& X_hat,
                          const std::vector<int>* labels = nullptr);

}  // namespace srca
