#include "srca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace srca {

double mse(const DataMatrix& X, const DataMatrix& X_hat) {
  if (X.rows() != X_hat.rows() || X.cols() != X_hat.cols()) {
    throw std::invalid_argument("mse: shape mismatch");
  }
  if (X.rows() < 1) throw std::invalid_argument("mse: empty input");
  return (X.values - X_hat.values).squaredNorm() /
         static_cast<double>(X.rows());
}

namespace {

/// label -> list of row indices; throws on fewer than two clusters.
std::map<int, std::vector<Eigen::Index>> group_by_label(
    const DataMatrix& X, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != X.rows()) {
    throw std::invalid_argument("labels length does not match row count");
  }
  std::map<int, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    groups[labels[static_cast<std::size_t>(i)]].push_back(i);
  }
  if (groups.size() < 2) {
    throw std::invalid_argument("cluster metrics need at least two clusters");
  }
  return groups;
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& V) {
  const Eigen::Index n = V.rows();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      D(i, j) = D(j, i) = (V.row(i) - V.row(j)).norm();
    }
  }
  return D;
}

}  // namespace

double silhouette(const DataMatrix& X_hat, const std::vector<int>& labels) {
  const auto groups = group_by_label(X_hat, labels);
  const Eigen::MatrixXd D = pairwise_distances(X_hat.values);
  const Eigen::Index n = X_hat.rows();

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int li = labels[static_cast<std::size_t>(i)];
    const auto& own = groups.at(li);
    if (own.size() < 2) continue;  // singleton silhouette defined as 0
    double a = 0.0;
    for (Eigen::Index j : own) {
      if (j != i) a += D(i, j);
    }
    a /= static_cast<double>(own.size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [lab, rows] : groups) {
      if (lab == li) continue;
      double m = 0.0;
      for (Eigen::Index j : rows) m += D(i, j);
      b = std::min(b, m / static_cast<double>(rows.size()));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double calinski_harabasz(const DataMatrix& X_hat,
                         const std::vector<int>& labels) {
  const auto groups = group_by_label(X_hat, labels);
  const Eigen::Index n = X_hat.rows();
  const std::size_t k = groups.size();
  const Eigen::RowVectorXd grand = X_hat.values.colwise().mean();

  double between = 0.0, within = 0.0;
  for (const auto& [lab, rows] : groups) {
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(X_hat.cols());
    for (Eigen::Index i : rows) mu += X_hat.values.row(i);
    mu /= static_cast<double>(rows.size());
    between += static_cast<double>(rows.size()) * (mu - grand).squaredNorm();
    for (Eigen::Index i : rows) {
      within += (X_hat.values.row(i) - mu).squaredNorm();
    }
  }
  if (within <= 0.0) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(k - 1)) /
         (within / static_cast<double>(n - k));
}

double davies_bouldin(const DataMatrix& X_hat, const std::vector<int>& labels) {
  const auto groups = group_by_label(X_hat, labels);
  std::vector<Eigen::RowVectorXd> mus;
  std::vector<double> scatter;
  for (const auto& [lab, rows] : groups) {
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(X_hat.cols());
    for (Eigen::Index i : rows) mu += X_hat.values.row(i);
    mu /= static_cast<double>(rows.size());
    double s = 0.0;
    for (Eigen::Index i : rows) s += (X_hat.values.row(i) - mu).norm();
    mus.push_back(mu);
    scatter.push_back(s / static_cast<double>(rows.size()));
  }
  const std::size_t k = mus.size();
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double sep = (mus[i] - mus[j]).norm();
      if (sep <= 0.0) {
        throw std::invalid_argument("davies_bouldin: coincident centroids");
      }
      worst = std::max(worst, (scatter[i] + scatter[j]) / sep);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

namespace {

/// rank_of[j] = 1-based neighbor rank of j seen from anchor i under the
/// strict ordering (distance, index); the anchor itself is excluded.
std::vector<int> neighbor_ranks(const Eigen::MatrixXd& D, Eigen::Index i) {
  const Eigen::Index n = D.rows();
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) order.push_back(j);
  }
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (D(i, a) != D(i, b)) return D(i, a) < D(i, b);
    return a < b;
  });
  std::vector<int> rank_of(static_cast<std::size_t>(n), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    rank_of[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos + 1);
  }
  return rank_of;
}

}  // namespace

CorankingMatrix coranking_matrix(const DataMatrix& X,
                                 const DataMatrix& X_hat) {
  if (X.rows() != X_hat.rows()) {
    throw std::invalid_argument("coranking_matrix: row count mismatch");
  }
  const Eigen::Index n = X.rows();
  if (n < 3) throw std::invalid_argument("coranking_matrix: need n >= 3");

  const Eigen::MatrixXd D1 = pairwise_distances(X.values);
  const Eigen::MatrixXd D2 = pairwise_distances(X_hat.values);

  CorankingMatrix Q;
  Q.n = static_cast<int>(n);
  Q.counts = Eigen::MatrixXi::Zero(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r1 = neighbor_ranks(D1, i);
    const auto r2 = neighbor_ranks(D2, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      Q.counts(r1[static_cast<std::size_t>(j)] - 1,
               r2[static_cast<std::size_t>(j)] - 1) += 1;
    }
  }
  return Q;
}

CorankingScores coranking_scores(const CorankingMatrix& Q, const DataMatrix& X,
                                 const DataMatrix& X_hat) {
  const Eigen::Index n = X.rows();
  if (Q.n != n || X_hat.rows() != n) {
    throw std::invalid_argument("coranking_scores: size mismatch");
  }

  // Cophenetic correlation on the upper-triangle distance vectors.
  const Eigen::MatrixXd D1 = pairwise_distances(X.values);
  const Eigen::MatrixXd D2 = pairwise_distances(X_hat.values);
  std::vector<double> u, v;
  u.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  v.reserve(u.capacity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      u.push_back(D1(i, j));
      v.push_back(D2(i, j));
    }
  }
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / u.size();
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    suu += (u[k] - mu) * (u[k] - mu);
    svv += (v[k] - mv) * (v[k] - mv);
    suv += (u[k] - mu) * (v[k] - mv);
  }
  if (suu <= 0.0 || svv <= 0.0) {
    throw std::runtime_error(
        "coranking_scores: zero-variance distance vector, correlation "
        "undefined");
  }

  CorankingScores out;
  out.cc = suv / std::sqrt(suu * svv);

  // 2-D prefix sums of the coranking counts give Q_NX(K) in O(n^2).
  const Eigen::Index m = n - 1;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    double rowsum = 0.0;
    for (Eigen::Index l = 0; l < m; ++l) {
      rowsum += Q.counts(k, l);
      P(k, l) = rowsum + (k > 0 ? P(k - 1, l) : 0.0);
    }
  }
  double sum_r = 0.0, sum_rw = 0.0, sum_w = 0.0;
  out.r_nx.reserve(static_cast<std::size_t>(n - 2));
  for (Eigen::Index K = 1; K <= n - 2; ++K) {
    const double qnx =
        P(K - 1, K - 1) / (static_cast<double>(K) * static_cast<double>(n));
    const double rnx = (static_cast<double>(n - 1) * qnx - K) /
                       static_cast<double>(n - 1 - K);
    out.r_nx.push_back(rnx);
    sum_r += rnx;
    sum_rw += rnx / static_cast<double>(K);
    sum_w += 1.0 / static_cast<double>(K);
  }
  out.auc = sum_r / static_cast<double>(n - 2);
  out.wauc = sum_rw / sum_w;
  return out;
}

EvaluationReport evaluate(const DataMatrix& X, const DataMatrix& X_hat,
                          const std::vector<int>* labels) {
  EvaluationReport rep;
  rep.mse = mse(X, X_hat);
  const CorankingMatrix Q = coranking_matrix(X, X_hat);
  const CorankingScores s = coranking_scores(Q, X, X_hat);
  rep.cc = s.cc;
  rep.auc = s.auc;
  rep.wauc = s.wauc;
  if (labels) {
    rep.sc = silhouette(X_hat, *labels);
    rep.chi = calinski_harabasz(X_hat, *labels);
    rep.dbi = davies_bouldin(X_hat, *labels);
  }
  return rep;
}

}  // namespace srca
