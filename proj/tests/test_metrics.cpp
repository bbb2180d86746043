#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "srca/metrics.hpp"
#include "srca/rng.hpp"
#include "srca/synthetic.hpp"

namespace {

/// Independent O(n^3)-style coranking construction: ranks by explicit
/// pairwise comparison with the (distance, index) tie-break.
Eigen::MatrixXi coranking_oracle(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  auto rank_of = [n](const Eigen::MatrixXd& M, int i, int j) {
    const double dij = (M.row(i) - M.row(j)).norm();
    int rank = 0;
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const double dik = (M.row(i) - M.row(k)).norm();
      if (dik < dij || (dik == dij && k < j)) ++rank;
    }
    return rank + 1;  // 1-based
  };
  Eigen::MatrixXi Q = Eigen::MatrixXi::Zero(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Q(rank_of(A, i, j) - 1, rank_of(B, i, j) - 1) += 1;
    }
  }
  return Q;
}

}  // namespace

TEST_CASE("mse of identical matrices is zero and scales quadratically") {
  srca::DataMatrix X(Eigen::MatrixXd::Random(10, 3));
  CHECK(srca::mse(X, X) == 0.0);
  srca::DataMatrix Y = X;
  Y.values.array() += 2.0;  // every row shifted by (2,2,2)
  CHECK(srca::mse(X, Y) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("cluster indices on a hand-checked 1-d fixture") {
  // Two tight clusters on a line: {0, 1} and {10, 11}.
  srca::DataMatrix X;
  X.values.resize(4, 1);
  X.values << 0.0, 1.0, 10.0, 11.0;
  std::vector<int> labels{0, 0, 1, 1};

  // Silhouette by hand: a(0)=1, b(0)=(10+11)/2=10.5 -> 9.5/10.5, etc.
  const double s0 = 9.5 / 10.5, s1 = 8.5 / 9.5;
  const double expected_sc = (2 * s0 + 2 * s1) / 4.0;
  CHECK(srca::silhouette(X, labels) == doctest::Approx(expected_sc).epsilon(1e-12));

  // Calinski-Harabasz: between-SS = 2*(5.25^2)*2 clusters, within-SS = 4*0.25.
  // Means: 0.5 and 10.5, grand mean 5.5.
  const double bss = 2 * (5.0 * 5.0) * 2;  // 2 points per cluster, offset 5
  const double wss = 4 * 0.25;
  const double expected_chi = (bss / (2 - 1)) / (wss / (4 - 2));
  CHECK(srca::calinski_harabasz(X, labels) ==
        doctest::Approx(expected_chi).epsilon(1e-12));

  // Davies-Bouldin: s_k = mean distance to centroid = 0.5 for both clusters,
  // centroid distance 10 -> max ratio (0.5+0.5)/10 for each cluster.
  CHECK(srca::davies_bouldin(X, labels) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("cluster metrics require at least two clusters") {
  srca::DataMatrix X(Eigen::MatrixXd::Random(4, 2));
  std::vector<int> labels{0, 0, 0, 0};
  CHECK_THROWS(srca::silhouette(X, labels));
  CHECK_THROWS(srca::calinski_harabasz(X, labels));
  CHECK_THROWS(srca::davies_bouldin(X, labels));
}

TEST_CASE("singleton clusters contribute zero silhouette") {
  srca::DataMatrix X;
  X.values.resize(3, 1);
  X.values << 0.0, 1.0, 10.0;
  std::vector<int> labels{0, 0, 1};
  // Points 0,1: a=1, b=10 resp. 9. Point 2 is a singleton -> 0.
  const double expected = ((10.0 - 1.0) / 10.0 + (9.0 - 1.0) / 9.0 + 0.0) / 3.0;
  CHECK(srca::silhouette(X, labels) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("coranking of the identity map is diagonal") {
  srca::DataMatrix X = srca::gen_torus(40, 0.5, 1.0 / 3.0, 7);
  srca::CorankingMatrix Q = srca::coranking_matrix(X, X);
  REQUIRE(Q.n == 40);
  for (int k = 0; k < 39; ++k) {
    for (int l = 0; l < 39; ++l) {
      CHECK(Q.counts(k, l) == (k == l ? 40 : 0));
    }
  }
  srca::CorankingScores s = srca::coranking_scores(Q, X, X);
  CHECK(s.cc == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.auc == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.wauc == doctest::Approx(1.0).epsilon(1e-14));
  for (double v : s.r_nx) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coranking row and column sums equal n") {
  srca::Rng rng(51);
  srca::DataMatrix A(Eigen::MatrixXd::Random(12, 3));
  srca::DataMatrix B(Eigen::MatrixXd::Random(12, 2));
  srca::CorankingMatrix Q = srca::coranking_matrix(A, B);
  for (int k = 0; k < 11; ++k) {
    CHECK(Q.counts.row(k).sum() == 12);
    CHECK(Q.counts.col(k).sum() == 12);
  }
}

TEST_CASE("coranking on a hand-enumerated 4-point line") {
  // Original: 0, 1, 3, 7 on a line. Reduced: reverse the *spacing* so the
  // nearest neighbors change: 0, 6, 8, 9.
  srca::DataMatrix A, B;
  A.values.resize(4, 1);
  A.values << 0.0, 1.0, 3.0, 7.0;
  B.values.resize(4, 1);
  B.values << 0.0, 6.0, 8.0, 9.0;
  srca::CorankingMatrix Q = srca::coranking_matrix(A, B);
  CHECK(Q.counts == coranking_oracle(A.values, B.values));

  // Spot-check one entry by hand: pair (0,1): original rank of 1 from 0 is 1
  // (distances 1,3,7); reduced distances from 0 are 6,8,9 so rank is also 1.
  CHECK(Q.counts(0, 0) >= 1);
}

TEST_CASE("coranking matches the brute-force oracle on random instances") {
  srca::Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8;
    srca::DataMatrix A, B;
    A.values.resize(n, 3);
    B.values.resize(n, 2);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) A.values(i, j) = rng.normal();
      for (int j = 0; j < 2; ++j) B.values(i, j) = rng.normal();
    }
    srca::CorankingMatrix Q = srca::coranking_matrix(A, B);
    CHECK(Q.counts == coranking_oracle(A.values, B.values));
  }
}

TEST_CASE("r_nx definition against a direct prefix-sum evaluation") {
  srca::Rng rng(53);
  const int n = 10;
  srca::DataMatrix A(Eigen::MatrixXd::Random(n, 3));
  srca::DataMatrix B(Eigen::MatrixXd::Random(n, 2));
  srca::CorankingMatrix Q = srca::coranking_matrix(A, B);
  srca::CorankingScores s = srca::coranking_scores(Q, A, B);
  REQUIRE(static_cast<int>(s.r_nx.size()) == n - 2);
  double auc_acc = 0.0, wauc_acc = 0.0, wsum = 0.0;
  for (int K = 1; K <= n - 2; ++K) {
    // Q_NX(K): fraction of the top-K x top-K block, per point and neighbor.
    double block = 0.0;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < K; ++l) block += Q.counts(k, l);
    }
    const double q_nx = block / (static_cast<double>(K) * n);
    const double r_nx =
        ((n - 1) * q_nx - K) / static_cast<double>(n - 1 - K);
    CHECK(s.r_nx[static_cast<std::size_t>(K - 1)] ==
          doctest::Approx(r_nx).epsilon(1e-12));
    auc_acc += r_nx;
    wauc_acc += r_nx / K;
    wsum += 1.0 / K;
  }
  CHECK(s.auc == doctest::Approx(auc_acc / (n - 2)).epsilon(1e-12));
  CHECK(s.wauc == doctest::Approx(wauc_acc / wsum).epsilon(1e-12));
}

TEST_CASE("distance correlation is the pearson coefficient of distances") {
  srca::Rng rng(54);
  const int n = 15;
  srca::DataMatrix A(Eigen::MatrixXd::Random(n, 3));
  srca::DataMatrix B(Eigen::MatrixXd::Random(n, 3));
  srca::CorankingMatrix Q = srca::coranking_matrix(A, B);
  srca::CorankingScores s = srca::coranking_scores(Q, A, B);

  std::vector<double> da, db;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      da.push_back((A.values.row(i) - A.values.row(j)).norm());
      db.push_back((B.values.row(i) - B.values.row(j)).norm());
    }
  }
  const double ma = std::accumulate(da.begin(), da.end(), 0.0) / da.size();
  const double mb = std::accumulate(db.begin(), db.end(), 0.0) / db.size();
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t k = 0; k < da.size(); ++k) {
    num += (da[k] - ma) * (db[k] - mb);
    va += (da[k] - ma) * (da[k] - ma);
    vb += (db[k] - mb) * (db[k] - mb);
  }
  CHECK(s.cc == doctest::Approx(num / std::sqrt(va * vb)).epsilon(1e-12));
}

TEST_CASE("degenerate distance vectors are rejected") {
  srca::DataMatrix A(Eigen::MatrixXd::Zero(5, 2));  // all points identical
  srca::DataMatrix B(Eigen::MatrixXd::Random(5, 2));
  srca::CorankingMatrix Q = srca::coranking_matrix(A, B);
  CHECK_THROWS(srca::coranking_scores(Q, A, B));
}

TEST_CASE("evaluate fills cluster scores only when labels are present") {
  srca::DataMatrix X = srca::gen_gem(60, 3);
  srca::DataMatrix Y = X;
  Y.values.array() += 0.01;
  srca::EvaluationReport no_labels = srca::evaluate(X, Y, nullptr);
  CHECK_FALSE(no_labels.sc.has_value());
  CHECK_FALSE(no_labels.chi.has_value());
  CHECK_FALSE(no_labels.dbi.has_value());
  srca::EvaluationReport with = srca::evaluate(X, Y, &*X.labels);
  CHECK(with.sc.has_value());
  CHECK(with.chi.has_value());
  CHECK(with.dbi.has_value());
  CHECK(with.mse == doctest::Approx(3e-4).epsilon(1e-9));
}
