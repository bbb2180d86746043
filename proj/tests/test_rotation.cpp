#include <doctest.h>

#include <Eigen/Dense>

#include "srca/rng.hpp"
#include "srca/rotation.hpp"

namespace {

Eigen::MatrixXd random_orthogonal(int d, srca::Rng& rng) {
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd diag = qr.matrixQR().diagonal();
  for (int j = 0; j < d; ++j) {
    if (diag(j) < 0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

srca::DataMatrix anisotropic_gaussian(int n, const Eigen::VectorXd& sds,
                                      srca::Rng& rng) {
  srca::DataMatrix X;
  X.values.resize(n, sds.size());
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < sds.size(); ++j) {
      X.values(i, j) = rng.normal(0.0, sds(j));
    }
  }
  return X;
}

}  // namespace

TEST_CASE("pca rotation is orthogonal with descending eigenvalues") {
  srca::Rng rng(11);
  Eigen::VectorXd sds(4);
  sds << 5.0, 2.0, 1.0, 0.3;
  srca::DataMatrix X = anisotropic_gaussian(500, sds, rng);

  srca::OrthogonalMatrix R = srca::pca_rotation(X);
  CHECK(R.is_orthogonal());
  Eigen::VectorXd ev = srca::pca_eigenvalues(X);
  for (Eigen::Index j = 1; j < ev.size(); ++j) CHECK(ev(j) <= ev(j - 1));

  // Axis-aligned anisotropic data: each column should be close to a signed
  // coordinate axis, and the sign convention makes the dominant entry
  // positive.
  for (int j = 0; j < 4; ++j) {
    Eigen::Index argmax;
    R.values.col(j).cwiseAbs().maxCoeff(&argmax);
    CHECK(argmax == j);
    CHECK(R.values(argmax, j) > 0.0);
    CHECK(R.values.col(j).cwiseAbs().maxCoeff() > 0.99);
  }
}

TEST_CASE("pca eigenvalues are invariant under orthogonal data transforms") {
  srca::Rng rng(12);
  Eigen::VectorXd sds(3);
  sds << 3.0, 1.5, 0.5;
  srca::DataMatrix X = anisotropic_gaussian(200, sds, rng);
  Eigen::MatrixXd Q = random_orthogonal(3, rng);
  srca::DataMatrix XQ(X.values * Q);

  Eigen::VectorXd a = srca::pca_eigenvalues(X);
  Eigen::VectorXd b = srca::pca_eigenvalues(XQ);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("rotation round trip recovers the data") {
  srca::Rng rng(13);
  srca::DataMatrix X(Eigen::MatrixXd::Random(30, 5));
  srca::OrthogonalMatrix R{random_orthogonal(5, rng)};
  srca::DataMatrix back = srca::invert_rotation(srca::apply_rotation(X, R), R);
  CHECK((back.values - X.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("named orthomax gammas") {
  CHECK(srca::orthomax_gamma(srca::RotationKind::quartimax, 6, 3) == 0.0);
  CHECK(srca::orthomax_gamma(srca::RotationKind::varimax, 6, 3) == 1.0);
  CHECK(srca::orthomax_gamma(srca::RotationKind::equamax, 6, 3) == 1.5);
  // parsimax: d (m-1) / (d + m - 2)
  CHECK(srca::orthomax_gamma(srca::RotationKind::parsimax, 6, 3) ==
        doctest::Approx(6.0 * 2.0 / 7.0));
}

TEST_CASE("orthomax leaves an already-simple loading matrix alone") {
  // Perfect simple structure: each row loads on exactly one factor.
  Eigen::MatrixXd L(4, 2);
  L << 2, 0,
       2, 0,
       0, 1,
       0, 1;
  srca::OrthomaxResult res = srca::orthomax_rotation(L, 1.0);
  CHECK(res.converged);
  CHECK(res.T.is_orthogonal());
  // The rotated criterion cannot beat the unrotated one by more than noise.
  CHECK(res.criterion ==
        doctest::Approx(srca::orthomax_criterion(L, 1.0)).epsilon(1e-9));
}

TEST_CASE("orthomax beats random rotations") {
  srca::Rng rng(14);
  Eigen::MatrixXd L(8, 3);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 3; ++j) L(i, j) = rng.normal();
  }
  for (double gamma : {0.0, 1.0, 1.5}) {
    srca::OrthomaxResult res = srca::orthomax_rotation(L, gamma);
    CHECK(res.T.is_orthogonal());
    const double best = srca::orthomax_criterion(L * res.T.values, gamma);
    CHECK(best == doctest::Approx(res.criterion).epsilon(1e-9));
    CHECK(best >= srca::orthomax_criterion(L, gamma) - 1e-9);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd Q = random_orthogonal(3, rng);
      CHECK(best >= srca::orthomax_criterion(L * Q, gamma) - 1e-7);
    }
  }
}

TEST_CASE("make_rotation returns orthogonal matrices for every method") {
  srca::Rng rng(15);
  Eigen::VectorXd sds(4);
  sds << 4.0, 2.0, 1.0, 0.5;
  srca::DataMatrix X = anisotropic_gaussian(300, sds, rng);
  srca::DataMatrix Xc(X.values.rowwise() -
                      X.values.colwise().mean());

  for (srca::RotationKind kind :
       {srca::RotationKind::identity, srca::RotationKind::pca,
        srca::RotationKind::varimax, srca::RotationKind::quartimax,
        srca::RotationKind::equamax, srca::RotationKind::parsimax}) {
    srca::RotationMethod method{kind, 1.0};
    srca::OrthogonalMatrix R = srca::make_rotation(Xc, method);
    CHECK(R.is_orthogonal());
  }
  srca::RotationMethod ident{srca::RotationKind::identity, 0.0};
  CHECK((srca::make_rotation(Xc, ident).values -
         Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("rotation kind names round-trip") {
  for (const char* name :
       {"identity", "pca", "varimax", "quartimax", "equamax", "parsimax"}) {
    CHECK(srca::to_string(srca::rotation_kind_from_string(name)) == name);
  }
  CHECK_THROWS(srca::rotation_kind_from_string("promax"));
}
