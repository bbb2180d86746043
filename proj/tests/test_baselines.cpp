#include <doctest.h>

#include <cmath>

#include "srca/baselines.hpp"
#include "srca/metrics.hpp"
#include "srca/rng.hpp"

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

srca::DataMatrix exact_circle(int n, double cx, double cy, double r) {
  srca::DataMatrix X;
  X.values.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    X.values(i, 0) = cx + r * std::cos(t);
    X.values(i, 1) = cy + r * std::sin(t);
  }
  return X;
}

}  // namespace

TEST_CASE("pca reconstruction matches the rank-d' projector") {
  srca::Rng rng(41);
  srca::DataMatrix X;
  X.values.resize(60, 5);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 5; ++j) {
      X.values(i, j) = rng.normal(0.0, 1.0 + j);
    }
  }
  auto [model, reduced] = srca::pca_fit_reduce(X, 2);
  CHECK(model.basis.cols() == 2);
  CHECK((model.basis.transpose() * model.basis -
         Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  // x-bar + V V^T (x - x-bar), computed independently.
  Eigen::MatrixXd C = X.values.rowwise() - model.mean.transpose();
  Eigen::MatrixXd expect =
      (C * model.basis * model.basis.transpose()).rowwise() +
      model.mean.transpose();
  CHECK((reduced.values - expect).cwiseAbs().maxCoeff() < 1e-10);
  // pca_transform on the training data reproduces the reduction.
  srca::DataMatrix again = srca::pca_transform(model, X);
  CHECK((again.values - reduced.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pca picks the dominant directions") {
  // Data exactly in a 2-D coordinate plane reconstructs exactly at d'=2.
  srca::Rng rng(42);
  srca::DataMatrix X;
  X.values = Eigen::MatrixXd::Zero(50, 4);
  for (int i = 0; i < 50; ++i) {
    X.values(i, 1) = rng.normal(0.0, 3.0);
    X.values(i, 3) = rng.normal(0.0, 1.0);
  }
  auto [model, reduced] = srca::pca_fit_reduce(X, 2);
  CHECK(srca::mse(X, reduced) < 1e-20);
}

TEST_CASE("algebraic center and radius are exact on a noiseless circle") {
  srca::DataMatrix Y = exact_circle(36, 0.3, -0.7, 1.25);
  Eigen::VectorXd c = srca::spca_algebraic_center(Y);
  CHECK(std::abs(c(0) - 0.3) < 1e-9);
  CHECK(std::abs(c(1) + 0.7) < 1e-9);
  CHECK(srca::spca_algebraic_radius(Y, c) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("algebraic radius equals the rms distance by definition") {
  srca::Rng rng(43);
  srca::DataMatrix Y;
  Y.values.resize(30, 3);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 3; ++j) Y.values(i, j) = rng.normal();
  }
  Eigen::VectorXd c(3);
  c << 0.1, 0.2, -0.3;
  double acc = 0.0;
  for (int i = 0; i < 30; ++i) {
    acc += (Y.values.row(i).transpose() - c).squaredNorm();
  }
  CHECK(srca::spca_algebraic_radius(Y, c) ==
        doctest::Approx(std::sqrt(acc / 30.0)).epsilon(1e-14));
}

TEST_CASE("degenerate inputs throw") {
  // Collinear points: singular scatter.
  srca::DataMatrix Y;
  Y.values.resize(5, 2);
  for (int i = 0; i < 5; ++i) {
    Y.values(i, 0) = i;
    Y.values(i, 1) = 2.0 * i;
  }
  CHECK_THROWS(srca::spca_algebraic_center(Y));

  // All points at the center: no radius.
  srca::DataMatrix Z(Eigen::MatrixXd::Zero(4, 2));
  CHECK_THROWS(srca::spca_algebraic_radius(Z, Eigen::VectorXd::Zero(2)));
}

TEST_CASE("two-step fit recovers an embedded circle") {
  // A circle living in a 2-D subspace of R^3, rotated off-axis.
  srca::DataMatrix C = exact_circle(80, 0.0, 0.0, 2.0);
  Eigen::MatrixXd B(3, 2);
  B << 1.0 / std::sqrt(2.0), 0.0,
       1.0 / std::sqrt(2.0), 0.0,
       0.0, 1.0;
  srca::DataMatrix X(C.values * B.transpose());
  X.values.rowwise() += Eigen::RowVector3d(1.0, 2.0, 3.0);

  srca::SpcaModel model = srca::spca_fit(X, 1);
  CHECK(model.radius == doctest::Approx(2.0).epsilon(1e-9));
  srca::DataMatrix Y = srca::spca_transform(model, X);
  CHECK(srca::mse(X, Y) < 1e-18);
}

TEST_CASE("spca transform puts every output at distance r in the subspace") {
  srca::Rng rng(44);
  srca::DataMatrix X;
  X.values.resize(40, 3);
  for (int i = 0; i < 40; ++i) {
    const double t = rng.uniform(0.0, kTwoPi);
    X.values(i, 0) = std::cos(t) + rng.normal(0.0, 0.05);
    X.values(i, 1) = std::sin(t) + rng.normal(0.0, 0.05);
    X.values(i, 2) = rng.normal(0.0, 0.05);
  }
  srca::SpcaModel model = srca::spca_fit(X, 1);
  srca::DataMatrix Y = srca::spca_transform(model, X);
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd y =
        model.basis.transpose() * (Y.values.row(i).transpose() - model.mean);
    CHECK((y - model.center).norm() ==
          doctest::Approx(model.radius).epsilon(1e-9));
  }
}

TEST_CASE("geometric refinement never worsens the geometric loss") {
  srca::Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    srca::DataMatrix X;
    X.values.resize(60, 3);
    for (int i = 0; i < 60; ++i) {
      const double t = rng.uniform(0.0, kTwoPi);
      // Uneven angular coverage makes the algebraic and geometric fits differ.
      const double tt = t * 0.35;
      X.values(i, 0) = 2.0 * std::cos(tt) + rng.normal(0.0, 0.15);
      X.values(i, 1) = 2.0 * std::sin(tt) + rng.normal(0.0, 0.15);
      X.values(i, 2) = rng.normal(0.0, 0.1);
    }
    srca::SpcaModel raw = srca::spca_fit(X, 1, false);
    srca::SpcaModel refined = srca::spca_fit(X, 1, true);
    auto geo_loss = [&](const srca::SpcaModel& m) {
      double acc = 0.0;
      for (int i = 0; i < 60; ++i) {
        Eigen::VectorXd y =
            m.basis.transpose() * (X.values.row(i).transpose() - m.mean);
        const double dev = (y - m.center).norm() - m.radius;
        acc += dev * dev;
      }
      return acc;
    };
    CHECK(geo_loss(refined) <= geo_loss(raw) + 1e-9);
  }
}
