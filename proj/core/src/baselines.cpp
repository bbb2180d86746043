#include "srca/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "srca/geometry.hpp"
#include "srca/rotation.hpp"

namespace srca {

std::pair<PcaModel, DataMatrix> pca_fit_reduce(const DataMatrix& X,
                                               int d_prime) {
  const int d = static_cast<int>(X.cols());
  if (d_prime < 1 || d_prime >= d) {
    throw std::invalid_argument("pca_fit_reduce: need 1 <= d' < d");
  }
  PcaModel model;
  model.mean = X.values.colwise().mean();
  OrthogonalMatrix R = pca_rotation(X);
  model.basis = R.values.leftCols(d_prime);
  return {model, pca_transform(model, X)};
}

DataMatrix pca_transform(const PcaModel& model, const DataMatrix& X) {
  if (X.cols() != model.mean.size()) {
    throw std::invalid_argument("pca_transform: dimension mismatch");
  }
  DataMatrix out = X;
  Eigen::MatrixXd centered = X.values.rowwise() - model.mean.transpose();
  out.values = (centered * model.basis) * model.basis.transpose();
  out.values.rowwise() += model.mean.transpose();
  return out;
}

Eigen::VectorXd spca_algebraic_center(const DataMatrix& Y) {
  const Eigen::Index n = Y.rows();
  if (n < 2) throw std::invalid_argument("spca_algebraic_center: need n >= 2");
  const Eigen::VectorXd ybar = Y.values.colwise().mean();
  const Eigen::MatrixXd centered = Y.values.rowwise() - ybar.transpose();
  const Eigen::MatrixXd scatter = centered.transpose() * centered;

  Eigen::VectorXd sq = Y.values.rowwise().squaredNorm();
  sq.array() -= sq.mean();
  const Eigen::VectorXd b = centered.transpose() * sq;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(scatter);
  if (!lu.isInvertible()) {
    throw std::runtime_error(
        "spca_algebraic_center: singular scatter matrix (points do not "
        "affinely span the subspace)");
  }
  return 0.5 * lu.solve(b);
}

double spca_algebraic_radius(const DataMatrix& Y,
                             const Eigen::VectorXd& center) {
  const double msd =
      (Y.values.rowwise() - center.transpose()).rowwise().squaredNorm().mean();
  if (msd <= 0.0) {
    throw std::runtime_error("spca_algebraic_radius: all points at the center");
  }
  return std::sqrt(msd);
}

namespace {

/// Levenberg-Marquardt on residuals f_i = ||y_i - c|| - r.
void refine_sphere_lm(const Eigen::MatrixXd& Y, Eigen::VectorXd& c, double& r,
                      int max_iter = 100) {
  const Eigen::Index n = Y.rows();
  const Eigen::Index m = Y.cols();
  double mu = 1e-3;
  auto sse = [&](const Eigen::VectorXd& cc, double rr) {
    return ((Y.rowwise() - cc.transpose()).rowwise().norm().array() - rr)
        .square()
        .sum();
  };
  double best = sse(c, r);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd J(n, m + 1);
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd dy = Y.row(i).transpose() - c;
      const double nrm = dy.norm();
      if (nrm < kSingularEps) {
        J.row(i).setZero();
        J(i, m) = -1.0;
        f(i) = -r;
        continue;
      }
      J.block(i, 0, 1, m) = -(dy / nrm).transpose();
      J(i, m) = -1.0;
      f(i) = nrm - r;
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * f;
    bool stepped = false;
    for (int k = 0; k < 30; ++k) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += mu;
      const Eigen::VectorXd delta = A.ldlt().solve(-g);
      const Eigen::VectorXd c_try = c + delta.head(m);
      const double r_try = r + delta(m);
      const double val = sse(c_try, r_try);
      if (val < best) {
        c = c_try;
        r = r_try;
        const double gain = best - val;
        best = val;
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
        if (gain < 1e-14 * (1.0 + best)) return;
        break;
      }
      mu *= 10.0;
    }
    if (!stepped) return;
  }
}

}  // namespace

SpcaModel spca_fit(const DataMatrix& X, int d_prime, bool refine_geometric) {
  const int d = static_cast<int>(X.cols());
  if (d_prime + 1 > d) {
    throw std::invalid_argument("spca_fit: d'+1 must not exceed d");
  }
  SpcaModel model;
  model.mean = X.values.colwise().mean();
  OrthogonalMatrix R = pca_rotation(X);
  model.basis = R.values.leftCols(d_prime + 1);

  DataMatrix Y;
  Y.values = (X.values.rowwise() - model.mean.transpose()) * model.basis;
  model.center = spca_algebraic_center(Y);
  model.radius = spca_algebraic_radius(Y, model.center);
  if (refine_geometric) {
    refine_sphere_lm(Y.values, model.center, model.radius);
  }
  return model;
}

DataMatrix spca_transform(const SpcaModel& model, const DataMatrix& X) {
  if (X.cols() != model.mean.size()) {
    throw std::invalid_argument("spca_transform: dimension mismatch");
  }
  DataMatrix out = X;
  Eigen::MatrixXd T =
      (X.values.rowwise() - model.mean.transpose()) * model.basis;
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    Eigen::VectorXd dy = T.row(i).transpose() - model.center;
    const double nrm = dy.norm();
    Eigen::VectorXd p = model.center;
    if (nrm < kSingularEps) {
      p(0) += model.radius;  // deterministic direction on the degenerate axis
    } else {
      p += (model.radius / nrm) * dy;
    }
    T.row(i) = p.transpose();
  }
  out.values = T * model.basis.transpose();
  out.values.rowwise() += model.mean.transpose();
  return out;
}

}  // namespace srca
