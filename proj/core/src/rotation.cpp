#include "srca/rotation.hpp"

#include <cmath>
#include <stdexcept>

namespace srca {

RotationKind rotation_kind_from_string(const std::string& name) {
  if (name == "identity") return RotationKind::identity;
  if (name == "pca") return RotationKind::pca;
  if (name == "varimax") return RotationKind::varimax;
  if (name == "quartimax") return RotationKind::quartimax;
  if (name == "equamax") return RotationKind::equamax;
  if (name == "parsimax") return RotationKind::parsimax;
  if (name == "orthomax") return RotationKind::orthomax;
  throw std::invalid_argument("unknown rotation kind: " + name);
}

std::string to_string(RotationKind kind) {
  switch (kind) {
    case RotationKind::identity: return "identity";
    case RotationKind::pca: return "pca";
    case RotationKind::varimax: return "varimax";
    case RotationKind::quartimax: return "quartimax";
    case RotationKind::equamax: return "equamax";
    case RotationKind::parsimax: return "parsimax";
    case RotationKind::orthomax: return "orthomax";
  }
  return "?";
}

bool OrthogonalMatrix::is_orthogonal(double tol) const {
  const Eigen::Index d = values.rows();
  if (values.cols() != d) return false;
  const double gram_err =
      (values.transpose() * values - Eigen::MatrixXd::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  if (gram_err > tol) return false;
  return std::abs(std::abs(values.determinant()) - 1.0) <= tol;
}

namespace {

void fix_column_signs(Eigen::MatrixXd& M) {
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    Eigen::Index imax = 0;
    M.col(j).cwiseAbs().maxCoeff(&imax);
    if (M(imax, j) < 0.0) M.col(j) = -M.col(j);
  }
}

Eigen::MatrixXd sample_covariance(const DataMatrix& X) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw std::invalid_argument("need at least 2 samples");
  Eigen::MatrixXd centered =
      X.values.rowwise() - X.values.colwise().mean();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  if (!cov.allFinite()) throw std::runtime_error("covariance is not finite");
  return cov;
}

}  // namespace

OrthogonalMatrix pca_rotation(const DataMatrix& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sample_covariance(X));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  // SelfAdjointEigenSolver sorts ascending; we want descending eigenvalue.
  OrthogonalMatrix R;
  R.values = es.eigenvectors().rowwise().reverse();
  fix_column_signs(R.values);
  return R;
}

Eigen::VectorXd pca_eigenvalues(const DataMatrix& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sample_covariance(X));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  return es.eigenvalues().reverse();
}

double orthomax_criterion(const Eigen::MatrixXd& L, double gamma) {
  const double d = static_cast<double>(L.rows());
  const Eigen::ArrayXXd sq = L.array().square();
  double value = sq.square().sum();
  value -= (gamma / d) * sq.colwise().sum().square().sum();
  return value;
}

OrthomaxResult orthomax_rotation(const Eigen::MatrixXd& loadings, double gamma,
                                 int max_iter, double tol) {
  if (!loadings.allFinite()) {
    throw std::invalid_argument("orthomax: loadings not finite");
  }
  const Eigen::Index d = loadings.rows();
  const Eigen::Index m = loadings.cols();
  if (m > d) throw std::invalid_argument("orthomax: more columns than rows");

  OrthomaxResult res;
  res.T.values = Eigen::MatrixXd::Identity(m, m);
  res.criterion = orthomax_criterion(loadings, gamma);

  double sv_sum_prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd B = loadings * res.T.values;
    const Eigen::ArrayXXd B2 = B.array().square();
    Eigen::MatrixXd G =
        B.array() * (B2 - (gamma / static_cast<double>(d)) *
                              B2.colwise().sum().replicate(d, 1));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        loadings.transpose() * G.matrix(),
        Eigen::ComputeFullU | Eigen::ComputeFullV);
    res.T.values = svd.matrixU() * svd.matrixV().transpose();
    const double sv_sum = svd.singularValues().sum();
    res.iterations = it + 1;
    if (it > 0 && sv_sum - sv_sum_prev < tol * (1.0 + std::abs(sv_sum))) {
      res.converged = true;
      break;
    }
    sv_sum_prev = sv_sum;
  }
  res.criterion = orthomax_criterion(loadings * res.T.values, gamma);
  return res;
}

double orthomax_gamma(RotationKind kind, Eigen::Index d, Eigen::Index m) {
  switch (kind) {
    case RotationKind::quartimax: return 0.0;
    case RotationKind::varimax: return 1.0;
    case RotationKind::equamax: return static_cast<double>(m) / 2.0;
    case RotationKind::parsimax:
      return static_cast<double>(d) * static_cast<double>(m - 1) /
             static_cast<double>(d + m - 2);
    default:
      throw std::invalid_argument("not an orthomax family member");
  }
}

OrthogonalMatrix make_rotation(const DataMatrix& X_centered,
                               const RotationMethod& method) {
  const Eigen::Index d = X_centered.cols();
  if (method.kind == RotationKind::identity) {
    OrthogonalMatrix R;
    R.values = Eigen::MatrixXd::Identity(d, d);
    return R;
  }
  OrthogonalMatrix base = pca_rotation(X_centered);
  if (method.kind == RotationKind::pca) return base;

  const double gamma = method.kind == RotationKind::orthomax
                           ? method.gamma
                           : orthomax_gamma(method.kind, d, d);
  // Scale the loadings by sqrt-eigenvalues so the orthomax criterion sees the
  // variance structure, not just the (orthonormal) eigenvector pattern.
  Eigen::VectorXd ev = pca_eigenvalues(X_centered).cwiseMax(0.0);
  Eigen::MatrixXd loadings = base.values * ev.cwiseSqrt().asDiagonal();
  OrthomaxResult om = orthomax_rotation(loadings, gamma);
  OrthogonalMatrix R;
  R.values = base.values * om.T.values;
  fix_column_signs(R.values);
  return R;
}

DataMatrix apply_rotation(const DataMatrix& X, const OrthogonalMatrix& R) {
  if (X.cols() != R.dim()) {
    throw std::invalid_argument("apply_rotation: dimension mismatch");
  }
  DataMatrix out = X;
  out.values = X.values * R.values;
  return out;
}

DataMatrix invert_rotation(const DataMatrix& X, const OrthogonalMatrix& R) {
  if (X.cols() != R.dim()) {
    throw std::invalid_argument("invert_rotation: dimension mismatch");
  }
  DataMatrix out = X;
  out.values = X.values * R.values.transpose();
  return out;
}

}  // namespace srca
