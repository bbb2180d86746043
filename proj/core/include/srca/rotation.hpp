#pragma once

#include <Eigen/Dense>
#include <string>

#include "srca/data.hpp"

namespace srca {

/// Rotation families. `identity` skips rotation entirely (useful when the data
/// is already axis-aligned); `orthomax` takes a caller-supplied gamma, the
/// named members map to the conventional gamma values.
enum class RotationKind {
  identity,
  pca,
  varimax,
  quartimax,
  equamax,
  parsimax,
  orthomax
};

struct RotationMethod {
  RotationKind kind = RotationKind::pca;
  double gamma = 1.0;  // consulted only for kind == orthomax
};

RotationKind rotation_kind_from_string(const std::string& name);
std::string to_string(RotationKind kind);

struct OrthogonalMatrix {
  Eigen::MatrixXd values;

  Eigen::Index dim() const { return values.rows(); }
  /// RᵀR = I and |det R| = 1, both within 1e-10.
  bool is_orthogonal(double tol = 1e-10) const;
};

/// Columns are covariance eigenvectors by descending eigenvalue; the sign of
/// each column is fixed so its largest-magnitude entry is positive.
OrthogonalMatrix pca_rotation(const DataMatrix& X);

/// Eigenvalues corresponding to pca_rotation's columns (descending).
Eigen::VectorXd pca_eigenvalues(const DataMatrix& X);

struct OrthomaxResult {
  OrthogonalMatrix T;   // m x m, acts on the loadings from the right
  double criterion = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Standard orthomax iteration maximizing
///   sum_j sum_i L4(i,j) - (gamma/d) * sum_j (sum_i L2(i,j))^2
/// for the rotated loadings L·T. Returns the best iterate with a convergence
/// flag; the criterion is non-decreasing across iterations.
OrthomaxResult orthomax_rotation(const Eigen::MatrixXd& loadings, double gamma,
                                 int max_iter = 1000, double tol = 1e-10);

double orthomax_criterion(const Eigen::MatrixXd& loadings, double gamma);

double orthomax_gamma(RotationKind kind, Eigen::Index d, Eigen::Index m);

/// Builds the full d x d rotation for the requested method. For the orthomax
/// family the PCA loadings are rotated and the result re-orthonormalized.
/// Pass-through of gamma for RotationKind::orthomax.
OrthogonalMatrix make_rotation(const DataMatrix& X_centered,
                               const RotationMethod& method);

DataMatrix apply_rotation(const DataMatrix& X, const OrthogonalMatrix& R);
DataMatrix invert_rotation(const DataMatrix& X, const OrthogonalMatrix& R);

}  // namespace srca
