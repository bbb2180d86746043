#pragma once

#include <Eigen/Dense>
#include <utility>

#include "srca/data.hpp"

namespace srca {

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd basis;  // d x d', orthonormal columns
};

/// Reduces to the top d' principal components and reconstructs in ambient
/// coordinates: rows become x-bar + V V^T (x - x-bar).
std::pair<PcaModel, DataMatrix> pca_fit_reduce(const DataMatrix& X, int d_prime);

DataMatrix pca_transform(const PcaModel& model, const DataMatrix& X);

struct SpcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd basis;    // d x (d'+1), orthonormal columns
  Eigen::VectorXd center;   // subspace coordinates
  double radius = 0.0;
};

/// Closed-form center of the algebraic sphere fit
///   c = 1/2 (sum (y_i - y-bar)(y_i - y-bar)^T)^{-1}
///         sum (y_i^T y_i - mean_k y_k^T y_k)(y_i - y-bar).
/// Throws when the scatter matrix is singular (points do not affinely span).
Eigen::VectorXd spca_algebraic_center(const DataMatrix& Y);

/// Root-mean-square distance to the center; the positive root of the cubic
/// r^3 + p r = 0 with p = -mean ||y_i - c||^2, which is what the
/// trigonometric Cardano expression collapses to when its quadratic
/// coefficient vanishes.
double spca_algebraic_radius(const DataMatrix& Y, const Eigen::VectorXd& center);

/// Two-step baseline: PCA to d'+1 dimensions, then the algebraic sphere fit
/// in that subspace. `refine_geometric` runs a Levenberg-Marquardt polish of
/// the geometric (orthogonal-distance) loss from the algebraic solution.
SpcaModel spca_fit(const DataMatrix& X, int d_prime,
                   bool refine_geometric = false);

DataMatrix spca_transform(const SpcaModel& model, const DataMatrix& X);

}  // namespace srca
