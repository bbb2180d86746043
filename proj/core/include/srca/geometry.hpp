#pragma once

#include <Eigen/Dense>
#include <vector>

#include "srca/data.hpp"

namespace srca {

/// Tolerance below which an in-plane deviation counts as sitting on the
/// sphere's axis (cone point of the distance function).
inline constexpr double kSingularEps = 1e-12;

/// Sorted, strictly increasing 0-based coordinate indices into {0,..,d-1}.
/// (Serialization and user-facing printing use 1-based indices.)
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<int> members, int ambient_dim);

  const std::vector<int>& members() const { return members_; }
  int ambient_dim() const { return ambient_dim_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int i) const;

  /// Complement within {0,..,ambient_dim-1}.
  std::vector<int> complement() const;

  bool operator==(const IndexSet& other) const = default;

 private:
  std::vector<int> members_;
  int ambient_dim_ = 0;
};

/// Symmetric positive-definite weight; the identity gets a fast path that
/// skips all matrix products.
class WeightMatrix {
 public:
  static WeightMatrix identity(int dim);
  /// Throws on asymmetry (beyond 1e-12) or a non-positive eigenvalue.
  explicit WeightMatrix(Eigen::MatrixXd values);

  int dim() const { return dim_; }
  bool is_identity() const { return is_identity_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXd& sqrt_factor() const { return sqrt_; }
  bool is_diagonal(double tol = 1e-12) const;

 private:
  WeightMatrix() = default;
  int dim_ = 0;
  bool is_identity_ = false;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd sqrt_;
};

struct SphereParams {
  Eigen::VectorXd center;
  double radius = 0.0;
};

double point_to_sphere_sq_distance(const Eigen::VectorXd& x,
                                   const SphereParams& params,
                                   const IndexSet& I, const WeightMatrix& W);

double loss(const DataMatrix& X, const SphereParams& params, const IndexSet& I,
            const WeightMatrix& W);

struct LossGradient {
  Eigen::VectorXd center;
  double radius = 0.0;
};

/// Analytic gradient; samples whose in-plane deviation is below kSingularEps
/// contribute only the smooth -2W(x-c) term.
LossGradient loss_gradient(const DataMatrix& X, const SphereParams& params,
                           const IndexSet& I, const WeightMatrix& W);

/// Mean in-plane weighted norm; the unique minimizer of the loss in r for
/// fixed center. Returns 0 when every point coincides with the center in
/// I-coordinates (degenerate), reported via *degenerate when provided.
double optimal_radius(const DataMatrix& X, const Eigen::VectorXd& center,
                      const IndexSet& I, const WeightMatrix& W,
                      bool* degenerate = nullptr);

/// Radial projection onto the sphere: I-coordinates are rescaled to radius r
/// around the center, complement coordinates are set to the center's.
/// Rows on the sphere's axis fall back to the first index of I; the optional
/// flag vector records which rows needed the fallback.
DataMatrix project_to_sphere(const DataMatrix& X, const SphereParams& params,
                             const IndexSet& I,
                             std::vector<bool>* singular_rows = nullptr);

}  // namespace srca
