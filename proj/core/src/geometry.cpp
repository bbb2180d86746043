#include "srca/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srca {

IndexSet::IndexSet(std::vector<int> members, int ambient_dim)
    : members_(std::move(members)), ambient_dim_(ambient_dim) {
  if (members_.empty()) throw std::invalid_argument("IndexSet: empty");
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k] < 0 || members_[k] >= ambient_dim_) {
      throw std::invalid_argument("IndexSet: index out of bounds");
    }
    if (k > 0 && members_[k] <= members_[k - 1]) {
      throw std::invalid_argument("IndexSet: members must strictly increase");
    }
  }
}

bool IndexSet::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

std::vector<int> IndexSet::complement() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(ambient_dim_ - size()));
  for (int i = 0; i < ambient_dim_; ++i) {
    if (!contains(i)) out.push_back(i);
  }
  return out;
}

WeightMatrix WeightMatrix::identity(int dim) {
  WeightMatrix W;
  W.dim_ = dim;
  W.is_identity_ = true;
  W.values_ = Eigen::MatrixXd::Identity(dim, dim);
  W.sqrt_ = W.values_;
  return W;
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd values)
    : dim_(static_cast<int>(values.rows())), values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw std::invalid_argument("WeightMatrix: not square");
  }
  if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("WeightMatrix: not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(values_);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("WeightMatrix: not positive definite");
  }
  sqrt_ = es.operatorSqrt();
  is_identity_ =
      (values_ - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff() ==
      0.0;
}

bool WeightMatrix::is_diagonal(double tol) const {
  if (is_identity_) return true;
  Eigen::MatrixXd off = values_;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

namespace {

/// In-plane weighted deviation I_I sqrt(W) (x - c) of one sample.
inline double in_plane_norm(const Eigen::VectorXd& y, const IndexSet& I,
                            const WeightMatrix& W) {
  double s = 0.0;
  if (W.is_identity()) {
    for (int j : I.members()) s += y(j) * y(j);
  } else {
    const Eigen::VectorXd z = W.sqrt_factor() * y;
    for (int j : I.members()) s += z(j) * z(j);
  }
  return std::sqrt(s);
}

/// Squared out-of-plane deviation ||I_{I^c} sqrt(W) (x - c)||^2.
inline double out_of_plane_sq(const Eigen::VectorXd& y, const IndexSet& I,
                              const WeightMatrix& W) {
  double s = 0.0;
  if (W.is_identity()) {
    for (int j = 0; j < I.ambient_dim(); ++j) {
      if (!I.contains(j)) s += y(j) * y(j);
    }
  } else {
    const Eigen::VectorXd z = W.sqrt_factor() * y;
    for (int j = 0; j < I.ambient_dim(); ++j) {
      if (!I.contains(j)) s += z(j) * z(j);
    }
  }
  return s;
}

}  // namespace

double point_to_sphere_sq_distance(const Eigen::VectorXd& x,
                                   const SphereParams& params,
                                   const IndexSet& I, const WeightMatrix& W) {
  // Evaluated as out-of-plane^2 + (in-plane - r)^2, which equals the
  // expanded form (x-c)'W(x-c) + r^2 - 2r*in-plane algebraically but stays
  // accurate when ||x-c|| is many orders larger than the residual.
  const Eigen::VectorXd y = x - params.center;
  const double s = in_plane_norm(y, I, W);
  const double dev = s - params.radius;
  return out_of_plane_sq(y, I, W) + dev * dev;
}

double loss(const DataMatrix& X, const SphereParams& params, const IndexSet& I,
            const WeightMatrix& W) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    total += point_to_sphere_sq_distance(X.values.row(i).transpose(), params,
                                         I, W);
  }
  return total;
}

LossGradient loss_gradient(const DataMatrix& X, const SphereParams& params,
                           const IndexSet& I, const WeightMatrix& W) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const double r = params.radius;
  LossGradient g;
  g.center = Eigen::VectorXd::Zero(d);
  double sum_s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd y = X.values.row(i).transpose() - params.center;
    if (W.is_identity()) {
      g.center -= 2.0 * y;
    } else {
      g.center -= 2.0 * (W.values() * y);
    }
    const double s = in_plane_norm(y, I, W);
    sum_s += s;
    if (s <= kSingularEps) continue;  // cone point: drop the radial term
    if (W.is_identity()) {
      for (int j : I.members()) g.center(j) += 2.0 * r * y(j) / s;
    } else {
      Eigen::VectorXd z = W.sqrt_factor() * y;
      for (int j = 0; j < d; ++j) {
        if (!I.contains(j)) z(j) = 0.0;
      }
      g.center += 2.0 * r * (W.sqrt_factor() * z) / s;
    }
  }
  g.radius = 2.0 * static_cast<double>(n) * r - 2.0 * sum_s;
  return g;
}

double optimal_radius(const DataMatrix& X, const Eigen::VectorXd& center,
                      const IndexSet& I, const WeightMatrix& W,
                      bool* degenerate) {
  const Eigen::Index n = X.rows();
  if (n < 1) throw std::invalid_argument("optimal_radius: empty dataset");
  double sum_s = 0.0;
  bool any_positive = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s =
        in_plane_norm(X.values.row(i).transpose() - center, I, W);
    if (s > kSingularEps) any_positive = true;
    sum_s += s;
  }
  if (degenerate) *degenerate = !any_positive;
  return sum_s / static_cast<double>(n);
}

DataMatrix project_to_sphere(const DataMatrix& X, const SphereParams& params,
                             const IndexSet& I,
                             std::vector<bool>* singular_rows) {
  DataMatrix out = X;
  if (singular_rows) {
    singular_rows->assign(static_cast<std::size_t>(X.rows()), false);
  }
  const auto comp = I.complement();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double s = 0.0;
    for (int j : I.members()) {
      const double dj = X.values(i, j) - params.center(j);
      s += dj * dj;
    }
    s = std::sqrt(s);
    if (s < kSingularEps) {
      // On the axis the radial direction is undefined; pick the first
      // I-coordinate so the output is deterministic.
      for (int j : I.members()) out.values(i, j) = params.center(j);
      out.values(i, I.members().front()) += params.radius;
      if (singular_rows) (*singular_rows)[static_cast<std::size_t>(i)] = true;
    } else {
      const double scale = params.radius / s;
      for (int j : I.members()) {
        out.values(i, j) =
            params.center(j) + scale * (X.values(i, j) - params.center(j));
      }
    }
    for (int j : comp) out.values(i, j) = params.center(j);
  }
  return out;
}

}  // namespace srca
