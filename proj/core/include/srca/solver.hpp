#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "srca/data.hpp"
#include "srca/geometry.hpp"
#include "srca/rotation.hpp"

namespace srca {

enum class SearchStrategy { exhaustive, l1_relaxed, auto_select };

SearchStrategy search_strategy_from_string(const std::string& name);
std::string to_string(SearchStrategy s);

struct FitConfig {
  int retained_dim = 2;                    // d', the intrinsic dimension
  RotationMethod rotation{};               // pca by default
  SearchStrategy strategy = SearchStrategy::auto_select;
  std::optional<Eigen::MatrixXd> weight;   // identity when absent
  double penalty_lambda = 0.0;             // l1 center-deviation penalty
  double step_size = 1.0;                  // initial line-search step
  int max_outer_iters = 200;
  int max_gd_iters = 500;                  // line-search halvings per step
  double tol = 1e-8;                       // |dL| < tol*(1+L)
  std::uint64_t seed = 0;
  int restarts = 1;                        // random center restarts per subset

  void validate(int d) const;              // throws std::invalid_argument
  std::string digest() const;
};

/// Fitted sphere in rotated, centered coordinates plus everything needed to
/// map new samples through rotate -> project -> rotate back.
struct SphereModel {
  Eigen::VectorXd mean;          // x-bar, ambient coordinates
  OrthogonalMatrix rotation;     // applied as X * R
  IndexSet index_set;
  SphereParams params;           // center/radius in rotated centered coords
  bool weight_is_identity = true;
  Eigen::MatrixXd weight;        // empty when identity
  double final_loss = 0.0;       // geometric loss on the training set
  bool converged = false;
  std::string config_digest;
};

struct FixedSubsetFit {
  SphereParams params;
  double loss = 0.0;
  bool converged = false;
};

/// Alternating optimization for a fixed index set on centered, rotated data:
/// closed-form radius, coordinate-mean shortcut for the complement (diagonal
/// W only), backtracked gradient descent on the center. Runs the configured
/// restarts plus deterministic warm starts and keeps the best outcome.
FixedSubsetFit fit_fixed_subset(const DataMatrix& X_rot, const IndexSet& I,
                                const WeightMatrix& W, const FitConfig& cfg);

SphereModel fit_exhaustive(const DataMatrix& X, const FitConfig& cfg);

SphereModel fit_l1(const DataMatrix& X, const FitConfig& cfg);

/// fit_l1 with the per-sample l1 center-deviation penalty (requires
/// cfg.penalty_lambda > 0). final_loss still reports the unpenalized
/// geometric loss.
SphereModel fit_sparse(const DataMatrix& X, const FitConfig& cfg);

/// exhaustive iff C(d, d'+1) <= 500.
SearchStrategy select_strategy(int d, int d_prime);

/// Number of index subsets the exhaustive search would visit; saturates at
/// a large sentinel instead of overflowing.
std::uint64_t subset_count(int d, int d_prime);

/// Dispatches on cfg.strategy (resolving auto_select) and cfg.penalty_lambda.
SphereModel fit(const DataMatrix& X, const FitConfig& cfg);

/// rotate -> project onto the fitted sphere -> rotate back; works on unseen
/// rows of matching dimension.
DataMatrix transform(const SphereModel& model, const DataMatrix& X);

/// Euclidean projection onto {v in [0,1]^d : sum v <= budget}.
Eigen::VectorXd project_box_l1(const Eigen::VectorXd& v, double budget);

}  // namespace srca
