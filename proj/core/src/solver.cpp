#include "srca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "srca/baselines.hpp"
#include "srca/rng.hpp"

namespace srca {

namespace {

constexpr std::uint64_t kSubsetHardCap = 100000;
constexpr double kArmijo = 1e-4;

}  // namespace

SearchStrategy search_strategy_from_string(const std::string& name) {
  if (name == "exhaustive") return SearchStrategy::exhaustive;
  if (name == "l1_relaxed" || name == "l1") return SearchStrategy::l1_relaxed;
  if (name == "auto" || name == "auto_select") return SearchStrategy::auto_select;
  throw std::invalid_argument("unknown search strategy: " + name);
}

std::string to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::exhaustive: return "exhaustive";
    case SearchStrategy::l1_relaxed: return "l1_relaxed";
    case SearchStrategy::auto_select: return "auto";
  }
  return "?";
}

void FitConfig::validate(int d) const {
  if (retained_dim < 1) throw std::invalid_argument("retained_dim must be >= 1");
  if (retained_dim + 1 > d) {
    throw std::invalid_argument("retained_dim + 1 must not exceed data dimension");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  if (max_outer_iters < 1 || max_gd_iters < 1) {
    throw std::invalid_argument("iteration limits must be positive");
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (penalty_lambda < 0.0) throw std::invalid_argument("penalty_lambda must be >= 0");
  if (weight && (weight->rows() != d || weight->cols() != d)) {
    throw std::invalid_argument("weight matrix dimension mismatch");
  }
}

std::string FitConfig::digest() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "dprime=%d;rotation=%s;strategy=%s;weight=%s;lambda=%.17g;"
                "step=%.17g;outer=%d;gd=%d;tol=%.17g;seed=%llu;restarts=%d",
                retained_dim, to_string(rotation.kind).c_str(),
                to_string(strategy).c_str(), weight ? "custom" : "identity",
                penalty_lambda, step_size, max_outer_iters, max_gd_iters, tol,
                static_cast<unsigned long long>(seed), restarts);
  return buf;
}

std::uint64_t subset_count(int d, int d_prime) {
  const int k = d_prime + 1;
  if (k > d) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(d - k + i);
    if (c > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

SearchStrategy select_strategy(int d, int d_prime) {
  return subset_count(d, d_prime) <= 500 ? SearchStrategy::exhaustive
                                         : SearchStrategy::l1_relaxed;
}

namespace {

/// Objective used by the fixed-subset descent: geometric loss plus the
/// optional l1 center-deviation penalty on the retained coordinates.
double penalized_loss(const DataMatrix& X, const SphereParams& p,
                      const IndexSet& I, const WeightMatrix& W,
                      double lambda) {
  double obj = loss(X, p, I, W);
  if (lambda > 0.0) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      for (int j : I.members()) obj += lambda * std::abs(X.values(i, j) - p.center(j));
    }
  }
  return obj;
}

struct DescentResult {
  SphereParams params;
  double objective = 0.0;  // penalized
  bool converged = false;
};

DescentResult descend(const DataMatrix& X, const IndexSet& I,
                      const WeightMatrix& W, const FitConfig& cfg,
                      Eigen::VectorXd c0) {
  const Eigen::Index n = X.rows();
  const bool shortcut = W.is_diagonal();
  const auto comp = I.complement();

  SphereParams p;
  p.center = std::move(c0);
  if (shortcut) {
    // For (block-)decoupled coordinates the complement center components are
    // the column means, independent of everything else.
    for (int j : comp) p.center(j) = X.values.col(j).mean();
  }
  p.radius = optimal_radius(X, p.center, I, W);

  DescentResult res;
  res.params = p;
  res.objective = penalized_loss(X, p, I, W, cfg.penalty_lambda);

  double obj_prev = res.objective;
  double step = cfg.step_size;
  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    Eigen::VectorXd g = loss_gradient(X, p, I, W).center;
    if (cfg.penalty_lambda > 0.0) {
      for (int j : I.members()) {
        double sg = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double dv = p.center(j) - X.values(i, j);
          if (dv > 0.0) sg += 1.0;
          else if (dv < 0.0) sg -= 1.0;
        }
        g(j) += cfg.penalty_lambda * sg;
      }
    }
    if (shortcut) {
      for (int j : comp) g(j) = 0.0;
    }
    const double gn2 = g.squaredNorm();
    if (gn2 <= cfg.tol * cfg.tol * (1.0 + obj_prev)) {
      res.converged = true;
      break;
    }

    double t = step;
    bool accepted = false;
    SphereParams trial = p;
    double obj_trial = obj_prev;
    for (int k = 0; k < cfg.max_gd_iters; ++k) {
      trial.center = p.center - t * g;
      trial.radius = optimal_radius(X, trial.center, I, W);
      obj_trial = penalized_loss(X, trial, I, W, cfg.penalty_lambda);
      if (obj_trial <= obj_prev - kArmijo * t * gn2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Could not decrease within the backtracking budget; keep best-so-far.
      res.converged = false;
      break;
    }
    p = trial;
    step = 2.0 * t;
    res.params = p;
    res.objective = obj_trial;
    if (std::abs(obj_prev - obj_trial) < cfg.tol * (1.0 + obj_trial)) {
      res.converged = true;
      break;
    }
    obj_prev = obj_trial;
  }
  return res;
}

std::uint64_t subset_hash(const IndexSet& I, std::uint64_t seed) {
  std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ULL;
  for (int j : I.members()) {
    h = h * 1000003ULL + static_cast<std::uint64_t>(j + 1);
  }
  return h;
}

}  // namespace

FixedSubsetFit fit_fixed_subset(const DataMatrix& X_rot, const IndexSet& I,
                                const WeightMatrix& W, const FitConfig& cfg) {
  const Eigen::Index n = X_rot.rows();
  const Eigen::Index d = X_rot.cols();
  if (n < 1) throw std::invalid_argument("fit_fixed_subset: empty dataset");

  const Eigen::VectorXd col_mean = X_rot.values.colwise().mean();
  std::vector<Eigen::VectorXd> inits;
  inits.push_back(Eigen::VectorXd::Zero(d));

  // Algebraic warm start: the closed-form sphere through the retained
  // coordinates. With identity weight its loss equals the two-step
  // PCA-then-algebraic-sphere baseline on the matching subspace, so the
  // monotone descent below can only improve on that baseline.
  {
    DataMatrix Y;
    Y.values.resize(n, I.size());
    for (int k = 0; k < I.size(); ++k) {
      Y.values.col(k) = X_rot.values.col(I.members()[static_cast<std::size_t>(k)]);
    }
    try {
      const Eigen::VectorXd cy = spca_algebraic_center(Y);
      Eigen::VectorXd c = col_mean;
      for (int k = 0; k < I.size(); ++k) {
        c(I.members()[static_cast<std::size_t>(k)]) = cy(k);
      }
      inits.push_back(std::move(c));
    } catch (const std::exception&) {
      // Degenerate scatter: skip this warm start.
    }
  }

  // Flat warm start: a huge sphere through the data approximates the best
  // hyperplane spanned by the other retained coordinates, so descent starts
  // at (numerically) the linear baseline's loss.
  {
    const double scale =
        std::sqrt(X_rot.values.squaredNorm() / static_cast<double>(n)) + 1e-12;
    Eigen::VectorXd c = col_mean;
    c(I.members().back()) -= 3.0e7 * scale;
    inits.push_back(std::move(c));
  }

  if (cfg.restarts > 1) {
    Rng rng(subset_hash(I, cfg.seed));
    Eigen::VectorXd col_std(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const Eigen::VectorXd dev = X_rot.values.col(j).array() - col_mean(j);
      col_std(j) = std::sqrt(dev.squaredNorm() / static_cast<double>(n));
    }
    for (int k = 1; k < cfg.restarts; ++k) {
      Eigen::VectorXd c = col_mean;
      for (Eigen::Index j = 0; j < d; ++j) c(j) += col_std(j) * rng.normal();
      inits.push_back(std::move(c));
    }
  }

  DescentResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (auto& c0 : inits) {
    DescentResult r = descend(X_rot, I, W, cfg, std::move(c0));
    if (r.objective < best.objective) best = std::move(r);
  }

  FixedSubsetFit out;
  out.params = best.params;
  out.loss = loss(X_rot, best.params, I, W);
  out.converged = best.converged;
  return out;
}

namespace {

struct Prepared {
  Eigen::VectorXd mean;
  OrthogonalMatrix rotation;
  DataMatrix X_rot;
  WeightMatrix W;
};

Prepared prepare(const DataMatrix& X, const FitConfig& cfg) {
  X.validate();
  cfg.validate(static_cast<int>(X.cols()));
  Prepared prep{Eigen::VectorXd(), OrthogonalMatrix{},
                DataMatrix{},
                cfg.weight ? WeightMatrix(*cfg.weight)
                           : WeightMatrix::identity(static_cast<int>(X.cols()))};
  prep.mean = X.values.colwise().mean();
  DataMatrix centered = X;
  centered.values = X.values.rowwise() - prep.mean.transpose();
  prep.rotation = make_rotation(centered, cfg.rotation);
  prep.X_rot = apply_rotation(centered, prep.rotation);
  return prep;
}

SphereModel assemble(const Prepared& prep, const FitConfig& cfg,
                     const IndexSet& I, const FixedSubsetFit& fit) {
  SphereModel m;
  m.mean = prep.mean;
  m.rotation = prep.rotation;
  m.index_set = I;
  m.params = fit.params;
  m.weight_is_identity = prep.W.is_identity();
  if (!m.weight_is_identity) m.weight = prep.W.values();
  m.final_loss = fit.loss;
  m.converged = fit.converged;
  m.config_digest = cfg.digest();
  return m;
}

bool next_combination(std::vector<int>& comb, int d) {
  const int k = static_cast<int>(comb.size());
  for (int i = k - 1; i >= 0; --i) {
    if (comb[static_cast<std::size_t>(i)] < d - k + i) {
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

SphereModel fit_exhaustive(const DataMatrix& X, const FitConfig& cfg) {
  const int d = static_cast<int>(X.cols());
  const std::uint64_t count = subset_count(d, cfg.retained_dim);
  if (count > kSubsetHardCap) {
    throw std::runtime_error(
        "exhaustive search over " + std::to_string(count) +
        " subsets exceeds the hard cap; use the l1_relaxed strategy");
  }
  Prepared prep = prepare(X, cfg);

  std::vector<int> comb(static_cast<std::size_t>(cfg.retained_dim + 1));
  std::iota(comb.begin(), comb.end(), 0);
  bool have_best = false;
  IndexSet best_I;
  FixedSubsetFit best_fit;
  do {
    IndexSet I(comb, d);
    FixedSubsetFit f = fit_fixed_subset(prep.X_rot, I, prep.W, cfg);
    // Strict comparison in enumeration order = lexicographic tie-break.
    if (!have_best || f.loss < best_fit.loss) {
      have_best = true;
      best_I = I;
      best_fit = f;
    }
  } while (next_combination(comb, d));

  return assemble(prep, cfg, best_I, best_fit);
}

Eigen::VectorXd project_box_l1(const Eigen::VectorXd& v, double budget) {
  Eigen::VectorXd out = v.cwiseMax(0.0).cwiseMin(1.0);
  if (out.sum() <= budget) return out;
  // Find the shift tau with sum(clamp01(v - tau)) = budget by bisection; the
  // map is continuous and non-increasing in tau.
  double lo = 0.0, hi = v.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s =
        (v.array() - mid).cwiseMax(0.0).cwiseMin(1.0).sum();
    if (s > budget) lo = mid; else hi = mid;
  }
  return (v.array() - hi).cwiseMax(0.0).cwiseMin(1.0);
}

namespace {

SphereModel fit_relaxed_impl(const DataMatrix& X, const FitConfig& cfg) {
  Prepared prep = prepare(X, cfg);
  const Eigen::Index n = prep.X_rot.rows();
  const Eigen::Index d = prep.X_rot.cols();
  const double budget = static_cast<double>(cfg.retained_dim + 1);
  const double lambda = cfg.penalty_lambda;
  const WeightMatrix& W = prep.W;
  const Eigen::MatrixXd& Xv = prep.X_rot.values;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd v =
      Eigen::VectorXd::Constant(d, budget / static_cast<double>(d));

  // Per-sample weighted deviations z_i = sqrt(W)(x_i - c) and the relaxed
  // in-plane norms s_i = ||diag(v) z_i||.
  auto eval = [&](const Eigen::VectorXd& cc, const Eigen::VectorXd& vv,
                  Eigen::MatrixXd* Z_out, Eigen::VectorXd* s_out,
                  double* r_out) {
    Eigen::MatrixXd Y = Xv.rowwise() - cc.transpose();
    Eigen::MatrixXd Z = W.is_identity()
                            ? Y
                            : Eigen::MatrixXd(Y * W.sqrt_factor());
    Eigen::VectorXd s =
        (Z.array().square().rowwise() * vv.array().square().transpose())
            .rowwise()
            .sum()
            .sqrt();
    const double r = s.mean();
    double obj = 0.0;
    if (W.is_identity()) {
      obj = Y.squaredNorm();
    } else {
      obj = (Y * W.values()).cwiseProduct(Y).sum();
    }
    obj += static_cast<double>(n) * r * r - 2.0 * r * s.sum();
    if (lambda > 0.0) {
      obj += lambda * (Y.cwiseAbs().array().rowwise() * vv.transpose().array())
                          .sum();
    }
    if (Z_out) *Z_out = std::move(Z);
    if (s_out) *s_out = std::move(s);
    if (r_out) *r_out = r;
    return obj;
  };

  double obj = eval(c, v, nullptr, nullptr, nullptr);
  double step = cfg.step_size;
  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd s;
    double r = 0.0;
    eval(c, v, &Z, &s, &r);

    Eigen::MatrixXd Y = Xv.rowwise() - c.transpose();
    Eigen::VectorXd gc(d);
    if (W.is_identity()) {
      gc = -2.0 * Y.colwise().sum().transpose();
    } else {
      gc = -2.0 * (Y * W.values()).colwise().sum().transpose();
    }
    Eigen::VectorXd gv = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (s(i) <= kSingularEps) continue;
      const Eigen::VectorXd zi = Z.row(i).transpose();
      const Eigen::VectorXd dz =
          v.array().square() * zi.array() / s(i);  // d s_i / d z_i
      if (W.is_identity()) {
        gc += 2.0 * r * dz;
      } else {
        gc += 2.0 * r * (W.sqrt_factor() * dz);
      }
      gv.array() -= 2.0 * r * v.array() * zi.array().square() / s(i);
    }
    if (lambda > 0.0) {
      for (Eigen::Index j = 0; j < d; ++j) {
        double sg = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (Y(i, j) < 0.0) sg += 1.0;       // d|x-c|/dc = sign(c - x)
          else if (Y(i, j) > 0.0) sg -= 1.0;
        }
        gc(j) += lambda * v(j) * sg;
        gv(j) += lambda * Y.col(j).cwiseAbs().sum();
      }
    }

    double t = step;
    bool accepted = false;
    Eigen::VectorXd c_try, v_try;
    double obj_try = obj;
    for (int k = 0; k < cfg.max_gd_iters; ++k) {
      c_try = c - t * gc;
      v_try = project_box_l1(v - t * gv, budget);
      obj_try = eval(c_try, v_try, nullptr, nullptr, nullptr);
      const double move =
          (c_try - c).squaredNorm() + (v_try - v).squaredNorm();
      if (obj_try <= obj - kArmijo * move / std::max(t, 1e-300)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    c = c_try;
    v = v_try;
    step = 2.0 * t;
    if (std::abs(obj - obj_try) < cfg.tol * (1.0 + std::abs(obj_try))) {
      obj = obj_try;
      break;
    }
    obj = obj_try;
  }

  // Round the selector: the retained_dim+1 largest entries win, distance
  // ties go to the smaller coordinate.
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v(a) > v(b); });
  std::vector<int> chosen(order.begin(),
                          order.begin() + cfg.retained_dim + 1);
  std::sort(chosen.begin(), chosen.end());
  IndexSet I(chosen, static_cast<int>(d));

  FixedSubsetFit refit = fit_fixed_subset(prep.X_rot, I, prep.W, cfg);
  return assemble(prep, cfg, I, refit);
}

}  // namespace

SphereModel fit_l1(const DataMatrix& X, const FitConfig& cfg) {
  return fit_relaxed_impl(X, cfg);
}

SphereModel fit_sparse(const DataMatrix& X, const FitConfig& cfg) {
  if (!(cfg.penalty_lambda > 0.0)) {
    throw std::invalid_argument("fit_sparse requires penalty_lambda > 0");
  }
  return fit_relaxed_impl(X, cfg);
}

SphereModel fit(const DataMatrix& X, const FitConfig& cfg) {
  if (cfg.penalty_lambda > 0.0) return fit_sparse(X, cfg);
  SearchStrategy s = cfg.strategy;
  if (s == SearchStrategy::auto_select) {
    s = select_strategy(static_cast<int>(X.cols()), cfg.retained_dim);
  }
  return s == SearchStrategy::exhaustive ? fit_exhaustive(X, cfg)
                                         : fit_l1(X, cfg);
}

DataMatrix transform(const SphereModel& model, const DataMatrix& X) {
  if (X.cols() != model.mean.size()) {
    throw std::invalid_argument("transform: dimension mismatch");
  }
  DataMatrix centered = X;
  centered.values = X.values.rowwise() - model.mean.transpose();
  DataMatrix rotated = apply_rotation(centered, model.rotation);
  DataMatrix projected =
      project_to_sphere(rotated, model.params, model.index_set);
  DataMatrix out = invert_rotation(projected, model.rotation);
  out.values = out.values.rowwise() + model.mean.transpose();
  return out;
}

}  // namespace srca
