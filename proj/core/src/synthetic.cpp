#include "srca/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "srca/rng.hpp"

namespace srca {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  if (name == "plane") return GeneratorKind::plane;
  if (name == "torus") return GeneratorKind::torus;
  if (name == "sphere") return GeneratorKind::sphere;
  if (name == "gem") return GeneratorKind::gem;
  if (name == "orthogonal_loops" || name == "loops") {
    return GeneratorKind::orthogonal_loops;
  }
  throw std::invalid_argument("unknown generator kind: " + name);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::plane: return "plane";
    case GeneratorKind::torus: return "torus";
    case GeneratorKind::sphere: return "sphere";
    case GeneratorKind::gem: return "gem";
    case GeneratorKind::orthogonal_loops: return "orthogonal_loops";
  }
  return "?";
}

DataMatrix gen_plane(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_plane: n must be >= 1");
  Rng rng(seed);
  DataMatrix X;
  X.values.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    X.values(i, 0) = rng.uniform(-3.0, 3.0);
    X.values(i, 1) = rng.uniform(-3.0, 3.0);
    X.values(i, 2) = 0.0;
  }
  return X;
}

DataMatrix gen_torus(int n, double R1, double R2, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_torus: n must be >= 1");
  if (!(R2 > 0.0 && R2 < R1)) {
    throw std::invalid_argument("gen_torus: need 0 < R2 < R1");
  }
  Rng rng(seed);
  DataMatrix X;
  X.values.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const double t = rng.uniform(0.0, kTwoPi);
    const double p = rng.uniform(0.0, kTwoPi);
    const double ring = R1 + R2 * std::cos(t);
    X.values(i, 0) = ring * std::cos(p);
    X.values(i, 1) = ring * std::sin(p);
    X.values(i, 2) = R2 * std::sin(t);
  }
  return X;
}

DataMatrix gen_sphere(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_sphere: n must be >= 1");
  Rng rng(seed);
  DataMatrix X;
  X.values.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(0.0, kTwoPi);
    const double v = rng.uniform(0.0, kTwoPi);
    X.values(i, 0) = std::sin(u) * std::cos(v);
    X.values(i, 1) = std::sin(u) * std::sin(v);
    X.values(i, 2) = std::cos(u);
  }
  return X;
}

DataMatrix gen_gem(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_gem: n must be >= 1");
  // Batch sizes differing by at most one.
  int sizes[3] = {n / 3, n / 3, n / 3};
  for (int k = 0; k < n % 3; ++k) ++sizes[k];

  const double c4 = std::cos(kTwoPi / 8.0);  // cos(pi/4)
  const double s4 = std::sin(kTwoPi / 8.0);
  Eigen::Matrix3d R[3];
  Eigen::Vector3d tau[3];
  R[0] << 1, 0, 0,
          0, 0, -1,
          0, 1, 0;                       // rotate pi/2 about x
  tau[0] << 0, 0, 3;
  R[1] << c4, 0, s4,
          0, 1, 0,
          -s4, 0, c4;                    // rotate pi/4 about y
  tau[1] << 0, 3, 3;
  R[2].setIdentity();
  tau[2] << 3, 3, 3;

  DataMatrix X;
  X.values.resize(n, 3);
  X.labels = std::vector<int>(static_cast<std::size_t>(n));
  int row = 0;
  for (int b = 0; b < 3; ++b) {
    if (sizes[b] == 0) continue;
    DataMatrix batch = gen_torus(sizes[b], 0.5, 1.0 / 3.0,
                                 seed + static_cast<std::uint64_t>(b) + 1);
    for (int i = 0; i < sizes[b]; ++i) {
      Eigen::Vector3d x = R[b] * batch.values.row(i).transpose() + tau[b];
      X.values.row(row) = 0.5 * (x - Eigen::Vector3d::Ones()).transpose();
      (*X.labels)[static_cast<std::size_t>(row)] = b;
      ++row;
    }
  }
  return X;
}

DataMatrix gen_orthogonal_loops(int n, double noise_var, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_orthogonal_loops: n must be >= 2");
  if (noise_var < 0.0) {
    throw std::invalid_argument("gen_orthogonal_loops: noise_var must be >= 0");
  }
  Rng rng(seed);
  const int n_a = n / 2;
  DataMatrix X;
  X.values.resize(n, 3);
  X.labels = std::vector<int>(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = rng.uniform(0.0, kTwoPi);
    if (i < n_a) {
      X.values(i, 0) = std::cos(t);
      X.values(i, 1) = std::sin(t);
      X.values(i, 2) = 0.0;
      (*X.labels)[static_cast<std::size_t>(i)] = 0;
    } else {
      // Unit circle in the xz-plane whose center sits at unit distance from
      // (1,0,0), at angle kLoopPhi above the x-axis. It therefore passes
      // through (1,0,0), and that is the only point shared with the first
      // loop (the other z=0 crossing, x = 1 + 2cos(kLoopPhi), is off the
      // unit circle).
      constexpr double kLoopPhi = 1.63;
      X.values(i, 0) = 1.0 + std::cos(kLoopPhi) + std::cos(t);
      X.values(i, 1) = 0.0;
      X.values(i, 2) = std::sin(kLoopPhi) + std::sin(t);
      (*X.labels)[static_cast<std::size_t>(i)] = 1;
    }
  }
  if (noise_var > 0.0) {
    const double sd = std::sqrt(noise_var);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) X.values(i, j) += rng.normal(0.0, sd);
    }
  }
  return X;
}

DataMatrix generate(const GeneratorSpec& spec) {
  if (spec.noise_var < 0.0) {
    throw std::invalid_argument("generate: noise_var must be >= 0");
  }
  if (spec.kind == GeneratorKind::orthogonal_loops) {
    return gen_orthogonal_loops(spec.n, spec.noise_var, spec.seed);
  }
  DataMatrix X;
  switch (spec.kind) {
    case GeneratorKind::plane: X = gen_plane(spec.n, spec.seed); break;
    case GeneratorKind::torus:
      X = gen_torus(spec.n, spec.R1, spec.R2, spec.seed);
      break;
    case GeneratorKind::sphere: X = gen_sphere(spec.n, spec.seed); break;
    case GeneratorKind::gem: X = gen_gem(spec.n, spec.seed); break;
    default: throw std::invalid_argument("generate: unknown kind");
  }
  if (spec.noise_var > 0.0) {
    // A separate stream keeps the clean coordinates identical whether or not
    // noise is requested.
    Rng noise(spec.seed ^ 0xD1B54A32D192ED03ULL);
    const double sd = std::sqrt(spec.noise_var);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      for (Eigen::Index j = 0; j < X.cols(); ++j) {
        X.values(i, j) += noise.normal(0.0, sd);
      }
    }
  }
  return X;
}

}  // namespace srca
