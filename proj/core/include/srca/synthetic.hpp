#pragma once

#include <cstdint>
#include <string>

#include "srca/data.hpp"

namespace srca {

enum class GeneratorKind { plane, torus, sphere, gem, orthogonal_loops };

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::sphere;
  int n = 500;
  double noise_var = 0.0;      // per-coordinate Gaussian noise variance
  std::uint64_t seed = 0;
  double R1 = 0.5;             // torus radii
  double R2 = 1.0 / 3.0;
};

/// Uniform on [-3,3]^2 x {0}.
DataMatrix gen_plane(int n, std::uint64_t seed);

/// ((R1+R2 cos t) cos p, (R1+R2 cos t) sin p, R2 sin t), angles uniform on
/// [0,2pi)^2. Requires 0 < R2 < R1.
DataMatrix gen_torus(int n, double R1, double R2, std::uint64_t seed);

/// Unit sphere, both angles uniform on [0,2pi) (angle-uniform, deliberately
/// not area-uniform).
DataMatrix gen_sphere(int n, std::uint64_t seed);

/// Three rigidly moved tori (default radii), then shifted by -(1,1,1) and
/// halved. Batch sizes differ by at most one; labels give the batch id.
DataMatrix gen_gem(int n, std::uint64_t seed);

/// Two unit circles meeting at exactly one point, (1,0,0): one in the
/// xy-plane centered at the origin, one in the xz-plane centered at
/// (1+cos 1.63, 0, sin 1.63). Per-coordinate N(0, noise_var) noise; labels
/// give the loop id.
DataMatrix gen_orthogonal_loops(int n, double noise_var, std::uint64_t seed);

/// Dispatch on spec.kind; noise_var applies to every kind (added after the
/// clean coordinates are drawn).
DataMatrix generate(const GeneratorSpec& spec);

}  // namespace srca
