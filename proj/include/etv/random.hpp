#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace etv {

/// Seedable random source with a fully specified algorithm so that masks
/// and noise are bit-reproducible across platforms and standard libraries.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the C++
/// standard). Uniforms take the top 53 bits of one draw scaled by 2^-53.
/// Normals use the Box-Muller transform on (1 - u1, u2), returning the
/// cosine branch first and the sine branch on the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace etv
