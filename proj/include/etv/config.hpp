#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "etv/sampling.hpp"
#include "etv/solvers.hpp"

namespace etv {

/// Raised for malformed or inconsistent experiment configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { enhanced_tv, tv, tva_tvi, denoise };

std::string_view to_string(ModelKind m);
ModelKind parse_model(std::string_view name);

/// Image source: a generator name (phantom, phantom_modified, circle,
/// shapes, strip) or a path to a P2/P5 graymap.
struct ImageSpec {
  std::string source = "phantom";
  std::size_t size = 256;
};

struct MaskSpec {
  MaskKind kind = MaskKind::radial;
  std::size_t lines = 15;
  /// Radians. Empty means a fresh random offset in [0, pi / lines) per
  /// trial, drawn from the trial's mask seed.
  std::optional<double> angle_offset = 0.0;
  /// Variable density: number of draws, or a target fraction of N^2 when
  /// samples is 0.
  std::size_t samples = 0;
  double rate = 0.065;
  double cap = 1.0;
  /// Mask file for kind = custom.
  std::string path;
};

struct NoiseSpec {
  double std_dev = 0.0;
  /// Constraint radius = radius_scale * std * sqrt(m) (unweighted) or
  /// radius_scale * std * ||rho||_2 (weighted). Ignored if radius is set.
  double radius_scale = 1.0;
  std::optional<double> radius;
};

struct PhaseSpec {
  std::vector<double> alphas;
  std::vector<std::size_t> lines;
  int trials = 5;
  double success_threshold = 1e-3;
};

struct ExperimentConfig {
  ImageSpec image;
  MaskSpec mask;
  NoiseSpec noise;
  ModelKind model = ModelKind::enhanced_tv;
  SolverConfig solver;
  DenoiseConfig denoise;
  PhaseSpec phase;
  int trials = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  /// RIP level assumed by the posterior alpha check.
  double delta = 0.5;
  /// Entries with |grad X| above this count toward the measured sparsity.
  double sparsity_tol = 1e-6;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// INI-style file: sections [experiment], [image], [mask], [noise], [model],
/// [solver], [denoise], [phase]. Unset solver keys take the model's
/// defaults (noisy defaults when noise std > 0). Unknown keys are errors.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::string_view text);

/// Solver defaults for a model before any file overrides.
SolverConfig default_solver(ModelKind model, bool noisy);

/// "0.7:0.1:2.7" (inclusive range) or "0.7, 0.8, 1.0".
std::vector<double> parse_number_list(std::string_view text);

}  // namespace etv
