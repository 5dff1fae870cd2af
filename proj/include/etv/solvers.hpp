#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "etv/image.hpp"
#include "etv/measurement.hpp"

namespace etv {

enum class InnerSolve {
  cg,            // preconditioned conjugate gradient on the exact zero-padded gradient
  fft_periodic,  // one pointwise division in frequency with periodic differences
};

std::string_view to_string(InnerSolve s);
InnerSolve parse_inner_solve(std::string_view name);

/// Parameters of the DCA / ADMM / split Bregman solvers.
///
/// One DCA step runs `max_inner` data-multiplier updates; each update is
/// preceded by `sweeps_per_update` (u, d, b) sweeps. A single sweep per
/// update is plain ADMM; several sweeps give the nested split Bregman
/// schedule of the baselines.
struct SolverConfig {
  double alpha = 0.8;
  double mu = 1e3;
  double beta = 10.0;
  int max_dca = 15;
  int max_inner = 1000;
  int sweeps_per_update = 1;
  double tol_dca = 1e-10;
  /// Stop the inner loop once successive multiplier rounds move u by at
  /// most this much. Zero disables it.
  double tol_inner = 0.0;
  InnerSolve inner_solve = InnerSolve::cg;
  double cg_tol = 1e-10;
  int cg_max_iter = 500;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;

  /// Enhanced TV with mu = 1e3, beta = 10, 15 x 1000 iterations.
  static SolverConfig enhanced(double alpha, bool noisy = false);
  /// Anisotropic TV baseline: 50 Bregman updates x 200 sweeps.
  static SolverConfig tv_baseline(bool noisy = false);
  /// TVa - TVi baseline: 15 DCA steps, each 50 Bregman updates x 20 sweeps.
  static SolverConfig tva_tvi_baseline(bool noisy = false);
};

struct AlphaVerification {
  double bound = 0.0;
  double robust_bound = 0.0;
  bool satisfied = false;
  bool robust_satisfied = false;
  double grad_norm2 = 0.0;
  std::size_t sparsity = 0;
  double delta = 0.0;
};

struct ReconstructionReport {
  Image image;
  std::optional<double> relative_error;
  std::optional<double> ssim;
  /// ||Im X||_2 / ||X||_2 when a reference is supplied.
  std::optional<double> imaginary_fraction;
  /// Model objective at X^1, X^2, ... (the zero start is not feasible).
  std::vector<double> objective_trace;
  std::optional<AlphaVerification> alpha_check;
  double residual_norm = 0.0;  // ||M X - y||_2
  double radius = 0.0;
  double wall_time = 0.0;
  int dca_iterations = 0;
  /// True when the DCA loop ended on a step that did not lower the objective
  /// (that step is not applied).
  bool ascent_stop = false;
  long inner_iterations = 0;
  long linear_solves = 0;
  long cg_iterations = 0;
  std::vector<std::string> warnings;
};

/// Raised when an iterate stops being finite.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min ||grad X||_1 - (alpha/2)||grad X||_2^2  s.t.  ||M X - y||_2 <= radius.
/// Weighted operators fold rho into M and y, so `y` must already be rho o b.
ReconstructionReport solve_enhanced_tv(const MeasurementOperator& op, std::span<const Complex> y,
                                       const SolverConfig& cfg, const Image* reference = nullptr);

/// Anisotropic TV: the same machinery with no concave part. cfg.alpha is ignored.
ReconstructionReport solve_tv_bregman(const MeasurementOperator& op, std::span<const Complex> y,
                                      const SolverConfig& cfg, const Image* reference = nullptr);

/// TVa - TVi: DCA linearising -||X||_TVi with subgradient grad X / |grad X|
/// (0 where the gradient vanishes). cfg.alpha is ignored.
ReconstructionReport solve_tva_minus_tvi(const MeasurementOperator& op, std::span<const Complex> y,
                                         const SolverConfig& cfg, const Image* reference = nullptr);

struct DenoiseConfig {
  double alpha = 1.2;
  double mu = 0.8;
  double beta = 1.0;
  int max_dca = 10;
  int max_breg = 1000;
  InnerSolve inner_solve = InnerSolve::cg;
  double cg_tol = 1e-10;
  int cg_max_iter = 500;

  void validate() const;
};

/// min ||grad X||_1 - (alpha/2)||grad X||_2^2 + (mu/2)||y - X||_2^2 by DCA
/// with split Bregman subproblems.
Image denoise_enhanced_tv(const Image& noisy, const DenoiseConfig& cfg);

/// Enhanced TV objective, logged once per outer iteration.
double dca_objective(const Image& img, double alpha);

/// Measurements in the form the solvers expect: rho o b for weighted
/// operators, b otherwise.
std::vector<Complex> fold_weights(const MeasurementOperator& op, std::span<const Complex> b);

}  // namespace etv
