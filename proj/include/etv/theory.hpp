#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "etv/image.hpp"
#include "etv/solvers.hpp"

namespace etv {

/// K1 = 3 / (2 sqrt(1 - delta) - sqrt(1 + delta)),
/// K2 = (sqrt(1 + delta) / 4) (K1 + 1 / sqrt(1 + delta)).
struct RipConstants {
  double delta = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};

/// Requires 0 <= delta < 0.6; throws std::invalid_argument otherwise.
RipConstants rip_constants(double delta);

enum class AlphaRegime {
  thm1,    // alpha <= sqrt(s) / (2 K2 ||grad X||_2)
  thm2_3,  // alpha <= sqrt(48 s log2 N) / (K2 ||grad X||_2)
};

struct AlphaBound {
  double bound = 0.0;
  bool satisfied = false;
  /// Same bound with ||grad X||_2 replaced by ||grad X||_2 + accuracy.
  double robust_bound = 0.0;
  bool robust_satisfied = false;
};

/// A posteriori check of the enhancement weight. A zero gradient norm gives
/// an infinite bound.
AlphaBound verify_alpha(double alpha, double grad_norm2, std::size_t s, double delta, AlphaRegime regime,
                        std::size_t n_side, double accuracy = 0.0);

/// Fills the report-side record for a reconstruction. `s` is the gradient
/// sparsity to test against, usually measured on the reconstruction.
AlphaVerification posterior_alpha_check(const Image& x, double alpha, std::size_t s, double delta,
                                        std::size_t n_side, double accuracy = 0.0);

struct GuaranteeInputs {
  std::size_t s = 1;
  double tau = 0.0;
  double alpha = 1.0;
  std::size_t n_side = 2;
  double residual_l1 = 0.0;  // ||grad X - (grad X)_s||_1

  void validate() const;
};

enum class BoundKind {
  grad_l2,     // ||grad(Xbar - Xopt)||_2
  grad_l1,     // ||grad(Xbar - Xopt)||_1
  image_thm1,  // ||Xbar - Xopt||_2 with the log(N^2 / s) factors
  image_thm2,  // ||Xbar - Xopt||_2 under the stronger RIP order
};

/// Error bounds up to an unknown universal constant, which is set to 1.
/// Logarithms are base 2.
double error_bound(const GuaranteeInputs& in, BoundKind which);

/// ||grad X - (grad X)_s||_1 / sqrt(s) + tau, the matching TV bound.
double tv_error_bound(const GuaranteeInputs& in);

struct BoundComparison {
  double enhanced = 0.0;
  double tv = 0.0;
  bool enhanced_tighter = false;  // enhanced <= tv
  bool tie = false;
  double ratio = 0.0;  // enhanced / tv; 1 on a 0/0 tie, +inf when only tv is 0
};

BoundComparison compare_bounds(const GuaranteeInputs& in);

/// True when ||grad Xbar - grad Xopt||_2 >= sqrt(2 residual / alpha), the
/// regime in which the linear term of the error estimate can be dropped.
bool linear_term_removable(double grad_error_l2, double residual_l1, double alpha);

struct LemmaResult {
  std::string name;
  bool passed = false;
  double value = 0.0;  // worst observed quantity
  double limit = 0.0;  // what it is compared against
  std::string detail;

  /// limit - value; positive means room to spare.
  double margin() const { return limit - value; }
};

struct LemmaReport {
  std::size_t n_side = 0;
  std::vector<LemmaResult> results;
  /// Smallest C with |c_(k)| <= C ||grad X||_1 / k over all trial images.
  double fitted_decay_constant = 0.0;

  bool all_passed() const;
};

/// Numerical checks of the Haar and gradient facts the guarantees rest on.
/// Exhaustive checks (adjacent-pair counts, wavelet TV, local coherence)
/// need N <= 64; statistical ones use `trials` random images drawn from
/// `seed`. N must be a power of two.
LemmaReport check_lemmas(std::size_t n_side, int trials, std::uint64_t seed);

/// Largest eigenvalue of grad^T grad by power iteration.
double gradient_operator_norm_sq(std::size_t n_side, int steps, std::uint64_t seed);

void write_report_text(std::ostream& os, const LemmaReport& report);
/// Columns: n,lemma,passed,value,limit,margin
void write_report_csv(std::ostream& os, const std::vector<LemmaReport>& reports);

}  // namespace etv
