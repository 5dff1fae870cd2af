#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "etv/fourier.hpp"
#include "etv/image.hpp"
#include "etv/sampling.hpp"

namespace etv {

/// Subsampled unitary Fourier map y_j = rho_j (F X)[omega_j].
///
/// Unweighted operators have rho = 1. The feasible set of a reconstruction
/// is ||M X - y||_2 <= effective_radius(); for the weighted model the radius
/// tau sqrt(m) is stored directly.
class MeasurementOperator {
 public:
  /// ||F_Omega X - y||_2 <= tau.
  static MeasurementOperator unweighted(FrequencyMask mask, double tau = 0.0);
  /// ||rho o (F_Omega X - b)||_2 <= tau sqrt(m).
  static MeasurementOperator weighted(FrequencyMask mask, std::vector<double> rho, double tau = 0.0);

  const FrequencyMask& mask() const noexcept { return mask_; }
  const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }
  std::size_t side() const noexcept { return mask_.n_side; }
  std::size_t rows() const noexcept { return mask_.size(); }
  double effective_radius() const noexcept { return radius_; }

  std::vector<Complex> measure(const Image& img) const;
  /// Exact adjoint; repeated frequencies accumulate.
  Image measure_adjoint(std::span<const Complex> v) const;

  /// Measurement from an already transformed spectrum (F X).
  std::vector<Complex> sample_spectrum(const Image& spectrum) const;
  /// Scatter v into a spectrum so that F^{-1} of it equals measure_adjoint(v).
  Image scatter_spectrum(std::span<const Complex> v) const;

  /// Diagonal of F M^* M F^{-1}: the sum of rho_j^2 over rows that sample
  /// each frequency, in storage order.
  const std::vector<double>& normal_diagonal() const noexcept { return normal_diag_; }

  /// Copy carrying the same rows and weights with a new radius.
  MeasurementOperator with_radius(double effective_radius) const;

  const Dft2& dft() const noexcept { return *dft_; }

  /// Storage index (into an N x N spectrum) sampled by each row.
  std::span<const std::size_t> row_indices() const noexcept { return flat_; }

 private:
  MeasurementOperator(FrequencyMask mask, std::optional<std::vector<double>> rho, double radius);

  FrequencyMask mask_;
  std::optional<std::vector<double>> weights_;
  double radius_;
  std::vector<std::size_t> flat_;  // storage index of each row's frequency
  std::vector<double> normal_diag_;
  std::shared_ptr<const Dft2> dft_;
};

/// y + (std / sqrt 2)(g1 + i g2) with g1, g2 i.i.d. standard normal from
/// Rng(seed); real and imaginary draws alternate per entry.
std::vector<Complex> add_noise(std::span<const Complex> y, double std_dev, std::uint64_t seed);

}  // namespace etv
