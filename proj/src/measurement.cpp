#include "etv/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include "etv/random.hpp"

namespace etv {

MeasurementOperator::MeasurementOperator(FrequencyMask mask, std::optional<std::vector<double>> rho,
                                         double radius)
    : mask_(std::move(mask)), weights_(std::move(rho)), radius_(radius) {
  mask_.validate();
  if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
    throw std::invalid_argument("measurement operator: noise radius must be finite and nonnegative");
  }
  if (weights_) {
    if (weights_->size() != mask_.size()) {
      throw std::invalid_argument("measurement operator: weights length differs from mask length");
    }
    for (double w : *weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("measurement operator: weights must be positive and finite");
      }
    }
  }
  const std::size_t n = mask_.n_side;
  flat_.reserve(mask_.size());
  normal_diag_.assign(n * n, 0.0);
  for (std::size_t j = 0; j < mask_.size(); ++j) {
    const auto& f = mask_.freqs[j];
    const std::size_t idx = frequency_index(f.k1, n) * n + frequency_index(f.k2, n);
    flat_.push_back(idx);
    const double w = weights_ ? (*weights_)[j] : 1.0;
    normal_diag_[idx] += w * w;
  }
  dft_ = Dft2::for_size(n);
}

MeasurementOperator MeasurementOperator::unweighted(FrequencyMask mask, double tau) {
  return MeasurementOperator(std::move(mask), std::nullopt, tau);
}

MeasurementOperator MeasurementOperator::weighted(FrequencyMask mask, std::vector<double> rho,
                                                  double tau) {
  const double radius = tau * std::sqrt(static_cast<double>(mask.size()));
  return MeasurementOperator(std::move(mask), std::move(rho), radius);
}

MeasurementOperator MeasurementOperator::with_radius(double effective_radius) const {
  MeasurementOperator copy = *this;
  if (!(effective_radius >= 0.0)) throw std::invalid_argument("with_radius: negative radius");
  copy.radius_ = effective_radius;
  return copy;
}

std::vector<Complex> MeasurementOperator::sample_spectrum(const Image& spectrum) const {
  if (spectrum.side() != side()) throw std::invalid_argument("measure: image size does not match mask");
  std::vector<Complex> y(rows());
  for (std::size_t j = 0; j < rows(); ++j) {
    y[j] = spectrum.data()[flat_[j]];
    if (weights_) y[j] *= (*weights_)[j];
  }
  return y;
}

Image MeasurementOperator::scatter_spectrum(std::span<const Complex> v) const {
  if (v.size() != rows()) throw std::invalid_argument("measure_adjoint: vector length does not match mask");
  Image spectrum(side());
  for (std::size_t j = 0; j < rows(); ++j) {
    spectrum.data()[flat_[j]] += weights_ ? (*weights_)[j] * v[j] : v[j];
  }
  return spectrum;
}

std::vector<Complex> MeasurementOperator::measure(const Image& img) const {
  if (img.side() != side()) throw std::invalid_argument("measure: image size does not match mask");
  Image spectrum = img;
  dft_->forward(spectrum.data());
  return sample_spectrum(spectrum);
}

Image MeasurementOperator::measure_adjoint(std::span<const Complex> v) const {
  Image out = scatter_spectrum(v);
  dft_->inverse(out.data());
  return out;
}

std::vector<Complex> add_noise(std::span<const Complex> y, double std_dev, std::uint64_t seed) {
  if (!(std_dev >= 0.0)) throw std::invalid_argument("add_noise: std must be nonnegative");
  std::vector<Complex> out(y.begin(), y.end());
  if (std_dev == 0.0) return out;
  Rng rng(seed);
  const double scale = std_dev / std::sqrt(2.0);
  for (auto& z : out) {
    const double re = rng.normal();
    const double im = rng.normal();
    z += scale * Complex(re, im);
  }
  return out;
}

}  // namespace etv
