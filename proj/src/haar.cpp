#include "etv/haar.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace etv {

bool is_power_of_two(std::size_t n) noexcept { return n >= 1 && std::has_single_bit(n); }

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// One analysis step on `len` entries spaced by `stride`.
void analyze(Complex* base, std::size_t len, std::size_t stride, std::vector<Complex>& tmp) {
  const std::size_t half = len / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const Complex a = base[(2 * i) * stride];
    const Complex b = base[(2 * i + 1) * stride];
    tmp[i] = (a + b) * kInvSqrt2;
    tmp[half + i] = (a - b) * kInvSqrt2;
  }
  for (std::size_t i = 0; i < len; ++i) base[i * stride] = tmp[i];
}

void synthesize(Complex* base, std::size_t len, std::size_t stride, std::vector<Complex>& tmp) {
  const std::size_t half = len / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const Complex s = base[i * stride];
    const Complex d = base[(half + i) * stride];
    tmp[2 * i] = (s + d) * kInvSqrt2;
    tmp[2 * i + 1] = (s - d) * kInvSqrt2;
  }
  for (std::size_t i = 0; i < len; ++i) base[i * stride] = tmp[i];
}

}  // namespace

HaarTransform::HaarTransform(std::size_t n_side) : n_(n_side), levels_(0) {
  if (!is_power_of_two(n_side)) {
    throw std::invalid_argument("Haar transform requires a power-of-two image side, got " +
                                std::to_string(n_side));
  }
  levels_ = static_cast<std::size_t>(std::countr_zero(n_side));
}

Image HaarTransform::forward(const Image& img) const {
  if (img.side() != n_) throw std::invalid_argument("HaarTransform::forward: size mismatch");
  Image out = img;
  Complex* d = out.data().data();
  std::vector<Complex> tmp(n_);
  for (std::size_t len = n_; len >= 2; len /= 2) {
    for (std::size_t r = 0; r < len; ++r) analyze(d + r * n_, len, 1, tmp);
    for (std::size_t c = 0; c < len; ++c) analyze(d + c, len, n_, tmp);
  }
  return out;
}

Image HaarTransform::inverse(const Image& coeffs) const {
  if (coeffs.side() != n_) throw std::invalid_argument("HaarTransform::inverse: size mismatch");
  Image out = coeffs;
  Complex* d = out.data().data();
  std::vector<Complex> tmp(n_);
  for (std::size_t len = 2; len <= n_; len *= 2) {
    for (std::size_t c = 0; c < len; ++c) synthesize(d + c, len, n_, tmp);
    for (std::size_t r = 0; r < len; ++r) synthesize(d + r * n_, len, 1, tmp);
  }
  return out;
}

Image HaarTransform::basis_image(std::size_t r, std::size_t c) const {
  Image unit(n_);
  unit(r, c) = 1.0;
  return inverse(unit);
}

HaarTransform::Label HaarTransform::label(std::size_t r, std::size_t c) const {
  if (r == 0 && c == 0) return {-1, 0};
  const std::size_t m = std::max(r, c);
  const auto scale = static_cast<int>(std::bit_width(m)) - 1;
  const std::size_t lo = std::size_t{1} << scale;
  if (r < lo) return {scale, 1};
  if (c < lo) return {scale, 2};
  return {scale, 3};
}

Image haar2(const Image& img) { return HaarTransform(img.side()).forward(img); }
Image haar2_inv(const Image& coeffs) { return HaarTransform(coeffs.side()).inverse(coeffs); }

}  // namespace etv
