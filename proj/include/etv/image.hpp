#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace etv {

using Complex = std::complex<double>;

/// Square N x N grid of complex pixel intensities stored row-major.
///
/// Documentation uses the 1-based (j, k) indexing of the reconstruction
/// literature; storage is 0-based, so pixel (j, k) lives at
/// `data()[(j - 1) * N + (k - 1)]`. The first index runs down the rows.
class Image {
 public:
  Image() = default;
  explicit Image(std::size_t n_side, Complex fill = {});

  static Image from_real(std::size_t n_side, std::span<const double> values);

  std::size_t side() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t j, std::size_t k) { return data_[j * n_ + k]; }
  const Complex& operator()(std::size_t j, std::size_t k) const { return data_[j * n_ + k]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  std::vector<double> real_part() const;

  bool operator==(const Image&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

/// Discrete gradient of an N x N image: `gx` holds differences along the
/// first (row) index, `gy` along the second. Row N of `gx` and column N of
/// `gy` are zero padding.
struct GradientField {
  Image gx;
  Image gy;

  GradientField() = default;
  explicit GradientField(std::size_t n_side) : gx(n_side), gy(n_side) {}

  std::size_t side() const noexcept { return gx.side(); }
  bool operator==(const GradientField&) const = default;
};

// Elementwise helpers shared by the transforms and solvers.

/// <a, b> = sum a_i conj(b_i).
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm2(std::span<const Complex> v);
double norm2_squared(std::span<const Complex> v);
double norm1(std::span<const Complex> v);

Complex inner(const Image& a, const Image& b);
double norm2(const Image& img);
double norm1(const Image& img);

Complex inner(const GradientField& a, const GradientField& b);
double norm2(const GradientField& g);
double norm2_squared(const GradientField& g);
double norm1(const GradientField& g);

Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(Complex c, const Image& a);

}  // namespace etv
