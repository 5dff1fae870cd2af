#pragma once

#include <cstddef>

#include "etv/image.hpp"

namespace etv {

bool is_power_of_two(std::size_t n) noexcept;

/// Orthonormal bivariate Haar system on N x N images, N = 2^n.
///
/// Coefficients use the square (Mallat) pyramid layout: entry (0, 0) is the
/// constant function and an entry whose larger index lies in [2^j, 2^(j+1))
/// belongs to dyadic scale j, whose basis images have 2^(n-j) x 2^(n-j)
/// support. The three orientations at scale j are the tensor products
/// (scaling x wavelet), (wavelet x scaling) and (wavelet x wavelet).
class HaarTransform {
 public:
  explicit HaarTransform(std::size_t n_side);

  std::size_t side() const noexcept { return n_; }
  std::size_t levels() const noexcept { return levels_; }

  Image forward(const Image& img) const;
  Image inverse(const Image& coeffs) const;

  /// Basis image for the coefficient at storage position (r, c).
  Image basis_image(std::size_t r, std::size_t c) const;

  struct Label {
    int scale;        // -1 for the constant function
    int orientation;  // 0 constant, 1 row-wavelet, 2 column-wavelet, 3 diagonal
  };
  Label label(std::size_t r, std::size_t c) const;

 private:
  std::size_t n_;
  std::size_t levels_;
};

/// Throws std::invalid_argument unless the image side is a power of two.
Image haar2(const Image& img);
Image haar2_inv(const Image& coeffs);

}  // namespace etv
