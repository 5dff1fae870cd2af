#pragma once

#include "etv/image.hpp"

namespace etv {

/// ||cand - ref||_2 / ||ref||_2 on the complex field. Throws on a zero
/// reference or mismatched sizes.
double relative_error(const Image& ref, const Image& cand);

/// Mean structural similarity of the real parts: 11 x 11 Gaussian window
/// (sigma 1.5, normalised), K1 = 0.01, K2 = 0.03, dynamic range L = 1,
/// averaged over the fully contained window positions.
double ssim(const Image& ref, const Image& cand);

/// ||Im X||_2 / ||X||_2 (0 for the zero image).
double imaginary_fraction(const Image& img);

}  // namespace etv
