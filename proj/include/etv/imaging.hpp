#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "etv/image.hpp"

namespace etv {

/// Forward differences with zero padding:
///   gx[j,k] = X[j+1,k] - X[j,k] for j < N, 0 for j = N
///   gy[j,k] = X[j,k+1] - X[j,k] for k < N, 0 for k = N
/// (1-based; the padded row/column is index N-1 in storage.)
GradientField gradient(const Image& img);

/// Exact adjoint of gradient: <grad X, G> == <X, gradient_adjoint(G)>.
Image gradient_adjoint(const GradientField& g);

/// grad^T grad X without materialising the gradient field.
Image gradient_normal(const Image& img);

/// Anisotropic TV: l_{1,1} norm of the gradient.
double tv_aniso(const Image& img);

/// Isotropic TV: sum of pointwise Euclidean gradient magnitudes.
double tv_iso(const Image& img);

/// ||grad X||_1 - (alpha / 2) ||grad X||_2^2.
double enhanced_tv(const Image& img, double alpha);

/// Complex soft thresholding, the proximal map of t * ||.||_1:
/// z -> (z / |z|) max(|z| - t, 0).
Complex shrink(Complex z, double t);
std::vector<Complex> shrink(std::span<const Complex> v, double t);
Image shrink(const Image& v, double t);

/// Euclidean projection of v onto the closed ball B(center, radius).
std::vector<Complex> project_ball(std::span<const Complex> v,
                                  std::span<const Complex> center, double radius);

enum class Channel { x = 0, y = 1 };

/// Position of one entry of a GradientField (0-based storage indices).
struct GradientIndex {
  Channel channel;
  std::size_t j;
  std::size_t k;

  auto operator<=>(const GradientIndex&) const = default;
};

/// Kept indices of a sparse approximation, in selection order.
struct SupportSet {
  std::vector<GradientIndex> indices;

  std::size_t size() const noexcept { return indices.size(); }
};

/// Best s-term approximation of a gradient field across both channels.
/// Ties in magnitude go to the lexicographically smaller (channel, j, k).
std::pair<GradientField, SupportSet> sparse_truncate(const GradientField& g, std::size_t s);

/// ||g - (g)_s||_1, the l1 tail of the best s-term approximation.
double sparse_residual_l1(const GradientField& g, std::size_t s);

/// Number of nonzero gradient entries (|value| > tol).
std::size_t gradient_sparsity(const GradientField& g, double tol = 0.0);

}  // namespace etv
