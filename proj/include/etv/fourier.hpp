#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "etv/image.hpp"

namespace etv {

/// Unitary 2-D DFT on N x N grids, backed by FFTW.
///
///   (F X)[k1, k2] = (1/N) sum_{u,v} X[u, v] exp(-2 pi i (k1 u + k2 v) / N)
///
/// i.e. <X, phi_{k1,k2}> for the tensor-product Fourier basis. Frequencies
/// k in {-N/2+1, ..., N/2} are stored at index k mod N. Instances are
/// immutable and may be shared across threads.
class Dft2 {
 public:
  explicit Dft2(std::size_t n_side);
  ~Dft2();
  Dft2(const Dft2&) = delete;
  Dft2& operator=(const Dft2&) = delete;

  /// Shared, lazily planned transform for the given size.
  static std::shared_ptr<const Dft2> for_size(std::size_t n_side);

  std::size_t side() const noexcept { return n_; }

  void forward(std::span<Complex> inout) const;
  void inverse(std::span<Complex> inout) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

Image dft2(const Image& img);
Image dft2_inv(const Image& spectrum);

/// Storage index of the signed frequency k (k mod N).
std::size_t frequency_index(int k, std::size_t n_side);

/// Signed frequency in {-N/2+1, ..., N/2} stored at index i.
int index_frequency(std::size_t i, std::size_t n_side);

}  // namespace etv
