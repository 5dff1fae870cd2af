#include "etv/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace etv {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<Complex> v) { return reinterpret_cast<fftw_complex*>(v.data()); }

}  // namespace

struct Dft2::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

Dft2::Dft2(std::size_t n_side) : n_(n_side), plans_(std::make_unique<Plans>()) {
  if (n_side < 1) throw std::invalid_argument("Dft2: empty grid");
  const int n = static_cast<int>(n_side);
  std::lock_guard lock(planner_mutex());
  fftw_complex* scratch = fftw_alloc_complex(n_side * n_side);
  // ESTIMATE picks the same plan every run, so results are bit-reproducible.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft_2d(n, n, scratch, scratch, FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft_2d(n, n, scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  if (!plans_->forward || !plans_->backward) throw std::runtime_error("Dft2: FFTW planning failed");
}

Dft2::~Dft2() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

std::shared_ptr<const Dft2> Dft2::for_size(std::size_t n_side) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const Dft2>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n_side];
  if (!slot) slot = std::make_shared<const Dft2>(n_side);
  return slot;
}

void Dft2::forward(std::span<Complex> inout) const {
  if (inout.size() != n_ * n_) throw std::invalid_argument("Dft2::forward: size mismatch");
  fftw_execute_dft(plans_->forward, as_fftw(inout), as_fftw(inout));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& z : inout) z *= scale;
}

void Dft2::inverse(std::span<Complex> inout) const {
  if (inout.size() != n_ * n_) throw std::invalid_argument("Dft2::inverse: size mismatch");
  fftw_execute_dft(plans_->backward, as_fftw(inout), as_fftw(inout));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& z : inout) z *= scale;
}

Image dft2(const Image& img) {
  Image out = img;
  Dft2::for_size(img.side())->forward(out.data());
  return out;
}

Image dft2_inv(const Image& spectrum) {
  Image out = spectrum;
  Dft2::for_size(spectrum.side())->inverse(out.data());
  return out;
}

std::size_t frequency_index(int k, std::size_t n_side) {
  const auto n = static_cast<long>(n_side);
  return static_cast<std::size_t>(((k % n) + n) % n);
}

int index_frequency(std::size_t i, std::size_t n_side) {
  return (i <= n_side / 2) ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n_side);
}

}  // namespace etv
