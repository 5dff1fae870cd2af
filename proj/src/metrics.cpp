#include "etv/metrics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace etv {

double relative_error(const Image& ref, const Image& cand) {
  if (ref.side() != cand.side()) throw std::invalid_argument("relative_error: size mismatch");
  const double denom = norm2(ref);
  if (denom == 0.0) throw std::invalid_argument("relative_error: zero reference image");
  double acc = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) acc += std::norm(cand.data()[i] - ref.data()[i]);
  return std::sqrt(acc) / denom;
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    taps[i] = std::exp(-x * x / (2.0 * kSigma * kSigma));
    total += taps[i];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

// Separable "valid" filtering of an n x n field: output is (n-10) x (n-10).
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t n,
                                 const std::array<double, kWindow>& taps) {
  const std::size_t out_n = n - kWindow + 1;
  std::vector<double> rows(n * out_n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < out_n; ++k) {
      double acc = 0.0;
      for (int t = 0; t < kWindow; ++t) acc += taps[t] * in[j * n + k + t];
      rows[j * out_n + k] = acc;
    }
  std::vector<double> out(out_n * out_n);
  for (std::size_t j = 0; j < out_n; ++j)
    for (std::size_t k = 0; k < out_n; ++k) {
      double acc = 0.0;
      for (int t = 0; t < kWindow; ++t) acc += taps[t] * rows[(j + t) * out_n + k];
      out[j * out_n + k] = acc;
    }
  return out;
}

}  // namespace

double ssim(const Image& ref, const Image& cand) {
  if (ref.side() != cand.side()) throw std::invalid_argument("ssim: size mismatch");
  const std::size_t n = ref.side();
  if (n < static_cast<std::size_t>(kWindow)) throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const auto taps = gaussian_taps();

  const std::vector<double> a = ref.real_part();
  const std::vector<double> b = cand.real_part();
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = filter_valid(a, n, taps);
  const auto mu_b = filter_valid(b, n, taps);
  const auto e_aa = filter_valid(aa, n, taps);
  const auto e_bb = filter_valid(bb, n, taps);
  const auto e_ab = filter_valid(ab, n, taps);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
    const double cov = e_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

double imaginary_fraction(const Image& img) {
  const double total = norm2(img);
  if (total == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& z : img.data()) acc += z.imag() * z.imag();
  return std::sqrt(acc) / total;
}

}  // namespace etv
