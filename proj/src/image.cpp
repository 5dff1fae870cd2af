#include "etv/image.hpp"

#include <cmath>
#include <stdexcept>

namespace etv {

Image::Image(std::size_t n_side, Complex fill) : n_(n_side), data_(n_side * n_side, fill) {}

Image Image::from_real(std::size_t n_side, std::span<const double> values) {
  if (values.size() != n_side * n_side) {
    throw std::invalid_argument("Image::from_real: expected N*N values");
  }
  Image img(n_side);
  for (std::size_t i = 0; i < values.size(); ++i) img.data_[i] = values[i];
  return img;
}

std::vector<double> Image::real_part() const {
  std::vector<double> out(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) out[i] = data_[i].real();
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc;
}

double norm2_squared(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

double norm2(std::span<const Complex> v) { return std::sqrt(norm2_squared(v)); }

double norm1(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::abs(z);
  return acc;
}

Complex inner(const Image& a, const Image& b) { return inner(a.data(), b.data()); }
double norm2(const Image& img) { return norm2(img.data()); }
double norm1(const Image& img) { return norm1(img.data()); }

Complex inner(const GradientField& a, const GradientField& b) {
  return inner(a.gx, b.gx) + inner(a.gy, b.gy);
}

double norm2_squared(const GradientField& g) {
  return norm2_squared(g.gx.data()) + norm2_squared(g.gy.data());
}

double norm2(const GradientField& g) { return std::sqrt(norm2_squared(g)); }
double norm1(const GradientField& g) { return norm1(g.gx) + norm1(g.gy); }

namespace {

void require_same(const Image& a, const Image& b) {
  if (a.side() != b.side()) throw std::invalid_argument("image size mismatch");
}

}  // namespace

Image operator+(const Image& a, const Image& b) {
  require_same(a, b);
  Image out(a.side());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Image operator-(const Image& a, const Image& b) {
  require_same(a, b);
  Image out(a.side());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Image operator*(Complex c, const Image& a) {
  Image out(a.side());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = c * a.data()[i];
  return out;
}

}  // namespace etv
