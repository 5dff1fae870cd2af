#include "etv/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace etv {

GradientField gradient(const Image& img) {
  const std::size_t n = img.side();
  GradientField g(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j + 1 < n) g.gx(j, k) = img(j + 1, k) - img(j, k);
      if (k + 1 < n) g.gy(j, k) = img(j, k + 1) - img(j, k);
    }
  }
  return g;
}

Image gradient_adjoint(const GradientField& g) {
  const std::size_t n = g.side();
  if (g.gy.side() != n) throw std::invalid_argument("gradient_adjoint: channel size mismatch");
  Image out(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex v{};
      // Entries in the padded row/column never contributed to the forward map.
      if (j + 1 < n) v -= g.gx(j, k);
      if (j >= 1) v += g.gx(j - 1, k);
      if (k + 1 < n) v -= g.gy(j, k);
      if (k >= 1) v += g.gy(j, k - 1);
      out(j, k) = v;
    }
  }
  return out;
}

Image gradient_normal(const Image& img) {
  const std::size_t n = img.side();
  Image out(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex c = img(j, k);
      Complex v{};
      if (j + 1 < n) v += c - img(j + 1, k);
      if (j >= 1) v += c - img(j - 1, k);
      if (k + 1 < n) v += c - img(j, k + 1);
      if (k >= 1) v += c - img(j, k - 1);
      out(j, k) = v;
    }
  }
  return out;
}

double tv_aniso(const Image& img) { return norm1(gradient(img)); }

double tv_iso(const Image& img) {
  const GradientField g = gradient(img);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.gx.size(); ++i) {
    acc += std::sqrt(std::norm(g.gx.data()[i]) + std::norm(g.gy.data()[i]));
  }
  return acc;
}

double enhanced_tv(const Image& img, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("enhanced_tv: alpha must be nonnegative");
  const GradientField g = gradient(img);
  return norm1(g) - 0.5 * alpha * norm2_squared(g);
}

Complex shrink(Complex z, double t) {
  const double mag = std::abs(z);
  if (mag <= t || mag == 0.0) return {};
  return z * ((mag - t) / mag);
}

std::vector<Complex> shrink(std::span<const Complex> v, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("shrink: threshold must be nonnegative");
  std::vector<Complex> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [t](Complex z) { return shrink(z, t); });
  return out;
}

Image shrink(const Image& v, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("shrink: threshold must be nonnegative");
  Image out(v.side());
  for (std::size_t i = 0; i < v.size(); ++i) out.data()[i] = shrink(v.data()[i], t);
  return out;
}

std::vector<Complex> project_ball(std::span<const Complex> v,
                                  std::span<const Complex> center, double radius) {
  if (v.size() != center.size()) throw std::invalid_argument("project_ball: size mismatch");
  if (!(radius >= 0.0)) throw std::invalid_argument("project_ball: negative radius");
  std::vector<Complex> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - center[i];
  const double len = norm2(r);
  const double scale = (len <= radius) ? 1.0 : radius / len;
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = center[i] + scale * r[i];
  return r;
}

namespace {

struct Entry {
  double magnitude;
  GradientIndex index;
};

std::vector<Entry> ranked_entries(const GradientField& g) {
  const std::size_t n = g.side();
  std::vector<Entry> entries;
  entries.reserve(2 * n * n);
  for (Channel c : {Channel::x, Channel::y}) {
    const Image& ch = (c == Channel::x) ? g.gx : g.gy;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) entries.push_back({std::abs(ch(j, k)), {c, j, k}});
  }
  // Entries are generated in lexicographic order, so a stable sort on
  // magnitude alone realises the tie rule.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.magnitude > b.magnitude; });
  return entries;
}

}  // namespace

std::pair<GradientField, SupportSet> sparse_truncate(const GradientField& g, std::size_t s) {
  const std::size_t n = g.side();
  if (s < 1 || s > 2 * n * n) throw std::invalid_argument("sparse_truncate: s out of range");
  const auto entries = ranked_entries(g);
  GradientField kept(n);
  SupportSet support;
  support.indices.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    const auto& idx = entries[i].index;
    if (idx.channel == Channel::x) {
      kept.gx(idx.j, idx.k) = g.gx(idx.j, idx.k);
    } else {
      kept.gy(idx.j, idx.k) = g.gy(idx.j, idx.k);
    }
    support.indices.push_back(idx);
  }
  return {std::move(kept), std::move(support)};
}

double sparse_residual_l1(const GradientField& g, std::size_t s) {
  const auto entries = ranked_entries(g);
  double acc = 0.0;
  for (std::size_t i = std::min(s, entries.size()); i < entries.size(); ++i) acc += entries[i].magnitude;
  return acc;
}

std::size_t gradient_sparsity(const GradientField& g, double tol) {
  const auto count = [tol](const Image& ch) {
    return static_cast<std::size_t>(std::count_if(ch.data().begin(), ch.data().end(),
                                                  [tol](Complex z) { return std::abs(z) > tol; }));
  };
  return count(g.gx) + count(g.gy);
}

}  // namespace etv
