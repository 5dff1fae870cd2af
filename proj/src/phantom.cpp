#include "etv/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace etv {

namespace {

struct Ellipse {
  double standard;
  double modified;
  double a;  // semi-axis along x
  double b;  // semi-axis along y
  double x0;
  double y0;
  double phi_deg;
};

constexpr std::array<Ellipse, 10> kEllipses{{
    {2.00, 1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.98, -0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.02, -0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.02, -0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.01, 0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.01, 0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.01, 0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.01, 0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.01, 0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.01, 0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
}};

}  // namespace

Image shepp_logan(std::size_t n_side, PhantomVariant variant) {
  if (n_side < 16) throw std::invalid_argument("shepp_logan: N must be at least 16");
  Image img(n_side);
  const double span = static_cast<double>(n_side - 1);
  const double scale = variant == PhantomVariant::standard ? 0.5 : 1.0;
  for (std::size_t j = 0; j < n_side; ++j) {
    const double y = (span - 2.0 * static_cast<double>(j)) / span;
    for (std::size_t k = 0; k < n_side; ++k) {
      const double x = (2.0 * static_cast<double>(k) - span) / span;
      double v = 0.0;
      for (const auto& e : kEllipses) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double xr = dx * std::cos(phi) + dy * std::sin(phi);
        const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) {
          v += variant == PhantomVariant::standard ? e.standard : e.modified;
        }
      }
      img(j, k) = std::clamp(v * scale, 0.0, 1.0);
    }
  }
  return img;
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "circle") return SyntheticKind::circle;
  if (name == "shapes") return SyntheticKind::shapes;
  if (name == "strip") return SyntheticKind::strip;
  throw std::invalid_argument("unknown synthetic image '" + std::string(name) + "'");
}

namespace {

double fj(std::size_t j, std::size_t n) { return (static_cast<double>(j) + 0.5) / static_cast<double>(n); }

}  // namespace

// Fractional layout on the unit square (row, column):
//   rectangle rows [0.10, 0.40) x cols [0.10, 0.45)
//   disk centred (0.30, 0.72), radius 0.16
//   triangle with vertices (0.60, 0.15), (0.90, 0.15), (0.90, 0.70)
bool in_shapes_rectangle(std::size_t j, std::size_t k, std::size_t n) {
  const double r = fj(j, n), c = fj(k, n);
  return r >= 0.10 && r < 0.40 && c >= 0.10 && c < 0.45;
}

bool in_shapes_disk(std::size_t j, std::size_t k, std::size_t n) {
  const double r = fj(j, n) - 0.30, c = fj(k, n) - 0.72;
  return r * r + c * c <= 0.16 * 0.16;
}

bool in_shapes_triangle(std::size_t j, std::size_t k, std::size_t n) {
  const double r = fj(j, n), c = fj(k, n);
  // Below the hypotenuse from (0.60, 0.15) to (0.90, 0.70), inside the legs.
  if (r < 0.60 || r >= 0.90 || c < 0.15) return false;
  const double c_max = 0.15 + (r - 0.60) * (0.55 / 0.30);
  return c < c_max;
}

Image synthetic_image(SyntheticKind kind, std::size_t n_side) {
  if (n_side < 8) throw std::invalid_argument("synthetic_image: N must be at least 8");
  Image img(n_side);
  const double centre = static_cast<double>(n_side) / 2.0 - 0.5;
  const double radius = static_cast<double>(n_side) / 4.0;
  const std::size_t band = std::max<std::size_t>(1, n_side / 8);
  for (std::size_t j = 0; j < n_side; ++j) {
    for (std::size_t k = 0; k < n_side; ++k) {
      double v = 0.0;
      switch (kind) {
        case SyntheticKind::circle: {
          const double dj = static_cast<double>(j) - centre;
          const double dk = static_cast<double>(k) - centre;
          v = (dj * dj + dk * dk <= radius * radius) ? 1.0 : 0.0;
          break;
        }
        case SyntheticKind::shapes:
          if (in_shapes_rectangle(j, k, n_side)) v = 1.0;
          else if (in_shapes_disk(j, k, n_side)) v = 0.6;
          else if (in_shapes_triangle(j, k, n_side)) v = 0.8;
          break;
        case SyntheticKind::strip:
          v = ((k / band) % 2 == 0) ? 0.2 : 0.8;
          break;
      }
      img(j, k) = v;
    }
  }
  return img;
}

}  // namespace etv
