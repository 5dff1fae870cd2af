#pragma once

#include <cstddef>
#include <string_view>

#include "etv/image.hpp"

namespace etv {

enum class PhantomVariant {
  standard,  // original 1974 intensities, scaled by 1/2 into [0, 1]
  modified,  // high-contrast variant (1, -0.8, -0.2, ...)
};

/// Ten-ellipse Shepp-Logan head phantom rasterised at pixel centres on
/// [-1, 1]^2 (first row at y = +1). Requires N >= 16.
Image shepp_logan(std::size_t n_side, PhantomVariant variant = PhantomVariant::standard);

enum class SyntheticKind {
  circle,  // filled disk of radius N/4, centred, value 1 on 0
  shapes,  // disjoint rectangle (1.0), disk (0.6) and triangle (0.8)
  strip,   // alternating vertical bands of width N/8 at 0.2 and 0.8
};

SyntheticKind parse_synthetic_kind(std::string_view name);
Image synthetic_image(SyntheticKind kind, std::size_t n_side);

/// Membership predicates for the pieces of the `shapes` image, exposed so
/// tests can evaluate perimeters independently of the rasteriser.
bool in_shapes_rectangle(std::size_t j, std::size_t k, std::size_t n_side);
bool in_shapes_disk(std::size_t j, std::size_t k, std::size_t n_side);
bool in_shapes_triangle(std::size_t j, std::size_t k, std::size_t n_side);

}  // namespace etv
