#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "etv/imaging.hpp"
#include "etv/random.hpp"
#include "etv/theory.hpp"
#include "test_util.hpp"

using namespace etv;
using etv::test::random_image;

namespace {

Image two_by_two() {
  Image x(2);
  x(0, 0) = 0.0;
  x(0, 1) = 1.0;
  x(1, 0) = 2.0;
  x(1, 1) = 3.0;
  return x;
}

// Scalar prox oracle: minimise t|w| + (w - z)^2 / 2 over a fine grid
// around z, then refine once.
double prox_grid(double z, double t) {
  double best_w = 0.0, best = std::numeric_limits<double>::infinity();
  double lo = std::min(0.0, z) - 1.0, hi = std::max(0.0, z) + 1.0;
  for (int pass = 0; pass < 3; ++pass) {
    const int steps = 2000;
    const double h = (hi - lo) / steps;
    for (int i = 0; i <= steps; ++i) {
      const double w = lo + i * h;
      const double f = t * std::abs(w) + 0.5 * (w - z) * (w - z);
      if (f < best) {
        best = f;
        best_w = w;
      }
    }
    lo = best_w - 2 * h;
    hi = best_w + 2 * h;
  }
  // The grid may miss w = 0 exactly after refinement; compare directly.
  if (t * 0.0 + 0.5 * z * z <= best) best_w = 0.0;
  return best_w;
}

}  // namespace

TEST_CASE("gradient of the 2x2 example") {
  const auto g = gradient(two_by_two());
  CHECK(g.gx(0, 0) == Complex(2.0));
  CHECK(g.gx(0, 1) == Complex(2.0));
  CHECK(g.gx(1, 0) == Complex(0.0));
  CHECK(g.gx(1, 1) == Complex(0.0));
  CHECK(g.gy(0, 0) == Complex(1.0));
  CHECK(g.gy(0, 1) == Complex(0.0));
  CHECK(g.gy(1, 0) == Complex(1.0));
  CHECK(g.gy(1, 1) == Complex(0.0));
}

TEST_CASE("gradient of zero and constant images vanishes") {
  for (std::size_t n : {2u, 5u, 16u}) {
    CHECK(norm1(gradient(Image(n))) == 0.0);
    CHECK(norm1(gradient(Image(n, Complex(3.5, -1.0)))) == 0.0);
  }
}

TEST_CASE("gradient keeps the zero padding") {
  Rng rng(11);
  for (std::size_t n : {2u, 7u, 32u}) {
    const auto g = gradient(random_image(n, rng));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g.gx(n - 1, i) == Complex{});
      CHECK(g.gy(i, n - 1) == Complex{});
    }
  }
}

TEST_CASE("gradient_adjoint is the exact adjoint") {
  Rng rng(3);
  for (std::size_t n : {4u, 8u, 16u, 64u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Image x = random_image(n, rng);
      GradientField h;
      h.gx = random_image(n, rng);
      h.gy = random_image(n, rng);
      const Complex lhs = inner(gradient(x), h);
      const Complex rhs = inner(x, gradient_adjoint(h));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * norm2(x) * norm2(h));
    }
  }
  CHECK(norm2(gradient_adjoint(GradientField(6))) == 0.0);
  CHECK(norm2(gradient_normal(Image(8, 2.0))) == 0.0);
}

TEST_CASE("gradient_normal equals adjoint of gradient") {
  Rng rng(5);
  const Image x = random_image(9, rng);
  CHECK(norm2(gradient_normal(x) - gradient_adjoint(gradient(x))) <= 1e-13 * norm2(x));
}

TEST_CASE("TV seminorms on the 2x2 example") {
  CHECK(tv_aniso(two_by_two()) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(tv_iso(two_by_two()) == doctest::Approx(std::sqrt(5.0) + 3.0).epsilon(1e-15));
  CHECK(tv_aniso(Image(4)) == 0.0);
  CHECK(tv_iso(Image(4)) == 0.0);
  CHECK(enhanced_tv(two_by_two(), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(enhanced_tv(Image(3), 0.7) == 0.0);
  CHECK_THROWS_AS(enhanced_tv(two_by_two(), -1.0), std::invalid_argument);
}

TEST_CASE("TV homogeneity, equivalence and alpha limit") {
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    const Image x = random_image(8, rng);
    const double iso = tv_iso(x), aniso = tv_aniso(x);
    CHECK(iso <= aniso * (1 + 1e-14));
    CHECK(aniso <= std::numbers::sqrt2 * iso * (1 + 1e-14));
    if (t < 20) {
      const double c = rng.normal() * 3.0;
      CHECK(tv_aniso(Complex(c) * x) == doctest::Approx(std::abs(c) * aniso).epsilon(1e-12));
      CHECK(enhanced_tv(x, 1e-14) == doctest::Approx(aniso).epsilon(1e-10));
    }
  }
}

TEST_CASE("shrink scalar examples") {
  CHECK(shrink(Complex(3.0), 1.0) == Complex(2.0));
  CHECK(shrink(Complex(-0.5), 1.0) == Complex(0.0));
  CHECK(shrink(Complex(0.0), 2.0) == Complex(0.0));
  CHECK(shrink(Complex(1.5, -2.0), 0.0) == Complex(1.5, -2.0));
  CHECK(std::abs(shrink(Complex(3.0, 4.0), 1.0) - Complex(2.4, 3.2)) < 1e-15);
  CHECK_THROWS_AS(shrink(Image(2), -0.1), std::invalid_argument);
}

TEST_CASE("shrink matches the brute-force prox on random real pairs") {
  Rng rng(23);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double z = 4.0 * (rng.uniform() - 0.5);
    const double t = 2.0 * rng.uniform();
    worst = std::max(worst, std::abs(shrink(Complex(z), t).real() - prox_grid(z, t)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("complex shrink minimises the 2-D prox objective") {
  // For complex entries the minimiser lies on the ray through z; check that
  // no nearby point in the plane does better.
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const Complex z(rng.normal(), rng.normal());
    const double t = rng.uniform();
    const Complex w = shrink(z, t);
    auto f = [&](Complex v) { return t * std::abs(v) + 0.5 * std::norm(v - z); };
    const double fw = f(w);
    for (int k = 0; k < 64; ++k) {
      const double ang = 2 * std::numbers::pi * k / 64.0;
      for (double r : {1e-3, 1e-2, 1e-1}) CHECK(f(w + std::polar(r, ang)) >= fw - 1e-12);
    }
  }
}

TEST_CASE("project_ball examples") {
  const std::vector<Complex> zero2(2);
  {
    const std::vector<Complex> v{0.3, Complex(0.0, 0.4)};
    CHECK(project_ball(v, zero2, 1.0) == v);
  }
  {
    const std::vector<Complex> v{3.0, 4.0};
    const auto p = project_ball(v, zero2, 1.0);
    CHECK(std::abs(p[0] - 0.6) < 1e-15);
    CHECK(std::abs(p[1] - 0.8) < 1e-15);
  }
  {
    const std::vector<Complex> v{3.0, -1.0};
    const std::vector<Complex> c{1.0, 2.0};
    CHECK(project_ball(v, c, 0.0) == c);
  }
  CHECK_THROWS_AS(project_ball(std::vector<Complex>(2), zero2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(project_ball(std::vector<Complex>(3), zero2, 1.0), std::invalid_argument);
}

TEST_CASE("project_ball matches a brute-force search over the disk") {
  // One complex coordinate is a point in the plane; scan the boundary circle
  // finely and compare distances.
  Rng rng(31);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const std::vector<Complex> v{Complex(3 * rng.normal(), 3 * rng.normal())};
    const std::vector<Complex> c{Complex(rng.normal(), rng.normal())};
    const double radius = 2.0 * rng.uniform();
    const auto p = project_ball(v, c, radius);
    Complex best = v[0];
    if (std::abs(v[0] - c[0]) > radius) {
      double bd = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 20000; ++k) {
        const Complex w = c[0] + std::polar(radius, 2 * std::numbers::pi * k / 20000.0);
        if (std::abs(w - v[0]) < bd) {
          bd = std::abs(w - v[0]);
          best = w;
        }
      }
    }
    worst = std::max(worst, std::abs(p[0] - best));
  }
  CHECK(worst <= 1e-3 * 2.0);  // grid spacing 2 pi r / 20000
}

TEST_CASE("sparse_truncate keeps the largest entries") {
  GradientField g(2);
  g.gx(0, 0) = 3.0;
  g.gx(0, 1) = -2.0;
  g.gy(0, 0) = 1.0;
  g.gy(1, 0) = 0.0;
  const auto [kept, support] = sparse_truncate(g, 2);
  CHECK(support.size() == 2);
  CHECK(kept.gx(0, 0) == Complex(3.0));
  CHECK(kept.gx(0, 1) == Complex(-2.0));
  CHECK(norm1(kept.gy) == 0.0);
  CHECK(sparse_residual_l1(g, 2) == doctest::Approx(1.0));
  CHECK(sparse_residual_l1(g, 8) == 0.0);
  CHECK(sparse_truncate(g, 3).first == g);
  CHECK(gradient_sparsity(g) == 3);
  CHECK_THROWS_AS(sparse_truncate(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(sparse_truncate(g, 9), std::invalid_argument);
}

TEST_CASE("sparse_truncate ties go to the lexicographically smaller index") {
  GradientField g(2);
  g.gy(0, 0) = 1.0;
  g.gx(1, 1) = 1.0;
  g.gx(0, 1) = -1.0;
  const auto [kept, support] = sparse_truncate(g, 2);
  REQUIRE(support.size() == 2);
  CHECK(support.indices[0] == GradientIndex{Channel::x, 0, 1});
  CHECK(support.indices[1] == GradientIndex{Channel::x, 1, 1});
  CHECK(kept.gy(0, 0) == Complex{});
}

TEST_CASE("sparse_truncate agrees with a sorting oracle") {
  Rng rng(37);
  const std::size_t n = 6;
  GradientField g;
  g.gx = random_image(n, rng);
  g.gy = random_image(n, rng);
  std::vector<double> mags;
  for (const auto& z : g.gx.data()) mags.push_back(std::abs(z));
  for (const auto& z : g.gy.data()) mags.push_back(std::abs(z));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  for (std::size_t s : {1u, 5u, 20u, 72u}) {
    double tail = 0.0;
    for (std::size_t i = s; i < mags.size(); ++i) tail += mags[i];
    CHECK(sparse_residual_l1(g, s) == doctest::Approx(tail).epsilon(1e-12));
  }
}

TEST_CASE("operator norm of the gradient is at most 8") {
  for (std::size_t n : {8u, 32u, 128u}) CHECK(gradient_operator_norm_sq(n, 500, 1) <= 8.0 + 1e-6);
}

TEST_CASE("classical Sobolev inequality on mean-zero images") {
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    Image x = random_image(16, rng);
    Complex mean{};
    for (const auto& z : x.data()) mean += z;
    mean /= static_cast<double>(x.size());
    for (auto& z : x.data()) z -= mean;
    CHECK(norm2(x) <= norm1(gradient(x)));
  }
}
