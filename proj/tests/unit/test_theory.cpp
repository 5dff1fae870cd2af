#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "etv/theory.hpp"

using namespace etv;

TEST_CASE("RIP constants at known levels") {
  const auto z = rip_constants(0.0);
  CHECK(z.k1 == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(z.k2 == doctest::Approx(1.0).epsilon(1e-15));
  const auto h = rip_constants(0.5);
  const double k1 = 3.0 / (2.0 * std::sqrt(0.5) - std::sqrt(1.5));
  CHECK(h.k1 == doctest::Approx(k1).epsilon(1e-14));
  CHECK(h.k1 == doctest::Approx(15.8338).epsilon(1e-5));
  CHECK(h.k2 == doctest::Approx(std::sqrt(1.5) / 4.0 * (k1 + 1.0 / std::sqrt(1.5))).epsilon(1e-14));
  CHECK_THROWS_AS(rip_constants(0.6), std::invalid_argument);
  CHECK_THROWS_AS(rip_constants(0.7), std::invalid_argument);
  CHECK_THROWS_AS(rip_constants(-0.1), std::invalid_argument);
}

TEST_CASE("K1 / K2 near delta = 0.6") {
  // K1 / K2 = 4 / (sqrt(1 + delta) + 1 / K1), and 1 / K1 -> 0, so the limit
  // is 4 / sqrt(1.6).
  const double d = 0.6 - 1e-9;
  const auto c = rip_constants(d);
  CHECK(c.k1 / c.k2 == doctest::Approx(4.0 / (std::sqrt(1.0 + d) + 1.0 / c.k1)).epsilon(1e-13));
  CHECK(std::abs(c.k1 / c.k2 - 4.0 / std::sqrt(1.6)) <= 1e-4);
  CHECK(c.k1 > 1e8);
}

TEST_CASE("K1 and K2 increase with delta") {
  double p1 = 0.0, p2 = 0.0;
  for (int i = 1; i < 600; ++i) {
    const auto c = rip_constants(i * 1e-3);
    CHECK(c.k1 > p1);
    CHECK(c.k2 > p2);
    p1 = c.k1;
    p2 = c.k2;
  }
}

TEST_CASE("alpha bounds") {
  const auto a = verify_alpha(0.9, 1.0, 4, 0.0, AlphaRegime::thm1, 64);
  CHECK(a.bound == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.satisfied);
  CHECK(!verify_alpha(1.1, 1.0, 4, 0.0, AlphaRegime::thm1, 64).satisfied);
  const auto b = verify_alpha(1.0, 1.0, 4, 0.0, AlphaRegime::thm2_3, 256);
  CHECK(b.bound == doctest::Approx(std::sqrt(48.0 * 4 * 8)).epsilon(1e-14));
  CHECK(b.bound == doctest::Approx(39.19).epsilon(1e-4));
  const auto inf = verify_alpha(1e9, 0.0, 4, 0.3, AlphaRegime::thm2_3, 64);
  CHECK(std::isinf(inf.bound));
  CHECK(inf.satisfied);
  const auto tiny = verify_alpha(1e6, 1e-300, 4, 0.3, AlphaRegime::thm1, 64);
  CHECK(tiny.satisfied);
  const auto robust = verify_alpha(0.9, 1.0, 4, 0.0, AlphaRegime::thm1, 64, 0.5);
  CHECK(robust.robust_bound == doctest::Approx(1.0 / 1.5));
  CHECK(!robust.robust_satisfied);
}

TEST_CASE("alpha bound shrinks to zero as delta approaches 0.6") {
  double prev = std::numeric_limits<double>::infinity();
  for (double d : {0.1, 0.3, 0.5, 0.59, 0.599, 0.5999999}) {
    const double b = verify_alpha(1.0, 2.0, 10, d, AlphaRegime::thm2_3, 64).bound;
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("error bound examples") {
  GuaranteeInputs in;
  in.s = 16;
  in.tau = 1.0;
  in.alpha = 0.5;
  in.n_side = 64;
  CHECK(error_bound(in, BoundKind::grad_l2) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(error_bound(in, BoundKind::image_thm2) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(error_bound(in, BoundKind::grad_l1) == doctest::Approx(4.0 * std::sqrt(8.0)).epsilon(1e-15));
  const double lg = std::log2(64.0 * 64.0 / 16.0);
  CHECK(error_bound(in, BoundKind::image_thm1) == doctest::Approx(lg * std::sqrt(8.0) + 1.0).epsilon(1e-15));

  in.tau = 0.0;
  for (auto k : {BoundKind::grad_l2, BoundKind::grad_l1, BoundKind::image_thm1, BoundKind::image_thm2})
    CHECK(error_bound(in, k) == 0.0);

  in.alpha = 0.0;
  CHECK_THROWS_AS(error_bound(in, BoundKind::grad_l2), std::invalid_argument);
}

TEST_CASE("error bounds are monotone in tau, residual and alpha") {
  for (auto k : {BoundKind::grad_l2, BoundKind::grad_l1, BoundKind::image_thm1, BoundKind::image_thm2}) {
    GuaranteeInputs in;
    in.s = 9;
    in.n_side = 128;
    in.alpha = 1.0;
    in.residual_l1 = 0.5;
    double prev = -1.0;
    for (double tau : {0.0, 0.1, 0.5, 2.0}) {
      in.tau = tau;
      const double v = error_bound(in, k);
      CHECK(v >= prev);
      prev = v;
    }
    prev = -1.0;
    for (double r : {0.0, 0.3, 1.0, 5.0}) {
      in.residual_l1 = r;
      const double v = error_bound(in, k);
      CHECK(v >= prev);
      prev = v;
    }
    prev = std::numeric_limits<double>::infinity();
    for (double a : {0.1, 0.5, 1.0, 4.0}) {
      in.alpha = a;
      const double v = error_bound(in, k);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("bound comparison regimes") {
  GuaranteeInputs in;
  in.s = 16;
  in.alpha = 2.0;
  in.n_side = 64;
  // sparse gradient, tau >= sqrt(s) / alpha = 2
  in.tau = 2.5;
  CHECK(compare_bounds(in).enhanced_tighter);
  in.tau = 1.0;
  CHECK(!compare_bounds(in).enhanced_tighter);
  // noise free, alpha >= s / residual
  in.tau = 0.0;
  in.residual_l1 = 8.0;
  in.alpha = 2.0;
  CHECK(compare_bounds(in).enhanced_tighter);
  in.alpha = 1.5;
  CHECK(!compare_bounds(in).enhanced_tighter);
  in.residual_l1 = 0.0;
  const auto tie = compare_bounds(in);
  CHECK(tie.tie);
  CHECK(tie.enhanced == 0.0);
  CHECK(tie.ratio == 1.0);
}

TEST_CASE("linear term predicate") {
  CHECK(linear_term_removable(2.0, 1.0, 0.5));
  CHECK(!linear_term_removable(1.0, 1.0, 0.5));
  CHECK(linear_term_removable(0.0, 0.0, 1.0));
}

TEST_CASE("posterior alpha check records its inputs") {
  Image x(16);
  x(4, 4) = 1.0;
  const auto v = posterior_alpha_check(x, 0.8, 4, 0.5, 16);
  CHECK(v.grad_norm2 == doctest::Approx(2.0));
  CHECK(v.sparsity == 4);
  CHECK(v.delta == 0.5);
  const double k2 = rip_constants(0.5).k2;
  CHECK(v.bound == doctest::Approx(std::sqrt(48.0 * 4 * 4) / (k2 * 2.0)));
}

TEST_CASE("lemma checks pass at N = 8 and 16") {
  for (std::size_t n : {8u, 16u}) {
    const auto rep = check_lemmas(n, 200, 3);
    CHECK(rep.all_passed());
    CHECK(rep.results.size() >= 10);
    CHECK(rep.fitted_decay_constant > 0.0);
    CHECK(std::isfinite(rep.fitted_decay_constant));
  }
  CHECK_THROWS_AS(check_lemmas(12, 1, 1), std::invalid_argument);
  const auto empty = check_lemmas(8, 0, 1);
  CHECK(empty.all_passed());
  CHECK(empty.fitted_decay_constant == 0.0);
}

TEST_CASE("lemma report writers") {
  const auto rep = check_lemmas(8, 10, 5);
  std::ostringstream csv, txt;
  write_report_csv(csv, {rep});
  write_report_text(txt, rep);
  CHECK(csv.str().rfind("n,lemma,passed,value,limit,margin\n", 0) == 0);
  CHECK(txt.str().find("PASS") != std::string::npos);
  CHECK(txt.str().find("FAIL") == std::string::npos);
}
