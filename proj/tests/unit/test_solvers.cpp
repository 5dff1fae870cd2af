#include <doctest.h>

#include <cmath>
#include <limits>

#include "etv/imaging.hpp"
#include "etv/measurement.hpp"
#include "etv/metrics.hpp"
#include "etv/phantom.hpp"
#include "etv/sampling.hpp"
#include "etv/solvers.hpp"
#include "test_util.hpp"

using namespace etv;

namespace {

SolverConfig small_budget(SolverConfig cfg, int dca, int inner) {
  cfg.max_dca = dca;
  cfg.max_inner = inner;
  return cfg;
}

bool nonincreasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + slack) return false;
  return true;
}

}  // namespace

TEST_CASE("full mask recovers the image for every model") {
  const Image x = shepp_logan(32);
  const auto op = MeasurementOperator::unweighted(full_mask(32));
  const auto y = op.measure(x);
  for (auto mode : {InnerSolve::cg, InnerSolve::fft_periodic}) {
    auto e = small_budget(SolverConfig::enhanced(0.8), 3, 200);
    e.inner_solve = mode;
    CHECK(*solve_enhanced_tv(op, y, e, &x).relative_error <= 1e-8);
    auto t = small_budget(SolverConfig::tv_baseline(), 1, 10);
    t.inner_solve = mode;
    CHECK(*solve_tv_bregman(op, y, t, &x).relative_error <= 1e-8);
    auto d = small_budget(SolverConfig::tva_tvi_baseline(), 2, 10);
    d.inner_solve = mode;
    CHECK(*solve_tva_minus_tvi(op, y, d, &x).relative_error <= 1e-8);
  }
}

TEST_CASE("zero measurements give the zero image") {
  const auto op = MeasurementOperator::unweighted(radial_mask(32, 6));
  const std::vector<Complex> y(op.rows());
  const auto r = solve_tva_minus_tvi(op, y, small_budget(SolverConfig::tva_tvi_baseline(), 3, 10));
  CHECK(norm2(r.image) == 0.0);
}

TEST_CASE("alpha = 0 reduces to the TV baseline") {
  const Image x = shepp_logan(32);
  const auto op = MeasurementOperator::unweighted(radial_mask(32, 8));
  const auto y = op.measure(x);
  auto cfg = small_budget(SolverConfig::tv_baseline(), 1, 20);
  cfg.sweeps_per_update = 20;
  cfg.alpha = 0.0;
  const auto a = solve_enhanced_tv(op, y, cfg);
  const auto b = solve_tv_bregman(op, y, cfg);
  CHECK(relative_error(b.image, a.image) <= 1e-12);
}

TEST_CASE("DCA objective trace is nonincreasing and the result feasible") {
  const Image x = shepp_logan(32);
  const auto op = MeasurementOperator::unweighted(radial_mask(32, 10));
  const auto y = op.measure(x);
  const auto r = solve_enhanced_tv(op, y, small_budget(SolverConfig::enhanced(0.8), 6, 300));
  CHECK(r.objective_trace.size() >= 2);
  CHECK(nonincreasing(r.objective_trace, 1e-9));
  CHECK(r.residual_norm <= 1e-6);
}

TEST_CASE("noisy constraint is met at the requested radius") {
  const Image x = shepp_logan(32);
  const auto mask = radial_mask(32, 10);
  const double sd = 0.02;
  const double tau = sd * std::sqrt(static_cast<double>(mask.size()));
  const auto op = MeasurementOperator::unweighted(mask, tau);
  const auto y = add_noise(op.measure(x), sd, 3);
  const auto r = solve_enhanced_tv(op, y, small_budget(SolverConfig::enhanced(0.8, true), 5, 500));
  CHECK(r.radius == doctest::Approx(tau));
  CHECK(r.residual_norm <= tau * (1 + 1e-3));
}

TEST_CASE("weighted operator folds rho into the data") {
  const Image x = shepp_logan(32);
  const auto wm = variable_density_mask(32, 400, 1.0, 8);
  const auto op = MeasurementOperator::weighted(wm.mask, wm.weights);
  const auto plain = MeasurementOperator::unweighted(wm.mask);
  const auto b = plain.measure(x);
  const auto y = fold_weights(op, b);
  const auto direct = op.measure(x);
  for (std::size_t j = 0; j < y.size(); ++j) CHECK(std::abs(y[j] - direct[j]) < 1e-12);
  const auto r = solve_enhanced_tv(op, y, small_budget(SolverConfig::enhanced(0.8), 2, 200), &x);
  CHECK(std::isfinite(*r.relative_error));
  CHECK(r.residual_norm < 1e-3 * norm2(std::span<const Complex>(y)));
}

TEST_CASE("cg and periodic inner solves agree on a small problem") {
  const Image x = shepp_logan(32);
  const auto op = MeasurementOperator::unweighted(radial_mask(32, 12));
  const auto y = op.measure(x);
  auto cfg = small_budget(SolverConfig::enhanced(0.8), 4, 400);
  const auto a = solve_enhanced_tv(op, y, cfg);
  cfg.inner_solve = InnerSolve::fft_periodic;
  const auto b = solve_enhanced_tv(op, y, cfg);
  CHECK(relative_error(a.image, b.image) <= 1e-3);
  CHECK(a.cg_iterations > 0);
  CHECK(b.cg_iterations == 0);
}

TEST_CASE("solver output is deterministic") {
  const Image x = shepp_logan(32);
  const auto op = MeasurementOperator::unweighted(radial_mask(32, 7));
  const auto y = op.measure(x);
  const auto cfg = small_budget(SolverConfig::enhanced(1.2), 3, 100);
  const auto a = solve_enhanced_tv(op, y, cfg, &x);
  const auto b = solve_enhanced_tv(op, y, cfg, &x);
  CHECK(a.image == b.image);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(*a.relative_error == *b.relative_error);
}

TEST_CASE("CG cap is a warning, NaN is an abort") {
  const Image x = shepp_logan(32);
  const auto op = MeasurementOperator::unweighted(radial_mask(32, 7));
  auto y = op.measure(x);
  auto cfg = small_budget(SolverConfig::enhanced(0.8), 1, 5);
  cfg.cg_max_iter = 1;
  cfg.cg_tol = 1e-15;
  const auto r = solve_enhanced_tv(op, y, cfg);
  CHECK(!r.warnings.empty());
  y[0] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(solve_enhanced_tv(op, y, small_budget(SolverConfig::enhanced(0.8), 1, 5)), SolverAbort);
}

TEST_CASE("solver rejects bad inputs") {
  const auto op = MeasurementOperator::unweighted(radial_mask(16, 3));
  CHECK_THROWS_AS(solve_enhanced_tv(op, std::vector<Complex>(op.rows() + 1), SolverConfig{}), std::invalid_argument);
  SolverConfig bad;
  bad.mu = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SolverConfig{};
  bad.max_dca = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(parse_inner_solve("direct"), std::invalid_argument);
  CHECK(parse_inner_solve(to_string(InnerSolve::fft_periodic)) == InnerSolve::fft_periodic);
}

TEST_CASE("baseline schedules") {
  const auto tv = SolverConfig::tv_baseline();
  CHECK(tv.max_dca == 1);
  CHECK(tv.max_inner * tv.sweeps_per_update == 50 * 200);
  const auto d = SolverConfig::tva_tvi_baseline();
  CHECK(d.max_inner * d.sweeps_per_update == 50 * 20);
  const auto e = SolverConfig::enhanced(0.8, true);
  CHECK(e.mu == 1e3);
  CHECK(e.beta == 10.0);
  CHECK(e.max_dca == 15);
  CHECK(e.tol_dca == 1e-3);
  CHECK(SolverConfig::enhanced(0.8).tol_dca == 1e-10);
}

TEST_CASE("denoiser fixes constants exactly") {
  DenoiseConfig cfg;
  cfg.max_dca = 3;
  cfg.max_breg = 50;
  const Image c(16, 0.37);
  const Image out = denoise_enhanced_tv(c, cfg);
  for (const auto& z : out.data()) CHECK(std::abs(z - Complex(0.37)) < 1e-12);
}

TEST_CASE("denoiser with strong fidelity stays near the input") {
  etv::Rng rng(12);
  const Image y = test::random_real_image(32, rng);
  DenoiseConfig cfg;
  cfg.mu = 1e3;
  cfg.max_dca = 2;
  cfg.max_breg = 100;
  CHECK(relative_error(y, denoise_enhanced_tv(y, cfg)) <= 1e-2);
}

TEST_CASE("dca_objective is the enhanced TV value") {
  const Image x = shepp_logan(32);
  CHECK(dca_objective(x, 0.5) == enhanced_tv(x, 0.5));
}
