#include "etv/solvers.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "etv/imaging.hpp"
#include "etv/metrics.hpp"

namespace etv {

std::string_view to_string(InnerSolve s) {
  return s == InnerSolve::cg ? "cg" : "fft_periodic";
}

InnerSolve parse_inner_solve(std::string_view name) {
  if (name == "cg") return InnerSolve::cg;
  if (name == "fft_periodic") return InnerSolve::fft_periodic;
  throw std::invalid_argument("unknown inner solver '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("solver config: " + what); };
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be finite and nonnegative");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(beta > 0.0)) fail("beta must be positive");
  if (max_dca < 1) fail("max_dca must be at least 1");
  if (max_inner < 1) fail("max_inner must be at least 1");
  if (sweeps_per_update < 1) fail("sweeps_per_update must be at least 1");
  if (!(tol_dca >= 0.0)) fail("tol_dca must be nonnegative");
  if (!(tol_inner >= 0.0)) fail("tol_inner must be nonnegative");
  if (!(cg_tol > 0.0)) fail("cg_tol must be positive");
  if (cg_max_iter < 1) fail("cg_max_iter must be at least 1");
}

SolverConfig SolverConfig::enhanced(double alpha, bool noisy) {
  SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.tol_dca = noisy ? 1e-3 : 1e-10;
  return cfg;
}

SolverConfig SolverConfig::tv_baseline(bool noisy) {
  SolverConfig cfg;
  cfg.alpha = 0.0;
  cfg.max_dca = 1;
  cfg.max_inner = 50;
  cfg.sweeps_per_update = 200;
  cfg.tol_dca = noisy ? 1e-3 : 1e-10;
  cfg.tol_inner = cfg.tol_dca;
  return cfg;
}

SolverConfig SolverConfig::tva_tvi_baseline(bool noisy) {
  SolverConfig cfg;
  cfg.alpha = 0.0;
  cfg.max_dca = 15;
  cfg.max_inner = 50;
  cfg.sweeps_per_update = 20;
  cfg.tol_dca = noisy ? 1e-3 : 1e-10;
  return cfg;
}

void DenoiseConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("denoise config: " + what); };
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be finite and nonnegative");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(beta > 0.0)) fail("beta must be positive");
  if (max_dca < 1) fail("max_dca must be at least 1");
  if (max_breg < 1) fail("max_breg must be at least 1");
  if (!(cg_tol > 0.0)) fail("cg_tol must be positive");
  if (cg_max_iter < 1) fail("cg_max_iter must be at least 1");
}

double dca_objective(const Image& img, double alpha) { return enhanced_tv(img, alpha); }

std::vector<Complex> fold_weights(const MeasurementOperator& op, std::span<const Complex> b) {
  if (b.size() != op.rows()) throw std::invalid_argument("fold_weights: length mismatch");
  std::vector<Complex> out(b.begin(), b.end());
  if (const auto& w = op.weights()) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= (*w)[j];
  }
  return out;
}

namespace {

using Buffer = std::vector<Complex>;

double real_dot(const Buffer& a, const Buffer& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc;
}

double sq_norm(const Buffer& a) { return real_dot(a, a); }

/// Eigenvalues of the periodic difference Laplacian, in storage order.
std::vector<double> periodic_laplacian_symbol(std::size_t n) {
  std::vector<double> s(n * n);
  std::vector<double> one(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    one[i] = 4.0 * v * v;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) s[a * n + b] = one[a] + one[b];
  return s;
}

/// Wrap-around part of the periodic Laplacian: E = L_periodic - L_zero_padded.
/// Nonzero only on the first and last rows and columns.
void apply_wrap_correction(const Buffer& in, Buffer& out, std::size_t n) {
  std::fill(out.begin(), out.end(), Complex{});
  if (n < 2) return;
  const std::size_t last = n - 1;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] += in[k] - in[last * n + k];
    out[last * n + k] += in[last * n + k] - in[k];
  }
  for (std::size_t j = 0; j < n; ++j) {
    out[j * n] += in[j * n] - in[j * n + last];
    out[j * n + last] += in[j * n + last] - in[j * n];
  }
}

/// Solves (mu F^{-1} diag(data) F + beta grad^T grad) u = rhs, where grad
/// uses the zero-padded boundary. An empty `data` means the identity.
///
/// The periodic surrogate P^{-1} = F^{-1} diag(mu data + beta lambda) F is
/// diagonal in frequency and differs from the exact operator only by the
/// sparse wrap-around term: A = P^{-1} - beta E. PCG with preconditioner P
/// then needs one transform pair per iteration, because P^{-1} p obeys the
/// same recurrence as p with z replaced by r.
class QuadraticSolver {
 public:
  QuadraticSolver(std::size_t n, double mu, double beta, const std::vector<double>& data, double tol,
                  int max_iter)
      : n_(n), beta_(beta), tol_(tol), max_iter_(max_iter), dft_(Dft2::for_size(n)), r_(n * n),
        z_(n * n), p_(n * n), q_(n * n), ap_(n * n) {
    const auto lap = periodic_laplacian_symbol(n);
    symbol_.resize(n * n);
    inv_symbol_.resize(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
      symbol_[i] = mu * (data.empty() ? 1.0 : data[i]) + beta * lap[i];
      // Zero only on the constant mode when DC is unsampled; the right-hand
      // side has no component there.
      inv_symbol_[i] = symbol_[i] > 0.0 ? 1.0 / symbol_[i] : 0.0;
    }
  }

  /// Periodic surrogate solve in place on a spectrum.
  void periodic_solve_spectral(Buffer& spectrum) const {
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= inv_symbol_[i];
  }

  /// PCG warm-started from u. `rhs_hat` is the spectrum of the right-hand
  /// side and `u_hat` must hold F u on entry; it holds F u of the solution on
  /// exit. Returns the iteration count, -1 if the cap was hit, or -2 on a
  /// non-finite right-hand side or search direction.
  int solve_cg(const Buffer& rhs_hat, Buffer& u, Buffer& u_hat) {
    const std::size_t nn = u.size();
    // r = rhs - P^{-1} u + beta E u
    for (std::size_t i = 0; i < nn; ++i) r_[i] = rhs_hat[i] - symbol_[i] * u_hat[i];
    const double target = tol_ * tol_ * sq_norm(rhs_hat);  // Parseval: same norm in either domain
    if (!std::isfinite(target)) return -2;
    dft_->inverse(r_);
    apply_wrap_correction(u, ap_, n_);
    for (std::size_t i = 0; i < nn; ++i) r_[i] += beta_ * ap_[i];

    int result = -1;
    if (sq_norm(r_) <= target) {
      result = 0;
    } else {
      precondition(r_, z_);
      p_ = z_;
      q_ = r_;  // P^{-1} p
      double rz = real_dot(r_, z_);
      for (int it = 1; it <= max_iter_; ++it) {
        apply_wrap_correction(p_, ap_, n_);
        for (std::size_t i = 0; i < nn; ++i) ap_[i] = q_[i] - beta_ * ap_[i];
        const double pap = real_dot(p_, ap_);
        if (!std::isfinite(pap)) return -2;
        if (!(pap > 0.0)) {
          result = it;
          break;
        }
        const double step = rz / pap;
        for (std::size_t i = 0; i < nn; ++i) {
          u[i] += step * p_[i];
          r_[i] -= step * ap_[i];
        }
        if (sq_norm(r_) <= target) {
          result = it;
          break;
        }
        precondition(r_, z_);
        const double rz_next = real_dot(r_, z_);
        const double ratio = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < nn; ++i) {
          p_[i] = z_[i] + ratio * p_[i];
          q_[i] = r_[i] + ratio * q_[i];
        }
      }
    }
    u_hat = u;
    dft_->forward(u_hat);
    return result;
  }

  const Dft2& dft() const noexcept { return *dft_; }

 private:
  void precondition(const Buffer& r, Buffer& out) const {
    out = r;
    dft_->forward(out);
    periodic_solve_spectral(out);
    dft_->inverse(out);
  }

  std::size_t n_;
  double beta_;
  double tol_;
  int max_iter_;
  std::shared_ptr<const Dft2> dft_;
  std::vector<double> symbol_;
  std::vector<double> inv_symbol_;
  Buffer r_, z_, p_, q_, ap_;
};

/// Forward differences into dx, dy (zero-padded last row / column).
void differences(const Buffer& u, Buffer& dx, Buffer& dy, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = j * n + k;
      dx[i] = (j + 1 < n) ? u[i + n] - u[i] : Complex{};
      dy[i] = (k + 1 < n) ? u[i + 1] - u[i] : Complex{};
    }
  }
}

/// out = D_x^T gx + D_y^T gy.
void differences_adjoint(const Buffer& gx, const Buffer& gy, Buffer& out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = j * n + k;
      Complex v{};
      if (j + 1 < n) v -= gx[i];
      if (j >= 1) v += gx[i - n];
      if (k + 1 < n) v -= gy[i];
      if (k >= 1) v += gy[i - 1];
      out[i] = v;
    }
  }
}

bool all_finite(const Buffer& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Image to_image(const Buffer& v, std::size_t n) {
  Image img(n);
  std::copy(v.begin(), v.end(), img.data().begin());
  return img;
}

enum class Model { enhanced, tv, tva_tvi };

/// Linear offset added to the shrink argument: the DCA subgradient of the
/// concave part, divided by beta by the caller.
void concave_subgradient(Model model, double alpha, const Buffer& gx, const Buffer& gy, Buffer& ox,
                         Buffer& oy) {
  switch (model) {
    case Model::tv:
      std::fill(ox.begin(), ox.end(), Complex{});
      std::fill(oy.begin(), oy.end(), Complex{});
      return;
    case Model::enhanced:
      for (std::size_t i = 0; i < gx.size(); ++i) {
        ox[i] = alpha * gx[i];
        oy[i] = alpha * gy[i];
      }
      return;
    case Model::tva_tvi:
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double mag = std::sqrt(std::norm(gx[i]) + std::norm(gy[i]));
        ox[i] = mag > 0.0 ? gx[i] / mag : Complex{};
        oy[i] = mag > 0.0 ? gy[i] / mag : Complex{};
      }
      return;
  }
}

double model_objective(Model model, double alpha, const Image& x) {
  switch (model) {
    case Model::enhanced: return dca_objective(x, alpha);
    case Model::tv: return tv_aniso(x);
    case Model::tva_tvi: return tv_aniso(x) - tv_iso(x);
  }
  return 0.0;
}

ReconstructionReport run_constrained(Model model, const MeasurementOperator& op,
                                     std::span<const Complex> y_in, SolverConfig cfg,
                                     const Image* reference) {
  cfg.validate();
  if (y_in.size() != op.rows()) {
    throw std::invalid_argument("solver: measurement vector has " + std::to_string(y_in.size()) +
                                " entries, operator has " + std::to_string(op.rows()) + " rows");
  }
  if (model != Model::enhanced) cfg.alpha = 0.0;
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = op.side();
  const std::size_t nn = n * n;
  const std::size_t m = op.rows();
  const double radius = op.effective_radius();

  QuadraticSolver lin(n, cfg.mu, cfg.beta, op.normal_diagonal(), cfg.cg_tol, cfg.cg_max_iter);
  const Dft2& dft = lin.dft();

  const Buffer y(y_in.begin(), y_in.end());
  Buffer u(nn), u_round(nn), x_prev(nn), x_cur(nn);
  Buffer dx(nn), dy(nn), bx(nn), by(nn), ux(nn), uy(nn), ox(nn), oy(nn);
  Buffer rhs(nn), spectrum(nn), work(nn), u_hat(nn);
  Buffer z(m), lam(m), mu_vec(m);

  const auto rows = op.row_indices();
  const auto& weights = op.weights();
  auto rho = [&weights](std::size_t j) { return weights ? (*weights)[j] : 1.0; };

  ReconstructionReport report;
  report.radius = radius;
  long cg_failures = 0;
  const double inv_beta = 1.0 / cfg.beta;

  // u-step followed by the measurement M u; returns the current residual
  // vector M u - y in `mu_vec`.
  auto u_step = [&]() {
    for (std::size_t i = 0; i < nn; ++i) {
      work[i] = dx[i] - bx[i];
      ux[i] = dy[i] - by[i];
    }
    differences_adjoint(work, ux, rhs, n);
    for (std::size_t j = 0; j < m; ++j) mu_vec[j] = y[j] + z[j] - lam[j];
    // rhs spectrum = mu * M^*(y + z - lambda) + beta * F(D^T(d - b)), with
    // M^* = F^{-1} scatter(rho o .)
    spectrum = rhs;
    dft.forward(spectrum);
    for (auto& s : spectrum) s *= cfg.beta;
    for (std::size_t j = 0; j < m; ++j) spectrum[rows[j]] += cfg.mu * rho(j) * mu_vec[j];
    if (cfg.inner_solve == InnerSolve::fft_periodic) {
      lin.periodic_solve_spectral(spectrum);
      u_hat = spectrum;
      u = spectrum;
      dft.inverse(u);
    } else {
      const int its = lin.solve_cg(spectrum, u, u_hat);
      if (its == -2) throw SolverAbort("non-finite right-hand side in the u-solve");
      if (its < 0) {
        ++cg_failures;
        report.cg_iterations += cfg.cg_max_iter;
      } else {
        report.cg_iterations += its;
      }
    }
    for (std::size_t j = 0; j < m; ++j) mu_vec[j] = rho(j) * u_hat[rows[j]] - y[j];
    ++report.linear_solves;
  };

  for (int k = 0; k < cfg.max_dca; ++k) {
    if (k >= 1) {
      double diff = 0.0;
      for (std::size_t i = 0; i < nn; ++i) diff += std::norm(x_cur[i] - x_prev[i]);
      if (std::sqrt(diff) <= cfg.tol_dca) break;
    }
    differences(x_cur, work, ux, n);
    concave_subgradient(model, cfg.alpha, work, ux, ox, oy);
    for (std::size_t i = 0; i < nn; ++i) {
      ox[i] *= inv_beta;
      oy[i] *= inv_beta;
    }
    std::fill(bx.begin(), bx.end(), Complex{});
    std::fill(by.begin(), by.end(), Complex{});

    for (int round = 0; round < cfg.max_inner; ++round) {
      if (cfg.tol_inner > 0.0) u_round = u;
      for (int sweep = 0; sweep < cfg.sweeps_per_update; ++sweep) {
        u_step();
        differences(u, ux, uy, n);
        for (std::size_t i = 0; i < nn; ++i) {
          dx[i] = shrink(ux[i] + bx[i] + ox[i], inv_beta);
          dy[i] = shrink(uy[i] + by[i] + oy[i], inv_beta);
          bx[i] += ux[i] - dx[i];
          by[i] += uy[i] - dy[i];
        }
      }
      // z = P_B(0, radius)(M u - y + lambda); lambda += (M u - y) - z
      double len = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        z[j] = mu_vec[j] + lam[j];
        len += std::norm(z[j]);
      }
      len = std::sqrt(len);
      const double scale = (len <= radius) ? 1.0 : radius / len;
      for (std::size_t j = 0; j < m; ++j) {
        z[j] *= scale;
        lam[j] += mu_vec[j] - z[j];
      }
      ++report.inner_iterations;
      if (cfg.tol_inner > 0.0 && round > 0) {
        double diff = 0.0;
        for (std::size_t i = 0; i < nn; ++i) diff += std::norm(u[i] - u_round[i]);
        if (std::sqrt(diff) <= cfg.tol_inner) break;
      }
    }

    if (!all_finite(u)) {
      std::ostringstream msg;
      msg << "non-finite iterate at DCA step " << k + 1 << " (mu=" << cfg.mu << ", beta=" << cfg.beta
          << ", alpha=" << cfg.alpha << ")";
      throw SolverAbort(msg.str());
    }
    // Subproblems are solved inexactly, so near convergence an outer step can
    // land above the previous objective. That step is discarded and the loop
    // stops: the remaining change is below the subproblem accuracy.
    const double f = model_objective(model, cfg.alpha, to_image(u, n));
    if (k >= 1 && f > report.objective_trace.back()) {
      report.ascent_stop = true;
      break;
    }
    x_prev = x_cur;
    x_cur = u;
    ++report.dca_iterations;
    report.objective_trace.push_back(f);
  }

  report.image = to_image(x_cur, n);
  const auto mx = op.measure(report.image);
  double res = 0.0;
  for (std::size_t j = 0; j < m; ++j) res += std::norm(mx[j] - y[j]);
  report.residual_norm = std::sqrt(res);
  if (cg_failures > 0) {
    report.warnings.push_back("conjugate gradient hit the iteration cap in " + std::to_string(cg_failures) +
                              " of " + std::to_string(report.linear_solves) + " u-solves");
  }
  if (reference) {
    report.relative_error = relative_error(*reference, report.image);
    report.ssim = ssim(*reference, report.image);
    report.imaginary_fraction = imaginary_fraction(report.image);
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

ReconstructionReport solve_enhanced_tv(const MeasurementOperator& op, std::span<const Complex> y,
                                       const SolverConfig& cfg, const Image* reference) {
  return run_constrained(Model::enhanced, op, y, cfg, reference);
}

ReconstructionReport solve_tv_bregman(const MeasurementOperator& op, std::span<const Complex> y,
                                      const SolverConfig& cfg, const Image* reference) {
  return run_constrained(Model::tv, op, y, cfg, reference);
}

ReconstructionReport solve_tva_minus_tvi(const MeasurementOperator& op, std::span<const Complex> y,
                                         const SolverConfig& cfg, const Image* reference) {
  return run_constrained(Model::tva_tvi, op, y, cfg, reference);
}

Image denoise_enhanced_tv(const Image& noisy, const DenoiseConfig& cfg) {
  cfg.validate();
  const std::size_t n = noisy.side();
  const std::size_t nn = n * n;
  QuadraticSolver lin(n, cfg.mu, cfg.beta, {}, cfg.cg_tol, cfg.cg_max_iter);
  const Dft2& dft = lin.dft();
  const double inv_beta = 1.0 / cfg.beta;

  const Buffer y(noisy.data().begin(), noisy.data().end());
  Buffer u(nn), x_cur(nn), dx(nn), dy(nn), bx(nn), by(nn), ux(nn), uy(nn), ox(nn), oy(nn);
  Buffer rhs(nn), work(nn), u_hat(nn);

  for (int k = 0; k < cfg.max_dca; ++k) {
    differences(x_cur, ux, uy, n);
    for (std::size_t i = 0; i < nn; ++i) {
      ox[i] = cfg.alpha * ux[i] * inv_beta;
      oy[i] = cfg.alpha * uy[i] * inv_beta;
    }
    std::fill(bx.begin(), bx.end(), Complex{});
    std::fill(by.begin(), by.end(), Complex{});
    for (int p = 0; p < cfg.max_breg; ++p) {
      // u = (mu + beta grad^T grad)^{-1} (mu y + beta D^T (d - b))
      for (std::size_t i = 0; i < nn; ++i) {
        work[i] = dx[i] - bx[i];
        ux[i] = dy[i] - by[i];
      }
      differences_adjoint(work, ux, rhs, n);
      for (std::size_t i = 0; i < nn; ++i) rhs[i] = cfg.mu * y[i] + cfg.beta * rhs[i];
      dft.forward(rhs);
      if (cfg.inner_solve == InnerSolve::fft_periodic) {
        lin.periodic_solve_spectral(rhs);
        u = rhs;
        dft.inverse(u);
      } else if (lin.solve_cg(rhs, u, u_hat) == -2) {
        throw SolverAbort("denoise: non-finite right-hand side in the u-solve");
      }
      differences(u, ux, uy, n);
      for (std::size_t i = 0; i < nn; ++i) {
        dx[i] = shrink(ux[i] + bx[i] + ox[i], inv_beta);
        dy[i] = shrink(uy[i] + by[i] + oy[i], inv_beta);
        bx[i] += ux[i] - dx[i];
        by[i] += uy[i] - dy[i];
      }
    }
    if (!all_finite(u)) {
      throw SolverAbort("denoise: non-finite iterate at DCA step " + std::to_string(k + 1));
    }
    x_cur = u;
  }
  return to_image(x_cur, n);
}

}  // namespace etv
