#include "etv/theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "etv/fourier.hpp"
#include "etv/haar.hpp"
#include "etv/imaging.hpp"
#include "etv/random.hpp"

namespace etv {

RipConstants rip_constants(double delta) {
  if (!(delta >= 0.0) || delta >= 0.6) {
    throw std::invalid_argument("rip_constants: delta must lie in [0, 0.6)");
  }
  const double up = std::sqrt(1.0 + delta);
  const double k1 = 3.0 / (2.0 * std::sqrt(1.0 - delta) - up);
  const double k2 = (up / 4.0) * (k1 + 1.0 / up);
  return {delta, k1, k2};
}

namespace {

double alpha_upper(double grad_norm2, std::size_t s, double k2, AlphaRegime regime, std::size_t n_side) {
  if (grad_norm2 <= 0.0) return std::numeric_limits<double>::infinity();
  const auto sd = static_cast<double>(s);
  if (regime == AlphaRegime::thm1) return std::sqrt(sd) / (2.0 * k2 * grad_norm2);
  const double logn = std::log2(static_cast<double>(n_side));
  return std::sqrt(48.0 * sd * logn) / (k2 * grad_norm2);
}

}  // namespace

AlphaBound verify_alpha(double alpha, double grad_norm2, std::size_t s, double delta, AlphaRegime regime,
                        std::size_t n_side, double accuracy) {
  if (s == 0) throw std::invalid_argument("verify_alpha: s must be positive");
  if (grad_norm2 < 0.0 || accuracy < 0.0) throw std::invalid_argument("verify_alpha: negative norm");
  if (regime == AlphaRegime::thm2_3 && n_side < 2) throw std::invalid_argument("verify_alpha: N must be >= 2");
  const auto rc = rip_constants(delta);
  AlphaBound out;
  out.bound = alpha_upper(grad_norm2, s, rc.k2, regime, n_side);
  out.satisfied = alpha <= out.bound;
  out.robust_bound = alpha_upper(grad_norm2 + accuracy, s, rc.k2, regime, n_side);
  out.robust_satisfied = alpha <= out.robust_bound;
  return out;
}

AlphaVerification posterior_alpha_check(const Image& x, double alpha, std::size_t s, double delta,
                                        std::size_t n_side, double accuracy) {
  AlphaVerification v;
  v.grad_norm2 = norm2(gradient(x));
  v.sparsity = s;
  v.delta = delta;
  const auto b = verify_alpha(alpha, v.grad_norm2, std::max<std::size_t>(s, 1), delta, AlphaRegime::thm2_3,
                              n_side, accuracy);
  v.bound = b.bound;
  v.satisfied = b.satisfied;
  v.robust_bound = b.robust_bound;
  v.robust_satisfied = b.robust_satisfied;
  return v;
}

void GuaranteeInputs::validate() const {
  if (s < 1) throw std::invalid_argument("GuaranteeInputs: s must be >= 1");
  if (tau < 0.0 || residual_l1 < 0.0) throw std::invalid_argument("GuaranteeInputs: negative tau or residual");
  if (!(alpha > 0.0)) throw std::invalid_argument("GuaranteeInputs: alpha must be positive");
  if (n_side < 1) throw std::invalid_argument("GuaranteeInputs: N must be positive");
}

double error_bound(const GuaranteeInputs& in, BoundKind which) {
  in.validate();
  const double rs = std::sqrt(static_cast<double>(in.s));
  const double core = std::sqrt((rs / in.alpha) * in.tau + in.residual_l1 / in.alpha);
  switch (which) {
    case BoundKind::grad_l2:
    case BoundKind::image_thm2:
      return core;
    case BoundKind::grad_l1:
      return rs * core + in.residual_l1;
    case BoundKind::image_thm1: {
      const double n = static_cast<double>(in.n_side);
      const double lg = std::log2(n * n / static_cast<double>(in.s));
      return lg * core + lg * in.residual_l1 / rs + in.tau;
    }
  }
  throw std::invalid_argument("error_bound: unknown bound");
}

double tv_error_bound(const GuaranteeInputs& in) {
  in.validate();
  return in.residual_l1 / std::sqrt(static_cast<double>(in.s)) + in.tau;
}

BoundComparison compare_bounds(const GuaranteeInputs& in) {
  BoundComparison c;
  c.enhanced = error_bound(in, BoundKind::image_thm2);
  c.tv = tv_error_bound(in);
  c.tie = c.enhanced == c.tv;
  c.enhanced_tighter = c.enhanced <= c.tv;
  if (c.tv > 0.0) c.ratio = c.enhanced / c.tv;
  else c.ratio = c.enhanced == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return c;
}

bool linear_term_removable(double grad_error_l2, double residual_l1, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("linear_term_removable: alpha must be positive");
  return grad_error_l2 >= std::sqrt(2.0 * residual_l1 / alpha);
}

bool LemmaReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const LemmaResult& r) { return r.passed; });
}

namespace {

constexpr std::size_t kExhaustiveMax = 64;

Image random_gaussian_image(std::size_t n, Rng& rng, bool complex_valued) {
  Image img(n);
  for (auto& z : img.data()) z = complex_valued ? Complex(rng.normal(), rng.normal()) : Complex(rng.normal(), 0.0);
  return img;
}

// Sum of a few random axis-aligned rectangles with random heights.
Image random_blocks_image(std::size_t n, Rng& rng) {
  Image img(n);
  const int count = 1 + static_cast<int>(rng.uniform() * 6.0);
  for (int b = 0; b < count; ++b) {
    auto pick = [&] { return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)); };
    std::size_t r0 = pick(), r1 = pick(), c0 = pick(), c1 = pick();
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    const double h = rng.normal();
    for (std::size_t j = r0; j <= r1; ++j)
      for (std::size_t k = c0; k <= c1; ++k) img(j, k) += h;
  }
  return img;
}

void remove_mean(Image& img) {
  Complex mean{};
  for (const auto& z : img.data()) mean += z;
  mean /= static_cast<double>(img.size());
  for (auto& z : img.data()) z -= mean;
}

Image random_mean_zero(std::size_t n, Rng& rng, int t) {
  Image img = (t % 2 == 0) ? random_gaussian_image(n, rng, t % 4 == 0) : random_blocks_image(n, rng);
  remove_mean(img);
  return img;
}

LemmaResult check_adjacent_pairs(const HaarTransform& haar) {
  const std::size_t n = haar.side();
  const double tol = 1e-12;
  // counts[j*n + k]: wavelets not constant on (j,k),(j,k+1) resp. (j,k),(j+1,k)
  std::vector<int> horiz(n * n, 0), vert(n * n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r == 0 && c == 0) continue;
      const Image h = haar.basis_image(r, c);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          if (k + 1 < n && std::abs(h(j, k + 1) - h(j, k)) > tol) ++horiz[j * n + k];
          if (j + 1 < n && std::abs(h(j + 1, k) - h(j, k)) > tol) ++vert[j * n + k];
        }
    }
  const int worst = std::max(*std::max_element(horiz.begin(), horiz.end()),
                             *std::max_element(vert.begin(), vert.end()));
  const double limit = 6.0 * std::log2(static_cast<double>(n));
  return {"adjacent_pair_wavelets", worst <= limit, static_cast<double>(worst), limit,
          "max wavelets non-constant on an adjacent pair"};
}

LemmaResult check_wavelet_tv(const HaarTransform& haar) {
  const std::size_t n = haar.side();
  double worst = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r == 0 && c == 0) continue;
      worst = std::max(worst, tv_aniso(haar.basis_image(r, c)));
    }
  return {"wavelet_gradient_l1", worst <= 8.0 + 1e-9, worst, 8.0, "max ||grad h||_1 over wavelets"};
}

std::vector<LemmaResult> check_local_coherence(const HaarTransform& haar) {
  const std::size_t n = haar.side();
  const Dft2& dft = *Dft2::for_size(n);
  std::vector<double> mu(n * n, 0.0);
  std::vector<Complex> buf(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const Image h = haar.basis_image(r, c);
      std::copy(h.data().begin(), h.data().end(), buf.begin());
      dft.forward(buf);
      for (std::size_t i = 0; i < n * n; ++i) mu[i] = std::max(mu[i], std::abs(buf[i]));
    }
  const double c18 = 18.0 * std::numbers::pi;
  double worst_excess = -std::numeric_limits<double>::infinity();
  double kappa_prime_sq = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const long k1 = index_frequency(a, n), k2 = index_frequency(b, n);
      const double m = static_cast<double>(std::max(std::abs(k1), std::abs(k2)));
      const double kappa = m == 0.0 ? 1.0 : std::min(1.0, c18 / m);
      worst_excess = std::max(worst_excess, mu[a * n + b] - kappa);
      const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      const double kp = r == 0.0 ? 1.0 : std::min(1.0, c18 * std::numbers::sqrt2 / r);
      kappa_prime_sq += kp * kp;
    }
  const double kp_norm = std::sqrt(kappa_prime_sq);
  const double kp_limit = std::sqrt(17200.0 + 502.0 * std::log2(static_cast<double>(n)));
  return {
      {"local_coherence", worst_excess <= 1e-12, worst_excess, 0.0,
       "max over frequencies of mu_loc - min(1, 18 pi / max|k|)"},
      {"kappa_prime_norm", kp_norm <= kp_limit, kp_norm, kp_limit, "||kappa'||_2"},
  };
}

// Smallest C with |c_(k)| <= C ||grad X||_1 / k for the non-constant
// coefficients sorted by magnitude (the constant coefficient comes first in
// the guarantee's ordering and vanishes for mean-zero images).
double fit_decay_constant(const HaarTransform& haar, const Image& img) {
  const Image coeffs = haar.forward(img);
  std::vector<double> mags;
  mags.reserve(coeffs.size());
  for (std::size_t i = 1; i < coeffs.size(); ++i) mags.push_back(std::abs(coeffs.data()[i]));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const double tv = tv_aniso(img);
  if (tv == 0.0) return 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) c = std::max(c, static_cast<double>(k + 1) * mags[k] / tv);
  return c;
}

}  // namespace

double gradient_operator_norm_sq(std::size_t n_side, int steps, std::uint64_t seed) {
  Rng rng(seed);
  Image v = random_gaussian_image(n_side, rng, false);
  double lambda = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (auto& z : v.data()) z /= nv;
    Image w = gradient_normal(v);
    lambda = inner(w, v).real();
    v = std::move(w);
  }
  return lambda;
}

LemmaReport check_lemmas(std::size_t n_side, int trials, std::uint64_t seed) {
  if (!is_power_of_two(n_side) || n_side < 2) {
    throw std::invalid_argument("check_lemmas: N must be a power of two >= 2, got " + std::to_string(n_side));
  }
  if (trials < 0) throw std::invalid_argument("check_lemmas: trials must be >= 0");
  LemmaReport report;
  report.n_side = n_side;
  const HaarTransform haar(n_side);
  Rng rng(seed);

  if (n_side <= kExhaustiveMax) {
    report.results.push_back(check_adjacent_pairs(haar));
    report.results.push_back(check_wavelet_tv(haar));
    for (auto& r : check_local_coherence(haar)) report.results.push_back(std::move(r));
  }

  {
    const double top = gradient_operator_norm_sq(n_side, 500, seed ^ 0x9e3779b97f4a7c15ULL);
    report.results.push_back({"gradient_norm_sq", top <= 8.0 + 1e-6, top, 8.0, "power iteration, 500 steps"});
  }

  double worst_adj = 0.0, worst_haar = 0.0, worst_dft = 0.0, worst_sob = 0.0, worst_equiv = 0.0;
  bool padding_ok = true;
  double decay = 0.0;
  const Dft2& dft = *Dft2::for_size(n_side);
  for (int t = 0; t < trials; ++t) {
    Image x = random_mean_zero(n_side, rng, t);

    // ||X||_2 <= ||grad X||_1 for mean-zero X
    const GradientField g = gradient(x);
    worst_sob = std::max(worst_sob, norm2(x) / norm1(g));

    // tv_iso <= tv_aniso <= sqrt(2) tv_iso on unconstrained random images
    const Image any = random_gaussian_image(n_side, rng, true);
    const double iso = tv_iso(any), aniso = tv_aniso(any);
    worst_equiv = std::max({worst_equiv, (iso - aniso) / aniso, (aniso - std::numbers::sqrt2 * iso) / aniso});

    GradientField h;
    h.gx = random_gaussian_image(n_side, rng, true);
    h.gy = random_gaussian_image(n_side, rng, true);
    const Complex lhs = inner(gradient(any), h);
    const Complex rhs = inner(any, gradient_adjoint(h));
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / (norm2(any) * norm2(h)));

    const std::size_t last = n_side - 1;
    for (std::size_t i = 0; i < n_side; ++i)
      if (g.gx(last, i) != Complex{} || g.gy(i, last) != Complex{}) padding_ok = false;

    worst_haar = std::max(worst_haar, norm2(haar.inverse(haar.forward(any)) - any) / norm2(any));
    std::vector<Complex> buf(any.data().begin(), any.data().end());
    dft.forward(buf);
    dft.inverse(buf);
    double err = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) err += std::norm(buf[i] - any.data()[i]);
    worst_dft = std::max(worst_dft, std::sqrt(err) / norm2(any));

    decay = std::max(decay, fit_decay_constant(haar, x));
  }
  if (trials > 0) {
    const std::string tr = std::to_string(trials) + " random images";
    report.results.push_back({"sobolev", worst_sob <= 1.0, worst_sob, 1.0, "max ||X||_2 / ||grad X||_1, " + tr});
    report.results.push_back({"tv_equivalence", worst_equiv <= 1e-12, worst_equiv, 1e-12,
                              "relative violation of tv_iso <= tv_aniso <= sqrt(2) tv_iso, " + tr});
    report.results.push_back({"gradient_adjoint", worst_adj <= 1e-12, worst_adj, 1e-12,
                              "|<grad X, G> - <X, grad^T G>| / (||X|| ||G||), " + tr});
    report.results.push_back(
        {"gradient_padding", padding_ok, padding_ok ? 0.0 : 1.0, 0.0, "last row of gx, last column of gy"});
    report.results.push_back({"haar_roundtrip", worst_haar <= 1e-12, worst_haar, 1e-12, "relative error, " + tr});
    report.results.push_back({"dft_roundtrip", worst_dft <= 1e-12, worst_dft, 1e-12, "relative error, " + tr});
    report.fitted_decay_constant = decay;
    report.results.push_back({"haar_decay_constant", std::isfinite(decay), decay,
                              std::numeric_limits<double>::infinity(),
                              "fitted C in |c_(k)| <= C ||grad X||_1 / k (reported, not bounded)"});
  }
  return report;
}

void write_report_text(std::ostream& os, const LemmaReport& report) {
  os << "N = " << report.n_side << '\n';
  for (const auto& r : report.results) {
    os << "  [" << (r.passed ? "PASS" : "FAIL") << "] " << r.name << ": " << r.value;
    if (std::isfinite(r.limit)) os << " (limit " << r.limit << ")";
    os << "  " << r.detail << '\n';
  }
  os << "  fitted Haar decay constant: " << report.fitted_decay_constant << '\n';
}

void write_report_csv(std::ostream& os, const std::vector<LemmaReport>& reports) {
  os << "n,lemma,passed,value,limit,margin\n";
  const auto old = os.precision(17);
  for (const auto& rep : reports)
    for (const auto& r : rep.results)
      os << rep.n_side << ',' << r.name << ',' << (r.passed ? 1 : 0) << ',' << r.value << ',' << r.limit << ','
         << r.margin() << '\n';
  os.precision(old);
}

}  // namespace etv
