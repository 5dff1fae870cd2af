#include "etv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "etv/haar.hpp"
#include "etv/imaging.hpp"
#include "etv/metrics.hpp"
#include "etv/pgm.hpp"
#include "etv/phantom.hpp"
#include "etv/random.hpp"

namespace etv {

namespace fs = std::filesystem;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (2 * trial + 1) + 0xbf58476d1ce4e5b9ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kMaskStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.precision(17);
  return os;
}

}  // namespace

Image load_source(const ImageSpec& spec) {
  if (spec.source == "phantom") return shepp_logan(spec.size, PhantomVariant::standard);
  if (spec.source == "phantom_modified") return shepp_logan(spec.size, PhantomVariant::modified);
  if (spec.source == "circle" || spec.source == "shapes" || spec.source == "strip") {
    return synthetic_image(parse_synthetic_kind(spec.source), spec.size);
  }
  return load_image(spec.source);
}

FrequencyMask build_mask(const ExperimentConfig& cfg, int trial, std::vector<double>* weights) {
  const std::size_t n = cfg.image.size;
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), kMaskStream);
  if (weights) weights->clear();
  switch (cfg.mask.kind) {
    case MaskKind::full:
      return full_mask(n);
    case MaskKind::radial: {
      double offset = 0.0;
      if (cfg.mask.angle_offset) {
        offset = *cfg.mask.angle_offset;
      } else {
        Rng rng(seed);
        offset = rng.uniform() * std::numbers::pi / static_cast<double>(cfg.mask.lines);
      }
      auto mask = radial_mask(n, cfg.mask.lines, offset);
      mask.seed = cfg.mask.angle_offset ? 0 : seed;
      return mask;
    }
    case MaskKind::variable_density: {
      const std::size_t m =
          cfg.mask.samples > 0
              ? cfg.mask.samples
              : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.mask.rate * double(n * n))));
      auto wm = variable_density_mask(n, m, cfg.mask.cap, seed);
      if (weights) *weights = std::move(wm.weights);
      return wm.mask;
    }
    case MaskKind::custom: {
      auto contents = read_mask_file(cfg.mask.path);
      if (contents.mask.n_side != n) {
        throw ConfigError("mask file " + cfg.mask.path + " is for N = " + std::to_string(contents.mask.n_side) +
                          ", image is " + std::to_string(n));
      }
      if (weights && contents.weights) *weights = std::move(*contents.weights);
      return contents.mask;
    }
  }
  throw ConfigError("unsupported mask kind");
}

Problem build_problem(const ExperimentConfig& cfg, const Image& truth, int trial) {
  std::vector<double> rho;
  FrequencyMask mask = build_mask(cfg, trial, &rho);
  const std::uint64_t noise_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), kNoiseStream);
  const double std_dev = cfg.noise.std_dev;

  // The operator is built once unweighted to take clean measurements; the
  // radius only matters to the solver.
  auto op = rho.empty() ? MeasurementOperator::unweighted(mask) : MeasurementOperator::weighted(mask, rho);
  std::vector<Complex> b;
  {
    // measure() applies rho; clean data b is the plain subsampled spectrum.
    const auto plain = MeasurementOperator::unweighted(mask);
    b = plain.measure(truth);
  }
  if (std_dev > 0.0) b = add_noise(b, std_dev, noise_seed);

  double radius = 0.0;
  if (cfg.noise.radius) {
    radius = *cfg.noise.radius;
  } else if (rho.empty()) {
    radius = cfg.noise.radius_scale * std_dev * std::sqrt(static_cast<double>(mask.size()));
  } else {
    double sq = 0.0;
    for (double r : rho) sq += r * r;
    radius = cfg.noise.radius_scale * std_dev * std::sqrt(sq);
  }
  op = op.with_radius(radius);
  Problem p{truth, std::move(op), {}, mask.seed, std_dev > 0.0 ? noise_seed : 0};
  p.y = fold_weights(p.op, b);
  return p;
}

Image add_image_noise(const Image& truth, double std_dev, std::uint64_t seed) {
  Image out = truth;
  if (std_dev == 0.0) return out;
  Rng rng(seed);
  for (auto& z : out.data()) z += std_dev * rng.normal();
  return out;
}

namespace {

TrialResult run_trial(const ExperimentConfig& cfg, const Image& truth, int trial) {
  TrialResult r;
  r.trial = trial;
  r.model = cfg.model;
  r.noise_std = cfg.noise.std_dev;

  if (cfg.model == ModelKind::denoise) {
    r.noise_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), kNoiseStream);
    const Image noisy = add_image_noise(truth, cfg.noise.std_dev, r.noise_seed);
    const auto t0 = std::chrono::steady_clock::now();
    r.report.image = denoise_enhanced_tv(noisy, cfg.denoise);
    r.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.report.dca_iterations = cfg.denoise.max_dca;
    r.report.inner_iterations = static_cast<long>(cfg.denoise.max_dca) * cfg.denoise.max_breg;
    r.report.relative_error = relative_error(truth, r.report.image);
    r.report.ssim = ssim(truth, r.report.image);
    r.report.imaginary_fraction = imaginary_fraction(r.report.image);
    r.mask_kind = MaskKind::full;
    r.rate = 1.0;
    return r;
  }

  Problem p = build_problem(cfg, truth, trial);
  r.mask_kind = p.op.mask().kind;
  r.rate = p.op.mask().sampling_rate();
  r.rows = p.op.rows();
  r.mask_seed = p.mask_seed;
  r.noise_seed = p.noise_seed;
  switch (cfg.model) {
    case ModelKind::enhanced_tv: r.report = solve_enhanced_tv(p.op, p.y, cfg.solver, &truth); break;
    case ModelKind::tv: r.report = solve_tv_bregman(p.op, p.y, cfg.solver, &truth); break;
    case ModelKind::tva_tvi: r.report = solve_tva_minus_tvi(p.op, p.y, cfg.solver, &truth); break;
    case ModelKind::denoise: break;
  }
  if (cfg.model == ModelKind::enhanced_tv && cfg.solver.alpha > 0.0) {
    const std::size_t s = gradient_sparsity(gradient(r.report.image), cfg.sparsity_tol);
    r.report.alpha_check = posterior_alpha_check(r.report.image, cfg.solver.alpha, std::max<std::size_t>(s, 1),
                                                 cfg.delta, truth.side(), cfg.solver.tol_dca);
  }
  return r;
}

void write_trial_artifacts(const fs::path& dir, const ExperimentConfig& cfg, const Image& truth,
                           const TrialResult& r) {
  const std::string t = std::to_string(r.trial);
  save_image(r.report.image, (dir / ("recon_" + t + ".pgm")).string());
  if (cfg.model == ModelKind::denoise) {
    save_image(add_image_noise(truth, cfg.noise.std_dev, r.noise_seed), (dir / ("noisy_" + t + ".pgm")).string());
    return;
  }
  std::vector<double> rho;
  const FrequencyMask mask = build_mask(cfg, r.trial, &rho);
  write_mask_file((dir / ("mask_" + t + ".txt")).string(), mask, rho.empty() ? nullptr : &rho);
  auto os = open_out(dir / ("trace_" + t + ".csv"));
  os << "iteration,objective\n";
  for (std::size_t i = 0; i < r.report.objective_trace.size(); ++i) {
    os << (i + 1) << ',' << r.report.objective_trace[i] << '\n';
  }
}

}  // namespace

std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  cfg.validate();
  const Image truth = load_source(cfg.image);
  if (truth.side() != cfg.image.size) {
    throw ConfigError("image " + cfg.image.source + " is " + std::to_string(truth.side()) +
                      " pixels wide but image.size = " + std::to_string(cfg.image.size));
  }
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  parallel_for(results.size(), threads, [&](std::size_t i) {
    try {
      results[i] = run_trial(cfg, truth, static_cast<int>(i));
    } catch (const SolverAbort& e) {
      throw SolverAbort("trial " + std::to_string(i) + " (model " + std::string(to_string(cfg.model)) + ", image " +
                        cfg.image.source + "): " + e.what());
    }
  });
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    for (const auto& r : results) write_trial_artifacts(out_dir, cfg, truth, r);
    save_image(truth, (fs::path(out_dir) / "truth.pgm").string());
    auto os = open_out(fs::path(out_dir) / "results.csv");
    write_results_csv(os, results);
  }
  return results;
}

void write_results_csv(std::ostream& os, const std::vector<TrialResult>& results) {
  const auto old = os.precision(17);
  os << "model,mask_kind,rate,std,relative_error,ssim,iterations,wall_time,alpha_check,"
        "trial,mask_seed,noise_seed,rows,inner_iterations,residual,radius,imaginary_fraction,alpha_bound,"
        "sparsity\n";
  for (const auto& r : results) {
    const auto& rep = r.report;
    std::string check = "n/a";
    double bound = 0.0;
    std::size_t sparsity = 0;
    if (rep.alpha_check) {
      check = rep.alpha_check->satisfied ? "pass" : "fail";
      bound = rep.alpha_check->bound;
      sparsity = rep.alpha_check->sparsity;
    }
    os << to_string(r.model) << ',' << to_string(r.mask_kind) << ',' << r.rate << ',' << r.noise_std << ','
       << rep.relative_error.value_or(NAN) << ',' << rep.ssim.value_or(NAN) << ',' << rep.dca_iterations << ','
       << rep.wall_time << ',' << check << ',' << r.trial << ',' << r.mask_seed << ',' << r.noise_seed << ','
       << r.rows << ',' << rep.inner_iterations << ',' << rep.residual_norm << ',' << rep.radius << ','
       << rep.imaginary_fraction.value_or(NAN) << ',' << bound << ',' << sparsity << '\n';
  }
  os.precision(old);
}

PhaseResult phase_transition(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  cfg.validate();
  if (cfg.phase.alphas.empty() || cfg.phase.lines.empty()) throw ConfigError("phase grids must be nonempty");
  PhaseResult res;
  res.alphas = cfg.phase.alphas;
  res.lines = cfg.phase.lines;
  const Image truth = load_source(cfg.image);
  const std::size_t n = truth.side();
  const auto trials = static_cast<std::size_t>(cfg.phase.trials);
  const std::size_t na = res.alphas.size(), nl = res.lines.size();

  auto mask_for = [&](std::size_t l, std::size_t t) {
    const std::size_t lines = res.lines[l];
    Rng rng(derive_seed(cfg.seed, t, 100 + lines));
    const double offset = rng.uniform() * std::numbers::pi / static_cast<double>(lines);
    return radial_mask(n, lines, offset);
  };
  for (std::size_t l = 0; l < nl; ++l) res.rates.push_back(mask_for(l, 0).sampling_rate());

  if (trials > 0) {
    res.errors.assign(na, std::vector<std::vector<double>>(nl, std::vector<double>(trials, 0.0)));
    parallel_for(na * nl * trials, threads, [&](std::size_t cell) {
      const std::size_t t = cell % trials, l = (cell / trials) % nl, a = cell / (trials * nl);
      const auto op = MeasurementOperator::unweighted(mask_for(l, t));
      const auto y = op.measure(truth);
      SolverConfig sc = cfg.solver;
      sc.alpha = res.alphas[a];
      const auto rep = cfg.model == ModelKind::tv ? solve_tv_bregman(op, y, sc, &truth)
                                                  : solve_enhanced_tv(op, y, sc, &truth);
      res.errors[a][l][t] = *rep.relative_error;
    });
    res.success.assign(na, std::vector<double>(nl, 0.0));
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t l = 0; l < nl; ++l) {
        const auto& e = res.errors[a][l];
        const auto ok = std::count_if(e.begin(), e.end(), [&](double v) { return v < cfg.phase.success_threshold; });
        res.success[a][l] = static_cast<double>(ok) / static_cast<double>(trials);
      }
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    auto os = open_out(fs::path(out_dir) / "phase.csv");
    os << "alpha";
    for (auto l : res.lines) os << ",lines_" << l;
    os << '\n';
    for (std::size_t a = 0; a < res.success.size(); ++a) {
      os << res.alphas[a];
      for (double v : res.success[a]) os << ',' << v;
      os << '\n';
    }
    auto es = open_out(fs::path(out_dir) / "phase_errors.csv");
    es << "alpha,lines,rate,trial,relative_error\n";
    for (std::size_t a = 0; a < res.errors.size(); ++a)
      for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t t = 0; t < trials; ++t)
          es << res.alphas[a] << ',' << res.lines[l] << ',' << res.rates[l] << ',' << t << ','
             << res.errors[a][l][t] << '\n';
    if (!res.success.empty()) {
      // 8 x 8 pixel cells; rows follow alpha (top = first), columns line counts
      constexpr std::size_t cell = 8;
      const std::size_t side = std::max(na, nl) * cell;
      Image map(side);
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t l = 0; l < nl; ++l)
          for (std::size_t j = 0; j < cell; ++j)
            for (std::size_t k = 0; k < cell; ++k) map(a * cell + j, l * cell + k) = res.success[a][l];
      save_image(map, (fs::path(out_dir) / "phase.pgm").string());
    }
  }
  return res;
}

std::vector<LemmaReport> verify_theory(const std::vector<std::size_t>& sizes, int trials, std::uint64_t seed,
                                       const std::string& out_dir) {
  for (auto n : sizes) {
    if (!is_power_of_two(n) || n < 2) {
      throw std::invalid_argument("verify: N = " + std::to_string(n) + " is not a power of two");
    }
  }
  std::vector<LemmaReport> reports;
  for (auto n : sizes) reports.push_back(check_lemmas(n, trials, derive_seed(seed, n, 7)));
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    auto txt = open_out(fs::path(out_dir) / "theory_report.txt");
    txt.precision(6);
    for (const auto& r : reports) write_report_text(txt, r);
    auto csv = open_out(fs::path(out_dir) / "theory.csv");
    write_report_csv(csv, reports);
  }
  return reports;
}

}  // namespace etv
