// etv: command line front end for the reconstruction experiments.
//
// Exit codes: 0 success, 1 solver abort, 2 configuration error,
// 3 verification failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "etv/config.hpp"
#include "etv/harness.hpp"
#include "etv/sampling.hpp"

namespace {

enum Exit { kOk = 0, kSolverAbort = 1, kConfigError = 2, kVerifyFailed = 3 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string model;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_model) {
  cmd->add_option("--config", c.config, "experiment config (INI)");
  cmd->add_option("--seed", c.seed, "override [experiment] seed");
  cmd->add_option("--out", c.out, "output directory (default: [experiment] out)");
  if (with_model) cmd->add_option("--model", c.model, "enhanced_tv | tv | tva_tvi | denoise");
  cmd->add_option("--threads", c.threads, "worker threads for independent trials")->check(CLI::PositiveNumber);
}

etv::ExperimentConfig resolve(const Common& c) {
  etv::ExperimentConfig cfg = c.config.empty() ? etv::parse_config("") : etv::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.model.empty()) {
    const auto model = etv::parse_model(c.model);
    if (model != cfg.model) {
      // Keep explicit file overrides out of it: a model switch resets to that
      // model's defaults, then alpha is carried over for enhanced TV.
      const double alpha = cfg.solver.alpha;
      cfg.model = model;
      cfg.solver = etv::default_solver(model, cfg.noise.std_dev > 0.0);
      if (model == etv::ModelKind::enhanced_tv) cfg.solver.alpha = alpha;
    }
  }
  if (!c.out.empty()) cfg.out_dir = c.out;
  cfg.validate();
  return cfg;
}

void print_results(const std::vector<etv::TrialResult>& results) {
  for (const auto& r : results) {
    std::cout << "trial " << r.trial << ": model " << etv::to_string(r.model) << ", rate " << r.rate;
    if (r.report.relative_error) std::cout << ", rel. error " << *r.report.relative_error;
    if (r.report.ssim) std::cout << ", SSIM " << *r.report.ssim;
    std::cout << ", " << r.report.wall_time << " s";
    if (r.report.alpha_check) {
      std::cout << ", alpha check " << (r.report.alpha_check->satisfied ? "pass" : "fail") << " (bound "
                << r.report.alpha_check->bound << ")";
    }
    std::cout << '\n';
    for (const auto& w : r.report.warnings) std::cout << "  warning: " << w << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enhanced total variation reconstruction from subsampled Fourier data"};
  app.require_subcommand(1);

  Common rec, den, pha, msk;
  auto* reconstruct = app.add_subcommand("reconstruct", "solve one experiment config");
  add_common(reconstruct, rec, true);
  auto* denoise = app.add_subcommand("denoise", "run the denoising model on a noisy image");
  add_common(denoise, den, false);
  auto* phase = app.add_subcommand("phase", "success-rate sweep over alpha and radial line counts");
  add_common(phase, pha, true);
  auto* mask = app.add_subcommand("mask", "write the sampling mask of a config");
  add_common(mask, msk, false);

  auto* verify = app.add_subcommand("verify", "numerical checks of the Haar and gradient lemmas");
  std::vector<std::size_t> sizes{8, 16, 32};
  int verify_trials = 1000;
  std::uint64_t verify_seed = 1;
  std::string verify_out;
  verify->add_option("--sizes", sizes, "image sides (powers of two)")->delimiter(',');
  verify->add_option("--trials", verify_trials, "random images per statistical check");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--out", verify_out, "directory for theory_report.txt and theory.csv");
  std::string unused_config;
  int unused_threads = 1;
  verify->add_option("--config", unused_config, "accepted for symmetry; not used");
  verify->add_option("--threads", unused_threads, "accepted for symmetry; not used");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reconstruct) {
      const auto cfg = resolve(rec);
      if (cfg.model == etv::ModelKind::denoise) {
        std::cerr << "use the denoise subcommand for model = denoise\n";
        return kConfigError;
      }
      print_results(etv::run_experiment(cfg, cfg.out_dir, rec.threads));
      std::cout << "wrote " << (std::filesystem::path(cfg.out_dir) / "results.csv").string() << '\n';
    } else if (*denoise) {
      auto cfg = resolve(den);
      cfg.model = etv::ModelKind::denoise;
      cfg.validate();
      print_results(etv::run_experiment(cfg, cfg.out_dir, den.threads));
    } else if (*phase) {
      const auto cfg = resolve(pha);
      const auto res = etv::phase_transition(cfg, cfg.out_dir, pha.threads);
      std::cout << "alpha";
      for (auto l : res.lines) std::cout << '\t' << l;
      std::cout << '\n';
      for (std::size_t a = 0; a < res.success.size(); ++a) {
        std::cout << res.alphas[a];
        for (double v : res.success[a]) std::cout << '\t' << v;
        std::cout << '\n';
      }
    } else if (*mask) {
      const auto cfg = resolve(msk);
      std::vector<double> rho;
      const auto m = etv::build_mask(cfg, 0, &rho);
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = (std::filesystem::path(cfg.out_dir) / "mask.txt").string();
      etv::write_mask_file(path, m, rho.empty() ? nullptr : &rho);
      std::cout << "wrote " << path << " (" << m.size() << " rows, rate " << m.sampling_rate() << ")\n";
    } else if (*verify) {
      const auto reports = etv::verify_theory(sizes, verify_trials, verify_seed, verify_out);
      bool ok = true;
      for (const auto& r : reports) {
        etv::write_report_text(std::cout, r);
        ok = ok && r.all_passed();
      }
      if (!ok) return kVerifyFailed;
    }
  } catch (const etv::SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kSolverAbort;
  } catch (const etv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
