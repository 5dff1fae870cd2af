#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "etv/config.hpp"
#include "etv/image.hpp"
#include "etv/measurement.hpp"
#include "etv/solvers.hpp"
#include "etv/theory.hpp"

namespace etv {

/// Independent seed for stream `stream` of trial `trial` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t stream);

/// Ground-truth image for a config (generator or graymap file).
Image load_source(const ImageSpec& spec);

/// Measurement setup for one trial: operator with its constraint radius and
/// the folded (rho o b) measurements the solvers take.
struct Problem {
  Image truth;
  MeasurementOperator op;
  std::vector<Complex> y;
  std::uint64_t mask_seed = 0;
  std::uint64_t noise_seed = 0;
};

FrequencyMask build_mask(const ExperimentConfig& cfg, int trial, std::vector<double>* weights = nullptr);
Problem build_problem(const ExperimentConfig& cfg, const Image& truth, int trial);

struct TrialResult {
  int trial = 0;
  ModelKind model = ModelKind::enhanced_tv;
  MaskKind mask_kind = MaskKind::radial;
  double rate = 0.0;
  std::size_t rows = 0;
  double noise_std = 0.0;
  std::uint64_t mask_seed = 0;
  std::uint64_t noise_seed = 0;
  ReconstructionReport report;
};

/// measure -> noise -> solve -> metrics for every trial. When `out_dir` is
/// non-empty, writes results.csv, recon_<t>.pgm, mask_<t>.txt and
/// trace_<t>.csv there. Trials run on up to `threads` threads; results are
/// ordered by trial index.
std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir = "",
                                        int threads = 1);

/// Columns: model,mask_kind,rate,std,relative_error,ssim,iterations,wall_time,alpha_check
/// followed by trial,mask_seed,noise_seed,rows,inner_iterations,residual,radius,
/// imaginary_fraction,alpha_bound,sparsity. Numbers use 17 significant digits.
void write_results_csv(std::ostream& os, const std::vector<TrialResult>& results);

struct PhaseResult {
  std::vector<double> alphas;
  std::vector<std::size_t> lines;
  std::vector<double> rates;  // sampling rate of the first mask for each line count
  /// success[a][l]: fraction of trials with relative error below threshold.
  /// Empty when trials = 0.
  std::vector<std::vector<double>> success;
  /// Relative error of every run, [a][l][trial].
  std::vector<std::vector<std::vector<double>>> errors;
};

/// Success-rate sweep over cfg.phase.alphas x cfg.phase.lines radial masks.
/// Trial t of line count L uses a radial mask with a random angle offset
/// drawn from derive_seed(seed, t, L), shared across alphas. Writes
/// phase.csv, phase_errors.csv and phase.pgm when out_dir is non-empty.
PhaseResult phase_transition(const ExperimentConfig& cfg, const std::string& out_dir = "", int threads = 1);

/// check_lemmas at each N; writes theory_report.txt and theory.csv when
/// out_dir is non-empty. Throws std::invalid_argument for non-dyadic N.
std::vector<LemmaReport> verify_theory(const std::vector<std::size_t>& sizes, int trials, std::uint64_t seed,
                                       const std::string& out_dir = "");

/// Pixels of `truth` degraded by additive real Gaussian noise, unclamped.
Image add_image_noise(const Image& truth, double std_dev, std::uint64_t seed);

}  // namespace etv
