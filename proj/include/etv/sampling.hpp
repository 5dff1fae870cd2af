#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace etv {

/// Signed 2-D frequency with components in {-N/2+1, ..., N/2}.
struct Frequency {
  int k1;
  int k2;

  auto operator<=>(const Frequency&) const = default;
};

enum class MaskKind { radial, variable_density, full, custom };

std::string_view to_string(MaskKind kind);
MaskKind parse_mask_kind(std::string_view name);

/// Ordered list of sampled frequencies. Repeats are allowed (i.i.d. draws)
/// and each one is a separate measurement row.
struct FrequencyMask {
  std::size_t n_side = 0;
  MaskKind kind = MaskKind::custom;
  std::uint64_t seed = 0;
  std::vector<Frequency> freqs;

  std::size_t size() const noexcept { return freqs.size(); }
  /// Fraction of the N^2 grid covered by distinct frequencies.
  double sampling_rate() const;
  /// Throws std::invalid_argument if empty or out of range.
  void validate() const;
};

bool frequency_in_range(Frequency f, std::size_t n_side);

/// Every frequency of the grid, in storage order.
FrequencyMask full_mask(std::size_t n_side);

/// `n_lines` lines through the zero frequency at angles
/// offset + i*pi/n_lines. Each line is sampled at spacing 1/2 for radii up to
/// N/2, rounded to the nearest integer frequency and deduplicated. Output is
/// sorted, so it depends only on the arguments.
FrequencyMask radial_mask(std::size_t n_side, std::size_t n_lines, double angle_offset = 0.0);

/// Inverse-square density eta(k1, k2) = C_N min(cap, 1 / (k1^2 + k2^2)) with
/// eta(0, 0) = C_N cap, normalised over the grid.
class VariableDensity {
 public:
  VariableDensity(std::size_t n_side, double cap);

  double operator()(Frequency f) const;
  double normaliser() const noexcept { return c_n_; }
  std::size_t side() const noexcept { return n_; }
  double cap() const noexcept { return cap_; }

  /// Grid values in row-major order over k1, k2 = -N/2+1 .. N/2.
  const std::vector<double>& table() const noexcept { return table_; }

 private:
  std::size_t n_;
  double cap_;
  double c_n_;
  std::vector<double> table_;
};

struct WeightedMask {
  FrequencyMask mask;
  std::vector<double> weights;  // rho_j = eta(omega_j)^(-1/2)
};

/// m i.i.d. draws (with replacement) from the variable density; inverse-CDF
/// sampling on the row-major table using Rng(seed).
WeightedMask variable_density_mask(std::size_t n_side, std::size_t m, double cap,
                                   std::uint64_t seed);

/// Plain-text mask file: header "N m kind seed" then m lines "k1 k2 [rho]".
/// Weights are written in shortest round-trip form, so write(read(f)) == f.
void write_mask(std::ostream& os, const FrequencyMask& mask,
                const std::vector<double>* weights = nullptr);
void write_mask_file(const std::string& path, const FrequencyMask& mask,
                     const std::vector<double>* weights = nullptr);

struct MaskFileContents {
  FrequencyMask mask;
  std::optional<std::vector<double>> weights;
};

MaskFileContents read_mask(std::istream& is);
MaskFileContents read_mask_file(const std::string& path);

}  // namespace etv
