#include "etv/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "etv/random.hpp"

namespace etv {

std::string_view to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::radial: return "radial";
    case MaskKind::variable_density: return "variable_density";
    case MaskKind::full: return "full";
    case MaskKind::custom: return "custom";
  }
  return "custom";
}

MaskKind parse_mask_kind(std::string_view name) {
  if (name == "radial") return MaskKind::radial;
  if (name == "variable_density") return MaskKind::variable_density;
  if (name == "full") return MaskKind::full;
  if (name == "custom") return MaskKind::custom;
  throw std::invalid_argument("unknown mask kind '" + std::string(name) + "'");
}

bool frequency_in_range(Frequency f, std::size_t n_side) {
  const int lo = -static_cast<int>(n_side) / 2 + 1;
  const int hi = static_cast<int>(n_side) / 2;
  return f.k1 >= lo && f.k1 <= hi && f.k2 >= lo && f.k2 <= hi;
}

double FrequencyMask::sampling_rate() const {
  const std::set<Frequency> distinct(freqs.begin(), freqs.end());
  return static_cast<double>(distinct.size()) / static_cast<double>(n_side * n_side);
}

void FrequencyMask::validate() const {
  if (n_side < 2) throw std::invalid_argument("mask: N must be at least 2");
  if (freqs.empty()) throw std::invalid_argument("mask: no frequencies");
  for (const auto& f : freqs) {
    if (!frequency_in_range(f, n_side)) {
      throw std::invalid_argument("mask: frequency (" + std::to_string(f.k1) + ", " +
                                  std::to_string(f.k2) + ") out of range");
    }
  }
}

FrequencyMask full_mask(std::size_t n_side) {
  FrequencyMask mask{n_side, MaskKind::full, 0, {}};
  mask.freqs.reserve(n_side * n_side);
  const int n = static_cast<int>(n_side);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k1 = (i <= n / 2) ? i : i - n;
      const int k2 = (j <= n / 2) ? j : j - n;
      mask.freqs.push_back({k1, k2});
    }
  }
  return mask;
}

FrequencyMask radial_mask(std::size_t n_side, std::size_t n_lines, double angle_offset) {
  if (n_lines < 1) throw std::invalid_argument("radial_mask: need at least one line");
  if (n_side < 2) throw std::invalid_argument("radial_mask: N must be at least 2");
  std::set<Frequency> picked;
  for (std::size_t i = 0; i < n_lines; ++i) {
    const double theta =
        angle_offset + static_cast<double>(i) * std::numbers::pi / static_cast<double>(n_lines);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Half-unit steps over the diameter |t| <= N/2.
    const auto steps = static_cast<long>(n_side);
    for (long q = -steps; q <= steps; ++q) {
      const double t = 0.5 * static_cast<double>(q);
      const Frequency f{static_cast<int>(std::lround(t * c)), static_cast<int>(std::lround(t * s))};
      if (frequency_in_range(f, n_side)) picked.insert(f);
    }
  }
  return {n_side, MaskKind::radial, 0, {picked.begin(), picked.end()}};
}

VariableDensity::VariableDensity(std::size_t n_side, double cap)
    : n_(n_side), cap_(cap), c_n_(0.0) {
  if (!(cap > 0.0)) throw std::invalid_argument("variable density: cap must be positive");
  if (n_side < 2) throw std::invalid_argument("variable density: N must be at least 2");
  const int lo = -static_cast<int>(n_side) / 2 + 1;
  const int hi = static_cast<int>(n_side) / 2;
  table_.reserve(n_side * n_side);
  for (int k1 = lo; k1 <= hi; ++k1) {
    for (int k2 = lo; k2 <= hi; ++k2) {
      const int r2 = k1 * k1 + k2 * k2;
      table_.push_back(r2 == 0 ? cap : std::min(cap, 1.0 / r2));
    }
  }
  double total = 0.0;
  for (double v : table_) total += v;
  c_n_ = 1.0 / total;
  for (double& v : table_) v *= c_n_;
}

double VariableDensity::operator()(Frequency f) const {
  if (!frequency_in_range(f, n_)) throw std::invalid_argument("variable density: frequency out of range");
  const int lo = -static_cast<int>(n_) / 2 + 1;
  return table_[static_cast<std::size_t>(f.k1 - lo) * n_ + static_cast<std::size_t>(f.k2 - lo)];
}

WeightedMask variable_density_mask(std::size_t n_side, std::size_t m, double cap,
                                   std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("variable_density_mask: m must be positive");
  const VariableDensity eta(n_side, cap);
  const auto& table = eta.table();
  std::vector<double> cumulative(table.size());
  double running = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) cumulative[i] = (running += table[i]);

  Rng rng(seed);
  const int lo = -static_cast<int>(n_side) / 2 + 1;
  WeightedMask out{{n_side, MaskKind::variable_density, seed, {}}, {}};
  out.mask.freqs.reserve(m);
  out.weights.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    const Frequency f{lo + static_cast<int>(idx / n_side), lo + static_cast<int>(idx % n_side)};
    out.mask.freqs.push_back(f);
    out.weights.push_back(1.0 / std::sqrt(table[idx]));
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("mask file: bad number '" + token + "'");
  }
  return v;
}

}  // namespace

void write_mask(std::ostream& os, const FrequencyMask& mask, const std::vector<double>* weights) {
  if (weights && weights->size() != mask.size()) {
    throw std::invalid_argument("write_mask: weights length differs from mask length");
  }
  os << mask.n_side << ' ' << mask.size() << ' ' << to_string(mask.kind) << ' ' << mask.seed << '\n';
  for (std::size_t j = 0; j < mask.size(); ++j) {
    os << mask.freqs[j].k1 << ' ' << mask.freqs[j].k2;
    if (weights) os << ' ' << format_double((*weights)[j]);
    os << '\n';
  }
}

void write_mask_file(const std::string& path, const FrequencyMask& mask,
                     const std::vector<double>* weights) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open mask file for writing: " + path);
  write_mask(os, mask, weights);
}

MaskFileContents read_mask(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("mask file: missing header");
  std::istringstream header(line);
  std::size_t n = 0, m = 0;
  std::string kind;
  std::uint64_t seed = 0;
  if (!(header >> n >> m >> kind >> seed)) throw std::invalid_argument("mask file: malformed header");

  MaskFileContents out{{n, parse_mask_kind(kind), seed, {}}, std::nullopt};
  out.mask.freqs.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::getline(is, line)) throw std::invalid_argument("mask file: fewer rows than declared");
    std::istringstream row(line);
    Frequency f{};
    if (!(row >> f.k1 >> f.k2)) throw std::invalid_argument("mask file: malformed row " + std::to_string(j + 1));
    out.mask.freqs.push_back(f);
    std::string rho;
    const bool has_weight = static_cast<bool>(row >> rho);
    if (j == 0 && has_weight) out.weights.emplace();
    if (has_weight != out.weights.has_value()) {
      throw std::invalid_argument("mask file: weights must be given on every row or none");
    }
    if (has_weight) {
      const double w = parse_double(rho);
      if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("mask file: weights must be positive");
      out.weights->push_back(w);
    }
  }
  out.mask.validate();
  return out;
}

MaskFileContents read_mask_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open mask file: " + path);
  return read_mask(is);
}

}  // namespace etv
