#include "etv/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace etv {

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::enhanced_tv: return "enhanced_tv";
    case ModelKind::tv: return "tv";
    case ModelKind::tva_tvi: return "tva_tvi";
    case ModelKind::denoise: return "denoise";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  if (name == "enhanced_tv" || name == "etv" || name == "enhanced") return ModelKind::enhanced_tv;
  if (name == "tv") return ModelKind::tv;
  if (name == "tva_tvi" || name == "tva-tvi") return ModelKind::tva_tvi;
  if (name == "denoise") return ModelKind::denoise;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected enhanced_tv, tv, tva_tvi, denoise)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("bad value for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (double v : parse_number_list(text)) {
    if (v < 1.0 || v != std::floor(v)) throw ConfigError("bad entry in " + std::string(what) + " list");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;
using SolverSetter = std::function<void(SolverConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.trials", [](auto& c, auto v) { c.trials = parse_number<int>(v, "experiment.trials"); }},
      {"experiment.seed", [](auto& c, auto v) { c.seed = parse_number<std::uint64_t>(v, "experiment.seed"); }},
      {"experiment.out", [](auto& c, auto v) { c.out_dir = std::string(trim(v)); }},
      {"experiment.delta", [](auto& c, auto v) { c.delta = parse_number<double>(v, "experiment.delta"); }},
      {"experiment.sparsity_tol",
       [](auto& c, auto v) { c.sparsity_tol = parse_number<double>(v, "experiment.sparsity_tol"); }},
      {"image.source", [](auto& c, auto v) { c.image.source = std::string(trim(v)); }},
      {"image.size", [](auto& c, auto v) { c.image.size = parse_number<std::size_t>(v, "image.size"); }},
      {"mask.kind",
       [](auto& c, auto v) {
         try {
           c.mask.kind = parse_mask_kind(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       }},
      {"mask.lines", [](auto& c, auto v) { c.mask.lines = parse_number<std::size_t>(v, "mask.lines"); }},
      {"mask.angle_offset",
       [](auto& c, auto v) {
         if (trim(v) == "random") c.mask.angle_offset.reset();
         else c.mask.angle_offset = parse_number<double>(v, "mask.angle_offset");
       }},
      {"mask.samples", [](auto& c, auto v) { c.mask.samples = parse_number<std::size_t>(v, "mask.samples"); }},
      {"mask.rate", [](auto& c, auto v) { c.mask.rate = parse_number<double>(v, "mask.rate"); }},
      {"mask.cap", [](auto& c, auto v) { c.mask.cap = parse_number<double>(v, "mask.cap"); }},
      {"mask.path", [](auto& c, auto v) { c.mask.path = std::string(trim(v)); }},
      {"noise.std", [](auto& c, auto v) { c.noise.std_dev = parse_number<double>(v, "noise.std"); }},
      {"noise.radius_scale",
       [](auto& c, auto v) { c.noise.radius_scale = parse_number<double>(v, "noise.radius_scale"); }},
      {"noise.radius", [](auto& c, auto v) { c.noise.radius = parse_number<double>(v, "noise.radius"); }},
      {"model.name", [](auto& c, auto v) { c.model = parse_model(trim(v)); }},
      {"denoise.alpha", [](auto& c, auto v) { c.denoise.alpha = parse_number<double>(v, "denoise.alpha"); }},
      {"denoise.mu", [](auto& c, auto v) { c.denoise.mu = parse_number<double>(v, "denoise.mu"); }},
      {"denoise.beta", [](auto& c, auto v) { c.denoise.beta = parse_number<double>(v, "denoise.beta"); }},
      {"denoise.max_dca", [](auto& c, auto v) { c.denoise.max_dca = parse_number<int>(v, "denoise.max_dca"); }},
      {"denoise.max_breg",
       [](auto& c, auto v) { c.denoise.max_breg = parse_number<int>(v, "denoise.max_breg"); }},
      {"denoise.inner_solve",
       [](auto& c, auto v) {
         try {
           c.denoise.inner_solve = parse_inner_solve(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       }},
      {"phase.alphas", [](auto& c, auto v) { c.phase.alphas = parse_number_list(v); }},
      {"phase.lines", [](auto& c, auto v) { c.phase.lines = parse_count_list(v, "phase.lines"); }},
      {"phase.trials", [](auto& c, auto v) { c.phase.trials = parse_number<int>(v, "phase.trials"); }},
      {"phase.success_threshold",
       [](auto& c, auto v) { c.phase.success_threshold = parse_number<double>(v, "phase.success_threshold"); }},
  };
  return table;
}

const std::map<std::string, SolverSetter>& solver_setters() {
  static const std::map<std::string, SolverSetter> table = {
      {"alpha", [](auto& s, auto v) { s.alpha = parse_number<double>(v, "solver.alpha"); }},
      {"mu", [](auto& s, auto v) { s.mu = parse_number<double>(v, "solver.mu"); }},
      {"beta", [](auto& s, auto v) { s.beta = parse_number<double>(v, "solver.beta"); }},
      {"max_dca", [](auto& s, auto v) { s.max_dca = parse_number<int>(v, "solver.max_dca"); }},
      {"max_inner", [](auto& s, auto v) { s.max_inner = parse_number<int>(v, "solver.max_inner"); }},
      {"sweeps", [](auto& s, auto v) { s.sweeps_per_update = parse_number<int>(v, "solver.sweeps"); }},
      {"tol_dca", [](auto& s, auto v) { s.tol_dca = parse_number<double>(v, "solver.tol_dca"); }},
      {"tol_inner", [](auto& s, auto v) { s.tol_inner = parse_number<double>(v, "solver.tol_inner"); }},
      {"inner_solve",
       [](auto& s, auto v) {
         try {
           s.inner_solve = parse_inner_solve(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       }},
      {"cg_tol", [](auto& s, auto v) { s.cg_tol = parse_number<double>(v, "solver.cg_tol"); }},
      {"cg_max_iter", [](auto& s, auto v) { s.cg_max_iter = parse_number<int>(v, "solver.cg_max_iter"); }},
  };
  return table;
}

ExperimentConfig from_tree(const boost::property_tree::ptree& tree) {
  ExperimentConfig cfg;
  cfg.phase.alphas = parse_number_list("0.7:0.1:2.7");
  cfg.phase.lines = parse_count_list("3:1:12", "phase.lines");
  std::vector<std::pair<std::string, std::string>> solver_keys;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      const std::string& text = value.data();
      if (section == "solver") {
        if (!solver_setters().contains(key)) throw ConfigError("unknown key solver." + key);
        solver_keys.emplace_back(key, text);
        continue;
      }
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError("unknown key " + full);
      it->second(cfg, text);
    }
  }
  cfg.solver = default_solver(cfg.model, cfg.noise.std_dev > 0.0);
  for (const auto& [key, text] : solver_keys) solver_setters().at(key)(cfg.solver, text);
  cfg.validate();
  return cfg;
}

}  // namespace

SolverConfig default_solver(ModelKind model, bool noisy) {
  switch (model) {
    case ModelKind::tv: return SolverConfig::tv_baseline(noisy);
    case ModelKind::tva_tvi: return SolverConfig::tva_tvi_baseline(noisy);
    case ModelKind::enhanced_tv:
    case ModelKind::denoise: return SolverConfig::enhanced(0.8, noisy);
  }
  return {};
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("range needs lo:step:hi, got '" + std::string(text) + "'");
    const double lo = parse_number<double>(text.substr(0, a), "range start");
    const double step = parse_number<double>(text.substr(a + 1, b - a - 1), "range step");
    const double hi = parse_number<double>(text.substr(b + 1), "range end");
    if (!(step > 0.0) || hi < lo) throw ConfigError("empty or invalid range '" + std::string(text) + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      // snap to a 1e-12 grid so 0.7 + 3 * 0.1 gives 1 rather than 0.99999...
      const double v = lo + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_number<double>(item, "list entry"));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (image.size < 2) throw ConfigError("image.size must be >= 2");
  if (image.source.empty()) throw ConfigError("image.source is empty");
  if (trials < 0) throw ConfigError("experiment.trials must be >= 0");
  if (noise.std_dev < 0.0) throw ConfigError("noise.std must be >= 0");
  if (noise.radius_scale < 0.0) throw ConfigError("noise.radius_scale must be >= 0");
  if (noise.radius && *noise.radius < 0.0) throw ConfigError("noise.radius must be >= 0");
  if (!(delta >= 0.0 && delta < 0.6)) throw ConfigError("experiment.delta must lie in [0, 0.6)");
  if (sparsity_tol < 0.0) throw ConfigError("experiment.sparsity_tol must be >= 0");
  switch (mask.kind) {
    case MaskKind::radial:
      if (mask.lines < 1) throw ConfigError("mask.lines must be >= 1");
      break;
    case MaskKind::variable_density:
      if (mask.samples == 0 && !(mask.rate > 0.0)) throw ConfigError("mask.samples or mask.rate must be positive");
      if (!(mask.cap > 0.0)) throw ConfigError("mask.cap must be positive");
      break;
    case MaskKind::custom:
      if (mask.path.empty()) throw ConfigError("mask.kind = custom needs mask.path");
      if (!std::ifstream(mask.path)) throw ConfigError("mask file not found: " + mask.path);
      break;
    case MaskKind::full:
      break;
  }
  const bool generator = image.source == "phantom" || image.source == "phantom_modified" ||
                         image.source == "circle" || image.source == "shapes" || image.source == "strip";
  if (!generator && !std::ifstream(image.source)) throw ConfigError("image file not found: " + image.source);
  if (phase.trials < 0) throw ConfigError("phase.trials must be >= 0");
  if (!(phase.success_threshold > 0.0)) throw ConfigError("phase.success_threshold must be positive");
  try {
    if (model == ModelKind::denoise) denoise.validate();
    else solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_tree(tree);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace etv
