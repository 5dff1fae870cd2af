#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <stdexcept>

#include "etv/fourier.hpp"
#include "etv/haar.hpp"
#include "etv/imaging.hpp"
#include "etv/measurement.hpp"
#include "etv/metrics.hpp"
#include "etv/phantom.hpp"
#include "etv/sampling.hpp"
#include "etv/solvers.hpp"
#include "etv/theory.hpp"

namespace py = pybind11;
using namespace etv;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Image to_image(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square 2-D array");
  Image img(static_cast<std::size_t>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), img.data().begin());
  return img;
}

CArray to_array(const Image& img) {
  const auto n = static_cast<py::ssize_t>(img.side());
  CArray out({n, n});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

CArray to_vector(const std::vector<Complex>& v) {
  CArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<Complex> from_vector(const CArray& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

py::dict report_dict(const ReconstructionReport& r) {
  py::dict d;
  d["image"] = to_array(r.image);
  d["relative_error"] = r.relative_error;
  d["ssim"] = r.ssim;
  d["imaginary_fraction"] = r.imaginary_fraction;
  d["objective_trace"] = r.objective_trace;
  d["residual_norm"] = r.residual_norm;
  d["radius"] = r.radius;
  d["wall_time"] = r.wall_time;
  d["dca_iterations"] = r.dca_iterations;
  d["inner_iterations"] = r.inner_iterations;
  d["cg_iterations"] = r.cg_iterations;
  d["ascent_stop"] = r.ascent_stop;
  d["warnings"] = r.warnings;
  return d;
}

using Solver = ReconstructionReport (*)(const MeasurementOperator&, std::span<const Complex>, const SolverConfig&,
                                        const Image*);

template <Solver solve>
py::dict run(const MeasurementOperator& op, const CArray& y, const SolverConfig& cfg,
             const std::optional<CArray>& reference) {
  const auto yv = from_vector(y);
  std::optional<Image> ref;
  if (reference) ref = to_image(*reference);
  ReconstructionReport r;
  {
    py::gil_scoped_release release;
    r = solve(op, yv, cfg, ref ? &*ref : nullptr);
  }
  return report_dict(r);
}

}  // namespace

PYBIND11_MODULE(_etvrec, m) {
  m.doc() = "Enhanced total variation reconstruction from Fourier samples";

  py::register_exception<SolverAbort>(m, "SolverAbort", PyExc_RuntimeError);

  py::enum_<InnerSolve>(m, "InnerSolve")
      .value("cg", InnerSolve::cg)
      .value("fft_periodic", InnerSolve::fft_periodic);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_static("enhanced", &SolverConfig::enhanced, py::arg("alpha"), py::arg("noisy") = false)
      .def_static("tv_baseline", &SolverConfig::tv_baseline, py::arg("noisy") = false)
      .def_static("tva_tvi_baseline", &SolverConfig::tva_tvi_baseline, py::arg("noisy") = false)
      .def_readwrite("alpha", &SolverConfig::alpha)
      .def_readwrite("mu", &SolverConfig::mu)
      .def_readwrite("beta", &SolverConfig::beta)
      .def_readwrite("max_dca", &SolverConfig::max_dca)
      .def_readwrite("max_inner", &SolverConfig::max_inner)
      .def_readwrite("sweeps_per_update", &SolverConfig::sweeps_per_update)
      .def_readwrite("tol_dca", &SolverConfig::tol_dca)
      .def_readwrite("tol_inner", &SolverConfig::tol_inner)
      .def_readwrite("inner_solve", &SolverConfig::inner_solve)
      .def_readwrite("cg_tol", &SolverConfig::cg_tol)
      .def_readwrite("cg_max_iter", &SolverConfig::cg_max_iter);

  py::class_<DenoiseConfig>(m, "DenoiseConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &DenoiseConfig::alpha)
      .def_readwrite("mu", &DenoiseConfig::mu)
      .def_readwrite("beta", &DenoiseConfig::beta)
      .def_readwrite("max_dca", &DenoiseConfig::max_dca)
      .def_readwrite("max_breg", &DenoiseConfig::max_breg)
      .def_readwrite("inner_solve", &DenoiseConfig::inner_solve);

  py::class_<FrequencyMask>(m, "FrequencyMask")
      .def_readonly("n_side", &FrequencyMask::n_side)
      .def_readonly("seed", &FrequencyMask::seed)
      .def_property_readonly("kind", [](const FrequencyMask& f) { return std::string(to_string(f.kind)); })
      .def_property_readonly("frequencies",
                             [](const FrequencyMask& f) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& q : f.freqs) out.emplace_back(q.k1, q.k2);
                               return out;
                             })
      .def("sampling_rate", &FrequencyMask::sampling_rate)
      .def("__len__", &FrequencyMask::size);

  m.def("radial_mask", &radial_mask, py::arg("n_side"), py::arg("lines"), py::arg("angle_offset") = 0.0);
  m.def("full_mask", &full_mask, py::arg("n_side"));
  m.def(
      "variable_density_mask",
      [](std::size_t n, std::size_t samples, double cap, std::uint64_t seed) {
        auto w = variable_density_mask(n, samples, cap, seed);
        return py::make_tuple(w.mask, w.weights);
      },
      py::arg("n_side"), py::arg("samples"), py::arg("cap") = 1.0, py::arg("seed") = 0);

  py::class_<MeasurementOperator>(m, "MeasurementOperator")
      .def_static("unweighted", &MeasurementOperator::unweighted, py::arg("mask"), py::arg("tau") = 0.0)
      .def_static("weighted", &MeasurementOperator::weighted, py::arg("mask"), py::arg("rho"), py::arg("tau") = 0.0)
      .def_property_readonly("rows", &MeasurementOperator::rows)
      .def_property_readonly("radius", &MeasurementOperator::effective_radius)
      .def("measure", [](const MeasurementOperator& op, const CArray& x) { return to_vector(op.measure(to_image(x))); })
      .def("adjoint",
           [](const MeasurementOperator& op, const CArray& v) { return to_array(op.measure_adjoint(from_vector(v))); });

  m.def(
      "add_noise",
      [](const CArray& y, double std_dev, std::uint64_t seed) { return to_vector(add_noise(from_vector(y), std_dev, seed)); },
      py::arg("y"), py::arg("std"), py::arg("seed"));

  const auto solver_args = [] {
    return std::make_tuple(py::arg("op"), py::arg("y"), py::arg("config"), py::arg("reference") = py::none());
  };
  std::apply([&](auto... a) { m.def("solve_enhanced_tv", &run<&solve_enhanced_tv>, a...); }, solver_args());
  std::apply([&](auto... a) { m.def("solve_tv", &run<&solve_tv_bregman>, a...); }, solver_args());
  std::apply([&](auto... a) { m.def("solve_tva_tvi", &run<&solve_tva_minus_tvi>, a...); }, solver_args());

  m.def(
      "denoise",
      [](const CArray& noisy, const DenoiseConfig& cfg) { return to_array(denoise_enhanced_tv(to_image(noisy), cfg)); },
      py::arg("noisy"), py::arg("config") = DenoiseConfig{});

  m.def("shepp_logan", [](std::size_t n, bool modified) {
    return to_array(shepp_logan(n, modified ? PhantomVariant::modified : PhantomVariant::standard));
  }, py::arg("n_side"), py::arg("modified") = false);
  m.def("synthetic_image", [](const std::string& kind, std::size_t n) {
    return to_array(synthetic_image(parse_synthetic_kind(kind), n));
  }, py::arg("kind"), py::arg("n_side"));

  m.def("dft2", [](const CArray& x) { return to_array(dft2(to_image(x))); });
  m.def("dft2_inv", [](const CArray& x) { return to_array(dft2_inv(to_image(x))); });
  m.def("haar2", [](const CArray& x) { return to_array(haar2(to_image(x))); });
  m.def("haar2_inv", [](const CArray& x) { return to_array(haar2_inv(to_image(x))); });
  m.def("gradient", [](const CArray& x) {
    const auto g = gradient(to_image(x));
    return py::make_tuple(to_array(g.gx), to_array(g.gy));
  });
  m.def("tv_aniso", [](const CArray& x) { return tv_aniso(to_image(x)); });
  m.def("tv_iso", [](const CArray& x) { return tv_iso(to_image(x)); });
  m.def("enhanced_tv", [](const CArray& x, double alpha) { return enhanced_tv(to_image(x), alpha); },
        py::arg("x"), py::arg("alpha"));

  m.def("relative_error", [](const CArray& ref, const CArray& x) { return relative_error(to_image(ref), to_image(x)); });
  m.def("ssim", [](const CArray& ref, const CArray& x) { return ssim(to_image(ref), to_image(x)); });

  m.def("rip_constants", [](double delta) {
    const auto c = rip_constants(delta);
    return py::make_tuple(c.k1, c.k2);
  });
  m.def(
      "alpha_bound",
      [](double grad_norm2, std::size_t s, double delta, const std::string& regime, std::size_t n_side) {
        const auto r = regime == "thm1" ? AlphaRegime::thm1 : AlphaRegime::thm2_3;
        if (regime != "thm1" && regime != "thm2_3") throw std::invalid_argument("regime must be thm1 or thm2_3");
        return verify_alpha(0.0, grad_norm2, s, delta, r, n_side).bound;
      },
      py::arg("grad_norm2"), py::arg("s"), py::arg("delta"), py::arg("regime") = "thm2_3", py::arg("n_side") = 256);
  m.def(
      "check_lemmas",
      [](std::size_t n, int trials, std::uint64_t seed) {
        const auto rep = check_lemmas(n, trials, seed);
        py::list rows;
        for (const auto& r : rep.results) rows.append(py::make_tuple(r.name, r.passed, r.value, r.limit));
        return py::make_tuple(rep.all_passed(), rows, rep.fitted_decay_constant);
      },
      py::arg("n_side"), py::arg("trials") = 100, py::arg("seed") = 1);
}
