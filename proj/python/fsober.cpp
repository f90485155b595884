#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fso/analysis.hpp"
#include "fso/ber.hpp"
#include "fso/channel.hpp"
#include "fso/cli.hpp"
#include "fso/montecarlo.hpp"
#include "fso/special_fn.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

fso::BerMethod method_from(const std::string& name) {
  const auto m = fso::parse_method(name);
  if (!m) throw py::value_error("unknown method '" + name + "'");
  return *m;
}

fso::LinkParams preset_link(const std::string& name) { return fso::preset(name).link; }

}  // namespace

PYBIND11_MODULE(fsober, m) {
  m.doc() = "Average BER of OOK free-space optical links over lognormal turbulence with pointing errors";

  py::register_exception<fso::RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<fso::GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<fso::BracketError>(m, "BracketError", PyExc_RuntimeError);
  py::register_exception<fso::ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<fso::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<fso::LinkParams>(m, "LinkParams")
      .def(py::init<>())
      .def_readwrite("wavelength_nm", &fso::LinkParams::wavelength_nm)
      .def_readwrite("link_length_km", &fso::LinkParams::link_length_km)
      .def_readwrite("aperture_radius_m", &fso::LinkParams::aperture_radius_m)
      .def_readwrite("beam_waist_m", &fso::LinkParams::beam_waist_m)
      .def_readwrite("attenuation_db_per_km", &fso::LinkParams::attenuation_db_per_km)
      .def_readwrite("responsivity_a_per_w", &fso::LinkParams::responsivity_a_per_w)
      .def_readwrite("noise_std", &fso::LinkParams::noise_std)
      .def_readwrite("rytov_variance", &fso::LinkParams::rytov_variance)
      .def_readwrite("pointing_std_m", &fso::LinkParams::pointing_std_m)
      .def_readwrite("jitter_angle_mrad", &fso::LinkParams::jitter_angle_mrad)
      .def("validation_errors", &fso::LinkParams::validation_errors);

  py::class_<fso::DerivedParams>(m, "DerivedParams")
      .def_readonly("h_l", &fso::DerivedParams::h_l)
      .def_readonly("v", &fso::DerivedParams::v)
      .def_readonly("A0", &fso::DerivedParams::A0)
      .def_readonly("omega_z_eq_m", &fso::DerivedParams::omega_z_eq_m)
      .def_readonly("gamma", &fso::DerivedParams::gamma)
      .def_readonly("gamma_sq", &fso::DerivedParams::gamma_sq)
      .def_readonly("sigma_x_sq", &fso::DerivedParams::sigma_x_sq)
      .def_readonly("mu", &fso::DerivedParams::mu)
      .def_readonly("h_hat", &fso::DerivedParams::h_hat)
      .def_readonly("pointing_std_m", &fso::DerivedParams::pointing_std_m)
      .def_property_readonly("h_max", [](const fso::DerivedParams& d) { return fso::truncation_bound(d); });

  m.def("preset", &preset_link, "name"_a, "Link parameters of a named preset (case1, case2, case3).");
  m.def("derive", &fso::derive, "link"_a);
  m.def("pdf_h", &fso::pdf_h, "h"_a, "derived"_a);
  m.def("sample_h", &fso::sample_h, "derived"_a, "n"_a, "seed"_a, "threads"_a = 1);

  m.def("erfc", &fso::erfc, "z"_a);
  m.def("erfc_approx", &fso::erfc_approx, "z"_a);

  m.def("dbm_to_watts", &fso::dbm_to_watts, "p_dbm"_a);
  m.def("watts_to_dbm", &fso::watts_to_dbm, "p_watts"_a);
  m.def(
      "ber_exact",
      [](double p, const fso::LinkParams& link) { return fso::ber_exact(p, fso::derive(link), link); },
      "p_watts"_a, "link"_a);
  m.def(
      "ber_approx_new",
      [](double p, const fso::LinkParams& link) { return fso::ber_approx_new(p, fso::derive(link), link); },
      "p_watts"_a, "link"_a);
  m.def(
      "ber_approx_prev",
      [](double p, const fso::LinkParams& link, double v_min) {
        return fso::ber_approx_prev(p, fso::derive(link), link, {}, v_min);
      },
      "p_watts"_a, "link"_a, "v_min"_a = fso::kDefaultPrevVMin);

  m.def(
      "mc_ber",
      [](double p, const fso::LinkParams& link, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
        fso::McOptions opt;
        opt.threads = threads;
        const auto est = fso::mc_ber(p, fso::derive(link), link, trials, seed, opt);
        py::dict out;
        out["trials"] = est.trials;
        out["errors"] = est.errors;
        out["ber"] = est.ber;
        out["ci_low"] = est.ci_low;
        out["ci_high"] = est.ci_high;
        out["seed"] = est.seed;
        out["low_confidence"] = est.low_confidence;
        return out;
      },
      "p_watts"_a, "link"_a, "trials"_a = 1'000'000, "seed"_a = 1, "threads"_a = 0);

  m.def(
      "fec_crossing",
      [](const std::string& method, const fso::LinkParams& link, double threshold) {
        return fso::fec_crossing(method_from(method), fso::derive(link), link, threshold).p_cross_dbm;
      },
      "method"_a, "link"_a, "threshold"_a = fso::kHdFecThreshold,
      "Power in dBm at which an analytic method's BER crosses the threshold.");
  m.def(
      "delta",
      [](const std::string& a, const std::string& b, const fso::LinkParams& link, double threshold) {
        return fso::delta(method_from(a), method_from(b), threshold, fso::derive(link), link);
      },
      "a"_a, "b"_a, "link"_a, "threshold"_a = fso::kHdFecThreshold);

  m.def(
      "sweep",
      [](const std::vector<std::string>& methods, const fso::LinkParams& link, double lo, double hi,
         double step, std::uint64_t mc_trials, std::uint64_t seed) {
        std::vector<fso::BerMethod> ms;
        for (const auto& name : methods) ms.push_back(method_from(name));
        fso::SweepOptions opt;
        opt.mc = {mc_trials, seed};
        const auto curves = fso::sweep(ms, {lo, hi, step}, fso::derive(link), link, opt);
        py::dict out;
        for (const auto& c : curves) {
          std::vector<double> p;
          std::vector<double> ber;
          for (const auto& pt : c.points) {
            p.push_back(pt.p_dbm);
            ber.push_back(pt.ber);
          }
          out["p_dbm"] = p;
          out[py::str(std::string(fso::method_name(c.method)))] = ber;
        }
        return out;
      },
      "methods"_a, "link"_a, "lo_dbm"_a = -4.0, "hi_dbm"_a = 16.0, "step_db"_a = 0.5,
      "mc_trials"_a = 1'000'000, "seed"_a = 1,
      "Dict with 'p_dbm' and one BER list per method name.");

  m.attr("HD_FEC_THRESHOLD") = fso::kHdFecThreshold;
}
