#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sosim/analytic.hpp"
#include "sosim/commands.hpp"
#include "sosim/costmodel.hpp"
#include "sosim/errors.hpp"
#include "sosim/fock.hpp"
#include "sosim/lindblad.hpp"
#include "sosim/measurement.hpp"
#include "sosim/sos_model.hpp"
#include "sosim/state.hpp"
#include "sosim/szilard.hpp"
#include "sosim/validation.hpp"

namespace py = pybind11;
using namespace sosim;

namespace {

SosParams params_from(const std::string& json_text) { return SosParams::from_json(nlohmann::json::parse(json_text)); }

QuantumState oscillator_state(const Matrix& rho) { return QuantumState::oscillator(rho); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-oscillator measurement model";

  auto base = py::register_exception<Error>(m, "Error");
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  (void)validation;

  py::class_<SosParams>(m, "SosParams")
      .def(py::init<>())
      .def_readwrite("omega0", &SosParams::omega0)
      .def_readwrite("D", &SosParams::D)
      .def_readwrite("T", &SosParams::T)
      .def_readwrite("G_o_omega0", &SosParams::g_o_at_omega0)
      .def_readwrite("G_o_0", &SosParams::g_o_at_0)
      .def_readwrite("G_3_0", &SosParams::g_3_at_0)
      .def_readwrite("G_1_0", &SosParams::g_1_at_0)
      .def("validate", &SosParams::validate)
      .def_static("from_json", &params_from)
      .def("to_json", [](const SosParams& p) { return p.to_json().dump(); });

  py::class_<DerivedRates>(m, "DerivedRates")
      .def_readonly("gamma", &DerivedRates::gamma)
      .def_readonly("gamma_up", &DerivedRates::gamma_up)
      .def_readonly("gamma_net", &DerivedRates::gamma_net)
      .def_readonly("big_gamma", &DerivedRates::big_gamma)
      .def_readonly("w_bar", &DerivedRates::w_bar)
      .def_readonly("theta", &DerivedRates::theta)
      .def_readonly("theta_prime", &DerivedRates::theta_prime)
      .def_readonly("epsilon", &DerivedRates::epsilon);
  m.def("derive_rates", &derive_rates);
  m.def("noise_temperature", &noise_temperature);
  m.def("tunneling_noise_temperature", &tunneling_noise_temperature);

  m.def("coherent_state", [](cplx alpha, int dim) { return coherent_state(alpha, FockRep(dim)).matrix(); },
        py::arg("alpha"), py::arg("dim"));
  m.def(
      "displaced_thermal_state",
      [](cplx alpha, double omega0, double T, int dim, double tol) {
        return displaced_thermal_state({alpha, omega0, T}, FockRep(dim), tol).matrix();
      },
      py::arg("alpha"), py::arg("omega0"), py::arg("T"), py::arg("dim"), py::arg("tol") = 1e-9);
  m.def(
      "uhlmann_fidelity",
      [](const Matrix& a, const Matrix& b) { return uhlmann_fidelity(oscillator_state(a), oscillator_state(b)); },
      py::arg("rho"), py::arg("sigma"));
  m.def("trace_distance", py::overload_cast<const Matrix&, const Matrix&>(&trace_distance));

  m.def("epsilon_zero_t", &epsilon_zero_t);
  m.def("epsilon_finite_t", &epsilon_finite_t);
  m.def("min_work", &min_work);

  py::class_<TunnelingResult>(m, "TunnelingResult")
      .def_readonly("rate", &TunnelingResult::rate)
      .def_readonly("rate_leading", &TunnelingResult::rate_leading)
      .def_readonly("rate_uncorrected", &TunnelingResult::rate_uncorrected)
      .def_readonly("exponent_temperature", &TunnelingResult::exponent_temperature)
      .def_property_readonly("regime", [](const TunnelingResult& r) { return to_string(r.regime); });
  m.def("tunneling_rate", [](const SosParams& p) {
    return p.T > 0.0 ? tunneling_rate_finite_t(p) : tunneling_rate_zero_t(p);
  });
  m.def(
      "tunneling_flow_oracle",
      [](const SosParams& p, int dim) {
        const FockRep rep(dim);
        return initial_spin_flow(build_sos_generator(p, rep, {true, 1}), biased_gibbs_state(-1, p, rep));
      },
      py::arg("params"), py::arg("dim") = 48);

  m.def("w_se", &w_se);
  m.def("w_se_faulty", &w_se_faulty);
  m.def("binary_entropy", &binary_entropy);
  m.def("efficiency", &efficiency);
  m.def("maximize_efficiency", [](double T, double theta) {
    const EfficiencyOptimum e = maximize_efficiency(T, theta);
    return py::make_tuple(e.eps_bar, e.eta_bar);
  });
  m.def(
      "quasistatic_work",
      [](double T, double E0, double epsilon, double ramp_time, double rate, const std::string& shape) {
        QuasistaticOptions o;
        o.shape = ramp_shape_from_string(shape);
        const CycleLedger l = quasistatic_cycle({T, E0, epsilon}, ramp_time, rate, o);
        return py::make_tuple(l.work_extracted, l.quasistatic_reference, l.closure_error);
      },
      py::arg("T"), py::arg("E0"), py::arg("epsilon"), py::arg("ramp_time"), py::arg("rate") = 1.0,
      py::arg("shape") = "optimal");

  m.def("failure_probability",
        [](double N, double kappa, double w_bar, double theta) {
          return failure_probability(N, kappa, w_bar, theta).delta;
        });
  m.def("min_total_work_json", [](const std::string& json_text) {
    const WorkEstimate w = min_total_work(CostInputs::from_json(nlohmann::json::parse(json_text)));
    nlohmann::json j = {{"natural", w.natural}, {"per_gate", w.per_gate}, {"landauer", w.landauer},
                        {"warnings", w.warnings}};
    if (w.joules) j["joules"] = *w.joules;
    if (w.landauer_joules) j["landauer_joules"] = *w.landauer_joules;
    return j.dump();
  });

  m.def(
      "measure_json",
      [](double c_minus_abs, double phase, const SosParams& p, int dim) {
        RunConfig cfg;
        cfg.command = "measure";
        cfg.params = nlohmann::json::parse(p.to_json().dump());
        cfg.params["c_minus"] = c_minus_abs;
        cfg.params["phase"] = phase;
        cfg.fock_dim = dim;
        cfg.format = OutputFormat::json;
        return render(cfg, run_command(cfg));
      },
      py::arg("c_minus"), py::arg("phase"), py::arg("params"), py::arg("dim") = 48);

  m.def(
      "run_command_json",
      [](const std::string& command, const std::string& params_json, const std::vector<std::string>& sweeps,
         const std::string& format) {
        RunConfig cfg;
        cfg.command = command;
        cfg.params = nlohmann::json::parse(params_json);
        for (const auto& s : sweeps) cfg.sweeps.push_back(SweepSpec::parse(s));
        cfg.format = output_format_from_string(format);
        const CommandOutput out = run_command(cfg);
        return py::make_tuple(render(cfg, out), out.exit_code);
      },
      py::arg("command"), py::arg("params_json") = "{}", py::arg("sweeps") = std::vector<std::string>{},
      py::arg("format") = "json");

  m.def("run_criterion", [](int id) {
    HygieneLog log;
    const CheckResult r = run_criterion(id, log);
    return py::make_tuple(r.passed, format_result_line(r));
  });
}
