#include "sosim/measurement.hpp"

#include <cmath>
#include <limits>

#include "sosim/analytic.hpp"
#include "sosim/errors.hpp"

namespace sosim {
namespace {

double trace_norm(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

QuantumState sos_pointer(int mu, const SosParams& p, const FockRep& rep, double tol) {
  if (p.T > 0.0) return biased_gibbs_state(mu, p, rep, tol);
  const Vector psi = ground_state(mu, p, rep);
  return QuantumState::pure(psi, {Subsystem::spin, Subsystem::oscillator}, {2, rep.dim()});
}

Matrix pointer_state(cplx alpha, const SosParams& p, const FockRep& rep, double tol) {
  return displaced_thermal_state({alpha, p.omega0, p.T}, rep, tol).matrix();
}

cplx mean_displacement(const Matrix& osc, const FockRep& rep) { return (rep.a() * osc).trace(); }

double sos_energy(const Matrix& h, const QuantumState& s) {
  const int n = static_cast<int>(h.rows());
  double e = 0.0;
  const int blocks = s.dim() / n;
  for (int k = 0; k < blocks; ++k) e += (h * s.matrix().block(k * n, k * n, n, n)).trace().real();
  return e;
}

}  // namespace

void ObservedSystem::validate() const {
  const double norm = std::norm(c_minus) + std::norm(c_plus);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-10)
    throw InvalidState("observed system amplitudes must satisfy |c₋|² + |c₊|² = 1");
}

Vector ObservedSystem::ket() const {
  Vector v(2);
  v << c_plus, c_minus;
  return v;
}

QuantumState cnot_pulse(const ObservedSystem& system, const QuantumState& sos_state, std::vector<std::string>* warnings) {
  system.validate();
  if (!sos_state.has(Subsystem::spin) || !sos_state.has(Subsystem::oscillator) || sos_state.has(Subsystem::observed))
    throw InvalidState("cnot_pulse: SOS state must live on spin ⊗ oscillator");
  const int n = sos_state.factor_dim(Subsystem::oscillator);
  const Matrix& rho = sos_state.matrix();
  if (warnings) {
    const double minus_weight = rho.bottomRightCorner(n, n).trace().real();
    const double spin_coh = rho.topRightCorner(n, n).cwiseAbs().maxCoeff();
    if (minus_weight > 1e-8 || spin_coh > 1e-8)
      warnings->push_back("cnot_pulse: SOS input is not a '+' stable state (spin '-' weight " +
                          std::to_string(minus_weight) + ")");
  }
  // −iσ¹ on the spin factor
  Matrix flip = Matrix::Zero(2 * n, 2 * n);
  flip.topRightCorner(n, n).diagonal().setConstant(-kI);
  flip.bottomLeftCorner(n, n).diagonal().setConstant(-kI);
  const int d = 2 * n;
  Matrix u = Matrix::Zero(2 * d, 2 * d);
  u.topLeftCorner(d, d).setIdentity();  // P₊
  u.bottomRightCorner(d, d) = flip;     // P₋
  const Vector c = system.ket();
  const Matrix rho_o = c * c.adjoint();
  Matrix out = u * kron(rho_o, rho) * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return QuantumState(std::move(out), {Subsystem::observed, Subsystem::spin, Subsystem::oscillator}, {2, 2, n});
}

StageTimes stage_times(const SosParams& p) {
  const DerivedRates r = derive_rates(p);
  const double inf = std::numeric_limits<double>::infinity();
  StageTimes s;
  s.t_M = 0.0;
  s.t_D = r.big_gamma > 0.0 ? 1.0 / r.big_gamma : inf;
  s.t_R = r.gamma > 0.0 ? 1.0 / r.gamma : inf;
  const double tun = tunneling_rate_finite_t(p).rate;
  s.t_E = tun > 0.0 ? 1.0 / tun : inf;
  s.ordering_applicable = p.D * p.D >= 1.0 && p.g_1_at_0 <= r.gamma;
  s.ordering_holds = s.t_D < s.t_R && s.t_R < s.t_E;
  return s;
}

MeasurementReport run_protocol(const ObservedSystem& system, const SosParams& p, const FockRep& rep,
                               const ProtocolOptions& opts) {
  system.validate();
  p.validate();
  const DerivedRates r = derive_rates(p);
  if (!(r.gamma_net > 0.0)) throw ValidationError("run_protocol: needs a positive dissipation rate G_o(ω₀)");
  const double min_horizon = 10.0 / r.gamma_net;
  const double horizon = opts.horizon > 0.0 ? opts.horizon : 20.0 / r.gamma_net;
  if (horizon < min_horizon * (1.0 - 1e-12))
    throw ValidationError("run_protocol: horizon must be at least 10/γ_net = " + std::to_string(min_horizon));
  if (opts.samples < 2) throw ValidationError("run_protocol: need at least 2 samples");

  MeasurementReport rep_out;
  rep_out.horizon = horizon;
  rep_out.stages = stage_times(p);
  const double pm = std::norm(system.c_minus);
  const double pp = std::norm(system.c_plus);
  const double barrier = 4.0 * p.D * p.D * p.omega0;
  rep_out.work_expected = pm * barrier;

  const QuantumState sos0 = sos_pointer(1, p, rep, opts.state_tol);
  const Matrix h = sos_hamiltonian(p, rep);
  const double e0 = sos_energy(h, sos0);
  const QuantumState rho0 = cnot_pulse(system, sos0, &rep_out.warnings);
  rep_out.work_invested = sos_energy(h, rho0) - e0;
  {
    const double w_flip = sos_energy(h, cnot_pulse({cplx(1.0, 0.0), cplx(0.0, 0.0)}, sos0)) - e0;
    const double w_keep = sos_energy(h, cnot_pulse({cplx(0.0, 0.0), cplx(1.0, 0.0)}, sos0)) - e0;
    rep_out.average_work = 0.5 * (w_flip + w_keep);
  }

  const auto gen_spec = build_sos_generator(p, rep, {false, 2});
  const auto grid = linspace(0.0, horizon, opts.samples);
  const Trajectory traj = evolve(gen_spec, rho0, grid, opts.evolve);
  rep_out.max_trace_drift = traj.max_trace_drift;
  rep_out.min_eigenvalue = traj.min_eigenvalue;
  rep_out.max_hermiticity_defect = traj.max_hermiticity_defect;

  const Matrix target_plus = pointer_state(cplx(p.D, 0.0), p, rep, opts.state_tol);
  const Matrix target_minus = pointer_state(cplx(-p.D, 0.0), p, rep, opts.state_tol);
  Matrix observed_target = Matrix::Zero(2, 2);
  observed_target(0, 0) = pp;
  observed_target(1, 1) = pm;
  const int d = 2 * rep.dim();
  double prev_coh = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const QuantumState& s = traj.states[k];
    PointerSample ps;
    ps.t = t;
    const Matrix osc = partial_trace(s, Subsystem::oscillator).matrix();
    ps.displacement = mean_displacement(osc, rep);
    ps.expected_displacement = pm * alpha_trajectory(-1, cplx(p.D, 0.0), t, p) + pp * cplx(p.D, 0.0);
    ps.coherence = trace_norm(s.matrix().block(0, d, d, d));
    ps.observed_deviation = trace_distance(partial_trace(s, Subsystem::observed).matrix(), observed_target);
    rep_out.max_displacement_error = std::max(rep_out.max_displacement_error, std::abs(ps.displacement - ps.expected_displacement));
    rep_out.max_observed_deviation = std::max(rep_out.max_observed_deviation, ps.observed_deviation);
    if (ps.coherence > prev_coh + 1e-9) rep_out.coherence_monotone = false;
    prev_coh = ps.coherence;
    rep_out.samples.push_back(ps);
  }

  const Matrix pointer = partial_trace(traj.states.back(), Subsystem::oscillator).matrix();
  // Least-squares weight of ρ₋ in the two-state mixture.
  const Matrix diff = target_minus - target_plus;
  if (diff.squaredNorm() < 1e-20) {
    rep_out.p_minus = rep_out.p_plus = std::numeric_limits<double>::quiet_NaN();
    rep_out.warnings.push_back("run_protocol: pointer states coincide (D = 0), Born weights undefined");
  } else {
    const double w = (diff.adjoint() * (pointer - target_plus)).trace().real() / diff.squaredNorm();
    rep_out.p_minus = w;
    rep_out.p_plus = 1.0 - w;
  }
  rep_out.pointer_distance = trace_distance(pointer, pm * target_minus + pp * target_plus);
  const cplx moving = alpha_trajectory(-1, cplx(p.D, 0.0), horizon, p);
  rep_out.pointer_distance_moving =
      trace_distance(pointer, pm * pointer_state(moving, p, rep, opts.state_tol) + pp * target_plus);
  return rep_out;
}

}  // namespace sosim
