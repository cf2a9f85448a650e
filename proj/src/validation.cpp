#include "sosim/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "sosim/analytic.hpp"
#include "sosim/costmodel.hpp"
#include "sosim/errors.hpp"
#include "sosim/measurement.hpp"
#include "sosim/szilard.hpp"

namespace sosim {
namespace {

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

CheckResult start(int id, std::string name) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CheckResult c1_fidelity(HygieneLog&) {
  CheckResult r = start(1, "fidelity law");
  const FockRep rep(64);
  const std::vector<double> ds = {0.3, 0.6, 0.9, 1.2, 1.5};
  const auto xs = logspace(0.2, 5.0, 5);
  double worst = 0.0, worst_d = 0.0, worst_x = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (double d : ds) {
    for (double x : xs) {
      const double T = 1.0 / x;
      // The truncation check is loosened so that the grid corner at
      // ω₀/T = 0.2 is still evaluated at dimension 64; its error is reported.
      const auto plus = displaced_thermal_state({cplx(d, 0.0), 1.0, T}, rep, 1e-2);
      const auto minus = displaced_thermal_state({cplx(-d, 0.0), 1.0, T}, rep, 1e-2);
      const double f = uhlmann_fidelity(plus, minus);
      const double expected = epsilon_finite_t(d, 1.0, T);
      const double err = std::abs(f * f - expected);
      rows.push_back({{"D", d}, {"omega0_over_T", x}, {"F2", f * f}, {"expected", expected}, {"abs_err", err}});
      if (err > worst) {
        worst = err;
        worst_d = d;
        worst_x = x;
      }
    }
  }
  r.passed = worst < 1e-5;
  r.metrics = {{"max_abs_err", worst}, {"fock_dim", 64}, {"grid", rows}};
  r.detail = "max |F^2 - exp(-4D^2 tanh(w0/2T))| = " + fmt(worst) + " at D=" + fmt(worst_d) + ", w0/T=" + fmt(worst_x) +
             " (tol 1e-5, dim 64)";
  return r;
}

CheckResult c2_propagator(HygieneLog& log) {
  CheckResult r = start(2, "rank-1 propagator vs integrator");
  SosParams p;
  p.D = 1.0;
  p.T = 0.0;
  const FockRep rep(48);
  const Generator gen(build_sos_generator(p, rep));
  const double horizon = 10.0 / derive_rates(p).gamma;
  const auto grid = linspace(0.0, horizon, 21);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  nlohmann::json runs = nlohmann::json::array();
  for (int run = 0; run < 5; ++run) {
    std::vector<CoherentComponent> psi;
    for (int k = 0; k < 2; ++k) {
      cplx alpha;
      do alpha = cplx(1.5 * unit(rng), 1.5 * unit(rng));
      while (std::abs(alpha) > 1.5);
      psi.push_back({coin(rng) ? 1 : -1, alpha, cplx(gauss(rng), gauss(rng))});
    }
    const auto blocks = blocks_from_superposition(psi);
    const QuantumState rho0 = QuantumState::spin_oscillator(assemble_blocks(blocks, rep), rep.dim());
    const Trajectory traj = evolve(gen, rho0, grid);
    log.absorb(traj);
    double run_worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<Rank1Block> moved;
      for (const auto& b : blocks) moved.push_back(propagate_rank1(b, grid[k], p));
      run_worst = std::max(run_worst, trace_distance(assemble_blocks(moved, rep), traj.states[k].matrix()));
    }
    worst = std::max(worst, run_worst);
    runs.push_back({{"spins", {psi[0].mu, psi[1].mu}}, {"max_trace_distance", run_worst}, {"steps", traj.stats.accepted}});
  }
  r.passed = worst < 1e-5;
  r.metrics = {{"max_trace_distance", worst}, {"runs", runs}, {"horizon", horizon}};
  r.detail = "max trace distance " + fmt(worst) + " over 5 random 2-component states, t in [0, 10/gamma] (tol 1e-5)";
  return r;
}

CheckResult c3_tunneling_zero_t(HygieneLog&) {
  CheckResult r = start(3, "tunneling rate, T = 0");
  double worst = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (double d : {0.5, 1.0, 1.5}) {
    SosParams p;
    p.D = d;
    p.T = 0.0;
    p.g_1_at_0 = 1.0;
    const FockRep rep(48);
    const Vector psi = ground_state(-1, p, rep);
    const auto rho = QuantumState::pure(psi, {Subsystem::spin, Subsystem::oscillator}, {2, rep.dim()});
    const double flow = initial_spin_flow(build_sos_generator(p, rep, {true, 1}), rho);
    const double expected = 0.5 * p.g_1_at_0 * std::exp(-4.0 * d * d);
    const double err = rel_err(flow, expected);
    worst = std::max(worst, err);
    rows.push_back({{"D", d}, {"flow", flow}, {"expected", expected}, {"rel_err", err}});
  }
  r.passed = worst < 1e-6;
  r.metrics = {{"max_rel_err", worst}, {"rows", rows}};
  r.detail = "max rel err of initial flow vs G1/2 e^{-4D^2}: " + fmt(worst) + " (tol 1e-6)";
  return r;
}

CheckResult c4_tunneling_finite_t(HygieneLog&) {
  CheckResult r = start(4, "tunneling rate, finite T");
  SosParams p;
  p.D = 1.0;
  p.omega0 = 1.0;
  p.g_1_at_0 = 1.0;
  const FockRep rep(64);
  const Matrix v0 = fourier_component(
      [&](double t) { return weyl_operator(2.0 * p.D * std::polar(1.0, -p.omega0 * t), rep); }, 0, p.omega0);
  const RealVector v0_sq_diag = (v0 * v0).diagonal().real();
  double worst = 0.0, worst_oracle = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (double T : {0.5, 1.0, 2.0}) {
    p.T = T;
    const double q = boltzmann_factor(p.omega0, T);
    double brute = 0.0;
    for (int k = rep.dim() - 1; k >= 0; --k) brute += (1.0 - q) * std::pow(q, k) * v0_sq_diag(k);
    const TunnelingResult closed = tunneling_rate_finite_t(p);
    const double closed_v0 = closed.rate / (0.5 * p.g_1_at_0);
    const double err = rel_err(closed_v0, brute);
    const double flow = initial_spin_flow(build_sos_generator(p, rep, {true, 1}), biased_gibbs_state(1, p, rep));
    const double err_oracle = rel_err(flow, closed.rate);
    worst = std::max(worst, err);
    worst_oracle = std::max(worst_oracle, err_oracle);
    rows.push_back({{"T", T},
                    {"closed_form", closed_v0},
                    {"brute_force", brute},
                    {"rel_err", err},
                    {"oracle_flow", flow},
                    {"oracle_rel_err", err_oracle},
                    {"uncorrected_rel_dev", rel_err(closed.rate_uncorrected, closed.rate)}});
  }
  p.T = 1e-3;
  const double limit = tunneling_rate_finite_t(p).rate;
  const double limit_err = rel_err(limit, 0.5 * p.g_1_at_0 * std::exp(-4.0 * p.D * p.D));
  r.passed = worst < 1e-3 && worst_oracle < 1e-3 && limit_err < 1e-6;
  r.metrics = {{"max_rel_err", worst}, {"max_oracle_rel_err", worst_oracle}, {"zero_t_limit_rel_err", limit_err}, {"rows", rows}};
  r.detail = "Bessel form vs quadrature trace: " + fmt(worst) + ", vs integrator flow: " + fmt(worst_oracle) +
             ", T->0 limit: " + fmt(limit_err) + " (tol 1e-3, 1e-3, 1e-6)";
  return r;
}

CheckResult c5_theta_ratio(HygieneLog&) {
  CheckResult r = start(5, "Theta'/Theta crossover");
  const auto xs = logspace(1e-2, 1e2, 401);
  double best = 0.0, best_x = 0.0;
  for (double x : xs) {
    const double ratio = tunneling_noise_temperature(1.0, 1.0 / x) / noise_temperature(1.0, 1.0 / x);
    if (ratio > best) {
      best = ratio;
      best_x = x;
    }
  }
  const double lo_end = tunneling_noise_temperature(1.0, 1.0 / xs.front()) / noise_temperature(1.0, 1.0 / xs.front());
  const double hi_end = tunneling_noise_temperature(1.0, 1.0 / xs.back()) / noise_temperature(1.0, 1.0 / xs.back());
  r.passed = best >= 1.25 && best <= 1.35 && std::abs(lo_end - 1.0) < 0.01 && std::abs(hi_end - 1.0) < 0.01;
  r.metrics = {{"max_ratio", best}, {"argmax_omega0_over_T", best_x}, {"ratio_at_1e-2", lo_end}, {"ratio_at_1e2", hi_end}};
  r.detail = "max ratio " + fmt(best, 6) + " at w0/T=" + fmt(best_x) + "; ends " + fmt(lo_end, 6) + ", " + fmt(hi_end, 6);
  return r;
}

CheckResult c6_born_rule(HygieneLog& log) {
  CheckResult r = start(6, "Born rule and work");
  const ObservedSystem sym{cplx(std::sqrt(0.5), 0.0), cplx(std::sqrt(0.5), 0.0)};
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream detail;
  for (double T : {0.0, 1.0}) {
    SosParams p;
    p.T = T;
    const FockRep rep(48);
    const MeasurementReport m = run_protocol(sym, p, rep);
    log.absorb(m.max_trace_drift, m.min_eigenvalue, m.max_hermiticity_defect);
    const double w_bar = 2.0 * p.D * p.D * p.omega0;
    const double werr = std::abs(m.average_work - w_bar);
    const bool pass = std::abs(m.p_minus - 0.5) < 1e-4 && std::abs(m.p_plus - 0.5) < 1e-4 && werr <= 1e-9 * w_bar;
    ok = ok && pass;
    rows.push_back({{"T", T},
                    {"p_minus", m.p_minus},
                    {"p_plus", m.p_plus},
                    {"average_work", m.average_work},
                    {"w_bar", w_bar},
                    {"pointer_distance", m.pointer_distance},
                    {"pointer_distance_moving", m.pointer_distance_moving},
                    {"horizon", m.horizon}});
    detail << "T=" << T << ": p=(" << fmt(m.p_minus, 8) << ", " << fmt(m.p_plus, 8) << "), <W>=" << fmt(m.average_work, 12)
           << "; ";
  }
  r.passed = ok;
  r.metrics = {{"rows", rows}};
  r.detail = detail.str() + "tol 1e-4 on weights, W-bar = 2D^2 w0";
  return r;
}

CheckResult c7_szilard_optimum(HygieneLog&) {
  CheckResult r = start(7, "Szilard efficiency optimum");
  const auto opt = maximize_efficiency(1.0, 1.0);
  double worst = 0.0;
  for (int i = 1; i <= 49; ++i) {
    const auto m = w_se_max(i / 100.0, 1.0);
    worst = std::max(worst, std::abs(m.work - m.work_closed));
  }
  r.passed = std::abs(opt.eps_bar - 0.06) <= 0.01 && std::abs(opt.eta_bar - 0.17) <= 0.01 && worst <= 1e-8;
  r.metrics = {{"eps_bar", opt.eps_bar}, {"eta_bar", opt.eta_bar}, {"max_closed_form_err", worst}};
  r.detail = "eps_bar=" + fmt(opt.eps_bar, 8) + ", eta_bar=" + fmt(opt.eta_bar, 8) +
             " (targets 0.06+-0.01, 0.17+-0.01); max |W_num - T[ln2-S]| = " + fmt(worst);
  return r;
}

CheckResult c8_quasistatic(HygieneLog&) {
  CheckResult r = start(8, "quasistatic Szilard work");
  const double T = 1.0, rate = 1.0, ramp = 100.0 / rate;
  bool ok = true;
  double worst_closure = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream detail;
  for (double e0 : {1.0, 5.0, 20.0, 40.0}) {
    const auto led = quasistatic_cycle({T, e0, 0.0}, ramp, rate);
    const double target = e0 == 40.0 ? T * std::log(2.0) : w_se(e0, T);
    const double rel = (led.work_extracted - target) / target;
    ok = ok && std::abs(rel) < 0.01;
    worst_closure = std::max(worst_closure, led.closure_error);
    rows.push_back({{"E0", e0}, {"work", led.work_extracted}, {"target", target}, {"rel_err", rel}, {"closure", led.closure_error}});
    detail << "E0=" << e0 << "T: " << fmt(100.0 * rel, 3) << "%; ";
  }
  ok = ok && worst_closure < 1e-8;
  r.passed = ok;
  r.metrics = {{"ramp_time", ramp}, {"rows", rows}, {"max_closure_error", worst_closure}};
  r.detail = detail.str() + "closure " + fmt(worst_closure) + " (tol 1%, 1e-8)";
  return r;
}

CheckResult c9_cost(HygieneLog&) {
  CheckResult r = start(9, "computation cost model");
  CostInputs in;
  in.theta = Temperature::parse("300K");
  in.N = 1e21;
  in.kappa = 1e-8;
  in.delta = 1e-4;
  const WorkEstimate w = min_total_work(in);
  const double log10j = std::log10(*w.joules);
  double worst = 0.0;
  struct Case {
    double N, kappa, w_bar, theta;
  };
  for (const Case& c : {Case{1e6, 1e-2, 40.0, 1.0}, Case{1e21, 1e-8, 80.0, 1.0}, Case{10.0, 1.0, 5.0, 0.5},
                        Case{1e12, 1e-3, 3.0e2, 4.0}}) {
    const auto f = failure_probability(c.N, c.kappa, c.w_bar, c.theta);
    CostInputs back;
    back.theta = {c.theta, false};
    back.N = c.N;
    back.kappa = c.kappa;
    back.delta = f.delta;
    const double total = min_total_work(back).natural;
    worst = std::max(worst, rel_err(total, c.N * c.w_bar));
  }
  r.passed = log10j >= 1.5 && log10j <= 2.5 && worst <= 1e-12;
  r.metrics = {{"joules", *w.joules}, {"log10_joules", log10j}, {"landauer_joules", *w.landauer_joules},
               {"ratio_to_landauer", *w.joules / *w.landauer_joules}, {"max_round_trip_rel_err", worst}};
  r.detail = "W_N = " + fmt(*w.joules, 5) + " J (log10 " + fmt(log10j, 4) + ", band [1.5, 2.5]); Landauer " +
             fmt(*w.landauer_joules, 4) + " J; round trip " + fmt(worst);
  return r;
}

CheckResult c10_hygiene(HygieneLog& log) {
  CheckResult r = start(10, "integrator hygiene");
  if (log.runs == 0) {
    c2_propagator(log);
    c6_born_rule(log);
  }
  double worst_fixed = 0.0;
  for (double T : {0.0, 0.5, 1.0, 2.0}) {
    SosParams p;
    p.T = T;
    const FockRep rep(T <= p.omega0 ? 48 : 64);
    const Generator gen(build_sos_generator(p, rep));
    for (int mu : {1, -1}) {
      const QuantumState s = T > 0.0 ? biased_gibbs_state(mu, p, rep)
                                     : QuantumState::pure(ground_state(mu, p, rep), {Subsystem::spin, Subsystem::oscillator},
                                                          {2, rep.dim()});
      worst_fixed = std::max(worst_fixed, gen.apply(s.matrix()).cwiseAbs().maxCoeff());
    }
  }
  r.passed = log.max_trace_drift < 1e-8 && log.min_eigenvalue >= -1e-6 && log.max_hermiticity_defect < 1e-10 &&
             worst_fixed < 1e-8;
  r.metrics = {{"runs", log.runs},
               {"max_trace_drift", log.max_trace_drift},
               {"min_eigenvalue", log.min_eigenvalue},
               {"max_hermiticity_defect", log.max_hermiticity_defect},
               {"max_fixed_point_residual", worst_fixed}};
  r.detail = std::to_string(log.runs) + " runs: trace drift " + fmt(log.max_trace_drift) + ", min eig " +
             fmt(log.min_eigenvalue) + ", herm defect " + fmt(log.max_hermiticity_defect) + "; Gibbs residual " +
             fmt(worst_fixed);
  return r;
}

}  // namespace

void HygieneLog::absorb(double trace_drift, double min_eig, double herm_defect) {
  min_eigenvalue = runs == 0 ? min_eig : std::min(min_eigenvalue, min_eig);
  max_trace_drift = std::max(max_trace_drift, trace_drift);
  max_hermiticity_defect = std::max(max_hermiticity_defect, herm_defect);
  ++runs;
}

void HygieneLog::absorb(const Trajectory& t) { absorb(t.max_trace_drift, t.min_eigenvalue, t.max_hermiticity_defect); }

CheckResult run_criterion(int id, HygieneLog& log) {
  using Fn = CheckResult (*)(HygieneLog&);
  static const Fn table[kCriterionCount] = {c1_fidelity,         c2_propagator,  c3_tunneling_zero_t, c4_tunneling_finite_t,
                                            c5_theta_ratio,      c6_born_rule,   c7_szilard_optimum,  c8_quasistatic,
                                            c9_cost,             c10_hygiene};
  if (id < 1 || id > kCriterionCount) throw ValidationError("criterion id must be between 1 and 10");
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = table[id - 1](log);
  } catch (const Error& e) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CheckResult> run_all_criteria() {
  HygieneLog log;
  std::vector<CheckResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, log));
  return out;
}

std::string format_result_line(const CheckResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f s", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + "C" + std::to_string(r.id) + " " + r.name + ": " + r.detail +
         " [" + secs + "]";
}

}  // namespace sosim
