#include "sosim/szilard.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sosim/errors.hpp"
#include "sosim/lindblad.hpp"
#include "sosim/optimize.hpp"

namespace sosim {
namespace {

void check_temperature(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("Szilard engine needs a positive temperature");
}

void check_epsilon(double eps) {
  if (!(eps >= 0.0 && eps <= 0.5)) throw ValidationError("measurement error must lie in [0, 1/2]");
}

// ln(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct Levels {
  double plus, minus;  // energies of σ³ = ±1
};

Levels levels(double E0, double f) { return {0.5 * E0 * (f * f - f), 0.5 * E0 * (f * f + f)}; }

// Ramp f(s), s ∈ [0, 1], from 1 down to 0, and df/ds.
struct Ramp {
  RampShape shape;
  double x0;  // E₀/T
  double u0;  // 2/√(1 + e^{x₀})

  double f(double s) const {
    if (shape == RampShape::linear) return 1.0 - s;
    const double u = u0 + (std::sqrt(2.0) - u0) * s;
    const double x = std::log(4.0 - u * u) - 2.0 * std::log(u);
    return std::max(0.0, x / x0);
  }
  double dfds(double s) const {
    if (shape == RampShape::linear) return -1.0;
    const double u = u0 + (std::sqrt(2.0) - u0) * s;
    const double dxdu = -2.0 * u / (4.0 - u * u) - 2.0 / u;
    return dxdu * (std::sqrt(2.0) - u0) / x0;
  }
};

BranchLedger run_branch(double probability, bool measured_right, const SzilardCycle& c, double ramp_time, double rate,
                        const QuasistaticOptions& opts, OdeStats& stats) {
  BranchLedger b;
  b.probability = probability;
  b.stages.push_back({"i: equilibrate at f = 0", 0.0, 0.0, 0.0});
  b.stages.push_back({"ii: measure sigma3", 0.0, 0.0, 0.0});
  // Step iii is sudden: the occupied level moves, populations do not.
  const Levels top = levels(c.E0, 1.0);
  const double w_iii = measured_right ? top.plus : top.minus;
  b.stages.push_back({"iii: raise the unoccupied level", w_iii, 0.0, w_iii});

  const Ramp ramp{opts.shape, c.E0 / c.T, 2.0 * std::exp(-0.5 * softplus(c.E0 / c.T))};
  // y = (p₊, p₋, W, Q) in the scaled time s = t/τ.
  Eigen::VectorXd y(4);
  y << (measured_right ? 1.0 : 0.0), (measured_right ? 0.0 : 1.0), 0.0, 0.0;
  const double e_start = measured_right ? top.plus : top.minus;
  auto rhs = [&](double s, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
    const double f = ramp.f(s);
    const double df = ramp.dfds(s);
    const Levels e = levels(c.E0, f);
    const double gap = e.minus - e.plus;
    const double flow = ramp_time * rate * (v(1) - std::exp(-gap / c.T) * v(0));  // into "+"
    dv(0) = flow;
    dv(1) = -flow;
    dv(2) = v(0) * 0.5 * c.E0 * (2.0 * f - 1.0) * df + v(1) * 0.5 * c.E0 * (2.0 * f + 1.0) * df;
    dv(3) = e.plus * dv(0) + e.minus * dv(1);
  };
  dopri5_integrate(rhs, 0.0, 1.0, y, opts.ode, stats, [](double, Eigen::VectorXd&) {});
  const Levels end = levels(c.E0, 0.0);
  const double e_end = y(0) * end.plus + y(1) * end.minus;
  b.stages.push_back({"iv: slow ramp in contact with the bath", y(2), y(3), e_end - e_start});
  b.closure_error = std::abs((e_end - e_start) - y(2) - y(3));
  b.work_extracted = -(w_iii + y(2));
  return b;
}

}  // namespace

void SzilardCycle::validate() const {
  check_temperature(T);
  if (!(E0 >= 0.0) || !std::isfinite(E0)) throw ValidationError("E0 must be finite and non-negative");
  check_epsilon(epsilon);
}

double w_se(double E0, double T) {
  check_temperature(T);
  if (E0 < 0.0) throw ValidationError("E0 must be non-negative");
  return T * (std::log(2.0) - std::log1p(std::exp(-E0 / T)));
}

double w_se_faulty(double E0, double T, double epsilon) {
  check_epsilon(epsilon);
  return w_se(E0, T) - epsilon * E0;
}

double binary_entropy(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("binary_entropy: argument outside [0, 1]");
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  return term(epsilon) + term(1.0 - epsilon);
}

FaultyOptimum w_se_max(double epsilon, double T) {
  check_epsilon(epsilon);
  check_temperature(T);
  FaultyOptimum o;
  o.work_closed = T * (std::log(2.0) - binary_entropy(epsilon));
  if (epsilon == 0.0) {
    o.unbounded = true;
    o.E0_star = o.E0_closed = std::numeric_limits<double>::infinity();
    o.work = T * std::log(2.0);
    return o;
  }
  o.E0_closed = T * std::log((1.0 - epsilon) / epsilon);
  const auto opt = golden_section_maximize([&](double e) { return w_se_faulty(e, T, epsilon); }, 0.0, 60.0 * T, 1e-10 * T);
  o.E0_star = opt.x;
  o.work = opt.value;
  return o;
}

double efficiency(double epsilon, double T, double theta) {
  check_epsilon(epsilon);
  check_temperature(T);
  if (!(theta > 0.0)) throw ValidationError("noise temperature must be positive");
  if (epsilon == 0.0) return 0.0;
  return (T / theta) * (std::log(2.0) - binary_entropy(epsilon)) / (-std::log(epsilon));
}

EfficiencyOptimum maximize_efficiency(double T, double theta) {
  EfficiencyOptimum out;
  auto f = [&](double e) {
    ++out.evaluations;
    return efficiency(e, T, theta);
  };
  const auto grid = logspace(1e-6, 0.5 - 1e-6, 64);
  const auto opt = scan_then_maximize(f, grid, 1e-9);
  out.eps_bar = opt.x;
  out.eta_bar = opt.value;
  return out;
}

std::string to_string(RampShape s) { return s == RampShape::linear ? "linear" : "optimal"; }

RampShape ramp_shape_from_string(const std::string& s) {
  if (s == "linear") return RampShape::linear;
  if (s == "optimal") return RampShape::optimal;
  throw ValidationError("unknown ramp shape '" + s + "' (expected linear or optimal)");
}

CycleLedger quasistatic_cycle(const SzilardCycle& cycle, double ramp_time, double relaxation_rate,
                              const QuasistaticOptions& opts) {
  cycle.validate();
  if (!(ramp_time > 0.0)) throw ValidationError("ramp_time must be positive");
  if (!(relaxation_rate > 0.0)) throw ValidationError("relaxation rate must be positive");
  CycleLedger led;
  led.quasistatic_reference = w_se_faulty(cycle.E0, cycle.T, cycle.epsilon);
  if (cycle.E0 == 0.0) return led;
  led.correct = run_branch(1.0 - cycle.epsilon, true, cycle, ramp_time, relaxation_rate, opts, led.stats);
  if (cycle.epsilon > 0.0)
    led.faulty = run_branch(cycle.epsilon, false, cycle, ramp_time, relaxation_rate, opts, led.stats);
  for (const BranchLedger* b : {&led.correct, &led.faulty}) {
    if (b->probability == 0.0) continue;
    led.work_extracted += b->probability * b->work_extracted;
    led.work_invested_stage_iii += b->probability * b->stages[2].work;
    for (const auto& st : b->stages) {
      led.heat_absorbed += b->probability * st.heat;
      led.energy_change += b->probability * st.energy_change;
    }
    led.closure_error = std::max(led.closure_error, b->closure_error);
  }
  return led;
}

}  // namespace sosim
