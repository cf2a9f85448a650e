#pragma once

#include <string>
#include <vector>

#include "sosim/ode.hpp"

namespace sosim {

/// TLS engine with H(t) = (E₀/2)(f² I − f σ³), bath temperature T and
/// measurement error probability ε.
struct SzilardCycle {
  double T = 1.0;
  double E0 = 1.0;
  double epsilon = 0.0;

  void validate() const;
};

/// T[ln2 − ln(e^{−E₀/T} + 1)].
double w_se(double E0, double T);
/// w_se(E₀, T) − εE₀.
double w_se_faulty(double E0, double T, double epsilon);

/// −ε ln ε − (1 − ε) ln(1 − ε), with S(0) = 0.
double binary_entropy(double epsilon);

struct FaultyOptimum {
  double E0_star = 0.0;        // numeric maximizer; +inf when unbounded
  double work = 0.0;           // numeric maximum
  double E0_closed = 0.0;      // T ln((1 − ε)/ε)
  double work_closed = 0.0;    // T[ln2 − S(ε)]
  bool unbounded = false;      // ε = 0: work saturates as E₀ → ∞
};

/// Golden-section maximum of w_se_faulty over E₀ ∈ [0, 60T].
FaultyOptimum w_se_max(double epsilon, double T);

/// η(ε) = (T/Θ)(ln2 − S(ε))/(−ln ε).
double efficiency(double epsilon, double T, double theta);

struct EfficiencyOptimum {
  double eps_bar = 0.0;
  double eta_bar = 0.0;
  int evaluations = 0;
};

/// 64-point log grid on ε ∈ (10⁻⁶, ½ − 10⁻⁶), then golden-section refinement.
EfficiencyOptimum maximize_efficiency(double T, double theta);

enum class RampShape { linear, optimal };
std::string to_string(RampShape s);
RampShape ramp_shape_from_string(const std::string& s);

struct StageEntry {
  std::string name;
  double work = 0.0;  // work done on the TLS
  double heat = 0.0;  // heat absorbed from the bath
  double energy_change = 0.0;
};

struct BranchLedger {
  double probability = 0.0;
  double work_extracted = 0.0;  // −(total work done on the TLS)
  double closure_error = 0.0;   // |ΔE − W − Q| over step iv
  std::vector<StageEntry> stages;
};

struct CycleLedger {
  double work_extracted = 0.0;  // expectation over measurement outcomes
  double work_invested_stage_iii = 0.0;
  double heat_absorbed = 0.0;
  double energy_change = 0.0;
  double closure_error = 0.0;   // worst branch
  double quasistatic_reference = 0.0;  // w_se_faulty(E₀, T, ε)
  BranchLedger correct;
  BranchLedger faulty;
  OdeStats stats;
};

struct QuasistaticOptions {
  RampShape shape = RampShape::optimal;
  OdeOptions ode{1e-11, 1e-13};
};

/// Steps i–iv of the cycle with step iv driven over `ramp_time` while the TLS
/// relaxes by the detailed-balance population equation (down r, up r e^{−ΔE/T}).
/// The "optimal" ramp moves at constant thermodynamic speed.
CycleLedger quasistatic_cycle(const SzilardCycle& cycle, double ramp_time, double relaxation_rate,
                              const QuasistaticOptions& opts = {});

}  // namespace sosim
