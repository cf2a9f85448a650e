#pragma once

#include <string>
#include <vector>

#include "sosim/fock.hpp"
#include "sosim/lindblad.hpp"
#include "sosim/sos_model.hpp"
#include "sosim/state.hpp"

namespace sosim {

/// Two-level observed system c₋|φ₋⟩ + c₊|φ₊⟩. Basis index 0 is φ₊, 1 is φ₋.
struct ObservedSystem {
  cplx c_minus{};
  cplx c_plus{1.0, 0.0};

  void validate() const;
  Vector ket() const;
};

/// Instantaneous CNOT: I ⊗ P₊ + (−iσ¹) ⊗ P₋ acting on the observed ⊗ SOS
/// product. A warning is appended when the SOS input is not a "+" pointer.
QuantumState cnot_pulse(const ObservedSystem& system, const QuantumState& sos_state,
                        std::vector<std::string>* warnings = nullptr);

struct StageTimes {
  double t_M = 0.0;
  double t_D = 0.0;  // 1/Γ
  double t_R = 0.0;  // 1/γ
  double t_E = 0.0;  // 1/Γ_tun
  bool ordering_applicable = false;
  bool ordering_holds = false;
};

StageTimes stage_times(const SosParams& p);

struct ProtocolOptions {
  double horizon = 0.0;    // 0 picks 20/γ_net
  int samples = 41;        // output grid points over [0, horizon]
  double state_tol = 1e-9; // truncation tolerance for pointer states
  EvolveOptions evolve{};
};

struct PointerSample {
  double t = 0.0;
  cplx displacement{};          // ⟨a⟩ of the pointer
  cplx expected_displacement{}; // |c₋|² D₋(t) + |c₊|² D
  double coherence = 0.0;       // trace norm of the observed-off-diagonal block
  double observed_deviation = 0.0;
};

struct MeasurementReport {
  double work_invested = 0.0;  // from the SOS energy before and after the pulse
  double work_expected = 0.0;  // |c₋|² 4D²ω₀
  double average_work = 0.0;   // mean over the inputs c₋ = 1 and c₋ = 0
  double p_minus = 0.0;
  double p_plus = 0.0;
  double horizon = 0.0;
  double pointer_distance = 0.0;         // to the asymptotic Born mixture
  double pointer_distance_moving = 0.0;  // to the mixture with the moving branch at D₋(t)
  double max_displacement_error = 0.0;
  double max_observed_deviation = 0.0;
  bool coherence_monotone = true;
  StageTimes stages;
  std::vector<PointerSample> samples;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_hermiticity_defect = 0.0;
  std::vector<std::string> warnings;
};

/// Pulse, then relaxation of the composite under the SOS generator (observed
/// factor static). Throws ValidationError when horizon < 10/γ_net.
MeasurementReport run_protocol(const ObservedSystem& system, const SosParams& p, const FockRep& rep,
                               const ProtocolOptions& opts = {});

}  // namespace sosim
