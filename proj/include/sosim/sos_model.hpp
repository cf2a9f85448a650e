#pragma once

#include <json.hpp>

#include "sosim/fock.hpp"
#include "sosim/types.hpp"

namespace sosim {

/// Physical parameters of the spin–oscillator memory, in units ħ = k_B = 1.
///
/// The environment enters only through four spectral values:
/// G_o(ω₀), G_o(0), G_3(0) and G_1(0). Upward rates follow from detailed
/// balance, so only downward rates are supplied.
struct SosParams {
  double omega0 = 1.0;
  double D = 1.0;
  double T = 0.0;
  double g_o_at_omega0 = 0.5;
  double g_o_at_0 = 0.05;
  double g_3_at_0 = 0.05;
  double g_1_at_0 = 0.02;

  void validate() const;

  static SosParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct DerivedRates {
  double gamma = 0.0;        // dissipation rate G_o(ω₀)
  double gamma_up = 0.0;     // γ e^{−ω₀/T}
  double gamma_net = 0.0;    // γ (1 − e^{−ω₀/T})
  double big_gamma = 0.0;    // pure decoherence 4D²G_o(0) + G_3(0)
  double w_bar = 0.0;        // 2D²ω₀
  double theta = 0.0;        // noise temperature
  double theta_prime = 0.0;  // tunneling noise temperature
  double epsilon = 0.0;      // exp{−W̄/Θ}
};

DerivedRates derive_rates(const SosParams& p);

/// Θ = ω₀/(e^{ω₀/T} − 1) + ω₀/2.
double noise_temperature(double omega0, double T);

/// Θ′ = (ω₀/2)(1 − q)/(1 − √(1 − (1 − q)²)), q = e^{−ω₀/T}.
double tunneling_noise_temperature(double omega0, double T);

// Operators on spin ⊗ oscillator; spin index 0 is σ³ = +1.
Matrix spin_identity_op(const FockRep& rep);
Matrix sigma3_op(const FockRep& rep);
Matrix sigma1_op(const FockRep& rep);

/// b = a − Dσ³.
Matrix dressed_lowering(const SosParams& p, const FockRep& rep);

/// H = ω₀(a† − Dσ³)(a − Dσ³). Throws InvalidRepresentation for dim < 2.
Matrix sos_hamiltonian(const SosParams& p, const FockRep& rep);

/// U = exp{D(a − a†)σ³}, block diagonal in the spin.
Matrix dressing_unitary(const SosParams& p, const FockRep& rep);

/// Σ_μ |μ⟩⟨μ| ⊗ D(μD) f(a†a) D(μD)†: a diagonal function of the dressed
/// number operator b†b, mapped back to the bare basis.
Matrix dressed_diagonal_function(const SosParams& p, const FockRep& rep, const RealVector& values);

/// |Ω_μ⟩ = |μ⟩|μD⟩.
Vector ground_state(int mu, const SosParams& p, const FockRep& rep);

/// ρ^(μ) = |μ⟩⟨μ| ⊗ (1 − q) e^{−(ω₀/T)(a† − μD)(a − μD)}.
QuantumState biased_gibbs_state(int mu, const SosParams& p, const FockRep& rep, double tol = 1e-9);

}  // namespace sosim
