#pragma once

#include <span>
#include <string>
#include <vector>

#include "sosim/fock.hpp"
#include "sosim/sos_model.hpp"
#include "sosim/types.hpp"

namespace sosim {

/// amp · |μ; α⟩⟨β; ν| with normalized coherent states.
struct Rank1Block {
  int mu = 1;
  int nu = 1;
  cplx alpha{};
  cplx beta{};
  cplx amp{1.0, 0.0};

  /// The Hermitian-conjugate block amp̄ |ν; β⟩⟨α; μ|.
  Rank1Block adjoint() const { return {nu, mu, beta, alpha, std::conj(amp)}; }
};

/// One term c |μ; α⟩ of a superposition of spin–coherent product states.
struct CoherentComponent {
  int mu = 1;
  cplx alpha{};
  cplx coeff{1.0, 0.0};
};

/// Blocks of |ψ⟩⟨ψ| for |ψ⟩ = Σ c_k |μ_k; α_k⟩, normalized to unit trace.
std::vector<Rank1Block> blocks_from_superposition(std::span<const CoherentComponent> psi);

/// Classical trajectory μD + (α₀ − μD) e^{−(iω₀ + γ_net/2)t}.
cplx alpha_trajectory(int mu, cplx alpha0, double t, const SosParams& p);

/// Full complex log-amplitude gained by a block over time t at T = 0:
/// (e^{−γt} − 1)[½|α−μD|² + ½|β−νD|² − (α−μD)(β̄−νD)] plus the phase
/// i[νD Im(β_ν(t) − β) − μD Im(α_μ(t) − α)] picked up because the two sides
/// relax towards different displaced frames.
cplx phi_factor(const Rank1Block& block, double t, const SosParams& p);

/// Zero-temperature propagator of a rank-1 block. Throws UnsupportedRegime
/// for T > 0.
Rank1Block propagate_rank1(const Rank1Block& block, double t, const SosParams& p);

/// Dense spin ⊗ oscillator matrix Σ amp |μ; α⟩⟨β; ν|.
Matrix assemble_blocks(std::span<const Rank1Block> blocks, const FockRep& rep);

/// e^{−4D²}.
double epsilon_zero_t(double D);
/// exp{−4D² tanh(ω₀/2T)}; reduces to e^{−4D²} at T = 0.
double epsilon_finite_t(double D, double omega0, double T);
/// W̄ = Θ ln(1/ε). Throws ValidationError for ε ∉ (0, 1].
double min_work(double epsilon, double theta);

/// e^{−2D²} L_k(4D²): eigenvalues of B̂₀ on the dressed number states.
RealVector b0_dressed_diagonal(double D, int n);

/// B̂₀ = e^{−2D²} Σ (−1)ⁿ (2D)²ⁿ/(n!)² (b†)ⁿ bⁿ on spin ⊗ oscillator.
Matrix b0_operator(const SosParams& p, const FockRep& rep);

/// B̂₀τ¹, the Hermitian coupling of the zero-frequency tunneling term.
Matrix tunneling_coupling(const SosParams& p, const FockRep& rep);

/// ⟨W(α)⟩ in the oscillator Gibbs state: exp{−½|α|² coth(ω₀/2T)}.
double thermal_weyl_average(cplx alpha, double omega0, double T);

enum class TunnelingRegime { zero_t, finite_t_exact, finite_t_leading };
std::string to_string(TunnelingRegime r);

struct TunnelingResult {
  double rate = 0.0;                  // primary value for `regime`
  double rate_leading = 0.0;          // ½G₁(0) e^{−W̄/Θ′}
  double rate_uncorrected = 0.0;      // Bessel form with the 1/(1−q) Weyl average
  double exponent_temperature = 0.0;  // Θ′
  TunnelingRegime regime = TunnelingRegime::zero_t;
};

/// ½G₁(0) e^{−4D²}.
TunnelingResult tunneling_rate_zero_t(const SosParams& p);

/// ½G₁(0) ⟨V̂₀²⟩_T with ⟨V̂₀²⟩_T = e^{−a} I₀(c),
/// a = 4D² coth(ω₀/2T), c = 8D² e^{−ω₀/2T}/(1 − e^{−ω₀/2T·2}).
TunnelingResult tunneling_rate_finite_t(const SosParams& p);

/// ln ⟨V̂₀²⟩_T, overflow-safe.
double log_v0_squared_thermal(double D, double omega0, double T);

}  // namespace sosim
