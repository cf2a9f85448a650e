#pragma once

#include "sosim/state.hpp"
#include "sosim/types.hpp"

namespace sosim {

/// Truncated oscillator basis {|0⟩,…,|N−1⟩}.
///
/// Operator functions (Weyl operators, displaced Gibbs states) are evaluated
/// in a padded basis of `work_dim()` levels and then cropped to `dim()`, which
/// keeps the low-lying matrix elements free of the truncation edge.
class FockRep {
 public:
  explicit FockRep(int dim, int pad = -1);

  int dim() const noexcept { return dim_; }
  int pad() const noexcept { return pad_; }
  int work_dim() const noexcept { return dim_ + pad_; }

  const Matrix& a() const noexcept { return a_; }
  const Matrix& adag() const noexcept { return adag_; }
  const Matrix& number() const noexcept { return num_; }
  Matrix identity() const { return Matrix::Identity(dim_, dim_); }

  /// Smallest dimension satisfying the default truncation rule for states
  /// displaced by up to `alpha_max` at temperature `T`.
  static int auto_dim(double alpha_max, double omega0, double T, double tol = 1e-9);

 private:
  int dim_;
  int pad_;
  Matrix a_, adag_, num_;
};

/// q = e^{−ω₀/T}, exactly 0 at T = 0.
double boltzmann_factor(double omega0, double T);
/// n̄ = 1/(e^{ω₀/T} − 1), 0 at T = 0.
double bose_occupation(double omega0, double T);

/// Fock amplitudes e^{−|α|²/2} αⁿ/√n! (not renormalized).
/// Throws TruncationError when 1 − ‖v‖² exceeds `tol`.
Vector coherent_vector(cplx alpha, const FockRep& rep, double tol = 1e-9);

/// W(α) = exp{α a − ᾱ a†}. Note W(α) = D(−ᾱ) for the usual displacement
/// D(z) = exp{z a† − z̄ a}, so W(α)|0⟩ = |−ᾱ⟩.
Matrix weyl_operator(cplx alpha, const FockRep& rep);

/// D(z) = exp{z a† − z̄ a}.
Matrix displacement(cplx z, const FockRep& rep);

/// Unitary exp{−i·generator} for a Hermitian generator, by eigendecomposition.
Matrix expm_hermitian_phase(const Matrix& generator);

struct DisplacedThermal {
  cplx alpha;
  double omega0 = 1.0;
  double T = 0.0;
};

/// (1−q) exp{−(ω₀/T)(a†−ᾱ)(a−α)}, renormalized after cropping.
/// At T = 0 this is |α⟩⟨α|.
QuantumState displaced_thermal_state(const DisplacedThermal& spec, const FockRep& rep,
                                     double tol = 1e-9);

QuantumState coherent_state(cplx alpha, const FockRep& rep, double tol = 1e-9);

}  // namespace sosim
