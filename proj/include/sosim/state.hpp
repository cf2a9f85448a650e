#pragma once

#include <span>
#include <string>
#include <vector>

#include "sosim/types.hpp"

namespace sosim {

/// Tensor factors a state may live on. Order in a composite follows
/// observed ⊗ spin ⊗ oscillator.
enum class Subsystem { observed, spin, oscillator };

std::string to_string(Subsystem s);

struct StateDiagnostics {
  double trace_deviation = 0.0;     // |Tr ρ − 1|
  double min_eigenvalue = 0.0;
  double hermiticity_defect = 0.0;  // max |ρ − ρ†|
};

/// Dense density matrix tagged with its tensor-factor layout.
class QuantumState {
 public:
  QuantumState(Matrix rho, std::vector<Subsystem> parts, std::vector<int> dims);

  static QuantumState oscillator(Matrix rho);
  static QuantumState spin_oscillator(Matrix rho, int fock_dim);
  static QuantumState pure(const Vector& psi, std::vector<Subsystem> parts,
                           std::vector<int> dims);

  const Matrix& matrix() const noexcept { return rho_; }
  const std::vector<Subsystem>& parts() const noexcept { return parts_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(rho_.rows()); }
  bool has(Subsystem s) const;
  int factor_dim(Subsystem s) const;
  bool same_layout(const QuantumState& other) const;

  StateDiagnostics diagnostics() const;

  /// Throws InvalidState unless Hermitian to `herm_tol`, unit trace to
  /// `trace_tol` and min eigenvalue ≥ −`psd_tol`.
  void check(double herm_tol = 1e-10, double trace_tol = 1e-8, double psd_tol = 1e-8) const;

 private:
  Matrix rho_;
  std::vector<Subsystem> parts_;
  std::vector<int> dims_;
};

/// Reduced state on the kept factors (kept in composite order).
QuantumState partial_trace(const QuantumState& state, std::span<const Subsystem> keep);
QuantumState partial_trace(const QuantumState& state, Subsystem keep);

/// ½ Σ|λ(a−b)|.
double trace_distance(const QuantumState& a, const QuantumState& b);
double trace_distance(const Matrix& a, const Matrix& b);

/// F = Tr √(√ρ σ √ρ), evaluated as the trace norm of √ρ √σ.
double uhlmann_fidelity(const QuantumState& rho, const QuantumState& sigma);

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
/// [−clamp_tol, 0) are treated as zero; anything lower throws InvalidState.
Matrix sqrtm_psd(const Matrix& m, double clamp_tol = 1e-8);

double min_eigenvalue(const Matrix& hermitian);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace sosim
