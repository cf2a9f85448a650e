#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sosim/fock.hpp"
#include "sosim/ode.hpp"
#include "sosim/sos_model.hpp"
#include "sosim/state.hpp"
#include "sosim/types.hpp"

namespace sosim {

/// One dissipative channel. Jumps contribute r(LρL† − ½{L†L, ρ});
/// dephasing terms contribute −½ r [A, [A, ρ]] for Hermitian A.
struct ChannelTerm {
  Matrix op;
  double rate = 0.0;
  std::string label;
};

/// Markovian generator ℒρ = −i[H, ρ] + jumps + dephasing.
///
/// `spectator_dim` > 1 means the state carries an extra passive factor in
/// front (observed ⊗ system): ℒ then acts as I ⊗ ℒ on it.
struct GeneratorSpec {
  Matrix hamiltonian;
  std::vector<ChannelTerm> jumps;
  std::vector<ChannelTerm> dephasing;
  int spectator_dim = 1;

  int system_dim() const { return static_cast<int>(hamiltonian.rows()); }
  int total_dim() const { return spectator_dim * system_dim(); }
  void validate() const;
};

/// Left multiplication by a fixed operator. Stored by its nonzero diagonals
/// when there are few of them (ladder operators and their products), else as
/// a sparse matrix.
class OperatorKernel {
 public:
  OperatorKernel() = default;
  explicit OperatorKernel(const Matrix& m, int max_diagonals = 16);

  /// y = M x
  void apply(const Matrix& x, Matrix& y) const;
  bool banded() const noexcept { return banded_; }

 private:
  int dim_ = 0;
  bool banded_ = false;
  std::vector<std::pair<int, Vector>> diagonals_;  // (offset j − i, values)
  SparseMatrix sparse_;
};

/// GeneratorSpec compiled to sparse operators for repeated application.
class Generator {
 public:
  explicit Generator(const GeneratorSpec& spec);

  int system_dim() const noexcept { return dim_; }
  int total_dim() const noexcept { return dim_ * spectator_; }

  /// ℒ applied to an arbitrary (not necessarily Hermitian) operator.
  Matrix apply(const Matrix& x) const;
  /// Same, for Hermitian input; fills only the needed spectator blocks.
  void apply_hermitian(const Matrix& rho, Matrix& out) const;

 private:
  void apply_block(const Matrix& x, bool hermitian, Matrix& out) const;

  struct Jump {
    OperatorKernel op;
    double rate;
  };
  int dim_;
  int spectator_;
  OperatorKernel heff_;
  std::vector<Jump> jumps_;
  Matrix diag_weight_;
  bool has_diag_ = false;
};

/// Which pieces of the SOS generator to assemble.
struct SosGeneratorOptions {
  bool include_tunneling = false;
  int spectator_dim = 1;
};

/// H = ω₀b†b with jumps b (γ), b† (γe^{−ω₀/T}), dephasing σ³ (Γ) and,
/// optionally, the zero-frequency tunneling term B̂₀τ¹.
GeneratorSpec build_sos_generator(const SosParams& p, const FockRep& rep,
                                  const SosGeneratorOptions& opts = {});

struct EvolveOptions {
  OdeOptions ode{};
  bool monitor = true;            // diagnostics at every output time
  double positivity_abort = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<StateDiagnostics> diagnostics;
  OdeStats stats;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_hermiticity_defect = 0.0;
};

/// Integrates dρ/dt = ℒρ from grid[0] = 0 through the ascending grid.
/// Throws IntegrationFailure on step failure or when an output state has an
/// eigenvalue below −positivity_abort.
Trajectory evolve(const Generator& gen, const QuantumState& rho0, std::span<const double> grid,
                  const EvolveOptions& opts = {});
Trajectory evolve(const GeneratorSpec& spec, const QuantumState& rho0, std::span<const double> grid,
                  const EvolveOptions& opts = {});

/// Probability flow out of the initially occupied spin sector,
/// −½ s Tr(τ³ ℒρ₀) with s = sign Tr(τ³ρ₀).
double initial_spin_flow(const GeneratorSpec& spec, const QuantumState& rho0);

/// (ω₀/2π) ∫₀^{2π/ω₀} e^{−imω₀t} V(t) dt by the periodic trapezoid rule with
/// `samples` nodes, checked against 2·samples nodes. Throws NumericalError when
/// doubling changes any entry by more than `alias_tol`.
Matrix fourier_component(const std::function<Matrix(double)>& family, int m, double omega0,
                         int samples = 256, double alias_tol = 1e-8);

std::vector<double> linspace(double lo, double hi, int count);
std::vector<double> logspace(double lo, double hi, int count);

}  // namespace sosim
