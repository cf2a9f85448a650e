#include "sosim/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "sosim/analytic.hpp"
#include "sosim/errors.hpp"

namespace sosim {
namespace {

SparseMatrix to_sparse(const Matrix& m, double prune = 1e-15) {
  const double cut = prune * std::max(1.0, m.cwiseAbs().maxCoeff());
  SparseMatrix s = m.sparseView(1.0, cut);
  s.makeCompressed();
  return s;
}

void check_square(const Matrix& m, int n, const std::string& what) {
  if (m.rows() != n || m.cols() != n)
    throw InvalidRepresentation(what + ": operator shape does not match the Hamiltonian");
  if (!m.allFinite()) throw ValidationError(what + ": operator has non-finite entries");
}

}  // namespace

void GeneratorSpec::validate() const {
  const int n = system_dim();
  if (n < 1) throw InvalidRepresentation("generator: empty Hamiltonian");
  check_square(hamiltonian, n, "hamiltonian");
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, hamiltonian.norm()))
    throw ValidationError("generator: Hamiltonian is not Hermitian");
  for (const auto& j : jumps) {
    check_square(j.op, n, "jump '" + j.label + "'");
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) throw ValidationError("jump '" + j.label + "': bad rate");
  }
  for (const auto& d : dephasing) {
    check_square(d.op, n, "dephasing '" + d.label + "'");
    if (!(d.rate >= 0.0) || !std::isfinite(d.rate))
      throw ValidationError("dephasing '" + d.label + "': bad rate");
    if ((d.op - d.op.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, d.op.norm()))
      throw ValidationError("dephasing '" + d.label + "': operator is not Hermitian");
  }
  if (spectator_dim < 1) throw InvalidRepresentation("generator: spectator_dim must be ≥ 1");
}

OperatorKernel::OperatorKernel(const Matrix& m, int max_diagonals) : dim_(static_cast<int>(m.rows())) {
  const double cut = 1e-15 * std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int k = -(dim_ - 1); k < dim_; ++k) {
    const Vector d = m.diagonal(k);
    if (d.cwiseAbs().maxCoeff() <= cut) continue;
    diagonals_.emplace_back(k, d);
    if (static_cast<int>(diagonals_.size()) > max_diagonals) break;
  }
  banded_ = static_cast<int>(diagonals_.size()) <= max_diagonals;
  if (!banded_) {
    diagonals_.clear();
    sparse_ = to_sparse(m);
  }
}

void OperatorKernel::apply(const Matrix& x, Matrix& y) const {
  if (!banded_) {
    y.noalias() = sparse_ * x;
    return;
  }
  y.setZero(dim_, x.cols());
  for (const auto& [k, d] : diagonals_) {
    const int len = dim_ - std::abs(k);
    // y_i += M_{i,i+k} x_{i+k}
    if (k >= 0)
      y.topRows(len).noalias() += d.asDiagonal() * x.bottomRows(len);
    else
      y.bottomRows(len).noalias() += d.asDiagonal() * x.topRows(len);
  }
}

Generator::Generator(const GeneratorSpec& spec) : dim_(spec.system_dim()), spectator_(spec.spectator_dim) {
  spec.validate();
  // −½r[A,[A,ρ]] = r(AρA − ½{A², ρ}) for Hermitian A, so dephasing is a jump.
  Matrix decay = Matrix::Zero(dim_, dim_);
  diag_weight_ = Matrix::Zero(dim_, dim_);
  auto add = [&](const ChannelTerm& c) {
    if (c.rate == 0.0 || c.op.cwiseAbs().maxCoeff() == 0.0) return;
    decay.noalias() += c.rate * (c.op.adjoint() * c.op);
    const bool diagonal = (c.op - Matrix(c.op.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) {
      // L x L† for diagonal L is an entrywise product with d d†.
      const Vector d = c.op.diagonal();
      diag_weight_ += c.rate * (d * d.adjoint());
      has_diag_ = true;
    } else {
      jumps_.push_back({OperatorKernel(c.op), c.rate});
    }
  };
  for (const auto& c : spec.jumps) add(c);
  for (const auto& c : spec.dephasing) add(c);
  heff_ = OperatorKernel(spec.hamiltonian - cplx(0.0, 0.5) * decay);
}

void Generator::apply_block(const Matrix& x, bool hermitian, Matrix& out) const {
  // ℒx = −i(H_eff x − x H_eff†) + Σ r L x L†, with every product taken from
  // the left: x S† = (S x†)†.
  Matrix hx, tmp;
  heff_.apply(x, hx);
  if (hermitian) {
    out = -kI * hx + kI * hx.adjoint();
  } else {
    heff_.apply(x.adjoint(), tmp);
    out = -kI * hx + kI * tmp.adjoint();
  }
  if (has_diag_) out += diag_weight_.cwiseProduct(x);
  Matrix lx, llx;
  for (const auto& j : jumps_) {
    j.op.apply(x, lx);
    j.op.apply(lx.adjoint(), llx);
    out += j.rate * llx.adjoint();
  }
}

Matrix Generator::apply(const Matrix& x) const {
  const int n = total_dim();
  if (x.rows() != n || x.cols() != n) throw InvalidRepresentation("generator: operand has the wrong shape");
  Matrix out(n, n);
  for (int i = 0; i < spectator_; ++i)
    for (int j = 0; j < spectator_; ++j) {
      Matrix blk;
      apply_block(x.block(i * dim_, j * dim_, dim_, dim_), false, blk);
      out.block(i * dim_, j * dim_, dim_, dim_) = blk;
    }
  return out;
}

void Generator::apply_hermitian(const Matrix& rho, Matrix& out) const {
  const int n = total_dim();
  out.resize(n, n);
  for (int i = 0; i < spectator_; ++i) {
    for (int j = i; j < spectator_; ++j) {
      Matrix blk;
      apply_block(rho.block(i * dim_, j * dim_, dim_, dim_), i == j, blk);
      out.block(i * dim_, j * dim_, dim_, dim_) = blk;
      if (j != i) out.block(j * dim_, i * dim_, dim_, dim_) = blk.adjoint();
    }
  }
}

GeneratorSpec build_sos_generator(const SosParams& p, const FockRep& rep, const SosGeneratorOptions& opts) {
  p.validate();
  const DerivedRates r = derive_rates(p);
  GeneratorSpec spec;
  spec.hamiltonian = sos_hamiltonian(p, rep);
  const Matrix b = dressed_lowering(p, rep);
  spec.jumps.push_back({b, r.gamma, "b"});
  if (r.gamma_up > 0.0) spec.jumps.push_back({b.adjoint(), r.gamma_up, "b_dag"});
  spec.dephasing.push_back({sigma3_op(rep), r.big_gamma, "sigma3"});
  // Half of G₁(0): the initial flow out of Ω₋ is then ½G₁(0)⟨B̂₀²⟩.
  if (opts.include_tunneling && p.g_1_at_0 > 0.0)
    spec.dephasing.push_back({tunneling_coupling(p, rep), 0.5 * p.g_1_at_0, "tunneling"});
  spec.spectator_dim = opts.spectator_dim;
  return spec;
}

Trajectory evolve(const GeneratorSpec& spec, const QuantumState& rho0, std::span<const double> grid,
                  const EvolveOptions& opts) {
  return evolve(Generator(spec), rho0, grid, opts);
}

Trajectory evolve(const Generator& gen, const QuantumState& rho0, std::span<const double> grid,
                  const EvolveOptions& opts) {
  if (rho0.dim() != gen.total_dim()) throw InvalidRepresentation("evolve: state dimension does not match the generator");
  if (grid.empty()) throw ValidationError("evolve: empty time grid");
  if (grid.front() != 0.0) throw ValidationError("evolve: time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("evolve: time grid must be strictly increasing");

  Trajectory traj;
  Matrix y = rho0.matrix();
  auto record = [&](double t) {
    QuantumState s(y, rho0.parts(), rho0.dims());
    traj.times.push_back(t);
    if (opts.monitor) {
      const auto d = s.diagnostics();
      traj.max_trace_drift = std::max(traj.max_trace_drift, d.trace_deviation);
      traj.min_eigenvalue = traj.diagnostics.empty() ? d.min_eigenvalue : std::min(traj.min_eigenvalue, d.min_eigenvalue);
      traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, d.hermiticity_defect);
      traj.diagnostics.push_back(d);
      if (d.min_eigenvalue < -opts.positivity_abort)
        throw IntegrationFailure("evolve: state lost positivity at t = " + std::to_string(t) +
                                 " (min eigenvalue " + std::to_string(d.min_eigenvalue) + ")");
    }
    traj.states.push_back(std::move(s));
  };
  record(0.0);
  auto rhs = [&](double, const Matrix& x, Matrix& dx) { gen.apply_hermitian(x, dx); };
  auto symmetrize = [](double, Matrix& x) { x = 0.5 * (x + x.adjoint()).eval(); };
  for (std::size_t i = 1; i < grid.size(); ++i) {
    dopri5_integrate(rhs, grid[i - 1], grid[i], y, opts.ode, traj.stats, symmetrize);
    record(grid[i]);
  }
  return traj;
}

double initial_spin_flow(const GeneratorSpec& spec, const QuantumState& rho0) {
  const Generator gen(spec);
  if (rho0.dim() != gen.total_dim()) throw InvalidRepresentation("initial_spin_flow: dimension mismatch");
  if (!rho0.has(Subsystem::spin)) throw InvalidState("initial_spin_flow: state has no spin factor");
  // τ³ is diagonal with sign set by the spin digit of the composite index.
  int inner = 1;
  bool after = false;
  int spin_dim = 2;
  for (std::size_t k = 0; k < rho0.parts().size(); ++k) {
    if (after) inner *= rho0.dims()[k];
    if (rho0.parts()[k] == Subsystem::spin) {
      after = true;
      spin_dim = rho0.dims()[k];
    }
  }
  auto tau3 = [&](int i) { return ((i / inner) % spin_dim) == 0 ? 1.0 : -1.0; };
  const Matrix drho = gen.apply(rho0.matrix());
  double pol = 0.0, flow = 0.0;
  for (int i = 0; i < rho0.dim(); ++i) {
    pol += tau3(i) * rho0.matrix()(i, i).real();
    flow += tau3(i) * drho(i, i).real();
  }
  const double s = pol >= 0.0 ? 1.0 : -1.0;
  return -0.5 * s * flow;
}

Matrix fourier_component(const std::function<Matrix(double)>& family, int m, double omega0, int samples,
                         double alias_tol) {
  if (samples < 2) throw ValidationError("fourier_component: need at least 2 samples");
  if (!(omega0 > 0.0)) throw ValidationError("fourier_component: omega0 must be positive");
  const double period = 2.0 * kPi / omega0;
  auto trapezoid = [&](int n) {
    Matrix acc;
    for (int k = 0; k < n; ++k) {
      const double t = period * k / n;
      const Matrix v = family(t);
      const cplx w = std::polar(1.0 / n, -m * omega0 * t);
      if (k == 0)
        acc = w * v;
      else
        acc += w * v;
    }
    return acc;
  };
  const Matrix coarse = trapezoid(samples);
  const Matrix fine = trapezoid(2 * samples);
  const double change = (fine - coarse).cwiseAbs().maxCoeff();
  if (change > alias_tol)
    throw NumericalError("fourier_component: sampling not converged (change " + std::to_string(change) + ")");
  return fine;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw ValidationError("linspace: count must be ≥ 1");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ValidationError("logspace: bounds must be positive");
  auto v = linspace(std::log(lo), std::log(hi), count);
  for (auto& x : v) x = std::exp(x);
  if (count > 1) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

}  // namespace sosim
