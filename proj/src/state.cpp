#include "sosim/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sosim/errors.hpp"

namespace sosim {

std::string to_string(Subsystem s) {
  switch (s) {
    case Subsystem::observed: return "observed";
    case Subsystem::spin: return "spin";
    case Subsystem::oscillator: return "oscillator";
  }
  return "unknown";
}

QuantumState::QuantumState(Matrix rho, std::vector<Subsystem> parts, std::vector<int> dims)
    : rho_(std::move(rho)), parts_(std::move(parts)), dims_(std::move(dims)) {
  if (parts_.size() != dims_.size() || parts_.empty())
    throw InvalidState("state layout: parts and dims must be non-empty and of equal length");
  if (rho_.rows() != rho_.cols()) throw InvalidState("state matrix is not square");
  const long prod = std::accumulate(dims_.begin(), dims_.end(), 1L, std::multiplies<>());
  if (prod != rho_.rows())
    throw InvalidState("state dimension " + std::to_string(rho_.rows()) +
                       " does not match factor dimensions (product " + std::to_string(prod) + ")");
  for (std::size_t i = 0; i < parts_.size(); ++i)
    for (std::size_t j = i + 1; j < parts_.size(); ++j)
      if (parts_[i] == parts_[j]) throw InvalidState("duplicate subsystem tag in state layout");
}

QuantumState QuantumState::oscillator(Matrix rho) {
  const int n = static_cast<int>(rho.rows());
  return QuantumState(std::move(rho), {Subsystem::oscillator}, {n});
}

QuantumState QuantumState::spin_oscillator(Matrix rho, int fock_dim) {
  return QuantumState(std::move(rho), {Subsystem::spin, Subsystem::oscillator}, {2, fock_dim});
}

QuantumState QuantumState::pure(const Vector& psi, std::vector<Subsystem> parts,
                                std::vector<int> dims) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw InvalidState("zero state vector");
  Matrix rho = psi * psi.adjoint() / n2;
  return QuantumState(std::move(rho), std::move(parts), std::move(dims));
}

bool QuantumState::has(Subsystem s) const {
  return std::find(parts_.begin(), parts_.end(), s) != parts_.end();
}

int QuantumState::factor_dim(Subsystem s) const {
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i] == s) return dims_[i];
  throw InvalidState("state has no " + to_string(s) + " factor");
}

bool QuantumState::same_layout(const QuantumState& other) const {
  return parts_ == other.parts_ && dims_ == other.dims_;
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

StateDiagnostics QuantumState::diagnostics() const {
  StateDiagnostics d;
  d.trace_deviation = std::abs(rho_.trace() - cplx(1.0, 0.0));
  d.hermiticity_defect = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  const Matrix h = 0.5 * (rho_ + rho_.adjoint());
  d.min_eigenvalue = min_eigenvalue(h);
  return d;
}

void QuantumState::check(double herm_tol, double trace_tol, double psd_tol) const {
  const auto d = diagnostics();
  if (d.hermiticity_defect > herm_tol)
    throw InvalidState("state is not Hermitian (defect " + std::to_string(d.hermiticity_defect) + ")");
  if (d.trace_deviation > trace_tol)
    throw InvalidState("state trace deviates from 1 by " + std::to_string(d.trace_deviation));
  if (d.min_eigenvalue < -psd_tol)
    throw InvalidState("state has negative eigenvalue " + std::to_string(d.min_eigenvalue));
}

QuantumState partial_trace(const QuantumState& state, std::span<const Subsystem> keep) {
  const auto& parts = state.parts();
  const auto& dims = state.dims();
  std::vector<bool> kept(parts.size(), false);
  for (Subsystem s : keep) {
    auto it = std::find(parts.begin(), parts.end(), s);
    if (it == parts.end())
      throw ValidationError("partial_trace: state has no " + to_string(s) + " factor");
    kept[static_cast<std::size_t>(it - parts.begin())] = true;
  }

  std::vector<Subsystem> out_parts;
  std::vector<int> out_dims;
  for (std::size_t k = 0; k < parts.size(); ++k)
    if (kept[k]) {
      out_parts.push_back(parts[k]);
      out_dims.push_back(dims[k]);
    }
  if (out_parts.empty()) throw ValidationError("partial_trace: nothing to keep");

  // Split every composite index into (kept, traced) mixed-radix parts.
  const int n = state.dim();
  std::vector<int> kidx(n), tidx(n);
  for (int i = 0; i < n; ++i) {
    int rem = i, kv = 0, tv = 0, kstride = 1, tstride = 1;
    for (int k = static_cast<int>(parts.size()) - 1; k >= 0; --k) {
      const int digit = rem % dims[k];
      rem /= dims[k];
      if (kept[k]) {
        kv += digit * kstride;
        kstride *= dims[k];
      } else {
        tv += digit * tstride;
        tstride *= dims[k];
      }
    }
    kidx[i] = kv;
    tidx[i] = tv;
  }
  const int m = std::accumulate(out_dims.begin(), out_dims.end(), 1, std::multiplies<>());
  Matrix out = Matrix::Zero(m, m);
  const Matrix& rho = state.matrix();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += rho(i, j);
  return QuantumState(std::move(out), std::move(out_parts), std::move(out_dims));
}

QuantumState partial_trace(const QuantumState& state, Subsystem keep) {
  const Subsystem k[] = {keep};
  return partial_trace(state, std::span<const Subsystem>(k));
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("trace_distance: dimension mismatch");
  const Matrix d = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (!a.same_layout(b)) throw ValidationError("trace_distance: states live on different spaces");
  return trace_distance(a.matrix(), b.matrix());
}

Matrix sqrtm_psd(const Matrix& m, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -clamp_tol)
      throw InvalidState("matrix square root: eigenvalue " + std::to_string(ev(i)) +
                         " below clamp tolerance");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double uhlmann_fidelity(const QuantumState& rho, const QuantumState& sigma) {
  if (!rho.same_layout(sigma)) throw ValidationError("uhlmann_fidelity: states live on different spaces");
  const Matrix sr = sqrtm_psd(rho.matrix());
  const Matrix ss = sqrtm_psd(sigma.matrix());
  // ‖√ρ√σ‖₁ equals Tr√(√ρσ√ρ); singular values avoid square roots of
  // roundoff-level eigenvalues.
  Eigen::BDCSVD<Matrix> svd(sr * ss);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace sosim
