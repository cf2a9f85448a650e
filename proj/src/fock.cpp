#include "sosim/fock.hpp"

#include <algorithm>
#include <cmath>

#include "sosim/errors.hpp"

namespace sosim {
namespace {

Matrix lowering(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

}  // namespace

FockRep::FockRep(int dim, int pad) : dim_(dim), pad_(pad < 0 ? std::max(24, dim / 2) : pad) {
  if (dim < 2) throw InvalidRepresentation("Fock dimension must be at least 2, got " + std::to_string(dim));
  a_ = lowering(dim_);
  adag_ = a_.adjoint();
  num_ = adag_ * a_;
}

double boltzmann_factor(double omega0, double T) {
  if (T <= 0.0) return 0.0;
  return std::exp(-omega0 / T);
}

double bose_occupation(double omega0, double T) {
  if (T <= 0.0) return 0.0;
  return 1.0 / std::expm1(omega0 / T);
}

Vector coherent_vector(cplx alpha, const FockRep& rep, double tol) {
  const int n = rep.dim();
  Vector v(n);
  const double r = std::abs(alpha);
  const double phase = std::arg(alpha);
  for (int k = 0; k < n; ++k) {
    if (r == 0.0) {
      v(k) = (k == 0) ? cplx(1.0) : cplx(0.0);
      continue;
    }
    const double logmag = -0.5 * r * r + k * std::log(r) - 0.5 * std::lgamma(k + 1.0);
    v(k) = std::polar(std::exp(logmag), k * phase);
  }
  const double deficit = 1.0 - v.squaredNorm();
  if (deficit > tol) throw TruncationError("coherent vector does not fit the Fock truncation", deficit);
  return v;
}

Matrix expm_hermitian_phase(const Matrix& generator) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (generator + generator.adjoint()));
  const RealVector& lam = es.eigenvalues();
  Vector ph(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) ph(i) = std::polar(1.0, -lam(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix weyl_operator(cplx alpha, const FockRep& rep) {
  const int w = rep.work_dim();
  const Matrix a = lowering(w);
  // exp{αa − ᾱa†} = exp{−iK} with K = i(αa − ᾱa†) Hermitian.
  const Matrix k = kI * (alpha * a - std::conj(alpha) * a.adjoint());
  return expm_hermitian_phase(k).topLeftCorner(rep.dim(), rep.dim());
}

Matrix displacement(cplx z, const FockRep& rep) { return weyl_operator(-std::conj(z), rep); }

QuantumState coherent_state(cplx alpha, const FockRep& rep, double tol) {
  Vector v = coherent_vector(alpha, rep, tol);
  v.normalize();
  return QuantumState::oscillator(v * v.adjoint());
}

QuantumState displaced_thermal_state(const DisplacedThermal& spec, const FockRep& rep, double tol) {
  if (spec.omega0 <= 0.0) throw ValidationError("displaced thermal state: omega0 must be positive");
  if (spec.T < 0.0) throw ValidationError("displaced thermal state: T must be non-negative");
  if (spec.T == 0.0) return coherent_state(spec.alpha, rep, tol);

  const double q = boltzmann_factor(spec.omega0, spec.T);
  const double beta_w = spec.omega0 / spec.T;
  const int w = rep.work_dim();
  const Matrix a = lowering(w);
  const Matrix shifted = a - spec.alpha * Matrix::Identity(w, w);
  const Matrix k = shifted.adjoint() * shifted;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()));
  RealVector weights(w);
  for (int i = 0; i < w; ++i) weights(i) = (1.0 - q) * std::exp(-beta_w * es.eigenvalues()(i));
  const Matrix full = es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().adjoint();
  Matrix rho = full.topLeftCorner(rep.dim(), rep.dim());
  const double tr = rho.trace().real();
  const double deficit = 1.0 - tr;
  if (deficit > tol) throw TruncationError("displaced thermal state does not fit the Fock truncation", deficit);
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::oscillator(std::move(rho));
}

int FockRep::auto_dim(double alpha_max, double omega0, double T, double tol) {
  const double nbar = bose_occupation(omega0, T);
  const double reach = std::abs(alpha_max) + 4.0 * std::sqrt(nbar + 1.0);
  int n = static_cast<int>(std::ceil(reach * reach)) + 8;
  for (;; n += 4) {
    try {
      FockRep rep(n);
      (void)displaced_thermal_state({cplx(std::abs(alpha_max), 0.0), omega0, T}, rep, tol);
      return n;
    } catch (const TruncationError&) {
      if (n > 4096) throw;
    }
  }
}

}  // namespace sosim
