#include "sosim/sos_model.hpp"

#include <cmath>

#include "sosim/errors.hpp"

namespace sosim {
namespace {

Matrix spin_diag(const FockRep& rep, cplx up, cplx down) {
  const int n = rep.dim();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n).diagonal().setConstant(up);
  m.bottomRightCorner(n, n).diagonal().setConstant(down);
  return m;
}

void require_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0)
    throw ValidationError(std::string("SosParams.") + name + " must be finite and non-negative");
}

}  // namespace

void SosParams::validate() const {
  if (!std::isfinite(omega0) || omega0 <= 0.0) throw ValidationError("SosParams.omega0 must be positive");
  require_finite_nonneg(D, "D");
  require_finite_nonneg(T, "T");
  require_finite_nonneg(g_o_at_omega0, "G_o_omega0");
  require_finite_nonneg(g_o_at_0, "G_o_0");
  require_finite_nonneg(g_3_at_0, "G_3_0");
  require_finite_nonneg(g_1_at_0, "G_1_0");
}

SosParams SosParams::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("parameters must be a JSON object");
  SosParams p;
  auto read = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ValidationError(std::string("parameter '") + key + "' must be a number");
    dst = j.at(key).get<double>();
  };
  read("omega0", p.omega0);
  read("D", p.D);
  read("T", p.T);
  read("G_o_omega0", p.g_o_at_omega0);
  read("G_o_0", p.g_o_at_0);
  read("G_3_0", p.g_3_at_0);
  read("G_1_0", p.g_1_at_0);
  p.validate();
  return p;
}

nlohmann::json SosParams::to_json() const {
  return {{"omega0", omega0}, {"D", D},          {"T", T},          {"G_o_omega0", g_o_at_omega0},
          {"G_o_0", g_o_at_0}, {"G_3_0", g_3_at_0}, {"G_1_0", g_1_at_0}};
}

double noise_temperature(double omega0, double T) {
  return omega0 * bose_occupation(omega0, T) + 0.5 * omega0;
}

double tunneling_noise_temperature(double omega0, double T) {
  const double one_minus_q = (T > 0.0) ? -std::expm1(-omega0 / T) : 1.0;
  const double s = one_minus_q * one_minus_q;
  // 1 − √(1 − s) = s / (1 + √(1 − s))
  return 0.5 * omega0 * (1.0 + std::sqrt(1.0 - s)) / one_minus_q;
}

DerivedRates derive_rates(const SosParams& p) {
  p.validate();
  DerivedRates r;
  const double q = boltzmann_factor(p.omega0, p.T);
  r.gamma = p.g_o_at_omega0;
  r.gamma_up = r.gamma * q;
  r.gamma_net = r.gamma * (1.0 - q);
  r.big_gamma = 4.0 * p.D * p.D * p.g_o_at_0 + p.g_3_at_0;
  r.w_bar = 2.0 * p.D * p.D * p.omega0;
  r.theta = noise_temperature(p.omega0, p.T);
  r.theta_prime = tunneling_noise_temperature(p.omega0, p.T);
  r.epsilon = std::exp(-r.w_bar / r.theta);
  return r;
}

Matrix spin_identity_op(const FockRep& rep) { return Matrix::Identity(2 * rep.dim(), 2 * rep.dim()); }

Matrix sigma3_op(const FockRep& rep) { return spin_diag(rep, 1.0, -1.0); }

Matrix sigma1_op(const FockRep& rep) {
  const int n = rep.dim();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n).setIdentity();
  m.bottomLeftCorner(n, n).setIdentity();
  return m;
}

Matrix dressed_lowering(const SosParams& p, const FockRep& rep) {
  const int n = rep.dim();
  Matrix b = Matrix::Zero(2 * n, 2 * n);
  b.topLeftCorner(n, n) = rep.a();
  b.bottomRightCorner(n, n) = rep.a();
  return b - p.D * sigma3_op(rep);
}

Matrix sos_hamiltonian(const SosParams& p, const FockRep& rep) {
  if (rep.dim() < 2) throw InvalidRepresentation("SOS Hamiltonian needs Fock dimension ≥ 2");
  const Matrix b = dressed_lowering(p, rep);
  return p.omega0 * (b.adjoint() * b);
}

Matrix dressing_unitary(const SosParams& p, const FockRep& rep) {
  const int n = rep.dim();
  Matrix u = Matrix::Zero(2 * n, 2 * n);
  u.topLeftCorner(n, n) = weyl_operator(cplx(p.D, 0.0), rep);
  u.bottomRightCorner(n, n) = weyl_operator(cplx(-p.D, 0.0), rep);
  return u;
}

Matrix dressed_diagonal_function(const SosParams& p, const FockRep& rep, const RealVector& values) {
  const int n = rep.dim();
  const int w = rep.work_dim();
  if (values.size() < w) throw ValidationError("dressed_diagonal_function: need one value per padded level");
  const FockRep work(w, 0);
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  for (int s = 0; s < 2; ++s) {
    const double mu = (s == 0) ? 1.0 : -1.0;
    const Matrix d = displacement(cplx(mu * p.D, 0.0), work);
    const Matrix f = d * values.head(w).cast<cplx>().asDiagonal() * d.adjoint();
    out.block(s * n, s * n, n, n) = f.topLeftCorner(n, n);
  }
  return out;
}

Vector ground_state(int mu, const SosParams& p, const FockRep& rep) {
  if (mu != 1 && mu != -1) throw ValidationError("spin label must be +1 or -1");
  const int n = rep.dim();
  Vector osc = coherent_vector(cplx(mu * p.D, 0.0), rep);
  osc.normalize();
  Vector psi = Vector::Zero(2 * n);
  psi.segment(mu == 1 ? 0 : n, n) = osc;
  return psi;
}

QuantumState biased_gibbs_state(int mu, const SosParams& p, const FockRep& rep, double tol) {
  if (mu != 1 && mu != -1) throw ValidationError("spin label must be +1 or -1");
  const int n = rep.dim();
  const auto osc = displaced_thermal_state({cplx(mu * p.D, 0.0), p.omega0, p.T}, rep, tol);
  Matrix rho = Matrix::Zero(2 * n, 2 * n);
  const int off = (mu == 1) ? 0 : n;
  rho.block(off, off, n, n) = osc.matrix();
  return QuantumState::spin_oscillator(std::move(rho), n);
}

}  // namespace sosim
