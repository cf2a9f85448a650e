#include "sosim/analytic.hpp"

#include <cmath>

#include "sosim/errors.hpp"
#include "sosim/special.hpp"

namespace sosim {
namespace {

void check_label(int mu) {
  if (mu != 1 && mu != -1) throw ValidationError("spin label must be +1 or -1");
}

Vector normalized_coherent(cplx alpha, const FockRep& rep) {
  Vector v = coherent_vector(alpha, rep);
  v.normalize();
  return v;
}

}  // namespace

std::vector<Rank1Block> blocks_from_superposition(std::span<const CoherentComponent> psi) {
  if (psi.empty()) throw InvalidState("empty superposition");
  std::vector<Rank1Block> out;
  out.reserve(psi.size() * psi.size());
  double norm = 0.0;
  for (const auto& a : psi) {
    check_label(a.mu);
    for (const auto& b : psi) {
      const cplx amp = a.coeff * std::conj(b.coeff);
      if (a.mu == b.mu) {
        const cplx overlap = std::exp(-0.5 * std::norm(a.alpha) - 0.5 * std::norm(b.alpha) + std::conj(b.alpha) * a.alpha);
        norm += (amp * overlap).real();
      }
      out.push_back({a.mu, b.mu, a.alpha, b.alpha, amp});
    }
  }
  if (!(norm > 0.0)) throw InvalidState("superposition has zero norm");
  for (auto& b : out) b.amp /= norm;
  return out;
}

cplx alpha_trajectory(int mu, cplx alpha0, double t, const SosParams& p) {
  check_label(mu);
  const DerivedRates r = derive_rates(p);
  const cplx centre(mu * p.D, 0.0);
  return centre + (alpha0 - centre) * std::exp(cplx(-0.5 * r.gamma_net * t, -p.omega0 * t));
}

cplx phi_factor(const Rank1Block& block, double t, const SosParams& p) {
  check_label(block.mu);
  check_label(block.nu);
  const double gamma = derive_rates(p).gamma_net;
  const double dm = block.mu * p.D;
  const double dn = block.nu * p.D;
  const cplx u0 = block.alpha - dm;
  const cplx v0 = block.beta - dn;
  const cplx ut = alpha_trajectory(block.mu, block.alpha, t, p) - dm;
  const cplx vt = alpha_trajectory(block.nu, block.beta, t, p) - dn;
  const cplx overlap_log = 0.5 * std::norm(u0) + 0.5 * std::norm(v0) - u0 * std::conj(v0);
  const double frame_phase = dn * (vt - v0).imag() - dm * (ut - u0).imag();
  return std::expm1(-gamma * t) * overlap_log + cplx(0.0, frame_phase);
}

Rank1Block propagate_rank1(const Rank1Block& block, double t, const SosParams& p) {
  p.validate();
  if (p.T > 0.0) throw UnsupportedRegime("rank-1 propagator is exact only at T = 0");
  if (t < 0.0) throw ValidationError("propagate_rank1: negative time");
  const DerivedRates r = derive_rates(p);
  const double dmu = block.mu - block.nu;
  Rank1Block out = block;
  out.alpha = alpha_trajectory(block.mu, block.alpha, t, p);
  out.beta = alpha_trajectory(block.nu, block.beta, t, p);
  out.amp = block.amp * std::exp(-0.5 * r.big_gamma * dmu * dmu * t + phi_factor(block, t, p));
  return out;
}

Matrix assemble_blocks(std::span<const Rank1Block> blocks, const FockRep& rep) {
  const int n = rep.dim();
  Matrix rho = Matrix::Zero(2 * n, 2 * n);
  for (const auto& b : blocks) {
    check_label(b.mu);
    check_label(b.nu);
    const Vector ket = normalized_coherent(b.alpha, rep);
    const Vector bra = normalized_coherent(b.beta, rep);
    rho.block(b.mu == 1 ? 0 : n, b.nu == 1 ? 0 : n, n, n) += b.amp * ket * bra.adjoint();
  }
  return rho;
}

double epsilon_zero_t(double D) { return std::exp(-4.0 * D * D); }

double epsilon_finite_t(double D, double omega0, double T) {
  if (T <= 0.0) return epsilon_zero_t(D);
  return std::exp(-4.0 * D * D * std::tanh(0.5 * omega0 / T));
}

double min_work(double epsilon, double theta) {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw ValidationError("min_work: epsilon must lie in (0, 1]");
  if (!(theta > 0.0)) throw ValidationError("min_work: noise temperature must be positive");
  return -theta * std::log(epsilon);
}

RealVector b0_dressed_diagonal(double D, int n) { return weyl_diagonal(2.0 * D, n); }

Matrix b0_operator(const SosParams& p, const FockRep& rep) {
  return dressed_diagonal_function(p, rep, b0_dressed_diagonal(p.D, rep.work_dim()));
}

Matrix tunneling_coupling(const SosParams& p, const FockRep& rep) {
  // B̂₀τ⁺ = |+⟩⟨−| ⊗ D(D) f(a†a) D(D), with f the dressed eigenvalues of B̂₀.
  const int n = rep.dim();
  const int w = rep.work_dim();
  const FockRep work(w, 0);
  const Matrix d = displacement(cplx(p.D, 0.0), work);
  const RealVector f = b0_dressed_diagonal(p.D, w);
  const Matrix up = (d * f.cast<cplx>().asDiagonal() * d).topLeftCorner(n, n);
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = up;
  out.bottomLeftCorner(n, n) = up.adjoint();
  return out;
}

double thermal_weyl_average(cplx alpha, double omega0, double T) {
  const double c = (T > 0.0) ? 1.0 / std::tanh(0.5 * omega0 / T) : 1.0;
  return std::exp(-0.5 * std::norm(alpha) * c);
}

std::string to_string(TunnelingRegime r) {
  switch (r) {
    case TunnelingRegime::zero_t: return "zero_t";
    case TunnelingRegime::finite_t_exact: return "finite_t_exact";
    case TunnelingRegime::finite_t_leading: return "finite_t_leading";
  }
  return "unknown";
}

double log_v0_squared_thermal(double D, double omega0, double T) {
  const double d2 = D * D;
  if (T <= 0.0) return -4.0 * d2;
  const double q = boltzmann_factor(omega0, T);
  const double c = 8.0 * d2 * std::sqrt(q) / (-std::expm1(-omega0 / T));
  // a − c = 4D² tanh(ω₀/4T)
  return -4.0 * d2 * std::tanh(0.25 * omega0 / T) + std::log(bessel_i0_scaled(c));
}

TunnelingResult tunneling_rate_zero_t(const SosParams& p) {
  p.validate();
  TunnelingResult r;
  r.rate = 0.5 * p.g_1_at_0 * epsilon_zero_t(p.D);
  r.rate_leading = r.rate;
  r.rate_uncorrected = r.rate;
  r.exponent_temperature = tunneling_noise_temperature(p.omega0, 0.0);
  r.regime = TunnelingRegime::zero_t;
  return r;
}

TunnelingResult tunneling_rate_finite_t(const SosParams& p) {
  p.validate();
  if (p.T <= 0.0) return tunneling_rate_zero_t(p);
  const DerivedRates dr = derive_rates(p);
  const double d2 = p.D * p.D;
  const double one_minus_q = -std::expm1(-p.omega0 / p.T);
  TunnelingResult r;
  r.regime = TunnelingRegime::finite_t_exact;
  r.exponent_temperature = dr.theta_prime;
  r.rate = 0.5 * p.g_1_at_0 * std::exp(log_v0_squared_thermal(p.D, p.omega0, p.T));
  r.rate_leading = 0.5 * p.g_1_at_0 * std::exp(-dr.w_bar / dr.theta_prime);
  const double au = 4.0 * d2 / one_minus_q;
  const double cu = 4.0 * d2 * std::sqrt(1.0 - one_minus_q * one_minus_q) / one_minus_q;
  r.rate_uncorrected = 0.5 * p.g_1_at_0 * std::exp(-(au - cu)) * bessel_i0_scaled(cu);
  return r;
}

}  // namespace sosim
