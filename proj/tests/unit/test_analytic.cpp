#include <doctest.h>

#include <cmath>
#include <vector>

#include "sosim/analytic.hpp"
#include "sosim/errors.hpp"
#include "sosim/lindblad.hpp"

using namespace sosim;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

SosParams unit_params(double d, double T = 0.0) {
  SosParams p;
  p.D = d;
  p.T = T;
  return p;
}

double spin_plus_weight(const Matrix& rho) {
  const long n = rho.rows() / 2;
  return rho.topLeftCorner(n, n).trace().real();
}

}  // namespace

TEST_CASE("classical trajectory limits") {
  const SosParams p = unit_params(1.0);
  const cplx a0(0.4, -0.7);
  CHECK(std::abs(alpha_trajectory(-1, a0, 0.0, p) - a0) < 1e-15);
  const double t_inf = 50.0 / derive_rates(p).gamma_net;
  CHECK(std::abs(alpha_trajectory(-1, a0, t_inf, p) - cplx(-p.D, 0.0)) < 1e-8);
  CHECK(std::abs(alpha_trajectory(1, a0, t_inf, p) - cplx(p.D, 0.0)) < 1e-8);
}

TEST_CASE("classical trajectory against the integrator's first moment") {
  const SosParams p = unit_params(1.0);
  const FockRep rep(48);
  const std::vector<CoherentComponent> psi = {{-1, cplx(0.5, 0.0), cplx(1.0, 0.0)}};
  const auto blocks = blocks_from_superposition(psi);
  const auto rho0 = QuantumState::spin_oscillator(assemble_blocks(blocks, rep), rep.dim());
  const auto grid = linspace(0.0, 10.0 / derive_rates(p).gamma, 21);
  const Trajectory traj = evolve(build_sos_generator(p, rep), rho0, grid);
  const Matrix a = kron(Matrix::Identity(2, 2), rep.a());
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const cplx mean = (a * traj.states[k].matrix()).trace();
    worst = std::max(worst, std::abs(mean - alpha_trajectory(-1, cplx(0.5, 0.0), grid[k], p)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("phi factor") {
  const SosParams p = unit_params(1.0);
  const Rank1Block diag{1, 1, cplx(0.3, 0.2), cplx(0.3, 0.2), cplx(1.0, 0.0)};
  for (double t : {0.0, 0.7, 5.0, 40.0}) CHECK(std::abs(phi_factor(diag, t, p)) < 1e-14);

  // Cross-spin block with β = α real saturates at −2D².
  const Rank1Block cross{-1, 1, cplx(0.4, 0.0), cplx(0.4, 0.0), cplx(1.0, 0.0)};
  CHECK(phi_factor(cross, 1e3, p).real() == doctest::Approx(-2.0 * p.D * p.D).epsilon(1e-12));

  // Same-spin blocks decay as exp{−½(1 − e^{−γt})|α − β|²}.
  const Rank1Block same{1, 1, cplx(0.5, 0.0), cplx(0.0, -0.3), cplx(1.0, 0.0)};
  for (double t : {0.5, 2.0, 8.0}) {
    const double expected = -0.5 * (1.0 - std::exp(-p.g_o_at_omega0 * t)) * std::norm(same.alpha - same.beta);
    CHECK(phi_factor(same, t, p).real() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("rank-1 propagator") {
  const SosParams p = unit_params(1.0);
  const FockRep rep(40);
  const double gamma = derive_rates(p).gamma;

  // The stationary mixture is a fixed point.
  const std::vector<Rank1Block> mix = {{1, 1, cplx(p.D, 0.0), cplx(p.D, 0.0), cplx(0.3, 0.0)},
                                       {-1, -1, cplx(-p.D, 0.0), cplx(-p.D, 0.0), cplx(0.7, 0.0)}};
  std::vector<Rank1Block> moved;
  for (const auto& b : mix) moved.push_back(propagate_rank1(b, 3.0 / gamma, p));
  CHECK(trace_distance(assemble_blocks(mix, rep), assemble_blocks(moved, rep)) < 1e-8);

  // Asymptotic spin weights equal the initial ones.
  const std::vector<CoherentComponent> psi = {{1, cplx(0.2, 0.5), cplx(0.6, 0.1)},
                                              {-1, cplx(-0.4, 0.3), cplx(-0.3, 0.7)}};
  const auto blocks = blocks_from_superposition(psi);
  const double p_plus = spin_plus_weight(assemble_blocks(blocks, rep));
  moved.clear();
  for (const auto& b : blocks) moved.push_back(propagate_rank1(b, 50.0 / gamma, p));
  const Matrix late = assemble_blocks(moved, rep);
  CHECK(spin_plus_weight(late) == doctest::Approx(p_plus).epsilon(1e-10));
  CHECK(std::abs(late.trace() - 1.0) < 1e-10);

  // Adjoint blocks propagate to adjoints.
  const Rank1Block b = blocks[1];
  const Rank1Block lhs = propagate_rank1(b.adjoint(), 1.3, p);
  const Rank1Block rhs = propagate_rank1(b, 1.3, p).adjoint();
  CHECK(std::abs(lhs.amp - rhs.amp) < 1e-14);

  CHECK_THROWS_AS(propagate_rank1(b, 1.0, unit_params(1.0, 0.5)), UnsupportedRegime);
}

TEST_CASE("cat-state coherence envelope against the integrator") {
  SosParams p = unit_params(1.0);
  const FockRep rep(48);
  const std::vector<CoherentComponent> psi = {{1, cplx(1.0, 0.0), cplx(std::sqrt(0.5), 0.0)},
                                              {-1, cplx(1.0, 0.0), cplx(std::sqrt(0.5), 0.0)}};
  const auto blocks = blocks_from_superposition(psi);
  const auto rho0 = QuantumState::spin_oscillator(assemble_blocks(blocks, rep), rep.dim());
  const auto grid = linspace(0.0, 20.0, 11);
  const Trajectory traj = evolve(build_sos_generator(p, rep), rho0, grid);
  const int n = rep.dim();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double analytic = 0.0;
    for (const auto& b : blocks)
      if (b.mu == 1 && b.nu == -1) analytic = std::abs(propagate_rank1(b, grid[k], p).amp);
    const Matrix off = traj.states[k].matrix().block(0, n, n, n);
    const double oracle = Eigen::BDCSVD<Matrix>(off).singularValues().sum();
    CHECK(std::abs(analytic - oracle) < 1e-5);
  }
}

TEST_CASE("transition probability and minimal work") {
  CHECK(epsilon_zero_t(0.0) == 1.0);
  CHECK(epsilon_zero_t(1.0) == doctest::Approx(0.01831563888873418).epsilon(1e-14));
  const FockRep rep(64);
  const double overlap = std::norm(coherent_vector(cplx(1.0, 0.0), rep).dot(coherent_vector(cplx(-1.0, 0.0), rep)));
  CHECK(overlap == doctest::Approx(epsilon_zero_t(1.0)).epsilon(1e-10));
  CHECK(epsilon_finite_t(1.0, 1.0, 0.0) == epsilon_zero_t(1.0));
  CHECK(epsilon_finite_t(1.0, 1.0, 1.0) == doctest::Approx(0.1574781392062998).epsilon(1e-13));
  SosParams p = unit_params(1.0, 1.0);
  const DerivedRates r = derive_rates(p);
  CHECK(std::abs(epsilon_finite_t(1.0, 1.0, 1.0) - std::exp(-r.w_bar / r.theta)) < 1e-12);

  CHECK(min_work(1.0, 0.7) == 0.0);
  CHECK(min_work(0.5, 1.0) == doctest::Approx(std::log(2.0)));
  CHECK(min_work(std::exp(-4.0), 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(min_work(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(min_work(1.5, 1.0), ValidationError);
}

TEST_CASE("tunneling operator and zero-temperature rate") {
  const FockRep rep(48);
  SosParams p = unit_params(0.0);
  CHECK(max_abs(b0_operator(p, rep) - Matrix::Identity(96, 96)) < 1e-12);
  p.g_1_at_0 = 1.0;
  CHECK(tunneling_rate_zero_t(p).rate == doctest::Approx(0.5));

  p.D = 1.0;
  const TunnelingResult r = tunneling_rate_zero_t(p);
  CHECK(r.rate == doctest::Approx(0.00915781944436709).epsilon(1e-14));
  CHECK(r.regime == TunnelingRegime::zero_t);

  // B̂₀ in the dressed basis is the period average of W(2D e^{−iω₀t}).
  const FockRep osc(48);
  const Matrix v0 = fourier_component(
      [&](double t) { return weyl_operator(2.0 * p.D * std::polar(1.0, -p.omega0 * t), osc); }, 0, p.omega0);
  const RealVector diag = b0_dressed_diagonal(p.D, 48);
  const Matrix expected = diag.cast<cplx>().asDiagonal();
  CHECK(max_abs(v0.topLeftCorner(30, 30) - expected.topLeftCorner(30, 30)) < 1e-6);

  // The coupling is Hermitian and flips the spin.
  const Matrix c = tunneling_coupling(p, rep);
  CHECK(max_abs(c - c.adjoint()) < 1e-12);
  CHECK(max_abs(c.topLeftCorner(48, 48)) < 1e-14);
}

TEST_CASE("finite-temperature tunneling rate") {
  SosParams p = unit_params(1.0, 1.0);
  p.g_1_at_0 = 1.0;
  const TunnelingResult r = tunneling_rate_finite_t(p);
  CHECK(r.regime == TunnelingRegime::finite_t_exact);
  CHECK(r.rate == doctest::Approx(0.02750774015759022).epsilon(1e-12));
  CHECK(r.rate_uncorrected == doctest::Approx(0.022311624147519214).epsilon(1e-12));
  CHECK(r.rate_leading == doctest::Approx(0.12030218310832098).epsilon(1e-12));
  CHECK(r.exponent_temperature == doctest::Approx(1.4039015408187168).epsilon(1e-13));

  // T → 0 reproduces the zero-temperature rate.
  p.T = 1e-3;
  CHECK(tunneling_rate_finite_t(p).rate == doctest::Approx(0.5 * std::exp(-4.0)).epsilon(1e-6));

  // Brute-force trace over the number basis with a quadrature V̂₀.
  p.T = 0.5;
  const FockRep rep(48);
  const Matrix v0 = fourier_component(
      [&](double t) { return weyl_operator(2.0 * p.D * std::polar(1.0, -p.omega0 * t), rep); }, 0, p.omega0);
  const RealVector v0_sq = (v0 * v0).diagonal().real();
  const double q = boltzmann_factor(p.omega0, p.T);
  double brute = 0.0;
  for (int k = rep.dim() - 1; k >= 0; --k) brute += (1.0 - q) * std::pow(q, k) * v0_sq(k);
  CHECK(tunneling_rate_finite_t(p).rate == doctest::Approx(0.5 * brute).epsilon(1e-6));

  // Large-D exponents: the uncorrected form follows W̄/Θ′, the exact form
  // follows 4D² tanh(ω₀/4T).
  p.T = 1.0;
  auto log_rate = [&](double d, bool exact) {
    p.D = d;
    const TunnelingResult t = tunneling_rate_finite_t(p);
    return std::log(exact ? t.rate : t.rate_uncorrected);
  };
  const double slope_u = (log_rate(8.0, false) - log_rate(6.0, false)) / 28.0;
  const double slope_x = (log_rate(8.0, true) - log_rate(6.0, true)) / 28.0;
  CHECK(slope_u == doctest::Approx(-2.0 * p.omega0 / tunneling_noise_temperature(1.0, 1.0)).epsilon(0.02));
  CHECK(slope_x == doctest::Approx(-4.0 * std::tanh(0.25)).epsilon(0.02));
  CHECK(std::isfinite(log_v0_squared_thermal(30.0, 1.0, 1.0)));
}

TEST_CASE("thermal Weyl average") {
  const FockRep rep(64);
  const double T = 1.0;
  const QuantumState th = displaced_thermal_state({cplx(0.0, 0.0), 1.0, T}, rep);
  const cplx alpha(0.6, -0.3);
  const cplx numeric = (weyl_operator(alpha, rep) * th.matrix()).trace();
  CHECK(std::abs(numeric - thermal_weyl_average(alpha, 1.0, T)) < 1e-10);
  CHECK(thermal_weyl_average(alpha, 1.0, 0.0) == doctest::Approx(std::exp(-0.5 * std::norm(alpha))));
}
