#include <doctest.h>

#include <cmath>

#include "sosim/errors.hpp"
#include "sosim/fock.hpp"
#include "sosim/special.hpp"
#include "sosim/state.hpp"

using namespace sosim;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Direct series Σ (x/2)^{2k}/(k!)², an independent reference for moderate x.
double i0_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (x / 2.0) * (x / 2.0) / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("scaled Bessel I0 against reference values") {
  CHECK(bessel_i0_scaled(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bessel_i0_scaled(1.0) * std::exp(1.0) == doctest::Approx(1.2660658777520082).epsilon(1e-13));
  CHECK(bessel_i0_scaled(10.0) * std::exp(10.0) == doctest::Approx(2815.716628466254).epsilon(1e-12));
  CHECK(bessel_i0_scaled(25.0) == doctest::Approx(0.08019677354743669).epsilon(1e-11));
  CHECK(bessel_i0_scaled(50.0) == doctest::Approx(0.056561626647454184).epsilon(1e-11));
  for (double x : {0.5, 3.0, 7.5, 15.0, 19.9, 20.1, 30.0})
    CHECK(bessel_i0_scaled(x) == doctest::Approx(i0_series(x) * std::exp(-x)).epsilon(1e-11));
  CHECK(bessel_i0_scaled(-4.0) == doctest::Approx(bessel_i0_scaled(4.0)));
  CHECK(std::isfinite(log_bessel_i0(1e6)));
  CHECK(log_bessel_i0(1e6) == doctest::Approx(1e6 - 0.5 * std::log(2.0 * kPi * 1e6)).epsilon(1e-12));
}

TEST_CASE("Laguerre recurrence and Weyl diagonal") {
  const double x = 1.7;
  const RealVector l = laguerre_sequence(4, x);
  CHECK(l(0) == doctest::Approx(1.0));
  CHECK(l(1) == doctest::Approx(1.0 - x));
  CHECK(l(2) == doctest::Approx(0.5 * (x * x - 4.0 * x + 2.0)));
  CHECK(l(3) == doctest::Approx((-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0));
  const FockRep rep(64);
  const Matrix w = weyl_operator(cplx(0.8, 0.0), rep);
  const RealVector d = weyl_diagonal(0.8, 10);
  for (int k = 0; k < 10; ++k) CHECK(w(k, k).real() == doctest::Approx(d(k)).epsilon(1e-12));
}

TEST_CASE("FockRep rejects tiny dimensions and auto_dim follows the rule") {
  CHECK_THROWS_AS(FockRep(1), InvalidRepresentation);
  const int n = FockRep::auto_dim(1.0, 1.0, 0.0);
  CHECK(n >= 33);
  CHECK_NOTHROW(coherent_vector(cplx(1.0, 0.0), FockRep(n)));
}

TEST_CASE("coherent vectors") {
  const FockRep rep(64);
  const Vector v0 = coherent_vector(cplx(0.0, 0.0), rep);
  CHECK(std::abs(v0(0) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(v0.tail(63).norm() < 1e-15);
  const cplx alphas[] = {{0.3, -1.2}, {2.0, 1.0}, {-2.5, 0.4}, {0.0, 3.0}};
  for (cplx a : alphas) {
    for (cplx b : alphas) {
      const double overlap = std::norm(coherent_vector(a, rep).dot(coherent_vector(b, rep)));
      CHECK(std::abs(overlap - std::exp(-std::norm(a - b))) < 1e-8);
    }
    const Vector v = coherent_vector(a, rep);
    CHECK(std::abs((v.adjoint() * rep.number() * v)(0).real() - std::norm(a)) < 1e-8);
  }
  CHECK_THROWS_AS(coherent_vector(cplx(4.0, 0.0), FockRep(10)), TruncationError);
}

TEST_CASE("Weyl operators") {
  const FockRep rep(64);
  CHECK(max_abs(weyl_operator(cplx(0.0, 0.0), rep) - rep.identity()) < 1e-14);
  const cplx a(0.7, -0.4);
  const Matrix prod = weyl_operator(a, rep) * weyl_operator(-a, rep);
  CHECK(max_abs(prod.topLeftCorner(30, 30) - Matrix::Identity(30, 30)) < 1e-8);
  // W(α)W(β) = exp{½(ᾱβ − αβ̄)} W(α + β)
  const cplx x(1.0, 0.0), y(0.0, 1.0);
  const cplx phase = std::exp(0.5 * (std::conj(x) * y - x * std::conj(y)));
  const Matrix lhs = weyl_operator(x, rep) * weyl_operator(y, rep);
  const Matrix rhs = phase * weyl_operator(x + y, rep);
  CHECK(max_abs((lhs - rhs).topLeftCorner(20, 20)) < 1e-6);
  // W(α)|0⟩ = |−ᾱ⟩ and W(α) = D(−ᾱ)
  const Vector moved = weyl_operator(a, rep).col(0);
  CHECK(std::abs(std::abs(moved.dot(coherent_vector(-std::conj(a), rep))) - 1.0) < 1e-10);
  CHECK(max_abs(weyl_operator(a, rep) - displacement(-std::conj(a), rep)) < 1e-12);
}

TEST_CASE("displaced thermal states") {
  const FockRep rep(64);
  const QuantumState pure = displaced_thermal_state({cplx(1.0, 0.0), 1.0, 0.0}, rep);
  const Vector c = coherent_vector(cplx(1.0, 0.0), rep);
  CHECK(max_abs(pure.matrix() - c * c.adjoint()) < 1e-12);

  const QuantumState th = displaced_thermal_state({cplx(0.0, 0.0), 1.0, 1.0}, rep);
  th.check();
  CHECK((rep.number() * th.matrix()).trace().real() == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-10));

  const cplx alpha(0.8, 0.3);
  const QuantumState moved = displaced_thermal_state({alpha, 1.0, 1.0}, rep);
  const Matrix d = displacement(alpha, rep);
  CHECK(trace_distance(moved.matrix(), d * th.matrix() * d.adjoint()) < 1e-8);
  CHECK_THROWS_AS(displaced_thermal_state({cplx(1.0, 0.0), -1.0, 1.0}, rep), ValidationError);
}

TEST_CASE("Uhlmann fidelity") {
  const FockRep rep(64);
  const QuantumState a = displaced_thermal_state({cplx(1.0, 0.0), 1.0, 1.0}, rep);
  const QuantumState b = displaced_thermal_state({cplx(-1.0, 0.0), 1.0, 1.0}, rep);
  CHECK(uhlmann_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  const double f = uhlmann_fidelity(a, b);
  CHECK(f * f == doctest::Approx(0.1574781392062998).epsilon(1e-7));

  const Vector u = coherent_vector(cplx(0.5, 0.0), rep);
  const Vector v = coherent_vector(cplx(-0.2, 0.6), rep);
  const auto pu = QuantumState::pure(u, {Subsystem::oscillator}, {64});
  const auto pv = QuantumState::pure(v, {Subsystem::oscillator}, {64});
  CHECK(uhlmann_fidelity(pu, pv) == doctest::Approx(std::abs(u.dot(v))).epsilon(1e-8));
}

TEST_CASE("partial trace") {
  // Product state → factor
  Matrix s(2, 2);
  s << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
  const FockRep rep(16);
  const Matrix osc = coherent_state(cplx(0.5, 0.0), rep).matrix();
  const QuantumState prod(kron(s, osc), {Subsystem::spin, Subsystem::oscillator}, {2, 16});
  CHECK(max_abs(partial_trace(prod, Subsystem::spin).matrix() - s) < 1e-12);
  CHECK(max_abs(partial_trace(prod, Subsystem::oscillator).matrix() - osc) < 1e-12);

  // Maximally entangled pair → maximally mixed factor
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto b = QuantumState::pure(bell, {Subsystem::observed, Subsystem::spin}, {2, 2});
  CHECK(max_abs(partial_trace(b, Subsystem::observed).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("trace distance") {
  const FockRep rep(64);
  const QuantumState vac = coherent_state(cplx(0.0, 0.0), rep);
  CHECK(trace_distance(vac, vac) == doctest::Approx(0.0));
  Vector e1 = Vector::Zero(64);
  e1(1) = 1.0;
  const auto one = QuantumState::pure(e1, {Subsystem::oscillator}, {64});
  CHECK(trace_distance(vac, one) == doctest::Approx(1.0));
  // Thermal state with n̄ = 1 has populations 2^{−(n+1)}: distance ½.
  const double T = 1.0 / std::log(2.0);
  const QuantumState th = displaced_thermal_state({cplx(0.0, 0.0), 1.0, T}, rep);
  CHECK(trace_distance(vac, th) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("state invariants") {
  Matrix bad(2, 2);
  bad << 0.5, 0.0, 0.0, 0.7;
  const QuantumState s = QuantumState::oscillator(bad);
  CHECK_THROWS_AS(s.check(), InvalidState);
  CHECK_THROWS_AS(QuantumState(Matrix::Identity(3, 3), {Subsystem::spin}, {2}), InvalidState);
  CHECK_THROWS_AS(sqrtm_psd(-Matrix::Identity(2, 2)), InvalidState);
  Matrix near(2, 2);
  near << 1.0, 0.0, 0.0, -1e-10;
  CHECK(max_abs(sqrtm_psd(near) - Matrix(Eigen::Vector2cd(1.0, 0.0).asDiagonal())) < 1e-14);
}
