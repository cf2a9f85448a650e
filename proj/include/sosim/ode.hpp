#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "sosim/errors.hpp"

namespace sosim {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  // 0: pick automatically
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double last_h = 0.0;
};

/// Dormand–Prince 5(4) with FSAL and a standard I-controller.
///
/// `State` is any Eigen dense type. `rhs(t, y, dydt)` fills the derivative.
/// `on_accept(t, y)` runs after every accepted step and may project `y`
/// (for example, to re-symmetrize a density matrix). The error norm is the
/// max-abs entry of the embedded error scaled by atol + rtol·max|y|.
template <class State, class Rhs, class OnAccept>
void dopri5_integrate(Rhs&& rhs, double t0, double t1, State& y, const OdeOptions& opt,
                      OdeStats& stats, OnAccept&& on_accept) {
  if (!(t1 >= t0)) throw IntegrationFailure("dopri5: end time precedes start time");
  if (t1 == t0) return;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  for (State* k : {&k1, &k2, &k3, &k4, &k5, &k6, &k7}) k->resizeLike(y);
  rhs(t0, y, k1);
  ++stats.rhs_evals;

  auto scale_of = [&](const State& a, const State& b) {
    return opt.atol + opt.rtol * std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  };

  double h_prop = opt.h_init > 0.0 ? opt.h_init : stats.last_h;
  if (!(h_prop > 0.0)) {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    h_prop = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-6;
  }
  h_prop = std::min(h_prop, opt.h_max);

  double t = t0;
  long steps = 0;
  bool last_rejected = false;
  while (t < t1) {
    if (++steps > opt.max_steps)
      throw IntegrationFailure("dopri5: exceeded " + std::to_string(opt.max_steps) + " steps at t = " +
                               std::to_string(t));
    double h = h_prop;
    bool final_step = false;
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationFailure("dopri5: step size underflow at t = " + std::to_string(t));

    ytmp = y + h * a21 * k1;
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);
    stats.rhs_evals += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double enorm = err.cwiseAbs().maxCoeff() / scale_of(y, ynew);
    if (!std::isfinite(enorm)) throw IntegrationFailure("dopri5: non-finite error estimate");

    if (enorm <= 1.0) {
      t = final_step ? t1 : t + h;
      y = ynew;
      on_accept(t, y);
      k1 = k7;
      ++stats.accepted;
      double fac = 0.9 * std::pow(std::max(enorm, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      last_rejected = false;
      // A clipped final step does not shrink the proposal for the next call.
      h_prop = std::min(opt.h_max, final_step ? std::max(h_prop, h * fac) : h * fac);
    } else {
      ++stats.rejected;
      last_rejected = true;
      h_prop = h * std::max(0.2, 0.9 * std::pow(enorm, -0.2));
    }
  }
  stats.last_h = h_prop;
}

}  // namespace sosim
