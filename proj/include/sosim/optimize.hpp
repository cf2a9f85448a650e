#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sosim {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section maximization of a unimodal function on [lo, hi].
/// Stops when the bracket is narrower than `xtol`.
inline ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                             double hi, double xtol = 1e-10, int max_iter = 500) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_maximize: empty bracket");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > xtol && it < max_iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

/// Grid pre-scan followed by golden-section refinement around the best grid
/// point. `grid` must be ascending.
inline ScalarOptimum scan_then_maximize(const std::function<double(double)>& f,
                                        const std::vector<double>& grid, double xtol = 1e-10) {
  if (grid.size() < 3) throw std::invalid_argument("scan_then_maximize: need at least 3 grid points");
  std::size_t best = 0;
  double best_v = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[best + 1 == grid.size() ? best : best + 1];
  auto opt = golden_section_maximize(f, lo, hi, xtol);
  if (best_v > opt.value) return {grid[best], best_v, opt.iterations};
  return opt;
}

}  // namespace sosim
