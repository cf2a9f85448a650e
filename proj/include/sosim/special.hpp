#pragma once

#include "sosim/types.hpp"

namespace sosim {

/// e^{−|x|} I₀(x). Power series below |x| = 20, asymptotic expansion above.
double bessel_i0_scaled(double x);

/// ln I₀(x), finite for any x.
double log_bessel_i0(double x);

/// L_0(x), …, L_{n−1}(x) by the three-term recurrence.
RealVector laguerre_sequence(int n, double x);

/// ⟨k|W(z)|k⟩ = e^{−|z|²/2} L_k(|z|²) for k = 0…n−1.
RealVector weyl_diagonal(double abs_z, int n);

}  // namespace sosim
