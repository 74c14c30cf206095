#pragma once

namespace erange {

inline constexpr int kDefaultEllMax = 10;

/// Riccati-Bessel pair u_l(x) = x j_l(x), v_l(x) = -x y_l(x) with x-derivatives.
/// Normalised so that u_0 = sin x, v_0 = cos x and u' v - u v' = 1.
struct RiccatiBesselValues {
  double u = 0.0;
  double u_prime = 0.0;
  double v = 0.0;
  double v_prime = 0.0;
};

enum class Recurrence {
  automatic,  ///< series for u when x < 1, downward when x < l, upward otherwise
  upward,
  downward,
};

/// Throws DomainError for x <= 0, l < 0 or l > ell_max.
RiccatiBesselValues riccati_bessel(int ell, double x, int ell_max = kDefaultEllMax,
                                   Recurrence u_direction = Recurrence::automatic);

/// n!! with (-1)!! = 0!! = 1.
double double_factorial(int n);

}  // namespace erange
