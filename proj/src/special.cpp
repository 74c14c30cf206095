#include "erange/special.hpp"

#include <cmath>
#include <string>

#include "erange/errors.hpp"

namespace erange {

double double_factorial(int n) {
  double f = 1.0;
  for (int i = n; i > 1; i -= 2) f *= i;
  return f;
}

namespace {

// Both u and v obey f_{l+1} = (2l+1)/x f_l - f_{l-1}; seeds at l = -1, 0.
struct Pair {
  double lower;  // order l-1
  double value;  // order l
};

Pair upward(double seed_minus1, double seed0, int ell, double x) {
  double fm = seed_minus1;
  double f = seed0;
  for (int l = 0; l < ell; ++l) {
    const double next = (2.0 * l + 1.0) / x * f - fm;
    fm = f;
    f = next;
  }
  return {fm, f};
}

// Miller's algorithm for the minimal solution u_l when x < l.
Pair u_downward(int ell, double x) {
  const int start = ell + 24 + static_cast<int>(x);
  double fp = 0.0;    // order m+1
  double f = 1e-280;  // order m
  double at_ell = 0.0;
  double at_ell_minus1 = 0.0;
  double f0 = 0.0;
  double fm1 = 0.0;
  for (int m = start; m >= 0; --m) {
    // f holds order m, fp order m+1; f_{m-1} = (2m+1)/x f_m - f_{m+1}
    const double lower = (2.0 * m + 1.0) / x * f - fp;
    if (m == ell) {
      at_ell = f;
      at_ell_minus1 = lower;
    }
    if (m == 0) {
      f0 = f;
      fm1 = lower;
    }
    fp = f;
    f = lower;
    if (std::abs(f) > 1e250) {
      // Rescale everything carried so far.
      fp *= 1e-250;
      f *= 1e-250;
      at_ell *= 1e-250;
      at_ell_minus1 *= 1e-250;
    }
  }
  // Normalise against whichever of sin x = u_0, cos x = u_{-1} is better conditioned.
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double scale = std::abs(s) > std::abs(c) ? s / f0 : c / fm1;
  return {at_ell_minus1 * scale, at_ell * scale};
}

// u_l and u_l' from the power series; used for x < 1.
Pair u_series(int ell, double x, double& derivative) {
  const double lead = std::pow(x, ell + 1) / double_factorial(2 * ell + 1);
  const double y = -0.5 * x * x;
  double term = 1.0;
  double sum = 1.0;
  double dsum = ell + 1.0;
  for (int n = 1; n < 40; ++n) {
    term *= y / (n * (2.0 * ell + 2.0 * n + 1.0));
    sum += term;
    dsum += (2.0 * n + ell + 1.0) * term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  derivative = lead / x * dsum;
  return {0.0, lead * sum};
}

}  // namespace

RiccatiBesselValues riccati_bessel(int ell, double x, int ell_max, Recurrence u_direction) {
  if (ell < 0 || ell > ell_max)
    throw DomainError("angular momentum " + std::to_string(ell) + " outside 0.." + std::to_string(ell_max));
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Riccati-Bessel argument must be positive and finite");

  const double s = std::sin(x);
  const double c = std::cos(x);

  RiccatiBesselValues out;
  const Pair v = upward(-s, c, ell, x);
  out.v = v.value;
  out.v_prime = v.lower - ell / x * v.value;

  if (u_direction == Recurrence::automatic && x < 1.0) {
    out.u = u_series(ell, x, out.u_prime).value;
    return out;
  }

  bool down = false;
  switch (u_direction) {
    case Recurrence::automatic: down = x < ell; break;
    case Recurrence::upward: down = false; break;
    case Recurrence::downward: down = true; break;
  }
  const Pair u = down ? u_downward(ell, x) : upward(c, s, ell, x);
  // f_l' = f_{l-1} - (l/x) f_l
  out.u = u.value;
  out.u_prime = u.lower - ell / x * u.value;
  return out;
}

}  // namespace erange
