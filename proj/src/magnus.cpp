#include "erange/magnus.hpp"

#include <algorithm>
#include <cmath>

#include "erange/errors.hpp"

namespace erange {

namespace {

// Traceless 2x2 matrix [[a, b], [c, -a]].
struct Traceless {
  double a, b, c;
};

Traceless operator+(Traceless x, Traceless y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
Traceless operator*(double s, Traceless x) { return {s * x.a, s * x.b, s * x.c}; }

Traceless commutator(Traceless x, Traceless y) {
  return {x.b * y.c - y.b * x.c, 2.0 * (x.a * y.b - y.a * x.b), 2.0 * (y.a * x.c - x.a * y.c)};
}

Step2x2 expm(Traceless w) {
  const double q = w.a * w.a + w.b * w.c;
  double ch;
  double sh;
  if (std::abs(q) < 1e-3) {
    ch = 1.0 + q / 2.0 * (1.0 + q / 12.0 * (1.0 + q / 30.0 * (1.0 + q / 56.0)));
    sh = 1.0 + q / 6.0 * (1.0 + q / 20.0 * (1.0 + q / 42.0 * (1.0 + q / 72.0)));
  } else if (q > 0.0) {
    const double s = std::sqrt(q);
    ch = std::cosh(s);
    sh = std::sinh(s) / s;
  } else {
    const double s = std::sqrt(-q);
    ch = std::cos(s);
    sh = std::sin(s) / s;
  }
  return {ch + sh * w.a, sh * w.b, sh * w.c, ch - sh * w.a};
}

const double kSqrt15 = std::sqrt(15.0);

}  // namespace

Step2x2 magnus_step(const std::function<double(double)>& f, double r0, double h) {
  const double d = kSqrt15 / 10.0;
  const double f1 = f(r0 + (0.5 - d) * h);
  const double f2 = f(r0 + 0.5 * h);
  const double f3 = f(r0 + (0.5 + d) * h);
  const Traceless a1{0.0, h, h * f2};
  const Traceless a2{0.0, 0.0, kSqrt15 * h / 3.0 * (f3 - f1)};
  const Traceless a3{0.0, 0.0, 10.0 * h / 3.0 * (f3 - 2.0 * f2 + f1)};
  const Traceless c1 = commutator(a1, a2);
  const Traceless c2 = (-1.0 / 60.0) * commutator(a1, 2.0 * a3 + c1);
  const Traceless omega =
      a1 + (1.0 / 12.0) * a3 +
      (1.0 / 240.0) * commutator((-20.0) * a1 + (-1.0) * a3 + c1, a2 + c2);
  return expm(omega);
}

Propagation propagate(const RadialGrid& grid, const std::function<double(double)>& f,
                      std::size_t from, std::size_t to, double y0, double yp0, double log_scale0,
                      PropagateOptions options) {
  const std::size_t n = grid.size();
  if (from >= n || to >= n) throw PreconditionError("propagation index outside the grid");
  Propagation out;
  out.y.assign(n, 0.0);
  out.yp.assign(n, 0.0);
  out.log_scale.assign(n, 0.0);

  double y = y0;
  double yp = yp0;
  double ls = log_scale0;
  out.y[from] = y;
  out.yp[from] = yp;
  out.log_scale[from] = ls;
  if (from == to) return out;

  const int dir = to > from ? 1 : -1;
  std::size_t i = from;
  int parity = 0;
  double pair_y = y, pair_yp = yp;
  std::size_t pair_start = from;

  while (i != to) {
    const std::size_t j = dir > 0 ? i + 1 : i - 1;
    const double h = grid[j] - grid[i];
    const Step2x2 m = magnus_step(f, grid[i], h);

    const double mag = std::max(std::abs(y), std::abs(yp));
    const double mnorm = std::max({std::abs(m.m00) + std::abs(m.m01), std::abs(m.m10) + std::abs(m.m11)});
    if (mag > 0.0 && (mag > 1e250 || mag * mnorm > 1e300 || mag < 1e-250)) {
      y /= mag;
      yp /= mag;
      pair_y /= mag;
      pair_yp /= mag;
      ls += std::log(mag);
    }
    if (options.estimate_error && parity == 0) {
      pair_start = i;
      pair_y = y;
      pair_yp = yp;
    }
    const double ny = m.m00 * y + m.m01 * yp;
    const double nyp = m.m10 * y + m.m11 * yp;
    if (!std::isfinite(ny) || !std::isfinite(nyp)) throw NumericError("radial propagation overflowed");
    y = ny;
    yp = nyp;

    if (options.estimate_error) {
      if (parity == 1) {
        const Step2x2 big = magnus_step(f, grid[pair_start], grid[j] - grid[pair_start]);
        const double by = big.m00 * pair_y + big.m01 * pair_yp;
        const double byp = big.m10 * pair_y + big.m11 * pair_yp;
        const double span = std::abs(grid[j] - grid[pair_start]);
        const double scale = std::abs(y) + span * std::abs(yp);
        if (scale > 0.0) {
          const double err = (std::abs(by - y) + span * std::abs(byp - yp)) / (63.0 * scale);
          out.max_local_error = std::max(out.max_local_error, err);
        }
      }
      parity ^= 1;
    }

    out.y[j] = y;
    out.yp[j] = yp;
    out.log_scale[j] = ls;
    i = j;
  }
  return out;
}

}  // namespace erange
