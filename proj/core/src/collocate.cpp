#include "blends/collocate.hpp"

#include <cmath>
#include <numbers>

namespace blends {

namespace {

OdeProblem<complex> oscillator(int m) {
  OdeProblem<complex> p;
  p.b = oracles::constant<complex>(1.0);
  p.grade = m;
  p.path = {0.0, 1.0};
  return p;
}

std::array<complex, 2> endpoint(OdeProblem<complex> p, double y0, double y1, double nu) {
  p.y0 = y0;
  p.y1 = y1;
  const auto out = collocation_step(p, initial_series(p), complex(nu, 0.0));
  return {out.series[0], out.series[1]};
}

}  // namespace

ShoAmplification sho_amplification(int m, double nu) {
  if (m < 1) throw ArgumentError("sho_amplification: m must be at least 1");
  if (!(nu > 0.0)) throw ArgumentError("sho_amplification: nu must be positive");
  const auto p = oscillator(m);
  return {endpoint(p, 1.0, 0.0, nu)[0].real(), endpoint(p, 0.0, 1.0, nu)[0].real()};
}

std::array<std::array<double, 2>, 2> sho_step_matrix(int m, double nu) {
  if (m < 1) throw ArgumentError("sho_step_matrix: m must be at least 1");
  if (!(nu > 0.0)) throw ArgumentError("sho_step_matrix: nu must be positive");
  const auto p = oscillator(m);
  const auto from_cos = endpoint(p, 1.0, 0.0, nu);
  const auto from_sin = endpoint(p, 0.0, 1.0, nu);
  return {{{from_cos[0].real(), from_sin[0].real()}, {from_cos[1].real(), from_sin[1].real()}}};
}

double stability_threshold(int m) {
  if (m < 1 || m > 6) throw ArgumentError("stability_threshold: m must be in 1..6");
  const auto excess = [m](double nu) {
    const double c = sho_amplification(m, nu).c;
    return c * c - 1.0;
  };
  const auto bisect = [&](double lo, double hi) {
    while (hi - lo > 1e-8) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };

  const double step = std::numbers::pi / 1000.0;
  const double limit = 4.0 * std::numbers::pi;
  double x0 = step;
  double x1 = 2.0 * step;
  double f0 = excess(x0);
  double f1 = excess(x1);
  if (f0 > 0.0) return bisect(0.0, x0);
  if (f1 > 0.0) return bisect(x0, x1);
  for (double x2 = 3.0 * step; x2 < limit; x2 += step) {
    const double f2 = excess(x2);
    if (f2 > 0.0) return bisect(x1, x2);
    // For larger m the positive windows are far narrower than the scan step;
    // a local maximum just below zero is searched for a hidden crossing.
    if (f1 >= f0 && f1 >= f2 && f1 > -1e-3) {
      double a = x0;
      double b = x2;
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = b - ratio * (b - a);
      double d = a + ratio * (b - a);
      double fc = excess(c);
      double fd = excess(d);
      while (b - a > 1e-13 && fc <= 0.0 && fd <= 0.0) {
        if (fc > fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - ratio * (b - a);
          fc = excess(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + ratio * (b - a);
          fd = excess(d);
        }
      }
      if (fc > 0.0) return bisect(x0, c);
      if (fd > 0.0) return bisect(x0, d);
    }
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
  }
  throw SolveError("stability_threshold: no sign change of C_m^2 - 1 in (0, 4 pi)");
}

}  // namespace blends
