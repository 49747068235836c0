#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "blends/collocate.hpp"
#include "blends/error.hpp"
#include "blends/oracles.hpp"
#include "oracles.hpp"

using blends::complex;
using LT = blends::LocalTaylor<complex>;
using Problem = blends::OdeProblem<complex>;
namespace oracles = blends::oracles;
using blends::testing::kPi;

namespace {

Problem sho(int m, double tol = 1e-10) {
  Problem p;
  p.b = oracles::constant<complex>(1.0);
  p.grade = m;
  p.tol = tol;
  p.path = {0.0, 2 * kPi};
  p.y0 = 1.0;
  p.y1 = 0.0;
  return p;
}

Problem airy(double tol = 1e-10) {
  Problem p;
  p.b = oracles::polynomial<complex>({0.0, -1.0});
  p.grade = 12;
  p.tol = tol;
  p.path = {0.0, 2.0};
  p.y0 = 1.0;
  p.y1 = 0.0;
  return p;
}

// max |y'' + a y' + b y - g| over every deval point of the solution.
double solution_residual(const Problem& p, const blends::Blendstring<complex>& y) {
  double worst = 0;
  for (const auto& row : y.deval(2).rows) {
    const complex z = row.point;
    const complex a = blends::expand(p.a, z, 0)[0], b = blends::expand(p.b, z, 0)[0],
                  g = blends::expand(p.g, z, 0)[0];
    worst = std::max(worst, std::abs(row.derivs[2] + a * row.derivs[1] + b * row.derivs[0] - g));
  }
  return worst;
}

// Residual of the single-step blend at parameter s.
complex step_residual(const Problem& p, const LT& known, const LT& series, double s) {
  const blends::Blend<complex> y(known, series);
  const auto d = y.z_derivatives(s, 2);
  const complex b = blends::expand(p.b, y.point_at(s), 0)[0];
  return d[2] + b * d[0];
}

}  // namespace

TEST_SUITE("collocate") {
  TEST_CASE("step: polynomial solutions are exact") {
    Problem p;
    p.grade = 4;
    p.path = {0.0, 1.0};
    p.y0 = 1.0;
    for (double h : {0.1, 1.0, 7.5}) {
      const auto out = blends::collocation_step(p, blends::initial_series(p), complex(h));
      CHECK(out.accepted);
      CHECK(out.residual == 0.0);
      CHECK(std::abs(out.series[0] - 1.0) < 1e-15);
      for (int j = 1; j <= 4; ++j) CHECK(std::abs(out.series[j]) < 1e-15);
    }
  }

  TEST_CASE("step: oscillator with m = 1 and h = 2") {
    auto p = sho(1);
    const auto out = blends::collocation_step(p, blends::initial_series(p), complex(2.0));
    CHECK(std::abs(out.series[0].real() - (-1648.0 / 3728.0)) < 1e-14);
    CHECK(std::abs(blends::sho_amplification(1, 2.0).c - (-1648.0 / 3728.0)) < 1e-14);
  }

  TEST_CASE("step: decaying exponential") {
    Problem p;
    p.a = oracles::constant<complex>(1.0);
    p.grade = 3;
    p.tol = 1e-10;
    p.path = {0.0, 1.0};
    p.y0 = 1.0;
    p.y1 = -1.0;
    for (double h : {0.02, 0.05, 0.1}) {
      const auto out = blends::collocation_step(p, blends::initial_series(p), complex(h));
      CAPTURE(h);
      CHECK(out.accepted);
      CHECK(std::abs(out.series[0] - std::exp(-h)) <= std::pow(h, 2 * p.grade));
      CHECK(std::abs(out.series[1] + std::exp(-h)) <= std::pow(h, 2 * p.grade));
    }
  }

  TEST_CASE("step: argument checks") {
    auto p = sho(3);
    const auto known = blends::initial_series(p);
    CHECK_THROWS_AS(blends::collocation_step(p, known, complex(0.0)), blends::ArgumentError);
    CHECK_THROWS_AS(blends::collocation_step(p, LT::zero(0.0, 2), complex(1.0)), blends::ArgumentError);
  }

  TEST_CASE("solve: oscillator over one period") {
    const auto r = blends::solve_ivp(sho(15, 1e-12));
    const auto& end = r.solution.records().back();
    CHECK(std::abs(end.knot() - 2 * kPi) < 1e-15);
    CHECK(std::abs(end[0] - 1.0) < 1e-10);
    CHECK(std::abs(end[1]) < 1e-10);
    for (const auto& s : r.steps) {
      if (s.accepted) CHECK(s.residual <= 1e-12);
    }
  }

  TEST_CASE("solve: y'' = 0 gives z exactly") {
    Problem p;
    p.grade = 3;
    p.path = {0.0, 10.0};
    p.y1 = 1.0;
    const auto r = blends::solve_ivp(p);
    CHECK(r.solution.segment_count() <= 8);
    for (double x : {0.0, 0.3, 2.5, 7.0, 10.0}) CHECK(std::abs(r.solution(x) - x) < 1e-13);
  }

  TEST_CASE("solve: Airy equation against Runge-Kutta") {
    const auto p = airy(1e-10);
    const auto r = blends::solve_ivp(p);
    const auto ref = blends::testing::rk4_linear([](complex) { return complex(0); }, [](complex z) { return -z; },
                                                 [](complex) { return complex(0); }, 0.0, 2.0, 1.0, 0.0, 20000);
    const auto& end = r.solution.records().back();
    CHECK(std::abs(end[0] - ref[0]) < 1e-8);
    CHECK(std::abs(end[1] - ref[1]) < 1e-8);
  }

  TEST_CASE("solve: complex polygon with waypoints") {
    auto p = airy(1e-10);
    p.path = {0.0, complex(1, 0), complex(1, 1), complex(0, 1.5)};
    const auto r = blends::solve_ivp(p);
    const auto knots = r.solution.knots();
    for (const auto& w : p.path) CHECK(std::find(knots.begin(), knots.end(), w) != knots.end());
    complex y0 = 1.0, y1 = 0.0;
    for (std::size_t k = 0; k + 1 < p.path.size(); ++k) {
      const auto ref = blends::testing::rk4_linear([](complex) { return complex(0); },
                                                   [](complex z) { return -z; }, [](complex) { return complex(0); },
                                                   p.path[k], p.path[k + 1], y0, y1, 20000);
      y0 = ref[0];
      y1 = ref[1];
    }
    CHECK(std::abs(r.solution.records().back()[0] - y0) < 1e-8);
    CHECK(solution_residual(p, r.solution) <= 10 * p.tol);
  }

  TEST_CASE("solve: forcing term") {
    // y'' + y = z with y(0) = 0, y'(0) = 0: y = z - sin z.
    auto p = sho(10, 1e-11);
    p.g = oracles::identity<complex>();
    p.y0 = 0.0;
    p.path = {0.0, 4.0};
    const auto r = blends::solve_ivp(p);
    for (double x : {0.5, 1.7, 4.0}) CHECK(std::abs(r.solution(x) - (x - std::sin(x))) < 1e-9);
    CHECK(solution_residual(p, r.solution) <= 10 * p.tol);
  }

  TEST_CASE("solve: step floor is fatal") {
    auto p = sho(2, 1e-14);
    p.h_min = 0.1;
    p.h_init = 1.0;
    CHECK_THROWS_AS(blends::solve_ivp(p), blends::SolveError);
  }

  TEST_CASE("solve: problem validation") {
    auto p = sho(3);
    p.path = {0.0};
    CHECK_THROWS_AS(blends::solve_ivp(p), blends::ArgumentError);
    p = sho(3);
    p.tol = 0;
    CHECK_THROWS_AS(blends::solve_ivp(p), blends::ArgumentError);
    p = sho(0);
    CHECK_THROWS_AS(blends::solve_ivp(p), blends::ArgumentError);
    p = sho(3);
    p.h_min = 2;
    p.h_max = 1;
    CHECK_THROWS_AS(blends::solve_ivp(p), blends::ArgumentError);
  }

  TEST_CASE("solve on a fixed mesh") {
    const auto p = sho(8, 1e-9);
    const auto adaptive = blends::solve_ivp(p);
    const auto knots = adaptive.solution.knots();
    const auto fixed = blends::solve_on_mesh<complex>(p, knots);
    CHECK(fixed.all_accepted());
    CHECK(fixed.solution.knots() == knots);
    const std::vector<complex> coarse{0.0, 2 * kPi};
    CHECK_FALSE(blends::solve_on_mesh<complex>(p, coarse).all_accepted());
  }

  TEST_CASE("oscillator amplification") {
    CHECK(blends::sho_amplification(2, 1.0).c ==
          doctest::Approx(blends::testing::printed_c(2, 1.0)).epsilon(1e-12));
    const auto tiny = blends::sho_amplification(4, 1e-4);
    CHECK(std::abs(tiny.c - 1.0) < 1e-8);
    CHECK(std::abs(tiny.s) < 2e-4);
    for (int m = 1; m <= 3; ++m) {
      for (double nu : {0.5, 1.0, 2.0, 3.0}) {
        CAPTURE(m);
        CAPTURE(nu);
        const double printed = blends::testing::printed_c(m, nu);
        CHECK(std::abs(blends::sho_amplification(m, nu).c - printed) <= 1e-10 * std::abs(printed));
      }
    }
    CHECK_THROWS_AS(blends::sho_amplification(0, 1.0), blends::ArgumentError);
    CHECK_THROWS_AS(blends::sho_amplification(2, 0.0), blends::ArgumentError);
  }

  TEST_CASE("oscillator step matrix has unit determinant") {
    for (int m = 1; m <= 3; ++m) {
      for (int k = 1; k <= 50; ++k) {
        const double nu = 3.0 * k / 51.0;
        const auto a = blends::sho_step_matrix(m, nu);
        const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        CAPTURE(m);
        CAPTURE(nu);
        CHECK(std::abs(det - 1.0) < 1e-10);
        CHECK(std::abs(a[1][1] - a[0][0]) < 1e-12);
      }
    }
  }

  TEST_CASE("stability thresholds") {
    const double expected[] = {0.94035, 0.99817, 0.99997};
    for (int m = 1; m <= 3; ++m) {
      CHECK(std::abs(blends::stability_threshold(m) / kPi - expected[m - 1]) < 1e-4);
    }
    for (int m = 1; m <= 6; ++m) {
      const double nu = blends::stability_threshold(m);
      const double c = blends::sho_amplification(m, nu + 1e-7).c;
      CHECK(c * c - 1.0 > 0.0);
    }
    CHECK_THROWS_AS(blends::stability_threshold(0), blends::ArgumentError);
    CHECK_THROWS_AS(blends::stability_threshold(7), blends::ArgumentError);
  }

  TEST_CASE("property: instability window for m = 3 is narrow and shallow") {
    double excess = -1, lambda_max = 0, first = 0, last = 0;
    for (int k = 0; k <= 20000; ++k) {
      const double nu = kPi * (0.9995 + 0.002 * k / 20000.0);
      const auto a = blends::sho_step_matrix(3, nu);
      const double c = a[0][0];
      excess = std::max(excess, c * c - 1);
      if (c * c > 1) {
        if (first == 0) first = nu;
        last = nu;
      }
      // Unit determinant: eigenvalues c +- sqrt(c^2 - 1).
      lambda_max = std::max(lambda_max, c * c > 1 ? std::abs(c) + std::sqrt(c * c - 1) : 1.0);
    }
    MESSAGE("max C^2-1 " << excess << ", window [" << first / kPi << ", " << last / kPi << "] pi, max |lambda| "
                         << lambda_max);
    CHECK(excess > 0);
    CHECK(excess < 3.13e-6);
    CHECK(std::abs(first / kPi - 0.99997) < 1e-5);
    CHECK(std::abs(last / kPi - 1.0011) < 1e-4);
    // |lambda| - 1 is the square root of the excess, not the excess itself.
    CHECK(std::abs((lambda_max - 1) - std::sqrt(excess)) < 1e-2 * std::sqrt(excess));
  }

  TEST_CASE("property: one-step oscillator error decays like h^(2m+2)") {
    for (int m : {2, 3}) {
      std::vector<double> hs{0.4, 0.2, 0.1}, errs;
      for (double h : hs) errs.push_back(std::abs(blends::sho_amplification(m, h).c - std::cos(h)));
      const double slope = blends::testing::loglog_slope(hs, errs);
      MESSAGE("m=" << m << " one-step slope " << slope);
      CHECK(std::abs(slope - (2 * m + 2)) <= 0.5);
    }
  }

  TEST_CASE("property: residual vanishes at the collocation points and peaks mid-step") {
    for (int m : {2, 3, 5}) {
      auto p = sho(m, 1.0);
      const auto known = blends::initial_series(p);
      const double h = 0.3;
      const auto out = blends::collocation_step(p, known, complex(h));
      double peak = 0, peak_at = 0;
      for (int k = 1; k < 400; ++k) {
        const double s = k / 400.0;
        const double r = std::abs(step_residual(p, known, out.series, s));
        if (r > peak) {
          peak = r;
          peak_at = s;
        }
      }
      CAPTURE(m);
      CHECK(std::abs(step_residual(p, known, out.series, 0.25)) <= 1e-9 * peak + 1e-15);
      CHECK(std::abs(step_residual(p, known, out.series, 0.75)) <= 1e-9 * peak + 1e-15);
      CHECK(std::abs(peak_at - 0.5) <= 0.1);
      CHECK(std::abs(out.residual - std::abs(step_residual(p, known, out.series, 0.5))) <= 1e-12 * peak);
    }
  }

  TEST_CASE("property: solutions satisfy the equation at every table point") {
    const std::vector<Problem> problems = [] {
      std::vector<Problem> v{sho(6, 1e-9), sho(12, 1e-11), airy(1e-10), airy(1e-7)};
      Problem damped;
      damped.a = oracles::constant<complex>(0.5);
      damped.b = oracles::constant<complex>(complex(4.0, 1.0));
      damped.grade = 8;
      damped.tol = 1e-9;
      damped.path = {0.0, complex(3.0, 1.0)};
      damped.y0 = 1.0;
      v.push_back(damped);
      return v;
    }();
    for (std::size_t k = 0; k < problems.size(); ++k) {
      const auto r = blends::solve_ivp(problems[k]);
      const double res = solution_residual(problems[k], r.solution);
      CAPTURE(k);
      CHECK(res <= 10 * problems[k].tol);
    }
  }
}
