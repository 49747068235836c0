#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "blends/error.hpp"
#include "blends/mathieu.hpp"
#include "oracles.hpp"

using blends::complex;
using BS = blends::Blendstring<complex>;
using Params = blends::mathieu::Params<complex>;
namespace mathieu = blends::mathieu;
namespace frozen = blends::testing::frozen;
using blends::testing::kPi;

namespace {

const std::vector<complex> kPeriod{0.0, 2 * kPi};

Params double_point() { return {frozen::kDoublePointA, complex(0.0, frozen::kDoublePointQImag)}; }

// max |u'' + (a - 2q cos 2z) u + f| over the table points, and max |u|.
std::pair<double, double> forced_residual(const Params& p, const BS& u, const BS& f) {
  const auto tu = u.deval(2), tf = f.deval(0);
  double worst = 0, peak = 0;
  for (std::size_t k = 0; k < tu.rows.size(); ++k) {
    const complex z = tu.rows[k].point;
    const auto& d = tu.rows[k].derivs;
    worst = std::max(worst, std::abs(d[2] + (p.a - 2.0 * p.q * std::cos(2.0 * z)) * d[0] + tf.rows[k].derivs[0]));
    peak = std::max(peak, std::abs(d[0]));
  }
  return {worst, peak};
}

double wronskian_spread(const BS& w1, const BS& w2) {
  const auto t1 = w1.deval(1), t2 = w2.deval(1);
  double worst = 0;
  for (std::size_t k = 0; k < t1.rows.size(); ++k) {
    const auto& a = t1.rows[k].derivs;
    const auto& b = t2.rows[k].derivs;
    worst = std::max(worst, std::abs(a[0] * b[1] - a[1] * b[0] - 1.0));
  }
  return worst;
}

}  // namespace

TEST_SUITE("mathieu") {
  TEST_CASE("coefficient oracle") {
    const auto c1 = mathieu::potential(Params{1.0, 0.0})(0.0, 2);
    CHECK(std::abs(c1[0] - 1.0) < 1e-15);
    CHECK(std::abs(c1[1]) < 1e-15);
    CHECK(std::abs(c1[2]) < 1e-15);
    const auto c2 = mathieu::potential(Params{0.0, 1.0})(0.0, 2);
    CHECK(std::abs(c2[0] + 2.0) < 1e-15);
    CHECK(std::abs(c2[1]) < 1e-15);
    CHECK(std::abs(c2[2] - 4.0) < 1e-15);
    const Params p{2.0, complex(0, 1.5)};
    for (double xi : {0.3, 1.0, 1.485}) {
      const auto c = mathieu::potential(p)(complex(0, xi), 0);
      CHECK(std::abs(c[0] - (p.a - 2.0 * p.q * std::cosh(2 * xi))) < 1e-13 * std::cosh(2 * xi));
    }
  }

  TEST_CASE("pair reduces to cos and sin when q = 0") {
    const auto pair = mathieu::solution_pair(Params{1.0, 0.0}, kPeriod, 12, 1e-11);
    CHECK(pair.first.compatible_with(pair.second));
    const auto& e1 = pair.first.records().back();
    const auto& e2 = pair.second.records().back();
    CHECK(std::abs(e1[0] - 1.0) < 1e-9);
    CHECK(std::abs(e1[1]) < 1e-9);
    CHECK(std::abs(e2[0]) < 1e-9);
    CHECK(std::abs(e2[1] - 1.0) < 1e-9);
    const auto cos2 = mathieu::solution_pair(Params{4.0, 0.0}, kPeriod, 12, 1e-11);
    for (double x : {0.4, 1.9, 3.3, 6.0}) CHECK(std::abs(cos2.first(x) - std::cos(2 * x)) < 1e-9);
  }

  TEST_CASE("pair has unit Wronskian") {
    for (const Params& p : {Params{1.3, 0.7}, Params{2.0, complex(0, 1.5)}, double_point()}) {
      const auto pair = mathieu::solution_pair(p, kPeriod, 14, 1e-10);
      CHECK(pair.first.knots() == pair.second.knots());
      CHECK(wronskian_spread(pair.first, pair.second) < 1e-8);
    }
  }

  TEST_CASE("mesh merging keeps path order and drops duplicates") {
    const std::vector<complex> path{0.0, 1.0, complex(1, 1)};
    const std::vector<complex> x{0.0, 0.5, 1.0, complex(1, 0.5), complex(1, 1)};
    const std::vector<complex> y{0.0, 0.25, 1.0, complex(1, 0.75), complex(1, 1)};
    const auto merged = mathieu::detail::merge_meshes<complex>(path, x, y);
    const std::vector<complex> expected{0.0, 0.25, 0.5, 1.0, complex(1, 0.5), complex(1, 0.75), complex(1, 1)};
    CHECK(merged == expected);
  }

  TEST_CASE("green's function: zero forcing") {
    const auto pair = mathieu::solution_pair(Params{1.3, 0.7}, kPeriod, 10, 1e-9);
    const auto knots = pair.first.knots();
    const auto zero = BS::build(knots, pair.first.grade(), blends::oracles::zero<complex>());
    const auto u = mathieu::generalized_eigenfunction(pair.first, pair.second, zero);
    for (const auto& row : u.deval(0).rows) CHECK(std::abs(row.derivs[0]) == 0.0);
  }

  TEST_CASE("green's function: resonant oscillator closed form") {
    const Params p{1.0, 0.0};
    const double tol = 1e-10;
    const auto pair = mathieu::solution_pair(p, kPeriod, 14, tol);
    const auto u = mathieu::generalized_eigenfunction(pair.first, pair.second, pair.first);
    auto exact = [](double z) {
      return -(z / 2) * std::sin(z) - std::sin(z) * std::sin(2 * z) / 4 + std::cos(z) * std::sin(z) * std::sin(z) / 2;
    };
    for (double x : {0.5, 1.0, 2.0, kPi, 4.5, 6.0}) CHECK(std::abs(u(x) - exact(x)) < 1e-8);
    CHECK(std::abs(u(kPi)) < 1e-8);
    const auto [res, peak] = forced_residual(p, u, pair.first);
    CHECK(res <= 100 * tol);
    CHECK_THROWS_AS(mathieu::generalized_eigenfunction(pair.first, pair.second, pair.first.with_grade(3)),
                    blends::CompatibilityError);
  }

  TEST_CASE("frozen double point matches the Fourier-matrix oracle") {
    const auto ev = blends::testing::mathieu_even_characteristic_values(complex(0, frozen::kDoublePointQImag));
    std::vector<double> dist;
    for (const auto& a : ev) dist.push_back(std::abs(a - frozen::kDoublePointA));
    std::sort(dist.begin(), dist.end());
    // A double eigenvalue splits like the square root of the perturbation.
    CHECK(dist[0] < 1e-6);
    CHECK(dist[1] < 1e-6);
    CHECK(dist[2] > 1.0);
    const auto near = blends::testing::mathieu_even_characteristic_values(complex(0, 1.3));
    CHECK(std::abs(near[0] - near[1]) > 0.5);
  }

  TEST_CASE("generalized eigenfunction at the double point") {
    const double tol = 1e-8;
    const auto demo = mathieu::run_demo(double_point(), 1.485, 15, tol);
    const auto& u = demo.generalized;
    const auto [res, peak] = forced_residual(double_point(), u, demo.pair.first);
    MESSAGE("residual " << res << " max|u| " << peak);
    CHECK(res <= 100 * tol);
    CHECK(std::abs(u(0.0)) <= 1e-6 * peak);
    CHECK(std::abs(u(kPi)) <= 1e-6 * peak);
    CHECK(std::abs(u(2 * kPi)) <= 1e-6 * peak);
    // w_I is pi-periodic at a characteristic value.
    CHECK(std::abs(demo.pair.first(kPi) - 1.0) < 1e-6);
    const complex ce0(frozen::kCe0ReAt1485, frozen::kCe0ImAt1485);
    CHECK(std::abs(demo.modified_end - ce0) <= 1e-6 * std::abs(ce0));
    CHECK_THROWS_AS(mathieu::run_demo(double_point(), -1.0, 15, tol), blends::ArgumentError);
  }

  TEST_CASE("even characteristic values") {
    CHECK(std::abs(mathieu::even_characteristic_value<complex>(0.0, -0.5, 0.5, 12, 1e-10)) < 1e-8);
    CHECK(std::abs(mathieu::even_characteristic_value<complex>(0.0, 3.5, 4.5, 12, 1e-10) - 4.0) < 1e-8);

    const auto oracle1 = blends::testing::mathieu_even_characteristic_values(1.0);
    CHECK(std::abs(oracle1[0] - frozen::kA0AtQ1) < 1e-12);
    const auto a1 = mathieu::even_characteristic_value<complex>(1.0, -1.0, 0.0, 14, 1e-11);
    CHECK(std::abs(a1 - frozen::kA0AtQ1) < 1e-8);

    const complex q(0, 1.4);
    const auto oracle2 = blends::testing::mathieu_even_characteristic_values(q);
    CHECK(std::abs(oracle2[0] - frozen::kA0AtQ14i) < 1e-12);
    const auto a2 = mathieu::even_characteristic_value<complex>(q, 1.2, 1.7, 14, 1e-11);
    CHECK(std::abs(a2 - frozen::kA0AtQ14i) < 1e-8);

    CHECK_THROWS_AS(mathieu::even_characteristic_value<complex>(1.0, 0.5, 1.0, 12, 1e-10), blends::SolveError);
    CHECK_THROWS_AS(mathieu::even_characteristic_value<complex>(1.0, 1.0, 0.5, 12, 1e-10), blends::ArgumentError);
  }
}
