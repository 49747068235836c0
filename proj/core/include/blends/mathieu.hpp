#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blends/blendstring.hpp"
#include "blends/collocate.hpp"
#include "blends/error.hpp"
#include "blends/local_taylor.hpp"
#include "blends/oracles.hpp"
#include "blends/scalar.hpp"

namespace blends::mathieu {

/// y'' + (a - 2 q cos 2z) y = 0.
template <Scalar S>
struct Params {
  S a;
  S q;
};

/// Series oracle for a - 2 q cos(2z).
template <Scalar S>
SeriesOracle<S> potential(const Params<S>& params) {
  return [params, cos2 = oracles::cos<S>(S(2))](const S& z, int grade) {
    auto c = cos2(z, grade);
    for (auto& x : c) x *= S(-2) * params.q;
    c[0] += params.a;
    return c;
  };
}

/// Homogeneous Mathieu problem along `path` with the given initial values.
template <Scalar S>
OdeProblem<S> problem(const Params<S>& params, std::vector<S> path, int grade, real_t<S> tol, S y0, S y1) {
  OdeProblem<S> p;
  p.b = potential(params);
  p.path = std::move(path);
  p.grade = grade;
  p.tol = tol;
  p.y0 = y0;
  p.y1 = y1;
  return p;
}

namespace detail {

// Arclength of each knot along a polygonal path; knots must run along it in order.
template <Scalar S>
std::vector<real_t<S>> path_positions(std::span<const S> path, std::span<const S> knots) {
  using R = real_t<S>;
  std::vector<R> cumulative{R(0)};
  for (std::size_t k = 1; k < path.size(); ++k) cumulative.push_back(cumulative.back() + magnitude(path[k] - path[k - 1]));
  std::vector<R> out;
  out.reserve(knots.size());
  std::size_t leg = 0;
  for (const auto& z : knots) {
    while (leg + 2 < path.size()) {
      const S s = (z - path[leg]) / (path[leg + 1] - path[leg]);
      if (std::abs(std::imag(s)) <= R(1e-10) && std::real(s) <= R(1) + R(1e-10)) break;
      ++leg;
    }
    out.push_back(cumulative[leg] + magnitude(z - path[leg]));
  }
  return out;
}

template <Scalar S>
std::vector<S> merge_meshes(std::span<const S> path, std::span<const S> x, std::span<const S> y) {
  using R = real_t<S>;
  const auto px = path_positions<S>(path, x);
  const auto py = path_positions<S>(path, y);
  std::vector<std::pair<R, S>> all;
  for (std::size_t k = 0; k < x.size(); ++k) all.emplace_back(px[k], x[k]);
  for (std::size_t k = 0; k < y.size(); ++k) all.emplace_back(py[k], y[k]);
  std::stable_sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  const R scale = std::max(R(1), all.back().first);
  std::vector<S> out;
  R last = -R(1);
  for (const auto& [pos, z] : all) {
    if (!out.empty() && pos - last <= R(1e-13) * scale) continue;
    out.push_back(z);
    last = pos;
  }
  return out;
}

}  // namespace detail

/// Two independent solutions on one knot sequence.
template <Scalar S>
struct SolutionPair {
  Blendstring<S> first;   ///< (y, y') = (1, 0) at the path start
  Blendstring<S> second;  ///< (y, y') = (0, 1) at the path start
  SolveResult<S> first_log;
  SolveResult<S> second_log;
};

/// Solves for w_I and w_II on a shared mesh. The mesh is chosen adaptively for
/// w_I and then frozen for w_II; if w_II misses the tolerance on that mesh, the
/// union with w_II's own adaptive mesh is used for both.
template <Scalar S>
SolutionPair<S> solution_pair(const Params<S>& params, const std::vector<S>& path, int grade, real_t<S> tol) {
  const auto first_problem = problem(params, path, grade, tol, S(1), S(0));
  const auto second_problem = problem(params, path, grade, tol, S(0), S(1));
  auto first = solve_ivp(first_problem);
  const auto mesh = first.solution.knots();
  auto second = solve_on_mesh<S>(second_problem, mesh);
  if (!second.all_accepted()) {
    const auto own = solve_ivp(second_problem).solution.knots();
    const auto merged = detail::merge_meshes<S>(path, mesh, own);
    first = solve_on_mesh<S>(first_problem, merged);
    second = solve_on_mesh<S>(second_problem, merged);
    if (!first.all_accepted() || !second.all_accepted()) {
      throw SolveError("solution_pair: could not find a mesh acceptable for both solutions");
    }
  }
  return {first.solution, second.solution, std::move(first), std::move(second)};
}

/// Particular solution u of u'' + b(z) u + f = 0 with u(z0) = u'(z0) = 0 from
/// the Green's function of two solutions with unit Wronskian:
///   u = -w_II * int_0^z w_I f + w_I * int_0^z w_II f.
/// The antiderivatives come back one grade higher and are truncated to the
/// common grade before the products.
template <Scalar S>
Blendstring<S> generalized_eigenfunction(const Blendstring<S>& w1, const Blendstring<S>& w2,
                                         const Blendstring<S>& forcing) {
  if (!w1.compatible_with(w2) || !w1.compatible_with(forcing)) {
    throw CompatibilityError("generalized_eigenfunction: blendstrings are not compatible");
  }
  const int m = w1.grade();
  const auto int1 = (w1 * forcing).antiderivative().with_grade(m);
  const auto int2 = (w2 * forcing).antiderivative().with_grade(m);
  return w1 * int2 - w2 * int1;
}

/// Characteristic value a for an even pi-periodic solution (ce_2n type): root
/// of the shooting function a -> y'(pi/2) with y(0) = 1, y'(0) = 0.
///
/// With real q and a sign change over the bracket, an Illinois false-position
/// iteration is used; otherwise the secant method runs from the bracket ends
/// in the complex plane.
template <Scalar S>
S even_characteristic_value(const S& q, real_t<S> lo, real_t<S> hi, int grade, real_t<S> tol,
                            int max_iterations = 100) {
  using R = real_t<S>;
  if (!(lo < hi)) throw ArgumentError("even_characteristic_value: need lo < hi");
  const std::vector<S> path{S(0), S(std::numbers::pi_v<R> / R(2))};
  const auto shoot = [&](const S& a) {
    auto p = problem(Params<S>{a, q}, path, grade, tol, S(1), S(0));
    return solve_ivp(p).solution.records().back()[1];
  };

  S x0(lo), x1(hi);
  S f0 = shoot(x0), f1 = shoot(x1);
  const R scale = std::max({R(1), magnitude(f0), magnitude(f1)});
  if (magnitude(f0) < tol * scale) return x0;
  if (magnitude(f1) < tol * scale) return x1;

  const bool real_problem = std::imag(q) == R(0);
  if (real_problem) {
    R a = lo, b = hi, fa = std::real(f0), fb = std::real(f1);
    if (fa * fb > R(0)) throw SolveError("even_characteristic_value: no sign change over the bracket");
    int side = 0;
    for (int it = 0; it < max_iterations; ++it) {
      const R c = (a * fb - b * fa) / (fb - fa);
      const R fc = std::real(shoot(S(c)));
      if (std::abs(fc) < tol * scale || (b - a) < tol * std::max(R(1), std::abs(c))) return S(c);
      if (fc * fb < R(0)) {
        a = b;
        fa = fb;
        side = 0;
      } else {
        // Illinois: halve the retained endpoint's value when it survives twice.
        if (side == -1) fa *= R(0.5);
        side = -1;
      }
      b = c;
      fb = fc;
      if (a > b) {
        std::swap(a, b);
        std::swap(fa, fb);
        side = -side;
      }
    }
    throw SolveError("even_characteristic_value: no convergence after " + std::to_string(max_iterations) +
                     " iterations");
  }

  for (int it = 0; it < max_iterations; ++it) {
    const S x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    const S f2 = shoot(x2);
    if (magnitude(f2) < tol * scale) return x2;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
  }
  throw SolveError("even_characteristic_value: no convergence after " + std::to_string(max_iterations) +
                   " iterations");
}

/// Everything the generalized-eigenfunction pipeline produces.
template <Scalar S>
struct DemoResult {
  SolutionPair<S> pair;        ///< w_I, w_II on [0, 2 pi]
  Blendstring<S> generalized;  ///< u with forcing w_I
  SolveResult<S> modified;     ///< w_I continued up the imaginary axis to i xi0
  S modified_end;              ///< w_I(i xi0), the modified function value
};

/// w_I, w_II on [0, 2 pi], u from the Green's function with forcing w_I, and
/// w_I on [0, i xi0].
template <Scalar S>
DemoResult<S> run_demo(const Params<S>& params, real_t<S> xi0, int grade, real_t<S> tol) {
  using R = real_t<S>;
  if (!(xi0 > R(0))) throw ArgumentError("mathieu demo: xi0 must be positive");
  const std::vector<S> period{S(0), S(2 * std::numbers::pi_v<R>)};
  auto pair = solution_pair(params, period, grade, tol);
  auto u = generalized_eigenfunction(pair.first, pair.second, pair.first);
  auto vertical = solve_ivp(problem(params, {S(0), S(R(0), xi0)}, grade, tol, S(1), S(0)));
  const S end = vertical.solution.records().back()[0];
  return {std::move(pair), std::move(u), std::move(vertical), end};
}

}  // namespace blends::mathieu
