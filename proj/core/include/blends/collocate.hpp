#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blends/blend.hpp"
#include "blends/blendstring.hpp"
#include "blends/error.hpp"
#include "blends/local_taylor.hpp"
#include "blends/oracles.hpp"
#include "blends/scalar.hpp"

namespace blends {

/// y'' + a(z) y' + b(z) y = g(z) along a polygonal path, y(path[0]) = y0,
/// y'(path[0]) = y1. Coefficients are supplied as series oracles.
template <Scalar S>
struct OdeProblem {
  using Real = real_t<S>;

  SeriesOracle<S> a = oracles::zero<S>();
  SeriesOracle<S> b = oracles::zero<S>();
  SeriesOracle<S> g = oracles::zero<S>();
  std::vector<S> path;
  S y0 = S(0);
  S y1 = S(0);
  int grade = 10;
  Real tol = Real(1e-10);
  std::optional<Real> h_init;
  Real h_min = Real(1e-8);
  Real h_max = std::numeric_limits<Real>::infinity();

  void validate() const {
    if (!a || !b || !g) throw ArgumentError("ode problem: missing coefficient oracle");
    if (path.size() < 2) throw ArgumentError("ode problem: path needs at least two waypoints");
    for (std::size_t k = 1; k < path.size(); ++k) {
      if (path[k] == path[k - 1]) throw ArgumentError("ode problem: consecutive waypoints coincide");
    }
    if (grade < 1) throw ArgumentError("ode problem: grade must be at least 1");
    if (!(tol > Real(0))) throw ArgumentError("ode problem: tol must be positive");
    if (!(h_min > Real(0)) || !(h_min <= h_max)) throw ArgumentError("ode problem: need 0 < h_min <= h_max");
    if (h_init && !(*h_init > Real(0))) throw ArgumentError("ode problem: h_init must be positive");
  }
};

template <Scalar S>
struct StepRecord {
  S from;
  S to;
  real_t<S> h;
  real_t<S> residual;
  bool accepted;
  int retries;
};

template <Scalar S>
struct SolveResult {
  Blendstring<S> solution;
  std::vector<StepRecord<S>> steps;

  std::size_t accepted_steps() const {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) { return s.accepted; }));
  }
  bool all_accepted() const {
    return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.accepted; });
  }
};

/// Outcome of one collocation step. `series` is the solution's Taylor data at
/// the step end, `weights` the coefficients (A, B) of the two homogeneous
/// blends.
template <Scalar S>
struct StepOutcome {
  bool accepted;
  LocalTaylor<S> series;
  real_t<S> residual;
  std::array<S, 2> weights;
};

/// Collocation points and residual sample point in the unit step parameter.
inline constexpr std::array<double, 2> kCollocationPoints{0.25, 0.75};
inline constexpr double kResidualSamplePoint = 0.5;
/// Condition estimate of the 2x2 collocation system that counts as singular.
inline constexpr double kMaxCollocationCondition = 1e12;

namespace detail {

template <Scalar S>
struct CoefficientValues {
  S a, b, g;
};

template <Scalar S>
CoefficientValues<S> coefficient_values(const OdeProblem<S>& p, const S& z) {
  return {expand(p.a, z, 0)[0], expand(p.b, z, 0)[0], expand(p.g, z, 0)[0]};
}

// y'' + a y' + b y (- g) at the blend parameter s, with z-derivatives.
template <Scalar S>
S blend_residual(const Blend<S>& y, const S& s, const CoefficientValues<S>& c, bool include_g) {
  const auto d = y.z_derivatives(s, 2);
  S r = d[2] + c.a * d[1] + c.b * d[0];
  if (include_g) r -= c.g;
  return r;
}

}  // namespace detail

/// One Hermite-Obreshkov collocation step from `known` (the grade-m solution
/// series at the current knot) to the knot `to`.
///
/// At `to` the two homogeneous series with (y, y') = (1, 0) and (0, 1) are
/// generated, plus a particular series with zero initial data carrying the
/// forcing g (identically zero for homogeneous problems). With
/// L = blend(known, particular), C = blend(0, first), S = blend(0, second),
/// the combined residual of y = L + A C + B S vanishes at s = 1/4 and 3/4;
/// C and S use the homogeneous operator. The step is accepted when the
/// residual of y sampled at s = 1/2 is within tol.
template <Scalar S>
StepOutcome<S> collocation_step(const OdeProblem<S>& problem, const LocalTaylor<S>& known, const S& to) {
  using R = real_t<S>;
  const int m = problem.grade;
  if (known.grade() != m) throw ArgumentError("collocation step: known series has the wrong grade");
  const S from = known.knot();
  if (from == to) throw ArgumentError("collocation step: zero step");

  const int cgrade = std::max(m - 2, 0);
  const auto a_to = expand(problem.a, to, cgrade);
  const auto b_to = expand(problem.b, to, cgrade);
  const auto g_to = expand(problem.g, to, cgrade);
  const auto none = LocalTaylor<S>::zero(to, cgrade);
  const auto first = ode_taylor(a_to, b_to, none, S(1), S(0), m);
  const auto second = ode_taylor(a_to, b_to, none, S(0), S(1), m);
  const auto forced = ode_taylor(a_to, b_to, g_to, S(0), S(0), m);

  // Re-base the unknowns on the Taylor prediction of (y, y') at `to` so that
  // A and B are small corrections. Same solution in exact arithmetic, but the
  // O(1/h^2) collocation residuals no longer cancel down to an O(1) answer.
  const S w = to - from;
  S y_hat(0), dy_hat(0);
  for (int j = m; j >= 0; --j) {
    y_hat = y_hat * w + known[static_cast<std::size_t>(j)];
    if (j > 0) dy_hat = dy_hat * w + S(real_t<S>(j)) * known[static_cast<std::size_t>(j)];
  }
  if (!is_finite(y_hat) || !is_finite(dy_hat)) y_hat = dy_hat = S(0);
  std::vector<S> base(static_cast<std::size_t>(m) + 1);
  for (std::size_t j = 0; j < base.size(); ++j) base[j] = forced[j] + y_hat * first[j] + dy_hat * second[j];
  const LocalTaylor<S> particular(to, std::move(base));

  const auto zero_from = LocalTaylor<S>::zero(from, m);
  const Blend<S> lead(known, particular);
  const Blend<S> cos_like(zero_from, first);
  const Blend<S> sin_like(zero_from, second);

  // M [A B]^T = -r_L at the two collocation points.
  std::array<std::array<S, 2>, 2> mat;
  std::array<S, 2> rhs;
  for (std::size_t i = 0; i < 2; ++i) {
    const S s(static_cast<R>(kCollocationPoints[i]));
    const auto coeffs = detail::coefficient_values(problem, lead.point_at(s));
    mat[i][0] = detail::blend_residual(cos_like, s, coeffs, false);
    mat[i][1] = detail::blend_residual(sin_like, s, coeffs, false);
    rhs[i] = -detail::blend_residual(lead, s, coeffs, true);
  }

  const S det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0];
  const R row_norm =
      std::max(magnitude(mat[0][0]) + magnitude(mat[0][1]), magnitude(mat[1][0]) + magnitude(mat[1][1]));
  const R col_norm =
      std::max(magnitude(mat[0][0]) + magnitude(mat[1][0]), magnitude(mat[0][1]) + magnitude(mat[1][1]));
  const R det_mag = magnitude(det);
  if (!(det_mag > R(0)) || !is_finite(det)) throw StepFailure("collocation system is singular");
  // ||M||_inf * ||M^{-1}||_inf, where M^{-1} = adj(M)/det and ||adj(M)||_inf = ||M||_1.
  const R cond = row_norm * col_norm / det_mag;
  if (!(cond <= R(kMaxCollocationCondition))) {
    std::ostringstream msg;
    msg << "collocation system is ill-conditioned (condition estimate " << cond << ")";
    throw StepFailure(msg.str());
  }

  // Gaussian elimination with partial pivoting.
  std::size_t p = magnitude(mat[1][0]) > magnitude(mat[0][0]) ? 1 : 0;
  std::size_t q = 1 - p;
  const S factor = mat[q][0] / mat[p][0];
  const S u11 = mat[q][1] - factor * mat[p][1];
  const S r1 = rhs[q] - factor * rhs[p];
  const S weight_b = r1 / u11;
  const S weight_a = (rhs[p] - mat[p][1] * weight_b) / mat[p][0];

  std::vector<S> c(static_cast<std::size_t>(m) + 1);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = weight_a * first[j] + weight_b * second[j] + particular[j];
  LocalTaylor<S> series(to, std::move(c));

  const Blend<S> solution(known, series);
  const S mid(static_cast<R>(kResidualSamplePoint));
  const R residual =
      magnitude(detail::blend_residual(solution, mid, detail::coefficient_values(problem, solution.point_at(mid)), true));
  const bool accepted = std::isfinite(residual) && residual <= problem.tol;
  return {accepted, std::move(series), residual, {y_hat + weight_a, dy_hat + weight_b}};
}

/// Step of real length h along a unit direction.
template <Scalar S>
StepOutcome<S> collocation_step(const OdeProblem<S>& problem, const LocalTaylor<S>& known, const S& direction,
                                real_t<S> h) {
  return collocation_step(problem, known, known.knot() + direction * S(h));
}

/// Solution series at the first waypoint from the initial values.
template <Scalar S>
LocalTaylor<S> initial_series(const OdeProblem<S>& problem) {
  const S start = problem.path.front();
  const int cgrade = std::max(problem.grade - 2, 0);
  return ode_taylor(expand(problem.a, start, cgrade), expand(problem.b, start, cgrade),
                    expand(problem.g, start, cgrade), problem.y0, problem.y1, problem.grade);
}

namespace detail {

// Order-matched step factor: residual ~ h^(2m).
template <std::floating_point R>
R step_factor(R tol, R residual, int grade, R lo, R hi) {
  if (!(residual > R(0))) return hi;
  if (!std::isfinite(residual)) return lo;
  const R f = R(0.9) * std::pow(tol / residual, R(1) / R(2 * grade));
  return std::clamp(f, lo, hi);
}

template <Scalar S>
std::string describe(const S& z) {
  std::ostringstream os;
  os.precision(17);
  os << z;
  return os.str();
}

}  // namespace detail

/// Adaptive marching along the path, waypoint to waypoint. Steps never
/// straddle a waypoint: the last step of each leg lands on it exactly, and
/// when less than two steps remain the rest of the leg is split evenly.
///
/// Stepsize control: after an accepted step h <- h * min(2, 0.9 (tol/res)^(1/2m)),
/// after a rejection h <- h * max(0.1, 0.9 (tol/res)^(1/2m)), clamped to
/// [h_min, h_max]. A rejection at h_min is fatal.
template <Scalar S>
SolveResult<S> solve_ivp(const OdeProblem<S>& problem, std::size_t max_attempts = 100000) {
  using R = real_t<S>;
  problem.validate();

  std::vector<LocalTaylor<S>> records{initial_series(problem)};
  std::vector<StepRecord<S>> log;
  std::size_t attempts = 0;
  std::optional<R> h;

  for (std::size_t leg = 0; leg + 1 < problem.path.size(); ++leg) {
    const S start = problem.path[leg];
    const S end = problem.path[leg + 1];
    const S chord = end - start;
    const R length = magnitude(chord);
    const S direction = chord / S(length);
    if (!h) h = problem.h_init ? *problem.h_init : std::min(problem.h_max, length / R(8));
    *h = std::clamp(*h, problem.h_min, problem.h_max);

    R travelled(0);
    int retries = 0;
    while (true) {
      const R remaining = length - travelled;
      const bool lands = *h >= remaining * (R(1) - R(1e-12));
      // Split the last two steps evenly rather than leave a sliver: very short
      // steps have a larger roundoff floor in the residual.
      const bool halve = !lands && R(2) * *h > remaining;
      const R h_try = lands ? remaining : (halve ? remaining / R(2) : *h);
      const S to = lands ? end : start + direction * S(travelled + h_try);

      if (++attempts > max_attempts) throw SolveError("solver exceeded the step attempt limit");

      std::optional<StepOutcome<S>> outcome;
      R residual = std::numeric_limits<R>::infinity();
      try {
        outcome = collocation_step(problem, records.back(), to);
        residual = outcome->residual;
      } catch (const StepFailure&) {
        outcome.reset();
      }

      if (outcome && outcome->accepted) {
        log.push_back({records.back().knot(), to, h_try, residual, true, retries});
        records.push_back(std::move(outcome->series));
        retries = 0;
        const R grown = h_try * detail::step_factor(problem.tol, residual, problem.grade, R(0.1), R(2));
        // A clamped landing step says little about the natural step size.
        *h = std::clamp(lands ? std::max(grown, *h) : grown, problem.h_min, problem.h_max);
        if (lands) break;
        travelled += h_try;
        continue;
      }

      log.push_back({records.back().knot(), to, h_try, residual, false, retries});
      ++retries;
      if (h_try <= problem.h_min) {
        std::ostringstream msg;
        msg << "step size reached h_min=" << problem.h_min << " at z=" << detail::describe(records.back().knot())
            << " with residual " << residual << " > tol=" << problem.tol;
        throw SolveError(msg.str());
      }
      const R shrink = outcome ? detail::step_factor(problem.tol, residual, problem.grade, R(0.1), R(1))
                               : R(0.5);
      *h = std::clamp(h_try * shrink, problem.h_min, problem.h_max);
    }
  }
  return {Blendstring<S>(std::move(records)), std::move(log)};
}

/// March over a fixed knot sequence (starting at the first waypoint) without
/// adapting. Steps whose sampled residual exceeds tol are recorded as not
/// accepted but kept.
template <Scalar S>
SolveResult<S> solve_on_mesh(const OdeProblem<S>& problem, std::span<const S> knots) {
  problem.validate();
  if (knots.size() < 2) throw ArgumentError("solve_on_mesh: need at least two knots");
  if (!(knots.front() == problem.path.front())) throw ArgumentError("solve_on_mesh: mesh must start at the path start");
  std::vector<LocalTaylor<S>> records{initial_series(problem)};
  std::vector<StepRecord<S>> log;
  for (std::size_t k = 1; k < knots.size(); ++k) {
    auto outcome = collocation_step(problem, records.back(), knots[k]);
    log.push_back({knots[k - 1], knots[k], magnitude(knots[k] - knots[k - 1]), outcome.residual, outcome.accepted, 0});
    records.push_back(std::move(outcome.series));
  }
  return {Blendstring<S>(std::move(records)), std::move(log)};
}

/// C_m(nu) and S_m(nu): endpoint values of one collocation step of length nu
/// for y'' + y = 0 from (y, y') = (1, 0) and (0, 1) respectively.
struct ShoAmplification {
  double c;
  double s;
};
ShoAmplification sho_amplification(int m, double nu);

/// Full one-step map [[y, y'] from (1,0)], [y, y'] from (0,1)]] as columns:
/// {{C, S}, {C', S'}}.
std::array<std::array<double, 2>, 2> sho_step_matrix(int m, double nu);

/// Smallest positive root of C_m(nu)^2 - 1, found by scanning with step
/// pi/1000 and bisecting to 1e-8. Supported for 1 <= m <= 6.
double stability_threshold(int m);

}  // namespace blends
