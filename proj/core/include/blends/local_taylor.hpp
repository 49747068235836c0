#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blends/error.hpp"
#include "blends/scalar.hpp"

namespace blends {

/// Truncated Taylor polynomial c_0 + c_1 (z-a) + ... + c_m (z-a)^m about a knot a.
/// The grade m is "degree at most": trailing coefficients may be zero.
template <Scalar S>
class LocalTaylor {
 public:
  LocalTaylor(S knot, std::vector<S> coeffs) : knot_(std::move(knot)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ArgumentError("local Taylor polynomial needs at least one coefficient");
  }

  static LocalTaylor zero(const S& knot, int grade) {
    check_grade(grade);
    return LocalTaylor(knot, std::vector<S>(static_cast<std::size_t>(grade) + 1, S(0)));
  }

  static LocalTaylor constant(const S& knot, int grade, const S& value) {
    auto z = zero(knot, grade);
    z.coeffs_[0] = value;
    return z;
  }

  static LocalTaylor one(const S& knot, int grade) { return constant(knot, grade, S(1)); }

  const S& knot() const noexcept { return knot_; }
  int grade() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const S> coeffs() const noexcept { return coeffs_; }
  const S& operator[](std::size_t j) const { return coeffs_[j]; }

  /// Drop (or zero-pad) coefficients to reach the requested grade.
  LocalTaylor with_grade(int grade) const {
    check_grade(grade);
    std::vector<S> c(static_cast<std::size_t>(grade) + 1, S(0));
    for (std::size_t j = 0; j < c.size() && j < coeffs_.size(); ++j) c[j] = coeffs_[j];
    return LocalTaylor(knot_, std::move(c));
  }

  /// Value of the local polynomial at z.
  S operator()(const S& z) const {
    const S w = z - knot_;
    S acc = coeffs_.back();
    for (std::size_t j = coeffs_.size() - 1; j-- > 0;) acc = coeffs_[j] + w * acc;
    return acc;
  }

  friend bool operator==(const LocalTaylor&, const LocalTaylor&) = default;

 private:
  static void check_grade(int grade) {
    if (grade < 0) throw ArgumentError("grade must be nonnegative, got " + std::to_string(grade));
  }

  S knot_;
  std::vector<S> coeffs_;
};

/// Returns the grade+1 Taylor coefficients of a function about `point`.
template <Scalar S>
using SeriesOracle = std::function<std::vector<S>(const S& point, int grade)>;

/// Calls an oracle and enforces the exact-length contract.
template <Scalar S>
LocalTaylor<S> expand(const SeriesOracle<S>& oracle, const S& point, int grade) {
  if (!oracle) throw ArgumentError("empty series oracle");
  if (grade < 0) throw ArgumentError("grade must be nonnegative, got " + std::to_string(grade));
  auto c = oracle(point, grade);
  if (static_cast<int>(c.size()) != grade + 1) {
    throw ArgumentError("series oracle returned " + std::to_string(c.size()) +
                        " coefficients, expected " + std::to_string(grade + 1));
  }
  return LocalTaylor<S>(point, std::move(c));
}

namespace detail {

template <Scalar S>
void require_compatible(const LocalTaylor<S>& x, const LocalTaylor<S>& y, const char* op) {
  if (!(x.knot() == y.knot())) throw CompatibilityError(std::string(op) + ": knots differ");
  if (x.grade() != y.grade()) {
    throw CompatibilityError(std::string(op) + ": grades differ (" + std::to_string(x.grade()) + " vs " +
                             std::to_string(y.grade()) + ")");
  }
}

// Cauchy product truncated to `grade`; operands may be longer or shorter.
template <Scalar S>
std::vector<S> truncated_product(std::span<const S> x, std::span<const S> y, int grade) {
  std::vector<S> r(static_cast<std::size_t>(grade) + 1, S(0));
  for (std::size_t j = 0; j < r.size(); ++j) {
    S acc(0);
    for (std::size_t l = 0; l <= j; ++l) {
      if (l < x.size() && j - l < y.size()) acc += x[l] * y[j - l];
    }
    r[j] = acc;
  }
  return r;
}

}  // namespace detail

/// alpha*x + beta*y, coefficientwise.
template <Scalar S>
LocalTaylor<S> combine(const LocalTaylor<S>& x, const LocalTaylor<S>& y, const S& alpha, const S& beta) {
  detail::require_compatible(x, y, "combine");
  std::vector<S> c(x.coeffs().size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = alpha * x[j] + beta * y[j];
  return LocalTaylor<S>(x.knot(), std::move(c));
}

template <Scalar S>
LocalTaylor<S> multiply(const LocalTaylor<S>& x, const LocalTaylor<S>& y) {
  detail::require_compatible(x, y, "multiply");
  return LocalTaylor<S>(x.knot(), detail::truncated_product(x.coeffs(), y.coeffs(), x.grade()));
}

/// Power-series long division, truncated at the shared grade.
template <Scalar S>
LocalTaylor<S> divide(const LocalTaylor<S>& x, const LocalTaylor<S>& y) {
  detail::require_compatible(x, y, "divide");
  if (!(magnitude(y[0]) > real_t<S>(0))) {
    throw DivisionError("divide: divisor has zero constant coefficient");
  }
  std::vector<S> q(x.coeffs().size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    S acc = x[j];
    for (std::size_t l = 1; l <= j; ++l) acc -= y[l] * q[j - l];
    q[j] = acc / y[0];
  }
  return LocalTaylor<S>(x.knot(), std::move(q));
}

template <Scalar S>
LocalTaylor<S> operator+(const LocalTaylor<S>& x, const LocalTaylor<S>& y) {
  return combine(x, y, S(1), S(1));
}
template <Scalar S>
LocalTaylor<S> operator-(const LocalTaylor<S>& x, const LocalTaylor<S>& y) {
  return combine(x, y, S(1), S(-1));
}
template <Scalar S>
LocalTaylor<S> operator*(const LocalTaylor<S>& x, const LocalTaylor<S>& y) {
  return multiply(x, y);
}
template <Scalar S>
LocalTaylor<S> operator/(const LocalTaylor<S>& x, const LocalTaylor<S>& y) {
  return divide(x, y);
}

/// Series of f(inner(z)) about inner's knot. The outer function is expanded
/// about c0 = inner[0]; the tail w = inner - c0 has no constant term, so a
/// Horner sum in w truncated at inner's grade is exact to that grade.
template <Scalar S>
LocalTaylor<S> compose(const SeriesOracle<S>& outer, const LocalTaylor<S>& inner) {
  const int m = inner.grade();
  const auto f = expand(outer, inner[0], m);
  std::vector<S> w(inner.coeffs().begin(), inner.coeffs().end());
  w[0] = S(0);
  std::vector<S> acc(static_cast<std::size_t>(m) + 1, S(0));
  acc[0] = f[static_cast<std::size_t>(m)];
  for (int k = m - 1; k >= 0; --k) {
    acc = detail::truncated_product<S>(acc, w, m);
    acc[0] += f[static_cast<std::size_t>(k)];
  }
  return LocalTaylor<S>(inner.knot(), std::move(acc));
}

/// Taylor series of the solution of y'' + a y' + b y = g about the common knot
/// of the coefficient series, with y = y0 and y' = y1 there. O(grade^2).
template <Scalar S>
LocalTaylor<S> ode_taylor(const LocalTaylor<S>& a, const LocalTaylor<S>& b, const LocalTaylor<S>& g, const S& y0,
                          const S& y1, int grade) {
  if (grade < 0) throw ArgumentError("ode_taylor: grade must be nonnegative");
  if (!(a.knot() == b.knot()) || !(a.knot() == g.knot())) {
    throw CompatibilityError("ode_taylor: coefficient series must share a knot");
  }
  const int need = grade - 2;
  if (a.grade() < need || b.grade() < need || g.grade() < need) {
    throw ArgumentError("ode_taylor: coefficient series need grade >= " + std::to_string(need));
  }
  std::vector<S> c(static_cast<std::size_t>(grade) + 1, S(0));
  c[0] = y0;
  if (grade >= 1) c[1] = y1;
  for (int j = 0; j + 2 <= grade; ++j) {
    S acc = g[static_cast<std::size_t>(j)];
    for (int l = 0; l <= j; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      acc -= a[ul] * S(static_cast<real_t<S>>(j - l + 1)) * c[static_cast<std::size_t>(j - l + 1)];
      acc -= b[ul] * c[static_cast<std::size_t>(j - l)];
    }
    c[static_cast<std::size_t>(j + 2)] = acc / S(static_cast<real_t<S>>((j + 2) * (j + 1)));
  }
  return LocalTaylor<S>(a.knot(), std::move(c));
}

}  // namespace blends
