#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "blends/local_taylor.hpp"
#include "blends/scalar.hpp"

namespace blends::oracles {

/// f(z) = value.
template <Scalar S>
SeriesOracle<S> constant(S value) {
  return [value](const S&, int grade) {
    std::vector<S> c(static_cast<std::size_t>(grade) + 1, S(0));
    c[0] = value;
    return c;
  };
}

template <Scalar S>
SeriesOracle<S> zero() {
  return constant<S>(S(0));
}

/// f(z) = z.
template <Scalar S>
SeriesOracle<S> identity() {
  return [](const S& a, int grade) {
    std::vector<S> c(static_cast<std::size_t>(grade) + 1, S(0));
    c[0] = a;
    if (grade >= 1) c[1] = S(1);
    return c;
  };
}

/// f(z) = exp(scale * z).
template <Scalar S>
SeriesOracle<S> exp(S scale = S(1)) {
  return [scale](const S& a, int grade) {
    std::vector<S> c(static_cast<std::size_t>(grade) + 1);
    using std::exp;
    c[0] = exp(scale * a);
    for (int j = 1; j <= grade; ++j) {
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] * scale / S(real_t<S>(j));
    }
    return c;
  };
}

namespace detail {

// Taylor coefficients of A cos(w) + B sin(w) scaled by `freq`, i.e. of
// A cos(freq w) + B sin(freq w).
template <Scalar S>
std::vector<S> trig_series(const S& cos_part, const S& sin_part, const S& freq, int grade) {
  std::vector<S> c(static_cast<std::size_t>(grade) + 1);
  S scale(1);
  for (int j = 0; j <= grade; ++j) {
    if (j > 0) scale = scale * freq / S(real_t<S>(j));
    S v;
    switch (j % 4) {
      case 0: v = cos_part; break;
      case 1: v = sin_part; break;
      case 2: v = -cos_part; break;
      default: v = -sin_part; break;
    }
    c[static_cast<std::size_t>(j)] = v * scale;
  }
  return c;
}

}  // namespace detail

/// f(z) = sin(freq * z).
template <Scalar S>
SeriesOracle<S> sin(S freq = S(1)) {
  return [freq](const S& a, int grade) {
    using std::cos;
    using std::sin;
    // sin(f(a+w)) = sin(fa) cos(fw) + cos(fa) sin(fw)
    return detail::trig_series(sin(freq * a), cos(freq * a), freq, grade);
  };
}

/// f(z) = cos(freq * z).
template <Scalar S>
SeriesOracle<S> cos(S freq = S(1)) {
  return [freq](const S& a, int grade) {
    using std::cos;
    using std::sin;
    // cos(f(a+w)) = cos(fa) cos(fw) - sin(fa) sin(fw)
    return detail::trig_series(cos(freq * a), -sin(freq * a), freq, grade);
  };
}

/// Taylor shift of a polynomial: given ascending coefficients c_0..c_d of p,
/// returns the coefficients of p about `a` (truncated or zero-padded).
template <Scalar S>
std::vector<S> taylor_shift(std::vector<S> c, const S& a, int grade) {
  std::vector<S> out(static_cast<std::size_t>(grade) + 1, S(0));
  // Repeated synthetic division by (z - a): each remainder is the next coefficient.
  for (std::size_t j = 0; j < out.size() && !c.empty(); ++j) {
    S acc(0);
    for (std::size_t i = c.size(); i-- > 0;) {
      const S next = c[i] + a * acc;
      c[i] = acc;
      acc = next;
    }
    out[j] = acc;
    c.pop_back();
  }
  return out;
}

/// f(z) = c_0 + c_1 z + ... + c_d z^d.
template <Scalar S>
SeriesOracle<S> polynomial(std::vector<S> coeffs) {
  return [coeffs = std::move(coeffs)](const S& a, int grade) { return taylor_shift(coeffs, a, grade); };
}

/// f(z) = 1 / p(z) for a polynomial p; fails where p vanishes.
template <Scalar S>
SeriesOracle<S> reciprocal_polynomial(std::vector<S> coeffs) {
  return [coeffs = std::move(coeffs)](const S& a, int grade) {
    const LocalTaylor<S> p(a, taylor_shift(coeffs, a, grade));
    const auto r = divide(LocalTaylor<S>::one(a, grade), p);
    return std::vector<S>(r.coeffs().begin(), r.coeffs().end());
  };
}

/// f(z) = 1/Gamma(z), entire. Built from the Maclaurin series of 1/Gamma(1+x)
/// and the functional equation 1/Gamma(z) = z / Gamma(z+1). Supported for
/// |Im z| <= 1.
SeriesOracle<complex> reciprocal_gamma();

/// Maclaurin coefficients of 1/Gamma(1+x), from
/// log Gamma(1+x) = -gamma x + sum_{k>=2} (-1)^k zeta(k) x^k / k.
std::vector<double> reciprocal_gamma_maclaurin(int count);

}  // namespace blends::oracles
