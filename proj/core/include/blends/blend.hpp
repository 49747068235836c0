#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blends/error.hpp"
#include "blends/jet.hpp"
#include "blends/local_taylor.hpp"
#include "blends/scalar.hpp"

namespace blends {

namespace detail {

template <Scalar S>
S constant_like(const S&, const S& v) {
  return v;
}
template <Scalar S>
Jet<S> constant_like(const Jet<S>& x, const S& v) {
  return Jet<S>(x.size(), v);
}

template <Scalar S>
bool finite_value(const S& v) {
  return is_finite(v);
}
template <Scalar S>
bool finite_value(const Jet<S>& v) {
  return v.finite();
}

// x^e for e >= 1 by binary powering.
template <typename V>
V integer_power(const V& x, int e) {
  V r = x;
  V base = x;
  for (int k = e - 1; k > 0;) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return r;
}

// One half of Hermite's two-point formula:
//   sum_{k=0}^{d} C(other+k, k) x^k P_{d-k}(x),   P_r(x) = sum_{j<=r} c_j x^j,
// with d = c.size()-1. Partial sums run forward, then a Horner pass runs
// backward; binomials are carried as running products.
template <Scalar S, typename V>
V hermite_half(const V& x, std::span<const S> c, int other) {
  using R = real_t<S>;
  const int d = static_cast<int>(c.size()) - 1;

  std::vector<R> binom(static_cast<std::size_t>(d) + 1);
  binom[0] = R(1);
  for (int k = 1; k <= d; ++k) {
    binom[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k - 1)] * R(other + k) / R(k);
    if (!std::isfinite(binom[static_cast<std::size_t>(k)])) {
      throw OverflowError("blend: binomial weight C(" + std::to_string(other + k) + "," + std::to_string(k) +
                          ") overflows");
    }
  }

  std::vector<V> partial;
  partial.reserve(c.size());
  V power = constant_like(x, S(1));
  V acc = constant_like(x, c[0]);
  partial.push_back(acc);
  for (int r = 1; r <= d; ++r) {
    power = power * x;
    acc += c[static_cast<std::size_t>(r)] * power;
    partial.push_back(acc);
  }

  V result = S(binom[static_cast<std::size_t>(d)]) * partial[0];
  for (int k = d - 1; k >= 0; --k) {
    result = S(binom[static_cast<std::size_t>(k)]) * partial[static_cast<std::size_t>(d - k)] + x * result;
  }
  if (!finite_value(result)) throw OverflowError("blend: non-finite intermediate in Horner pass");
  return result;
}

}  // namespace detail

/// Two-point Hermite interpolant between Taylor data at knots a and b,
/// expressed in the unit parameter s with z = a + s (b - a).
///
/// Evaluation and integration work on the s-scaled coefficients
/// p_j = c_j (b-a)^j and q_j likewise, so derivative outputs are with respect
/// to s; divide the k-th one by (b-a)^k for z-derivatives.
template <Scalar S>
class Blend {
 public:
  Blend(LocalTaylor<S> left, LocalTaylor<S> right) : left_(std::move(left)), right_(std::move(right)) {
    if (left_.knot() == right_.knot()) throw ArgumentError("blend: endpoint knots must be distinct");
    const S h = width();
    p_.resize(left_.coeffs().size());
    q_.resize(right_.coeffs().size());
    S scale(1);
    for (std::size_t j = 0; j < p_.size(); ++j) {
      p_[j] = left_[j] * scale;
      scale *= h;
    }
    scale = S(1);
    for (std::size_t j = 0; j < q_.size(); ++j) {
      q_[j] = right_[j] * scale;
      scale *= h;
    }
    // The blend reproduces the left Taylor polynomial T exactly, so
    // H[p, q] = T + H[0, q - T's data at s = 1]. Only the small difference
    // goes through the kernel, which keeps derivatives free of cancellation
    // between O(1) terms. The right half consumes (-1)^k times the difference.
    gap_.assign(q_.begin(), q_.end());
    for (std::size_t k = 0; k < gap_.size(); ++k) {
      real_t<S> binom(1);
      S shifted(0);
      for (std::size_t j = k; j < p_.size(); ++j) {
        shifted += S(binom) * p_[j];
        binom = binom * real_t<S>(j + 1) / real_t<S>(j + 1 - k);
      }
      gap_[k] -= shifted;
      if (k % 2 == 1) gap_[k] = -gap_[k];
    }
  }

  const LocalTaylor<S>& left() const noexcept { return left_; }
  const LocalTaylor<S>& right() const noexcept { return right_; }
  int left_grade() const noexcept { return left_.grade(); }
  int right_grade() const noexcept { return right_.grade(); }
  S width() const { return right_.knot() - left_.knot(); }
  S point_at(const S& s) const { return left_.knot() + s * width(); }

  /// H(s) in O(m+n) operations. Accurate for s in [0,1]; growth off the
  /// segment is like |s|^(m+n+1).
  S evaluate(const S& s) const { return kernel(s); }
  S operator()(const S& s) const { return evaluate(s); }

  /// [H(s), H'(s), ..., H^(nder)(s)], derivatives with respect to s.
  std::vector<S> derivatives(const S& s, int nder) const {
    if (nder < 0) throw ArgumentError("blend: derivative order must be nonnegative");
    const auto len = static_cast<std::size_t>(nder) + 1;
    const Jet<S> jet = kernel(Jet<S>::variable(len, s));
    std::vector<S> out(len);
    real_t<S> factorial(1);
    for (std::size_t k = 0; k < len; ++k) {
      if (k > 0) factorial *= real_t<S>(k);
      out[k] = jet[k] * S(factorial);
    }
    return out;
  }

  /// Same as derivatives() but with respect to z.
  std::vector<S> z_derivatives(const S& s, int nder) const {
    auto d = derivatives(s, nder);
    const S inv = S(1) / width();
    S scale(1);
    for (auto& x : d) {
      x *= scale;
      scale *= inv;
    }
    return d;
  }

  /// Exact integral of H over s in [0,1]; multiply by width() for the
  /// z-integral over the segment.
  S integral() const {
    using R = real_t<S>;
    const int m = left_.grade();
    const int n = right_.grade();
    S total(0);
    R w = R(m + 1) / R(m + n + 2);
    for (int j = 0; j <= m; ++j) {
      total += S(w / R(j + 1)) * p_[static_cast<std::size_t>(j)];
      w *= R(m - j) / R(n + m + 1 - j);
    }
    w = R(n + 1) / R(m + n + 2);
    for (int j = 0; j <= n; ++j) {
      const S signed_q = (j % 2 == 0) ? q_[static_cast<std::size_t>(j)] : -q_[static_cast<std::size_t>(j)];
      total += S(w / R(j + 1)) * signed_q;
      w *= R(n - j) / R(n + m + 1 - j);
    }
    if (!is_finite(total)) throw OverflowError("blend: non-finite integral");
    return total;
  }

 private:
  template <typename V>
  V kernel(const V& s) const {
    const int m = left_.grade();
    const V one = detail::constant_like(s, S(1));
    const V t = one + S(-1) * s;
    V taylor = detail::constant_like(s, p_.back());
    for (std::size_t j = p_.size() - 1; j-- > 0;) taylor = taylor * s + detail::constant_like(s, p_[j]);
    const V right_part = detail::hermite_half<S>(t, std::span<const S>(gap_), m);
    V result = taylor + detail::integer_power(s, m + 1) * right_part;
    if (!detail::finite_value(result)) throw OverflowError("blend: non-finite value");
    return result;
  }

  LocalTaylor<S> left_;
  LocalTaylor<S> right_;
  std::vector<S> p_;
  std::vector<S> q_;
  std::vector<S> gap_;
};

/// Bound factor for the integral of a blend under coefficient perturbations:
/// 2 Psi(n+m+3) - Psi(m+3) - Psi(n+3) + (n+m+4)/((n+2)(m+2)).
/// Only Psi differences appear, so Euler's constant cancels.
template <std::floating_point R = double>
R integral_condition(int m, int n) {
  if (m < 0 || n < 0) throw ArgumentError("integral_condition: grades must be nonnegative");
  // Psi(m+n+3) - Psi(m+3) = sum_{k=m+3}^{m+n+2} 1/k
  auto harmonic_gap = [](int lo, int hi) {
    R acc(0);
    for (int k = hi; k > lo; --k) acc += R(1) / R(k);
    return acc;
  };
  return harmonic_gap(m + 2, m + n + 2) + harmonic_gap(n + 2, m + n + 2) +
         R(n + m + 4) / (R(n + 2) * R(m + 2));
}

/// Lebesgue function of the two-point Hermite basis at s: the sum of |phi_j(s)|
/// over all m+n+2 basis polynomials. O((m+n)^2).
template <std::floating_point R = double>
R lebesgue_function(int m, int n, R s) {
  using C = std::complex<R>;
  if (m < 0 || n < 0) throw ArgumentError("lebesgue_function: grades must be nonnegative");
  R total(0);
  for (int side = 0; side < 2; ++side) {
    const int grade = side == 0 ? m : n;
    for (int j = 0; j <= grade; ++j) {
      auto left = LocalTaylor<C>::zero(C(0), m);
      auto right = LocalTaylor<C>::zero(C(1), n);
      std::vector<C> unit(static_cast<std::size_t>(grade) + 1, C(0));
      unit[static_cast<std::size_t>(j)] = C(1);
      if (side == 0) {
        left = LocalTaylor<C>(C(0), std::move(unit));
      } else {
        right = LocalTaylor<C>(C(1), std::move(unit));
      }
      total += std::abs(Blend<C>(std::move(left), std::move(right)).evaluate(C(s)));
    }
  }
  return total;
}

/// Location of the maximum of s^(m+1) (1-s)^(n+1) on [0,1]: (m+1)/(m+n+2).
/// (Setting the logarithmic derivative (m+1)/s - (n+1)/(1-s) to zero.)
template <std::floating_point R = double>
R truncation_peak(int m, int n) {
  if (m < 0 || n < 0) throw ArgumentError("truncation_peak: grades must be nonnegative");
  return R(m + 1) / R(m + n + 2);
}

/// max over [0,1] of s^(m+1) (1-s)^(n+1) = (m+1)^(m+1) (n+1)^(n+1) / (m+n+2)^(m+n+2),
/// computed in logarithms to stay finite for large grades.
template <std::floating_point R = double>
R truncation_factor(int m, int n) {
  if (m < 0 || n < 0) throw ArgumentError("truncation_factor: grades must be nonnegative");
  const R a = R(m + 1);
  const R b = R(n + 1);
  const R c = R(m + n + 2);
  return std::exp(a * std::log(a) + b * std::log(b) - c * std::log(c));
}

}  // namespace blends
