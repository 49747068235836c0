#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <type_traits>

namespace blends {

/// Traits describing a complex scalar type. Specialize for extended-precision
/// complex types; the library never hard-codes a machine epsilon.
template <typename S>
struct scalar_traits;

template <std::floating_point R>
struct scalar_traits<std::complex<R>> {
  using real_type = R;

  static R magnitude(const std::complex<R>& z) { return std::abs(z); }
  static bool is_finite(const std::complex<R>& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  }
  static std::complex<R> from_real(R x) { return std::complex<R>(x, R(0)); }
};

template <typename S>
concept Scalar = requires(S a, S b) {
  typename scalar_traits<S>::real_type;
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { -a } -> std::convertible_to<S>;
  { scalar_traits<S>::magnitude(a) } -> std::convertible_to<typename scalar_traits<S>::real_type>;
  { scalar_traits<S>::is_finite(a) } -> std::convertible_to<bool>;
};

template <Scalar S>
using real_t = typename scalar_traits<S>::real_type;

template <Scalar S>
real_t<S> magnitude(const S& z) {
  return scalar_traits<S>::magnitude(z);
}

template <Scalar S>
bool is_finite(const S& z) {
  return scalar_traits<S>::is_finite(z);
}

/// Default instantiation used by the CLI and the file formats.
using complex = std::complex<double>;

}  // namespace blends
