#pragma once

#include <cstddef>
#include <vector>

#include "blends/scalar.hpp"

namespace blends {

/// Truncated Taylor jet x_0 + x_1 e + ... + x_{n-1} e^{n-1}, used for
/// forward-mode differentiation through the blend kernels. Binary operations
/// assume operands of equal length.
template <Scalar S>
class Jet {
 public:
  Jet(std::size_t length, const S& value) : c_(length, S(0)) { c_[0] = value; }

  /// The independent variable: value + 1*e.
  static Jet variable(std::size_t length, const S& value) {
    Jet v(length, value);
    if (length > 1) v.c_[1] = S(1);
    return v;
  }

  std::size_t size() const noexcept { return c_.size(); }
  const S& operator[](std::size_t k) const { return c_[k]; }
  S& operator[](std::size_t k) { return c_[k]; }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator*=(const S& a) {
    for (auto& x : c_) x *= a;
    return *this;
  }

  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator*(Jet x, const S& a) { return x *= a; }
  friend Jet operator*(const S& a, Jet x) { return x *= a; }
  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet r(x.size(), S(0));
    for (std::size_t k = 0; k < x.size(); ++k) {
      S acc(0);
      for (std::size_t l = 0; l <= k; ++l) acc += x.c_[l] * y.c_[k - l];
      r.c_[k] = acc;
    }
    return r;
  }

  bool finite() const {
    for (const auto& x : c_) {
      if (!is_finite(x)) return false;
    }
    return true;
  }

 private:
  std::vector<S> c_;
};

}  // namespace blends
