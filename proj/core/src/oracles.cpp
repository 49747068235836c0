#include "blends/oracles.hpp"

#include <cmath>
#include <numbers>

#include "blends/error.hpp"

namespace blends::oracles {

namespace {

// Terms kept from the Maclaurin series of 1/Gamma(1+x). Its coefficients fall
// below 1e-30 well before this, and shifts stay within |x| <= ~1.2.
constexpr int kMaclaurinTerms = 48;

}  // namespace

std::vector<double> reciprocal_gamma_maclaurin(int count) {
  if (count < 1) throw ArgumentError("reciprocal_gamma_maclaurin: count must be positive");
  const auto n = static_cast<std::size_t>(count);
  // l = log(1/Gamma(1+x)) = gamma x - sum_{k>=2} (-1)^k zeta(k) x^k / k
  std::vector<double> l(n, 0.0);
  if (n > 1) l[1] = std::numbers::egamma;
  for (std::size_t k = 2; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    l[k] = -sign * std::riemann_zeta(static_cast<double>(k)) / static_cast<double>(k);
  }
  // e = exp(l): e_0 = 1, e_j = (1/j) sum_{k=1}^{j} k l_k e_{j-k}
  std::vector<double> e(n, 0.0);
  e[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= j; ++k) acc += static_cast<double>(k) * l[k] * e[j - k];
    e[j] = acc / static_cast<double>(j);
  }
  return e;
}

SeriesOracle<complex> reciprocal_gamma() {
  auto maclaurin = reciprocal_gamma_maclaurin(kMaclaurinTerms);
  std::vector<complex> base(maclaurin.begin(), maclaurin.end());
  return [base = std::move(base)](const complex& a, int grade) {
    if (std::abs(a.imag()) > 1.0) {
      throw ArgumentError("reciprocal_gamma: only |Im z| <= 1 is supported");
    }
    // z = a + w = 1 + x0 + w - n with |Re x0| <= 1/2
    const double shift = std::round(a.real());
    const complex x0 = a - complex(shift, 0.0);
    const int n = 1 - static_cast<int>(shift);

    LocalTaylor<complex> result(a, taylor_shift(base, x0, grade));
    if (n > 0) {
      // 1/Gamma(z) = z (z+1) ... (z+n-1) / Gamma(z+n)
      for (int i = 0; i < n; ++i) {
        result = multiply(result, LocalTaylor<complex>(a, taylor_shift<complex>({a + double(i), 1.0}, 0.0, grade)));
      }
    } else {
      // 1/Gamma(z) = 1 / ((z-1) ... (z-|n|) Gamma(z-|n|))
      for (int i = 1; i <= -n; ++i) {
        result = divide(result, LocalTaylor<complex>(a, taylor_shift<complex>({a - double(i), 1.0}, 0.0, grade)));
      }
    }
    return std::vector<complex>(result.coeffs().begin(), result.coeffs().end());
  };
}

}  // namespace blends::oracles
