#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blends/blend.hpp"
#include "blends/error.hpp"
#include "blends/local_taylor.hpp"
#include "blends/scalar.hpp"

namespace blends {

/// Batch evaluation output. `derivs` are z-derivatives [f, f', ..., f^(nder)].
template <Scalar S>
struct EvalRow {
  S point;
  std::vector<S> derivs;
};

template <Scalar S>
struct EvalTable {
  int nder = 0;
  std::vector<EvalRow<S>> rows;
};

/// Piecewise two-point Hermite interpolant along the polygonal path through
/// its knots. Every record carries the same grade; adjacent knots differ but
/// a path may revisit earlier knots.
template <Scalar S>
class Blendstring {
 public:
  /// Default relative tolerance used to decide that a point lies on a segment.
  static constexpr double kDispatchTolerance = 1e-10;

  explicit Blendstring(std::vector<LocalTaylor<S>> records) : records_(std::move(records)) {
    if (records_.empty()) throw ArgumentError("blendstring needs at least one knot");
    const int g = records_.front().grade();
    for (std::size_t k = 0; k < records_.size(); ++k) {
      if (records_[k].grade() != g) {
        throw ArgumentError("blendstring: record " + std::to_string(k) + " has grade " +
                            std::to_string(records_[k].grade()) + ", expected " + std::to_string(g));
      }
      if (k > 0 && records_[k].knot() == records_[k - 1].knot()) {
        throw ArgumentError("blendstring: knots " + std::to_string(k - 1) + " and " + std::to_string(k) +
                            " coincide");
      }
    }
  }

  /// Fill records from a series oracle at each knot.
  static Blendstring build(std::span<const S> knots, int grade, const SeriesOracle<S>& oracle) {
    if (knots.empty()) throw ArgumentError("build: no knots");
    for (std::size_t k = 1; k < knots.size(); ++k) {
      if (knots[k] == knots[k - 1]) throw ArgumentError("build: consecutive knots must differ");
    }
    std::vector<LocalTaylor<S>> records;
    records.reserve(knots.size());
    for (const auto& a : knots) records.push_back(expand(oracle, a, grade));
    return Blendstring(std::move(records));
  }

  std::size_t size() const noexcept { return records_.size(); }
  std::size_t segment_count() const noexcept { return records_.size() - 1; }
  int grade() const noexcept { return records_.front().grade(); }
  std::span<const LocalTaylor<S>> records() const noexcept { return records_; }
  const LocalTaylor<S>& operator[](std::size_t k) const { return records_[k]; }

  std::vector<S> knots() const {
    std::vector<S> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.knot());
    return out;
  }

  Blend<S> segment(std::size_t k) const {
    if (k >= segment_count()) throw ArgumentError("blendstring: segment index out of range");
    return Blend<S>(records_[k], records_[k + 1]);
  }

  /// Same length, same knots, same grade.
  bool compatible_with(const Blendstring& other) const {
    if (size() != other.size() || grade() != other.grade()) return false;
    for (std::size_t k = 0; k < size(); ++k) {
      if (!(records_[k].knot() == other.records_[k].knot())) return false;
    }
    return true;
  }

  /// Value at a point on the path. Knots return their stored value exactly;
  /// otherwise the first segment whose affine parameter lies within `tol` of
  /// the real interval [0,1] is used.
  S evaluate(const S& z, double tol = kDispatchTolerance) const {
    for (const auto& r : records_) {
      if (r.knot() == z) return r[0];
    }
    for (std::size_t k = 0; k < segment_count(); ++k) {
      const S s = (z - records_[k].knot()) / (records_[k + 1].knot() - records_[k].knot());
      if (on_unit_interval(s, tol)) return segment(k).evaluate(s);
    }
    throw OffPathError("point is not on any segment of the blendstring");
  }
  S operator()(const S& z) const { return evaluate(z); }

  /// Values and z-derivatives at every knot plus `n_refine` equally spaced
  /// interior points per segment, in path order.
  EvalTable<S> deval(int n_refine, int nder) const {
    if (n_refine < 0) throw ArgumentError("deval: nRefine must be nonnegative");
    if (nder < 0) throw ArgumentError("deval: nder must be nonnegative");
    EvalTable<S> table;
    table.nder = nder;
    if (segment_count() == 0) {
      // Lone knot: derivatives straight from the Taylor data, zero above the grade.
      const auto& r = records_.front();
      std::vector<S> d(static_cast<std::size_t>(nder) + 1, S(0));
      real_t<S> factorial(1);
      for (int j = 0; j <= nder && j <= r.grade(); ++j) {
        if (j > 0) factorial *= real_t<S>(j);
        d[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j)] * S(factorial);
      }
      table.rows.push_back({r.knot(), std::move(d)});
      return table;
    }
    table.rows.reserve(segment_count() * static_cast<std::size_t>(n_refine + 1) + 1);
    const auto denom = static_cast<real_t<S>>(n_refine + 1);
    for (std::size_t k = 0; k < segment_count(); ++k) {
      const auto blend = segment(k);
      for (int i = 0; i <= n_refine; ++i) {
        const S s(static_cast<real_t<S>>(i) / denom);
        table.rows.push_back({i == 0 ? records_[k].knot() : blend.point_at(s), blend.z_derivatives(s, nder)});
      }
    }
    const auto last = segment(segment_count() - 1);
    table.rows.push_back({records_.back().knot(), last.z_derivatives(S(1), nder)});
    return table;
  }

  /// Default refinement: 2*(grade+1) interior points per segment.
  EvalTable<S> deval(int nder = 0) const { return deval(2 * (grade() + 1), nder); }

  /// Exact antiderivative, vanishing at the first knot, of grade grade()+1.
  Blendstring antiderivative() const {
    if (segment_count() == 0) throw ArgumentError("antiderivative: blendstring has no segments");
    std::vector<LocalTaylor<S>> out;
    out.reserve(size());
    S running(0);
    for (std::size_t k = 0; k < size(); ++k) {
      if (k > 0) {
        const auto blend = segment(k - 1);
        running += blend.width() * blend.integral();
      }
      const auto& r = records_[k];
      std::vector<S> c(static_cast<std::size_t>(r.grade()) + 2);
      c[0] = running;
      for (std::size_t j = 0; j < r.coeffs().size(); ++j) {
        c[j + 1] = r[j] / S(static_cast<real_t<S>>(j + 1));
      }
      out.emplace_back(r.knot(), std::move(c));
    }
    return Blendstring(std::move(out));
  }

  /// Sum of the exact segment integrals along the path.
  S integral() const {
    S total(0);
    for (std::size_t k = 0; k < segment_count(); ++k) {
      const auto blend = segment(k);
      total += blend.width() * blend.integral();
    }
    return total;
  }

  /// Drop (or zero-pad) every record to the given grade.
  Blendstring with_grade(int grade) const {
    std::vector<LocalTaylor<S>> out;
    out.reserve(size());
    for (const auto& r : records_) out.push_back(r.with_grade(grade));
    return Blendstring(std::move(out));
  }

  friend bool operator==(const Blendstring&, const Blendstring&) = default;

 private:
  static bool on_unit_interval(const S& s, double tol) {
    const auto re = std::real(s);
    const auto im = std::imag(s);
    using R = real_t<S>;
    return std::abs(im) <= R(tol) && re >= -R(tol) && re <= R(1) + R(tol);
  }

  std::vector<LocalTaylor<S>> records_;
};

template <Scalar S>
using SeriesBinaryOp = std::function<LocalTaylor<S>(const LocalTaylor<S>&, const LocalTaylor<S>&)>;

/// Apply a binary series operation knot by knot to compatible blendstrings.
template <Scalar S>
Blendstring<S> zip(const Blendstring<S>& x, const Blendstring<S>& y, const SeriesBinaryOp<S>& op) {
  if (!x.compatible_with(y)) throw CompatibilityError("zip: blendstrings are not compatible");
  std::vector<LocalTaylor<S>> out;
  out.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out.push_back(op(x[k], y[k]));
  return Blendstring<S>(std::move(out));
}

/// f(B): compose a function, given as a series oracle, onto every record.
template <Scalar S>
Blendstring<S> map(const SeriesOracle<S>& f, const Blendstring<S>& x) {
  std::vector<LocalTaylor<S>> out;
  out.reserve(x.size());
  for (const auto& r : x.records()) out.push_back(compose(f, r));
  return Blendstring<S>(std::move(out));
}

template <Scalar S>
Blendstring<S> operator+(const Blendstring<S>& x, const Blendstring<S>& y) {
  return zip<S>(x, y, [](const auto& a, const auto& b) { return a + b; });
}
template <Scalar S>
Blendstring<S> operator-(const Blendstring<S>& x, const Blendstring<S>& y) {
  return zip<S>(x, y, [](const auto& a, const auto& b) { return a - b; });
}
template <Scalar S>
Blendstring<S> operator*(const Blendstring<S>& x, const Blendstring<S>& y) {
  return zip<S>(x, y, [](const auto& a, const auto& b) { return a * b; });
}
template <Scalar S>
Blendstring<S> operator/(const Blendstring<S>& x, const Blendstring<S>& y) {
  return zip<S>(x, y, [](const auto& a, const auto& b) { return a / b; });
}

/// alpha*x + beta*y.
template <Scalar S>
Blendstring<S> combine(const Blendstring<S>& x, const Blendstring<S>& y, const S& alpha, const S& beta) {
  return zip<S>(x, y, [&](const auto& a, const auto& b) { return combine(a, b, alpha, beta); });
}

}  // namespace blends
