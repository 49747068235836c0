#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "blends/blendstring.hpp"
#include "blends/collocate.hpp"
#include "blends/local_taylor.hpp"
#include "blends/scalar.hpp"

namespace blends::io {

inline constexpr int kFormatVersion = 1;

/// Parses `re`, `re+imi`, `imi`, `i`, with each part a decimal or an exact
/// fraction such as `-1/3`.
complex parse_complex(std::string_view text);

/// Shortest form accepted by parse_complex, 17 significant digits per part.
std::string format_complex(const complex& z);

/// `name` or `name(arg, arg, ...)` with complex-literal arguments.
struct Call {
  std::string name;
  std::vector<complex> args;
};
Call parse_call(std::string_view text);

/// Series oracle from the function registry:
/// exp[(k)], sin[(k)], cos[(k)], identity, constant(c),
/// poly(c0, c1, ...), recip(c0, c1, ...) for 1/p, recip-gamma.
SeriesOracle<complex> function_oracle(std::string_view spec);

/// Coefficients a, b, g of y'' + a y' + b y = g from the equation registry:
/// sho, airy (y'' = z y), mathieu(a, q), constant-coefficient(a, b, g).
struct Equation {
  SeriesOracle<complex> a, b, g;
};
Equation equation_oracles(std::string_view spec);

/// Blendstring document (JSON text).
std::string to_document(const Blendstring<complex>& x);
Blendstring<complex> from_document(std::string_view text);

/// Evaluation table as CSV: re_z, im_z, re_d0, im_d0, ...
void write_csv(std::ostream& out, const EvalTable<complex>& table);
std::string to_csv(const EvalTable<complex>& table);

/// Step log as CSV: step, re_from, im_from, re_to, im_to, h, residual, retries, accepted.
void write_step_log(std::ostream& out, const std::vector<StepRecord<complex>>& steps);

/// ODE problem document (JSON text):
///   {"equation": "mathieu(2, 1.5i)", "path": ["0", "6.28"], "y0": "1", "y1": "0",
///    "grade": 10, "tol": 1e-10, "h_init": 0.1, "h_min": 1e-8, "h_max": 1}
/// Scalars may be numbers, complex literals, or {"re": .., "im": ..} objects.
OdeProblem<complex> problem_from_document(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace blends::io
