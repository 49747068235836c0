#include "blends/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "blends/error.hpp"
#include "blends/mathieu.hpp"
#include "blends/oracles.hpp"

namespace blends::io {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string number(double x) {
  if (!std::isfinite(x)) throw ArgumentError("cannot write a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_decimal(std::string_view s, std::string_view whole) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty() || !std::isfinite(value)) {
    throw ParseError("invalid number '" + std::string(s) + "' in '" + std::string(whole) + "'");
  }
  return value;
}

// Unsigned magnitude: decimal or p/q.
double parse_magnitude(std::string_view s, std::string_view whole) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s, whole);
  const double num = parse_decimal(s.substr(0, slash), whole);
  const double den = parse_decimal(s.substr(slash + 1), whole);
  if (den == 0.0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
  return num / den;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string detail = e.what();
    const auto colon = detail.rfind(": ");
    if (colon != std::string::npos) detail = detail.substr(colon + 2);
    throw ParseError("malformed JSON: " + detail, line, column);
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double real_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "number is not finite");
  return v;
}

long long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

complex pair_scalar(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object {\"re\": .., \"im\": ..}");
  for (const auto& [key, _] : j.items()) {
    if (key != "re" && key != "im") fail(where, "unexpected field '" + key + "'");
  }
  return {real_number(member(j, "re", where), where + "/re"), real_number(member(j, "im", where), where + "/im")};
}

// Number, complex literal string, or {re, im}.
complex loose_scalar(const json& j, const std::string& where) {
  if (j.is_number()) return {real_number(j, where), 0.0};
  if (j.is_string()) {
    try {
      return parse_complex(j.get<std::string>());
    } catch (const ParseError& e) {
      fail(where, e.what());
    }
  }
  if (j.is_object()) return pair_scalar(j, where);
  fail(where, "expected a number, a complex literal string, or {\"re\": .., \"im\": ..}");
}

std::size_t expect_args(const Call& call, std::size_t lo, std::size_t hi) {
  if (call.args.size() < lo || call.args.size() > hi) {
    std::string range = lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi);
    if (hi == static_cast<std::size_t>(-1)) range = "at least " + std::to_string(lo);
    throw ArgumentError("'" + call.name + "' takes " + range + " argument(s), got " +
                        std::to_string(call.args.size()));
  }
  return call.args.size();
}

constexpr std::size_t kMany = static_cast<std::size_t>(-1);

}  // namespace

complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty complex literal");

  // Split into signed terms at + or - that do not follow an exponent marker.
  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E' && s[i - 1] != '/') {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  terms.push_back(s.substr(start));
  if (terms.size() > 2) throw ParseError("too many terms in complex literal '" + s + "'");

  bool have_re = false;
  bool have_im = false;
  complex z(0.0, 0.0);
  for (std::string_view term : terms) {
    double sign = 1.0;
    if (!term.empty() && (term.front() == '+' || term.front() == '-')) {
      sign = term.front() == '-' ? -1.0 : 1.0;
      term.remove_prefix(1);
    }
    const bool imaginary = !term.empty() && (term.back() == 'i' || term.back() == 'j');
    if (imaginary) term.remove_suffix(1);
    if (!term.empty() && term.back() == '*') term.remove_suffix(1);
    double value = 1.0;
    if (!term.empty()) {
      value = parse_magnitude(term, s);
    } else if (!imaginary) {
      throw ParseError("dangling sign in complex literal '" + s + "'");
    }
    if (imaginary) {
      if (have_im) throw ParseError("two imaginary parts in '" + s + "'");
      have_im = true;
      z.imag(sign * value);
    } else {
      if (have_re) throw ParseError("two real parts in '" + s + "'");
      if (have_im) throw ParseError("real part must come first in '" + s + "'");
      have_re = true;
      z.real(sign * value);
    }
  }
  return z;
}

std::string format_complex(const complex& z) {
  if (z.imag() == 0.0) return number(z.real());
  const std::string im = number(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  return number(z.real()) + (z.imag() < 0.0 ? "" : "+") + im;
}

Call parse_call(std::string_view text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  Call call;
  if (open == std::string::npos) {
    call.name = s;
  } else {
    if (s.back() != ')') throw ParseError("missing ')' in '" + s + "'");
    call.name = trim(std::string_view(s).substr(0, open));
    const std::string inner = s.substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) {
      std::size_t from = 0;
      while (true) {
        const auto comma = inner.find(',', from);
        const auto piece = std::string_view(inner).substr(from, comma == std::string::npos ? std::string::npos
                                                                                          : comma - from);
        call.args.push_back(parse_complex(piece));
        if (comma == std::string::npos) break;
        from = comma + 1;
      }
    }
  }
  if (call.name.empty()) throw ParseError("missing name in '" + s + "'");
  for (char c : call.name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      throw ParseError("invalid character in name '" + call.name + "'");
    }
  }
  return call;
}

SeriesOracle<complex> function_oracle(std::string_view spec) {
  const Call call = parse_call(spec);
  const auto& n = call.name;
  if (n == "exp") return oracles::exp<complex>(expect_args(call, 0, 1) ? call.args[0] : complex(1.0));
  if (n == "sin") return oracles::sin<complex>(expect_args(call, 0, 1) ? call.args[0] : complex(1.0));
  if (n == "cos") return oracles::cos<complex>(expect_args(call, 0, 1) ? call.args[0] : complex(1.0));
  if (n == "identity") {
    expect_args(call, 0, 0);
    return oracles::identity<complex>();
  }
  if (n == "constant") {
    expect_args(call, 1, 1);
    return oracles::constant<complex>(call.args[0]);
  }
  if (n == "poly") {
    expect_args(call, 1, kMany);
    return oracles::polynomial<complex>(call.args);
  }
  if (n == "recip") {
    expect_args(call, 1, kMany);
    return oracles::reciprocal_polynomial<complex>(call.args);
  }
  if (n == "recip-gamma") {
    expect_args(call, 0, 0);
    return oracles::reciprocal_gamma();
  }
  throw ArgumentError("unknown function '" + n +
                      "' (known: exp, sin, cos, identity, constant, poly, recip, recip-gamma)");
}

Equation equation_oracles(std::string_view spec) {
  const Call call = parse_call(spec);
  const auto& n = call.name;
  Equation eq{oracles::zero<complex>(), oracles::zero<complex>(), oracles::zero<complex>()};
  if (n == "sho") {
    expect_args(call, 0, 0);
    eq.b = oracles::constant<complex>(1.0);
  } else if (n == "airy") {
    expect_args(call, 0, 0);
    eq.b = oracles::polynomial<complex>({0.0, -1.0});
  } else if (n == "mathieu") {
    expect_args(call, 2, 2);
    eq.b = mathieu::potential<complex>({call.args[0], call.args[1]});
  } else if (n == "constant-coefficient") {
    expect_args(call, 3, 3);
    eq.a = oracles::constant<complex>(call.args[0]);
    eq.b = oracles::constant<complex>(call.args[1]);
    eq.g = oracles::constant<complex>(call.args[2]);
  } else {
    throw ArgumentError("unknown equation '" + n + "' (known: sho, airy, mathieu, constant-coefficient)");
  }
  return eq;
}

std::string to_document(const Blendstring<complex>& x) {
  const auto pair = [](const complex& z) {
    return "{\"re\": " + number(z.real()) + ", \"im\": " + number(z.imag()) + "}";
  };
  std::string out = "{\n  \"format_version\": " + std::to_string(kFormatVersion) + ",\n";
  out += "  \"grade\": " + std::to_string(x.grade()) + ",\n  \"knots\": [";
  for (std::size_t k = 0; k < x.size(); ++k) {
    out += (k ? ",\n    " : "\n    ") + pair(x[k].knot());
  }
  out += "\n  ],\n  \"coefficients\": [";
  for (std::size_t k = 0; k < x.size(); ++k) {
    out += k ? ",\n    [" : "\n    [";
    const auto c = x[k].coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) out += (j ? ", " : "") + pair(c[j]);
    out += "]";
  }
  out += "\n  ]\n}\n";
  return out;
}

Blendstring<complex> from_document(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail("/", "document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "format_version" && key != "grade" && key != "knots" && key != "coefficients") {
      fail("/" + key, "unexpected field");
    }
  }
  const auto version = integer(member(doc, "format_version", "/"), "/format_version");
  if (version != kFormatVersion) fail("/format_version", "unsupported version " + std::to_string(version));
  const auto grade = integer(member(doc, "grade", "/"), "/grade");
  if (grade < 0 || grade > 100000) fail("/grade", "grade out of range");

  const json& knots = member(doc, "knots", "/");
  const json& coeffs = member(doc, "coefficients", "/");
  if (!knots.is_array() || knots.empty()) fail("/knots", "expected a nonempty array");
  if (!coeffs.is_array()) fail("/coefficients", "expected an array");
  if (coeffs.size() != knots.size()) {
    fail("/coefficients", "has " + std::to_string(coeffs.size()) + " rows for " + std::to_string(knots.size()) +
                              " knots");
  }
  std::vector<LocalTaylor<complex>> records;
  records.reserve(knots.size());
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const std::string row_where = "/coefficients/" + std::to_string(k);
    const json& row = coeffs[k];
    if (!row.is_array()) fail(row_where, "expected an array");
    if (row.size() != static_cast<std::size_t>(grade) + 1) {
      fail(row_where, "has " + std::to_string(row.size()) + " entries, expected grade+1 = " +
                          std::to_string(grade + 1));
    }
    std::vector<complex> c;
    c.reserve(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) c.push_back(pair_scalar(row[j], row_where + "/" + std::to_string(j)));
    records.emplace_back(pair_scalar(knots[k], "/knots/" + std::to_string(k)), std::move(c));
  }
  try {
    return Blendstring<complex>(std::move(records));
  } catch (const ArgumentError& e) {
    fail("/knots", e.what());
  }
}

void write_csv(std::ostream& out, const EvalTable<complex>& table) {
  out << "re_z,im_z";
  for (int d = 0; d <= table.nder; ++d) out << ",re_d" << d << ",im_d" << d;
  out << '\n';
  for (const auto& row : table.rows) {
    out << number(row.point.real()) << ',' << number(row.point.imag());
    for (const auto& v : row.derivs) out << ',' << number(v.real()) << ',' << number(v.imag());
    out << '\n';
  }
}

std::string to_csv(const EvalTable<complex>& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

void write_step_log(std::ostream& out, const std::vector<StepRecord<complex>>& steps) {
  out << "step,re_from,im_from,re_to,im_to,h,residual,retries,accepted\n";
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& s = steps[k];
    const std::string residual = std::isfinite(s.residual) ? number(s.residual) : std::string("inf");
    out << k << ',' << number(s.from.real()) << ',' << number(s.from.imag()) << ',' << number(s.to.real()) << ','
        << number(s.to.imag()) << ',' << number(s.h) << ',' << residual << ',' << s.retries << ','
        << (s.accepted ? 1 : 0) << '\n';
  }
}

OdeProblem<complex> problem_from_document(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail("/", "document must be a JSON object");
  static const std::vector<std::string> known{"equation", "path", "y0",    "y1",    "grade",
                                              "tol",      "h_init", "h_min", "h_max"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail("/" + key, "unexpected field");
  }

  OdeProblem<complex> p;
  const json& eq = member(doc, "equation", "/");
  try {
    if (eq.is_string()) {
      auto e = equation_oracles(eq.get<std::string>());
      p.a = std::move(e.a);
      p.b = std::move(e.b);
      p.g = std::move(e.g);
    } else if (eq.is_object()) {
      // General form: coefficient functions from the function registry.
      for (const auto& [key, value] : eq.items()) {
        if (key != "a" && key != "b" && key != "g") fail("/equation/" + key, "unexpected field");
        if (!value.is_string()) fail("/equation/" + key, "expected a function name");
        auto f = function_oracle(value.get<std::string>());
        (key == "a" ? p.a : key == "b" ? p.b : p.g) = std::move(f);
      }
    } else {
      fail("/equation", "expected a name or an object of coefficient functions");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail("/equation", e.what());
  }

  const json& path = member(doc, "path", "/");
  if (!path.is_array()) fail("/path", "expected an array");
  for (std::size_t k = 0; k < path.size(); ++k) p.path.push_back(loose_scalar(path[k], "/path/" + std::to_string(k)));
  p.y0 = loose_scalar(member(doc, "y0", "/"), "/y0");
  p.y1 = loose_scalar(member(doc, "y1", "/"), "/y1");
  if (doc.contains("grade")) {
    const auto g = integer(doc["grade"], "/grade");
    if (g < 1 || g > 200) fail("/grade", "grade must be in 1..200");
    p.grade = static_cast<int>(g);
  }
  if (doc.contains("tol")) p.tol = real_number(doc["tol"], "/tol");
  if (doc.contains("h_init")) p.h_init = real_number(doc["h_init"], "/h_init");
  if (doc.contains("h_min")) p.h_min = real_number(doc["h_min"], "/h_min");
  if (doc.contains("h_max")) p.h_max = real_number(doc["h_max"], "/h_max");
  try {
    p.validate();
  } catch (const ArgumentError& e) {
    fail("/", e.what());
  }
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace blends::io
