#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "blends/blendstring.hpp"
#include "blends/collocate.hpp"
#include "blends/error.hpp"
#include "blends/io.hpp"
#include "blends/mathieu.hpp"

namespace {

using blends::complex;
using Blendstring = blends::Blendstring<complex>;

// Double point of the Mathieu operator where the ce0 and ce2 characteristic
// values coalesce.
constexpr double kDoublePointA = 2.0886989027496954;
constexpr double kDoublePointQ = 1.4687686137851420;

struct Globals {
  std::optional<double> tol;
  std::optional<int> grade;
  std::string out = "-";
  std::string format = "doc";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    blends::io::write_file(g.out, text);
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  return blends::io::read_file(path);
}

std::vector<complex> parse_list(const std::string& text) {
  std::vector<complex> out;
  std::size_t from = 0;
  while (true) {
    const auto comma = text.find(',', from);
    out.push_back(blends::io::parse_complex(text.substr(from, comma == std::string::npos ? std::string::npos
                                                                                         : comma - from)));
    if (comma == std::string::npos) break;
    from = comma + 1;
  }
  return out;
}

std::string blendstring_output(const Globals& g, const Blendstring& b) {
  if (g.format == "csv") return blends::io::to_csv(b.deval(0));
  return blends::io::to_document(b);
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int m = std::stoi(text);
      return {m, m};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw blends::ArgumentError("invalid range '" + text + "' (expected M or M..N)");
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-point Hermite blends: build, evaluate, integrate, and solve ODEs along complex paths"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--grade", g.grade, "Taylor grade at each knot")->check(CLI::Range(0, 200));
  app.add_option("-o,--out", g.out, "Output path ('-' for stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"doc", "csv"}));

  // build
  auto* build = app.add_subcommand("build", "Blendstring of a registry function on a knot list");
  std::string function;
  std::string function_args;
  std::string knots;
  build->add_option("function", function, "exp, sin, cos, identity, constant, poly, recip, recip-gamma")
      ->required();
  build->add_option("coefficients", function_args, "Comma-separated arguments, e.g. poly 1,0,-1");
  build->add_option("--knots", knots, "Comma-separated knots, e.g. -1,-1/3,1/3,1")->required();

  // deval
  auto* deval = app.add_subcommand("deval", "Point table of values and derivatives");
  std::string deval_in;
  std::optional<int> refine;
  int nder = 0;
  deval->add_option("input", deval_in, "Blendstring document ('-' for stdin)")->required();
  deval->add_option("--refine", refine, "Interior points per segment (default 2*(grade+1))")
      ->check(CLI::NonNegativeNumber);
  deval->add_option("--nder", nder, "Highest derivative")->check(CLI::NonNegativeNumber);

  // integrate
  auto* integrate = app.add_subcommand("integrate", "Antiderivative, or the definite integral along the path");
  std::string integrate_in;
  bool definite = false;
  integrate->add_option("input", integrate_in, "Blendstring document ('-' for stdin)")->required();
  integrate->add_flag("--definite", definite, "Print the integral over the whole path");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve y'' + a y' + b y = g from a problem document");
  std::string problem_in;
  std::string log_out;
  solve->add_option("problem", problem_in, "Problem document ('-' for stdin)")->required();
  solve->add_option("--log", log_out, "Write the step log (CSV) here");

  // stability
  auto* stability = app.add_subcommand("stability", "Stability thresholds of the oscillator step");
  std::string range = "1..3";
  std::string grid;
  stability->add_option("range", range, "Grades, M or M..N (1..6)");
  stability->add_option("--grid", grid, "Comma-separated nu values for C_m, S_m samples");

  // mathieu-demo
  auto* demo = app.add_subcommand("mathieu-demo", "Generalized Mathieu eigenfunction at a double point");
  std::string demo_a = num(kDoublePointA);
  std::string demo_q = num(kDoublePointQ) + "i";
  double xi0 = 1.485;
  std::string report;
  demo->add_option("--a", demo_a, "Characteristic value");
  demo->add_option("--q", demo_q, "Parameter");
  demo->add_option("--xi0", xi0, "End of the vertical path [0, i xi0]")->check(CLI::PositiveNumber);
  demo->add_option("--report", report, "Write a summary (key = value lines) here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (*build) {
      const std::string spec = function_args.empty() ? function : function + "(" + function_args + ")";
      const auto oracle = blends::io::function_oracle(spec);
      const auto points = parse_list(knots);
      emit(g, blendstring_output(g, Blendstring::build(points, g.grade.value_or(10), oracle)));
    } else if (*deval) {
      const auto b = blends::io::from_document(read_input(deval_in));
      emit(g, blends::io::to_csv(b.deval(refine.value_or(2 * (b.grade() + 1)), nder)));
    } else if (*integrate) {
      const auto b = blends::io::from_document(read_input(integrate_in));
      if (definite) {
        emit(g, blends::io::format_complex(b.integral()) + "\n");
      } else {
        emit(g, blendstring_output(g, b.antiderivative()));
      }
    } else if (*solve) {
      auto problem = blends::io::problem_from_document(read_input(problem_in));
      if (g.tol) problem.tol = *g.tol;
      if (g.grade) problem.grade = *g.grade;
      problem.validate();
      const auto result = blends::solve_ivp(problem);
      if (!log_out.empty()) {
        std::ostringstream log;
        blends::io::write_step_log(log, result.steps);
        blends::io::write_file(log_out, log.str());
      }
      emit(g, blendstring_output(g, result.solution));
    } else if (*stability) {
      const auto [lo, hi] = parse_range(range);
      if (lo < 1 || hi > 6 || lo > hi) throw blends::ArgumentError("grades must satisfy 1 <= M <= N <= 6");
      std::ostringstream out;
      out << "m,nu_star,nu_star_over_pi\n";
      for (int m = lo; m <= hi; ++m) {
        const double nu = blends::stability_threshold(m);
        out << m << ',' << num(nu) << ',' << num(nu / std::numbers::pi) << '\n';
      }
      if (!grid.empty()) {
        out << "\nm,nu,C,S\n";
        for (int m = lo; m <= hi; ++m) {
          for (const auto& z : parse_list(grid)) {
            if (z.imag() != 0.0) throw blends::ArgumentError("grid values must be real");
            const auto amp = blends::sho_amplification(m, z.real());
            out << m << ',' << num(z.real()) << ',' << num(amp.c) << ',' << num(amp.s) << '\n';
          }
        }
      }
      emit(g, out.str());
    } else if (*demo) {
      const blends::mathieu::Params<complex> params{blends::io::parse_complex(demo_a),
                                                    blends::io::parse_complex(demo_q)};
      const int grade = g.grade.value_or(15);
      const double tol = g.tol.value_or(1e-8);
      const auto result = blends::mathieu::run_demo(params, xi0, grade, tol);
      const auto table = result.generalized.deval(2);
      emit(g, blends::io::to_csv(table));
      if (!report.empty()) {
        double peak = 0.0;
        for (const auto& row : table.rows) peak = std::max(peak, std::abs(row.derivs[0]));
        const auto& u = result.generalized;
        std::ostringstream out;
        out << "a = " << blends::io::format_complex(params.a) << '\n'
            << "q = " << blends::io::format_complex(params.q) << '\n'
            << "grade = " << grade << '\n'
            << "tol = " << num(tol) << '\n'
            << "steps_period = " << result.pair.first.segment_count() << '\n'
            << "steps_vertical = " << result.modified.solution.segment_count() << '\n'
            << "max_abs_u = " << num(peak) << '\n'
            << "abs_u_pi = " << num(std::abs(u.evaluate(complex(std::numbers::pi, 0.0)))) << '\n'
            << "abs_u_2pi = " << num(std::abs(u.records().back()[0])) << '\n'
            << "Ce0_xi0 = " << blends::io::format_complex(result.modified_end) << '\n'
            << "abs_Ce0_xi0 = " << num(std::abs(result.modified_end)) << '\n';
        blends::io::write_file(report, out.str());
      }
    }
  } catch (const blends::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
