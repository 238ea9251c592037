#pragma once

#include "bianchi/expr.hpp"
#include "bianchi/rewrite.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bianchi {

/// Spacetime block: indices 0..3 name t, x, y, z.
inline constexpr int kDim = 4;
inline constexpr Coord kCoordOf[kDim] = {kT, kX, kY, kZ};

/// One member of the closed-form family {c, c*t + d, c*t^p} admitted for
/// numeric metric functions. The family is closed under d/dt, so every
/// derivative order stays exactly representable.
class ScalarFn {
public:
  static ScalarFn constant(double c) { return {Form::Constant, c, 0}; }
  static ScalarFn linear(double c, double d) { return {Form::Linear, c, d}; }
  static ScalarFn power(double c, double p) { return {Form::Power, c, p}; }

  enum class Form { Constant, Linear, Power };

  Form form() const { return form_; }
  double a() const { return a_; }
  double b() const { return b_; }

  double operator()(double t) const {
    switch (form_) {
    case Form::Constant:
      return a_;
    case Form::Linear:
      return a_ * t + b_;
    case Form::Power:
      return a_ * std::pow(t, b_);
    }
    return 0;
  }

  ScalarFn derivative() const {
    switch (form_) {
    case Form::Constant:
      return constant(0);
    case Form::Linear:
      return constant(a_);
    case Form::Power:
      return b_ == 1 ? constant(a_) : power(a_ * b_, b_ - 1);
    }
    return constant(0);
  }

  std::string str() const {
    switch (form_) {
    case Form::Constant:
      return num(a_);
    case Form::Linear: {
      std::string s = coeff_str(a_) + "t";
      if (b_ > 0)
        s += " + " + num(b_);
      else if (b_ < 0)
        s += " - " + num(-b_);
      return s;
    }
    case Form::Power:
      return coeff_str(a_) + "t^" + num(b_);
    }
    return {};
  }

  /// Accepts "1", "t", "2*t", "t + 1", "2*t - 3", "3*t^2", "t^0.5".
  /// An additive offset is only meaningful on the linear form.
  static ScalarFn parse(const std::string &text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch)))
        s += ch;
    size_t i = 0;
    auto fail = [&](const std::string &why) -> double {
      throw std::invalid_argument("metric function '" + text + "': " + why);
    };
    auto number = [&]() -> double {
      const char *begin = s.c_str() + i;
      char *end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin)
        return fail("expected a number");
      i += static_cast<size_t>(end - begin);
      return v;
    };

    double c = 1;
    if (i < s.size() && s[i] == 't') {
      // bare t
    } else if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == 't') {
      c = -1;
      ++i;
    } else {
      c = number();
      if (i == s.size())
        return constant(c);
      if (s[i] != '*')
        fail("expected '*' before t");
      ++i;
    }
    if (i >= s.size() || s[i] != 't')
      fail("expected t");
    ++i;

    bool has_power = false;
    double p = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      p = number();
      has_power = true;
    }
    bool has_offset = false;
    double d = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      d = number(); // the sign is part of the number
      has_offset = true;
    }
    if (i != s.size())
      fail("unexpected trailing input");
    if (has_power && p != 1) {
      if (has_offset)
        fail("offsets are only allowed on the linear form");
      return power(c, p);
    }
    return linear(c, d);
  }

private:
  ScalarFn(Form f, double a, double b) : form_(f), a_(a), b_(b) {}

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  }
  static std::string coeff_str(double c) {
    if (c == 1)
      return {};
    if (c == -1)
      return "-";
    return num(c) + "*";
  }

  Form form_;
  double a_, b_;
};

/// The metric family in one of two modes: symbolic (generic A, B, C
/// constrained by a case's rewrite rules) or numeric (closed forms for all
/// three, evaluable along a trajectory).
struct MetricSpec {
  RewriteRules rules;
  std::optional<std::array<ScalarFn, 3>> closed_forms;

  bool numeric() const { return closed_forms.has_value(); }

  static MetricSpec generic() { return {}; }
  static MetricSpec with_rules(RewriteRules r) {
    return {std::move(r), std::nullopt};
  }
  static MetricSpec numeric_forms(ScalarFn A, ScalarFn B, ScalarFn C) {
    return {RewriteRules(), std::array<ScalarFn, 3>{A, B, C}};
  }
};

/// Parses "A = 1", "B = t", "C = 2*t" assignments separated by newlines,
/// ';' or ','; '#' starts a comment line. All three functions are required.
inline MetricSpec parse_metric_config(const std::string &text) {
  std::array<std::optional<ScalarFn>, 3> fns;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find_first_of("\n;,", start);
    if (end == std::string::npos)
      end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    const size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#')
      continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("metric config: expected 'A = ...' in '" +
                                  line + "'");
    std::string lhs = line.substr(0, eq);
    lhs.erase(0, lhs.find_first_not_of(" \t\r"));
    lhs.erase(lhs.find_last_not_of(" \t\r") + 1);
    if (lhs.size() != 1 || lhs[0] < 'A' || lhs[0] > 'C')
      throw std::invalid_argument("metric config: unknown function '" + lhs +
                                  "'");
    const int which = lhs[0] - 'A';
    if (fns[which])
      throw std::invalid_argument("metric config: duplicate assignment for " +
                                  lhs);
    fns[which] = ScalarFn::parse(line.substr(eq + 1));
  }
  for (int w = 0; w < 3; ++w)
    if (!fns[w])
      throw std::invalid_argument(std::string("metric config: missing ") +
                                  static_cast<char>('A' + w));
  return MetricSpec::numeric_forms(*fns[0], *fns[1], *fns[2]);
}

using MetricMatrix = std::array<std::array<Expr, kDim>, kDim>;

/// g_ab for ds^2 = -dt^2 + A^2 dx^2 + B^2 (dy - x dz)^2 + C^2 dz^2,
/// with the metric's rewrite rules applied.
inline MetricMatrix metric_components(const MetricSpec &spec) {
  const Expr A{Atom::metric_fn(0)}, B{Atom::metric_fn(1)},
      C{Atom::metric_fn(2)};
  const Expr x{Atom::coordinate(kX)};
  MetricMatrix g{};
  g[0][0] = -Expr(1);
  g[1][1] = A * A;
  g[2][2] = B * B;
  g[2][3] = -(B * B * x);
  g[3][2] = g[2][3];
  g[3][3] = C * C + B * B * x * x;
  for (auto &row : g)
    for (auto &e : row)
      e = to_expr(normalize(e, spec.rules));
  return g;
}

/// Closed-form inverse, found once by inverting the (y,z) block by hand;
/// every entry of g.g^-1 - id is checked to vanish in the tests.
inline MetricMatrix inverse_metric(const MetricSpec &spec) {
  const Expr A{Atom::metric_fn(0)}, B{Atom::metric_fn(1)},
      C{Atom::metric_fn(2)};
  const Expr x{Atom::coordinate(kX)};
  MetricMatrix inv{};
  inv[0][0] = -Expr(1);
  inv[1][1] = Expr::pow(A, -2);
  inv[2][2] = Expr::pow(B, -2) + x * x * Expr::pow(C, -2);
  inv[2][3] = x * Expr::pow(C, -2);
  inv[3][2] = inv[2][3];
  inv[3][3] = Expr::pow(C, -2);
  for (auto &row : inv)
    for (auto &e : row)
      e = to_expr(normalize(e, spec.rules));
  return inv;
}

/// L = g_ab xd^a xd^b; quadratic in velocities, no 1/2 factor.
inline Expr lagrangian(const MetricSpec &spec) {
  const MetricMatrix g = metric_components(spec);
  Expr L;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      L = L + g[a][b] * Expr(Atom::velocity(kCoordOf[a])) *
                  Expr(Atom::velocity(kCoordOf[b]));
  return to_expr(normalize(L, spec.rules));
}

using ChristoffelArray = std::array<std::array<std::array<Expr, kDim>, kDim>, kDim>;

/// Gamma^a_bc = (1/2) g^ad (d_b g_dc + d_c g_db - d_d g_bc).
inline ChristoffelArray christoffel(const MetricSpec &spec) {
  const MetricMatrix g = metric_components(spec);
  const MetricMatrix inv = inverse_metric(spec);
  auto d = [&](int c, const Expr &e) {
    return partial_diff(e, Atom::coordinate(kCoordOf[c]));
  };
  ChristoffelArray gamma{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c) {
        Expr sum;
        for (int e = 0; e < kDim; ++e)
          sum = sum +
                inv[a][e] * (d(b, g[e][c]) + d(c, g[e][b]) - d(e, g[b][c]));
        gamma[a][b][c] =
            to_expr(normalize(Expr(Rational(1, 2)) * sum, spec.rules));
      }
  return gamma;
}

/// The geodesic right-hand sides xdd^a = -Gamma^a_bc xd^b xd^c.
inline std::array<Expr, kDim> geodesic_accelerations(const MetricSpec &spec) {
  const ChristoffelArray gamma = christoffel(spec);
  std::array<Expr, kDim> acc{};
  for (int a = 0; a < kDim; ++a) {
    Expr sum;
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        sum = sum + gamma[a][b][c] * Expr(Atom::velocity(kCoordOf[b])) *
                        Expr(Atom::velocity(kCoordOf[c]));
    acc[a] = to_expr(normalize(-sum, spec.rules));
  }
  return acc;
}

/// d/ds(dL/dxd^a) - dL/dx^a with the accelerations it produces replaced by
/// the Christoffel route. Zero iff the two derivations of the geodesic
/// equations agree.
inline Expr euler_lagrange_residual(const MetricSpec &spec, int a) {
  const Expr L = lagrangian(spec);
  const std::array<Expr, kDim> acc = geodesic_accelerations(spec);
  const Expr momentum = partial_diff(L, Atom::velocity(kCoordOf[a]));
  Expr r = total_derivative(momentum) -
           partial_diff(L, Atom::coordinate(kCoordOf[a]));
  std::map<Atom, Expr> on_shell;
  for (int b = 0; b < kDim; ++b)
    on_shell.emplace(Atom::acceleration(kCoordOf[b]), acc[b]);
  r = substitute(r, on_shell);
  return to_expr(normalize(r, spec.rules));
}

} // namespace bianchi
