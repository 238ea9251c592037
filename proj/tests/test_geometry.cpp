#include "bianchi/geodesic.hpp"
#include "bianchi/metric.hpp"
#include "bianchi/parse.hpp"
#include "bianchi/split.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

using namespace bianchi;
using namespace bianchi::testutil;

namespace {

RewriteRules unit_rules() {
  return RewriteRules{{Atom::metric_fn(0), Expr(1)},
                      {Atom::metric_fn(1), Expr(1)},
                      {Atom::metric_fn(2), Expr(1)}};
}

RewriteRules constant_rules() {
  return RewriteRules{{Atom::metric_fn(0, 1), Expr(0)},
                      {Atom::metric_fn(1, 1), Expr(0)},
                      {Atom::metric_fn(2, 1), Expr(0)}};
}

Expr det4(const MetricMatrix &g) {
  std::array<int, 4> p{0, 1, 2, 3};
  Expr det;
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j])
          ++inversions;
    Expr term(1);
    for (int i = 0; i < 4; ++i)
      term = term * g[i][p[i]];
    det = det + (inversions % 2 ? -term : term);
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

bool has_primed_atom(const Expr &e) {
  std::set<Atom> atoms;
  collect_atoms(e, atoms);
  return std::any_of(atoms.begin(), atoms.end(), [](Atom a) {
    return a.is_metric_fn() && a.order() > 0;
  });
}

} // namespace

TEST_CASE("metric components match the line element") {
  const MetricMatrix g = metric_components(MetricSpec::generic());
  CHECK(normalize(g[0][0]) == N("-1"));
  CHECK(normalize(g[1][1]) == N("A(t)^2"));
  CHECK(normalize(g[2][2]) == N("B(t)^2"));
  CHECK(normalize(g[2][3]) == N("-B(t)^2*x"));
  CHECK(normalize(g[3][3]) == N("C(t)^2 + B(t)^2*x^2"));
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      CHECK(is_zero(g[a][b] - g[b][a]));
      const bool structural = (a == b) || (a + b == 5);
      if (!structural)
        CHECK(is_zero(g[a][b]));
    }
  CHECK(is_zero(det4(g) + P("A(t)^2*B(t)^2*C(t)^2")));
}

TEST_CASE("metric components specialize under case rules") {
  const MetricMatrix g = metric_components(MetricSpec::with_rules(unit_rules()));
  CHECK(normalize(g[2][3]) == N("-x"));
  CHECK(normalize(g[3][3]) == N("1 + x^2"));

  const MetricMatrix gc =
      metric_components(MetricSpec::with_rules(constant_rules()));
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      CHECK_FALSE(has_primed_atom(gc[a][b]));
}

TEST_CASE("hardcoded inverse metric satisfies g.ginv = id") {
  const MetricSpec spec = MetricSpec::generic();
  const MetricMatrix g = metric_components(spec);
  const MetricMatrix inv = inverse_metric(spec);
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      Expr sum;
      for (int c = 0; c < kDim; ++c)
        sum = sum + g[a][c] * inv[c][b];
      CHECK(is_zero(sum - Expr(a == b ? 1 : 0)));
    }
}

TEST_CASE("inverse metric specializations") {
  RewriteRules bc{{Atom::metric_fn(1), Expr(1)}, {Atom::metric_fn(2), Expr(1)}};
  const MetricMatrix inv = inverse_metric(MetricSpec::with_rules(std::move(bc)));
  CHECK(normalize(inv[2][2]) == N("1 + x^2"));
  CHECK(normalize(inv[2][3]) == N("x"));
  CHECK(normalize(inv[3][3]) == N("1"));

  RewriteRules a2{{Atom::metric_fn(0), Expr(2)}};
  const MetricMatrix inv2 = inverse_metric(MetricSpec::with_rules(std::move(a2)));
  CHECK(normalize(inv2[1][1]) == N("1/4"));
}

TEST_CASE("lagrangian is the metric quadratic form") {
  const MetricSpec spec = MetricSpec::generic();
  const Expr L = lagrangian(spec);
  CHECK(normalize(L) ==
        N("-td^2 + A(t)^2*xd^2 + B(t)^2*(yd^2 + x^2*zd^2 - 2*x*yd*zd) + "
          "C(t)^2*zd^2"));

  const Expr Lu = lagrangian(MetricSpec::with_rules(unit_rules()));
  CHECK(normalize(Lu) == N("-td^2 + xd^2 + yd^2 + x^2*zd^2 - 2*x*yd*zd + zd^2"));

  const VelocitySplit parts = velocity_split(normalize(L));
  CHECK(parts.size() == 5);
  std::set<std::string> keys;
  for (const auto &[mono, coeff] : parts)
    keys.insert(monomial_str(mono));
  CHECK(keys == std::set<std::string>{"td^2", "xd^2", "yd^2", "zd^2", "yd*zd"});

  // Euler's theorem for a quadratic form: sum xd^a dL/dxd^a = 2L.
  Expr euler;
  for (int a = 0; a < kDim; ++a)
    euler = euler + Expr(Atom::velocity(kCoordOf[a])) *
                        partial_diff(L, Atom::velocity(kCoordOf[a]));
  CHECK(is_zero(euler - Expr(2) * L));
}

TEST_CASE("christoffel symbols") {
  const ChristoffelArray unit = christoffel(MetricSpec::with_rules(unit_rules()));
  CHECK(normalize(unit[1][2][3]) == N("1/2"));
  CHECK(normalize(unit[1][3][3]) == N("-x"));

  const ChristoffelArray gen = christoffel(MetricSpec::generic());
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        CHECK(is_zero(gen[a][b][c] - gen[a][c][b]));

  const ChristoffelArray con = christoffel(MetricSpec::with_rules(constant_rules()));
  for (int b = 0; b < kDim; ++b)
    for (int c = 0; c < kDim; ++c) {
      CHECK(is_zero(con[0][b][c]));
      CHECK(is_zero(con[b][0][c]));
      CHECK(is_zero(con[b][c][0]));
    }
}

TEST_CASE("geodesic accelerations agree with euler-lagrange") {
  const std::array<Expr, kDim> unit =
      geodesic_accelerations(MetricSpec::with_rules(unit_rules()));
  CHECK(normalize(unit[1]) == N("x*zd^2 - yd*zd"));

  const std::array<Expr, kDim> con =
      geodesic_accelerations(MetricSpec::with_rules(constant_rules()));
  CHECK(is_zero(con[0]));

  const std::array<Expr, kDim> gen =
      geodesic_accelerations(MetricSpec::generic());
  std::map<Atom, Expr> rest;
  for (int a = 0; a < kDim; ++a)
    rest.emplace(Atom::velocity(kCoordOf[a]), Expr(0));
  for (int a = 0; a < kDim; ++a)
    CHECK(is_zero(substitute(gen[a], rest)));

  for (int a = 0; a < kDim; ++a)
    CHECK(is_zero(euler_lagrange_residual(MetricSpec::generic(), a)));
}

TEST_CASE("closed-form scalar functions") {
  const ScalarFn c = ScalarFn::parse("1");
  CHECK(c(7.0) == 1.0);
  CHECK(c.derivative()(7.0) == 0.0);

  const ScalarFn lin = ScalarFn::parse("2*t - 3");
  CHECK(lin(2.0) == 1.0);
  CHECK(lin.derivative()(100.0) == 2.0);

  const ScalarFn pw = ScalarFn::parse("3*t^2");
  CHECK(pw(2.0) == 12.0);
  CHECK(pw.derivative()(2.0) == 12.0);
  CHECK(pw.derivative().derivative()(2.0) == 6.0);

  const ScalarFn root = ScalarFn::parse("t^0.5");
  CHECK(std::abs(root(4.0) - 2.0) < 1e-14);
  CHECK(std::abs(root.derivative()(4.0) - 0.25) < 1e-14);

  CHECK(ScalarFn::parse("t")(5.0) == 5.0);
  CHECK(ScalarFn::parse("-t")(5.0) == -5.0);
  CHECK(ScalarFn::parse(" t + 1 ")(5.0) == 6.0);

  CHECK_THROWS_AS(ScalarFn::parse("t^2 + 1"), std::invalid_argument);
  CHECK_THROWS_AS(ScalarFn::parse("2t"), std::invalid_argument);
  CHECK_THROWS_AS(ScalarFn::parse("q"), std::invalid_argument);
  CHECK_THROWS_AS(ScalarFn::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(ScalarFn::parse("2*t*t"), std::invalid_argument);

  for (const char *text : {"4", "t + 2", "-2*t + 1", "5*t^3", "t^-1"}) {
    const ScalarFn f = ScalarFn::parse(text);
    const ScalarFn g = ScalarFn::parse(f.str());
    for (double t : {0.5, 1.0, 2.5})
      CHECK(std::abs(f(t) - g(t)) < 1e-12);
  }
}

TEST_CASE("metric config parsing") {
  const MetricSpec spec = parse_metric_config("A = 1\nB = t\n# window\nC = 2*t");
  REQUIRE(spec.numeric());
  CHECK((*spec.closed_forms)[0](3.0) == 1.0);
  CHECK((*spec.closed_forms)[1](3.0) == 3.0);
  CHECK((*spec.closed_forms)[2](3.0) == 6.0);

  const MetricSpec inline_spec = parse_metric_config("A=1, B=1, C=1");
  CHECK(inline_spec.numeric());

  CHECK_THROWS_AS(parse_metric_config("A = 1\nB = t"), std::invalid_argument);
  CHECK_THROWS_AS(parse_metric_config("A = 1; A = 2; B = 1; C = 1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_metric_config("D = 1; A = 1; B = 1; C = 1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_metric_config("A 1; B = 1; C = 1"),
                  std::invalid_argument);
}

TEST_CASE("integrator reproduces the trivial geodesic") {
  const MetricSpec spec = parse_metric_config("A=1;B=1;C=1");
  GeodesicState ics;
  ics.pos = {0.5, 0, 0, 0};
  ics.vel = {1, 0, 0, 0};
  const Trajectory traj = integrate_geodesic(spec, ics, 0.1, 10);
  REQUIRE(traj.states.size() == 11);
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const GeodesicState &st = traj.states[k];
    CHECK(std::abs(st.s - 0.1 * static_cast<double>(k)) < 1e-15);
    CHECK(std::abs(st.pos[0] - (0.5 + st.s)) < 1e-12);
    for (int a = 1; a < kDim; ++a) {
      CHECK(st.pos[a] == 0.0);
      CHECK(st.vel[a] == 0.0);
    }
  }

  CHECK_THROWS_AS(integrate_geodesic(MetricSpec::generic(), ics, 0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_geodesic(spec, ics, 0.0, 1),
                  std::invalid_argument);
}

namespace {

double max_rel_lagrangian_drift(const MetricSpec &spec, const Trajectory &traj,
                                const Expr &L) {
  const double L0 = eval_expr(L, state_bindings(spec, traj.states.front()));
  const double denom = std::max(1.0, std::abs(L0));
  double worst = 0;
  for (const GeodesicState &st : traj.states)
    worst = std::max(worst,
                     std::abs(eval_expr(L, state_bindings(spec, st)) - L0));
  return worst / denom;
}

} // namespace

TEST_CASE("lagrangian is conserved to integrator accuracy") {
  const Expr L = lagrangian(MetricSpec::generic());

  const MetricSpec flat = parse_metric_config("A=1;B=1;C=1");
  GeodesicState ics;
  ics.pos = {0, 0.4, 0, 0};
  ics.vel = {1, 0.3, 0.2, 0.1};
  const Trajectory traj = integrate_geodesic(flat, ics, 1e-3, 1000);
  REQUIRE(traj.states.size() == 1001);
  CHECK(max_rel_lagrangian_drift(flat, traj, L) < 1e-7);

  // Fourth-order convergence, on a window where truncation error dominates.
  const MetricSpec curved = parse_metric_config("A=t;B=t;C=t");
  GeodesicState ics2;
  ics2.pos = {1, 0.4, 0, 0};
  ics2.vel = {1, 0.5, 0.4, 0.3};
  const double d1 = max_rel_lagrangian_drift(
      curved, integrate_geodesic(curved, ics2, 0.02, 25), L);
  const double d2 = max_rel_lagrangian_drift(
      curved, integrate_geodesic(curved, ics2, 0.01, 50), L);
  REQUIRE(d2 > 0);
  const double ratio = d1 / d2;
  CHECK(ratio > 8);
  CHECK(ratio < 40);
}

TEST_CASE("integrator stops at the edge of the metric domain") {
  const MetricSpec spec = parse_metric_config("A=1;B=1;C=t");
  GeodesicState ics;
  ics.pos = {0.2, 0, 0, 0};
  ics.vel = {-1, 0, 0.1, 0.1};
  const Trajectory traj = integrate_geodesic(spec, ics, 0.01, 100);
  CHECK(traj.states.size() < 101);
  for (const GeodesicState &st : traj.states) {
    CHECK(std::isfinite(st.pos[0]));
    CHECK(st.pos[0] > 0);
  }
}
