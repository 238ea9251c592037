#include "bianchi/audit.hpp"
#include "bianchi/conslaw.hpp"
#include "bianchi/determining.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string case_selector = "all";
  std::string format = "text";
  std::string metric = "A = 1, B = 1, C = 1";
  std::string ics = "1,0,0,0,1,0,0,0";
  double step = 1e-3;
  double smax = 1.0;
  std::string out_path;
};

std::vector<const bianchi::CaseSpec *> selected_cases(
    const std::string &selector) {
  std::vector<const bianchi::CaseSpec *> out;
  if (selector == "all") {
    for (const bianchi::CaseSpec &c : bianchi::case_catalog())
      out.push_back(&c);
  } else {
    out.push_back(&bianchi::case_by_label(selector));
  }
  return out;
}

/// "t,x,y,z,td,xd,yd,zd" with exactly eight numbers.
bianchi::GeodesicState parse_ics(const std::string &text) {
  std::vector<double> v;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      while (used < item.size() &&
             std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size())
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
      throw std::invalid_argument("initial conditions: cannot read '" + item +
                                  "' as a number");
    }
  }
  if (v.size() != 8)
    throw std::invalid_argument(
        "initial conditions: expected 8 comma-separated values "
        "t,x,y,z,td,xd,yd,zd");
  bianchi::GeodesicState st;
  for (int a = 0; a < bianchi::kDim; ++a) {
    st.pos[a] = v[static_cast<size_t>(a)];
    st.vel[a] = v[static_cast<size_t>(a) + 4];
  }
  return st;
}

/// The --metric value is a path when a file of that name exists, otherwise
/// it is taken as inline config text.
bianchi::MetricSpec load_metric(const std::string &value) {
  std::ifstream file(value);
  if (file) {
    std::ostringstream text;
    text << file.rdbuf();
    return bianchi::parse_metric_config(text.str());
  }
  return bianchi::parse_metric_config(value);
}

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string join(const std::vector<std::string> &items,
                 const std::string &sep) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i)
      out += sep;
    out += items[i];
  }
  return out;
}

template <typename Seq> ordered_json dims_json(const Seq &dims) {
  ordered_json out = ordered_json::array();
  for (size_t d : dims)
    out.push_back(d);
  return out;
}

void cmd_derive(const RunConfig &cfg, std::ostream &os) {
  const bianchi::DeterminingSystem sys =
      bianchi::derive_determining_system(bianchi::MetricSpec::generic());
  const std::vector<bianchi::DeterminingEquation> eqs = sys.independent();
  if (cfg.format == "json") {
    ordered_json j = ordered_json::array();
    for (const bianchi::DeterminingEquation &e : eqs)
      j.push_back({{"monomial", bianchi::monomial_str(e.key)},
                   {"equation", e.equation.str()}});
    os << j.dump(2) << "\n";
    return;
  }
  os << "determining system: " << eqs.size()
     << " independent equations over (s, t, x, y, z)\n";
  for (const bianchi::DeterminingEquation &e : eqs)
    os << "  [" << bianchi::monomial_str(e.key) << "]  " << e.equation.str()
       << " = 0\n";
}

void audit_text(const bianchi::CaseAudit &a, std::ostream &os) {
  os << "case " << a.label << "  (" << join(a.constraints, "; ");
  if (!a.inequalities.empty())
    os << "; " << join(a.inequalities, "; ");
  os << ")\n";
  int verified = 0;
  for (const bianchi::GeneratorAudit &g : a.generators)
    verified += g.verified ? 1 : 0;
  os << "  generators: " << verified << " verified, "
     << a.generators.size() - static_cast<size_t>(verified) << " refuted\n";
  for (const bianchi::GeneratorAudit &g : a.generators) {
    os << "    " << g.name << ": "
       << (g.verified ? "verified" : "refuted") << "\n";
    if (!g.verified)
      os << "      residual " << g.residual << "\n      offending blocks: "
         << join(g.offending, ", ") << "\n";
  }
  for (const std::string &c : a.corrections)
    os << "  correction adopted: " << c << "\n";
  os << "  basis closed: " << (a.basis_closed ? "yes" : "no") << "\n";
  if (!a.bracket_table_available)
    os << "  no commutator table is printed for this case; computed "
          "brackets reported without comparison\n";
  if (a.algebra) {
    const std::vector<bianchi::VectorField> &basis = a.algebra->basis;
    int mismatches = 0;
    for (const bianchi::BracketAudit &b : a.brackets)
      mismatches += b.match ? 0 : 1;
    os << "  brackets audited: " << a.brackets.size() << " nonzero pairs, "
       << mismatches << " mismatched\n";
    for (const bianchi::BracketAudit &b : a.brackets) {
      os << "    [" << basis[static_cast<size_t>(b.i - 1)].name << ", "
         << basis[static_cast<size_t>(b.j - 1)].name << "] = "
         << bianchi::detail::row_str(b.computed, basis);
      if (a.bracket_table_available)
        os << (b.match ? "  (matches the table)"
                       : "  (table says " +
                             bianchi::detail::row_str(b.claimed, basis) + ")");
      os << "\n";
    }
  }
  os << "  findings: " << a.findings.size() << "\n";
  for (const bianchi::Finding &f : a.findings)
    os << "    - " << f.kind << ": " << f.detail << "\n";
}

void cmd_audit(const RunConfig &cfg, std::ostream &os) {
  ordered_json all = ordered_json::array();
  bool first = true;
  for (const bianchi::CaseSpec *c : selected_cases(cfg.case_selector)) {
    const bianchi::CaseAudit a = bianchi::audit_case(*c);
    if (cfg.format == "json") {
      all.push_back(bianchi::audit_json(a));
    } else {
      if (!first)
        os << "\n";
      audit_text(a, os);
      first = false;
    }
  }
  if (cfg.format == "json")
    os << (all.size() == 1 ? all.front().dump(2) : all.dump(2)) << "\n";
}

void algebra_text(const bianchi::CaseSpec &c, const bianchi::CaseAudit &a,
                  std::ostream &os) {
  os << "case " << c.label << " algebra\n";
  if (!a.algebra) {
    os << "  refused: the verified basis does not close\n";
    for (const bianchi::Finding &f : a.findings)
      if (f.kind == "basis-not-closed")
        os << "    - " << f.detail << "\n";
    return;
  }
  const bianchi::LieAlgebra &alg = *a.algebra;
  os << "  n = " << alg.n << "\n";
  for (const bianchi::VectorField &f : alg.basis)
    os << "    " << f.name << " = " << bianchi::detail::field_str(f) << "\n";
  os << "  nonzero brackets:\n";
  bool any = false;
  for (size_t i = 0; i < alg.n; ++i)
    for (size_t j = i + 1; j < alg.n; ++j) {
      if (alg.table[i][j].empty())
        continue;
      any = true;
      os << "    [" << alg.basis[i].name << ", " << alg.basis[j].name
         << "] = " << bianchi::detail::row_str(alg.table[i][j], alg.basis)
         << "\n";
    }
  if (!any)
    os << "    none (abelian)\n";
  const bianchi::RatMat kappa = bianchi::killing_form(alg.table);
  os << "  killing form, nonzero entries:\n";
  bool any_kappa = false;
  for (size_t i = 0; i < alg.n; ++i)
    for (size_t j = i; j < alg.n; ++j)
      if (kappa[i][j] != 0) {
        any_kappa = true;
        os << "    k(" << alg.basis[i].name << ", " << alg.basis[j].name
           << ") = " << bianchi::to_string(kappa[i][j]) << "\n";
      }
  if (!any_kappa)
    os << "    none (Killing form vanishes)\n";
  const auto derived = bianchi::derived_series_dims(alg.table);
  const auto lower = bianchi::lower_central_series_dims(alg.table);
  os << "  derived series dims:";
  for (size_t d : derived)
    os << " " << d;
  os << "\n  lower central series dims:";
  for (size_t d : lower)
    os << " " << d;
  const bianchi::RatMat radical = bianchi::solvable_radical(alg.table);
  os << "\n  radical dim: " << radical.size() << "\n";
  if (radical.size() == alg.n) {
    os << "  levi factor: trivial (the algebra is solvable)\n";
  } else if (!c.levi_candidate.empty()) {
    const bianchi::LeviReport levi =
        bianchi::levi_check(alg, c.levi_candidate);
    std::vector<std::string> names;
    for (int k : c.levi_candidate)
      names.push_back(alg.basis[static_cast<size_t>(k - 1)].name);
    os << "  levi candidate <" << join(names, ", ") << ">: "
       << (levi.subalgebra ? "subalgebra" : "NOT a subalgebra") << ", "
       << (levi.complements && levi.trivial_intersection
               ? "complements the radical"
               : "does NOT complement the radical")
       << ", "
       << (levi.is_sl2 ? "isomorphic to sl(2, R)" : "NOT sl(2, R)") << "\n";
    if (levi.triple_found)
      os << "    standard triple found: [h, e] = 2e, [h, f] = -2f, "
            "[e, f] = h\n";
  } else {
    os << "  levi factor: nontrivial, no candidate to check\n";
  }
}

ordered_json algebra_report_json(const bianchi::CaseSpec &c,
                                 const bianchi::CaseAudit &a) {
  ordered_json j;
  j["case"] = c.label;
  if (!a.algebra) {
    j["closed"] = false;
    for (const bianchi::Finding &f : a.findings)
      if (f.kind == "basis-not-closed")
        j["reason"] = f.detail;
    return j;
  }
  const bianchi::LieAlgebra &alg = *a.algebra;
  j["closed"] = true;
  j["algebra"] = bianchi::algebra_json(alg);
  j["derived_series"] = dims_json(bianchi::derived_series_dims(alg.table));
  j["lower_central_series"] =
      dims_json(bianchi::lower_central_series_dims(alg.table));
  const bianchi::RatMat radical = bianchi::solvable_radical(alg.table);
  j["radical_dim"] = radical.size();
  if (radical.size() == alg.n || c.levi_candidate.empty()) {
    j["levi"] = nullptr;
  } else {
    const bianchi::LeviReport levi =
        bianchi::levi_check(alg, c.levi_candidate);
    j["levi"] = {{"candidate", c.levi_candidate},
                 {"subalgebra", levi.subalgebra},
                 {"complements_radical",
                  levi.complements && levi.trivial_intersection},
                 {"is_sl2", levi.is_sl2},
                 {"triple_found", levi.triple_found}};
  }
  return j;
}

void cmd_algebra(const RunConfig &cfg, std::ostream &os) {
  ordered_json all = ordered_json::array();
  bool first = true;
  for (const bianchi::CaseSpec *c : selected_cases(cfg.case_selector)) {
    const bianchi::CaseAudit a = bianchi::audit_case(*c);
    if (cfg.format == "json") {
      all.push_back(algebra_report_json(*c, a));
    } else {
      if (!first)
        os << "\n";
      algebra_text(*c, a, os);
      first = false;
    }
  }
  if (cfg.format == "json")
    os << (all.size() == 1 ? all.front().dump(2) : all.dump(2)) << "\n";
}

void cmd_conserve(const RunConfig &cfg, std::ostream &os) {
  if (cfg.case_selector == "all")
    throw std::invalid_argument(
        "conserve runs one case at a time; pass --case with a single label");
  const bianchi::CaseSpec &c = bianchi::case_by_label(cfg.case_selector);
  const bianchi::MetricSpec numeric = load_metric(cfg.metric);
  const std::vector<std::string> violations =
      bianchi::metric_case_violations(c, numeric);
  if (!violations.empty())
    throw std::invalid_argument("metric rejected for case " + c.label + ": " +
                                join(violations, "; "));
  if (!(cfg.step > 0) || !(cfg.smax > 0))
    throw std::invalid_argument("step and smax must be positive");
  const int n = static_cast<int>(std::llround(cfg.smax / cfg.step));
  if (n < 1 || std::fabs(n * cfg.step - cfg.smax) > 1e-9 * cfg.smax)
    throw std::invalid_argument("smax must be a whole number of steps");

  const bianchi::GeodesicState ics = parse_ics(cfg.ics);
  const bianchi::Trajectory traj =
      bianchi::integrate_geodesic(numeric, ics, cfg.step, n);
  if (traj.states.size() < 2)
    throw std::invalid_argument(
        "the metric degenerates at the initial state; nothing to integrate");
  const bianchi::MetricSpec rules =
      bianchi::MetricSpec::with_rules(c.constraints);

  const std::array<std::string, 3> fn_names = {"A", "B", "C"};
  ordered_json jreports = ordered_json::array();
  if (cfg.format != "json") {
    os << "case " << c.label << " conservation run\n  metric:";
    for (int w = 0; w < 3; ++w)
      os << (w ? ", " : " ") << fn_names[static_cast<size_t>(w)] << " = "
         << (*numeric.closed_forms)[static_cast<size_t>(w)].str();
    os << "\n  ics: t=" << ics.pos[0] << " x=" << ics.pos[1]
       << " y=" << ics.pos[2] << " z=" << ics.pos[3] << " td=" << ics.vel[0]
       << " xd=" << ics.vel[1] << " yd=" << ics.vel[2] << " zd=" << ics.vel[3]
       << "\n  step " << cfg.step << ", smax " << cfg.smax << ", "
       << traj.states.size() << " states\n";
  }
  for (const bianchi::Generator &g : c.claimed) {
    const bool ok = bianchi::verify_generator(g, c).verified;
    const bianchi::FirstIntegral fi = bianchi::first_integral(g, rules);
    const bianchi::DriftReport r = bianchi::numeric_drift(fi, traj);
    if (cfg.format == "json") {
      ordered_json jr = bianchi::drift_json(r);
      jr["physics"] = fi.physics;
      jr["generator_verified"] = ok;
      jreports.push_back(std::move(jr));
    } else {
      os << "  " << g.name << ": " << (ok ? "verified" : "NOT verified")
         << ", on-shell " << (fi.proved ? "proved" : "unproved")
         << ", physics " << fi.physics << "\n      I = " << r.integral
         << "\n      max_abs_drift " << fixed6(r.max_abs_drift)
         << ", max_rel_drift " << fixed6(r.max_rel_drift) << "\n";
    }
  }
  if (cfg.format == "json") {
    ordered_json j;
    j["case"] = c.label;
    for (int w = 0; w < 3; ++w)
      j["metric"][fn_names[static_cast<size_t>(w)]] =
          (*numeric.closed_forms)[static_cast<size_t>(w)].str();
    j["ics"] = {ics.pos[0], ics.pos[1], ics.pos[2], ics.pos[3],
                ics.vel[0], ics.vel[1], ics.vel[2], ics.vel[3]};
    j["states"] = traj.states.size();
    j["reports"] = std::move(jreports);
    os << j.dump(2) << "\n";
  }
}

int run(const RunConfig &cfg) {
  std::ostringstream buffer;
  if (cfg.command == "derive")
    cmd_derive(cfg, buffer);
  else if (cfg.command == "audit")
    cmd_audit(cfg, buffer);
  else if (cfg.command == "algebra")
    cmd_algebra(cfg, buffer);
  else if (cfg.command == "conserve")
    cmd_conserve(cfg, buffer);
  if (cfg.out_path.empty()) {
    std::cout << buffer.str();
    return 0;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot open output file " + cfg.out_path);
  out << buffer.str();
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  RunConfig cfg;
  CLI::App app{
      "Audit tool for the Noether point-symmetry classification of the "
      "Bianchi type II geodesic Lagrangian.\n"
      "The environment variable BIANCHI_NOETHER_SEED is reserved and "
      "currently ignored."};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App *sub, bool with_case) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out_path, "Write output to a file");
    if (with_case)
      sub->add_option("--case", cfg.case_selector,
                      "Case label I..IX, or all")
          ->capture_default_str();
  };

  CLI::App *derive =
      app.add_subcommand("derive", "Print the determining system");
  add_common(derive, false);
  CLI::App *audit = app.add_subcommand(
      "audit", "Check the classification tables against recomputation");
  add_common(audit, true);
  CLI::App *algebra = app.add_subcommand(
      "algebra", "Export structure constants, Killing form and series");
  add_common(algebra, true);
  CLI::App *conserve = app.add_subcommand(
      "conserve", "Build first integrals and measure drift on a geodesic");
  add_common(conserve, true);
  conserve->add_option("--metric", cfg.metric,
                       "Closed-form metric: config file path or inline "
                       "\"A = 1, B = t, C = 2*t\"")
      ->capture_default_str();
  conserve->add_option("--ics", cfg.ics,
                       "Initial state t,x,y,z,td,xd,yd,zd")
      ->capture_default_str();
  conserve->add_option("--step", cfg.step, "Integrator step")
      ->capture_default_str();
  conserve->add_option("--smax", cfg.smax, "Window end")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return run(cfg);
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
