#pragma once

#include "bianchi/cases.hpp"
#include "bianchi/lie_algebra.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bianchi {

struct GeneratorAudit {
  std::string name;
  bool verified = false;
  std::vector<std::string> offending; // velocity blocks of the residual
  std::string residual;               // empty when verified
};

struct BracketAudit {
  int i, j; // 1-based, i < j
  StructureRow claimed, computed;
  bool match = false;
};

struct Finding {
  std::string kind;
  std::string detail;
};

struct CaseAudit {
  std::string label;
  std::vector<std::string> constraints, inequalities;
  std::vector<GeneratorAudit> generators;
  std::vector<std::string> corrections; // adopted transcription fixes
  bool basis_closed = false;
  std::optional<LieAlgebra> algebra; // claimed basis with adopted fixes
  bool bracket_table_available = true;
  std::vector<BracketAudit> brackets; // pairs where anything is nonzero
  std::vector<Finding> findings;
};

namespace detail {

/// Claimed table over 0-based pairs i < j; entries listed with i > j are
/// flipped by antisymmetry.
inline std::map<std::pair<int, int>, StructureRow>
claimed_bracket_map(const CaseSpec &c) {
  std::map<std::pair<int, int>, StructureRow> m;
  for (const ClaimedBracket &b : c.claimed_brackets) {
    StructureRow row;
    for (const auto &[k, v] : b.rhs)
      row[k - 1] = b.i < b.j ? v : -v;
    m[{std::min(b.i, b.j) - 1, std::max(b.i, b.j) - 1}] = std::move(row);
  }
  return m;
}

inline std::optional<int>
bracket_mismatch_count(const std::vector<VectorField> &fields,
                       const std::map<std::pair<int, int>, StructureRow> &claims) {
  try {
    const LieAlgebra alg = structure_constants(fields);
    int bad = 0;
    for (size_t i = 0; i < alg.n; ++i)
      for (size_t j = i + 1; j < alg.n; ++j) {
        const auto it = claims.find({static_cast<int>(i), static_cast<int>(j)});
        const StructureRow &claimed =
            it == claims.end() ? StructureRow{} : it->second;
        if (alg.table[i][j] != claimed)
          ++bad;
      }
    return bad;
  } catch (const NonClosureError &) {
    return std::nullopt;
  }
}

inline std::string row_str(const StructureRow &row,
                           const std::vector<VectorField> &basis) {
  if (row.empty())
    return "0";
  std::string out;
  for (const auto &[k, coeff] : row) {
    Rational c = coeff;
    if (out.empty()) {
      if (c < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0)
        c = -c;
    }
    if (c != 1)
      out += to_string(c) + "*";
    out += basis[static_cast<size_t>(k)].name;
  }
  return out;
}

inline std::string field_str(const VectorField &f) {
  static const char *dirs[] = {"d/ds", "d/dt", "d/dx", "d/dy", "d/dz"};
  std::string out;
  for (int c = 0; c < kNumCoords; ++c) {
    const CanonicalExpr comp = normalize(f.comp[c]);
    if (comp.is_zero())
      continue;
    if (!out.empty())
      out += " + ";
    out += "(" + comp.str() + ") " + dirs[c];
  }
  if (out.empty())
    out = "0";
  const CanonicalExpr gauge = normalize(f.gauge);
  if (!gauge.is_zero())
    out += " with gauge " + gauge.str();
  return out;
}

} // namespace detail

/// Recomputes everything a case claims: generator verification, the span of
/// the component solution against the printed list, bracket tables, and the
/// algebra built from the printed basis after any validated correction.
inline CaseAudit audit_case(const CaseSpec &c) {
  CaseAudit audit;
  audit.label = c.label;
  audit.constraints = c.constraint_text;
  audit.inequalities = c.inequality_text;

  for (const std::string &note : c.notes)
    audit.findings.push_back({"constraint-augmented", note});

  for (const Generator &g : c.claimed) {
    GeneratorAudit ga;
    ga.name = g.name;
    const Verdict v = verify_generator(g, c);
    ga.verified = v.verified;
    if (!v.verified) {
      ga.offending = v.offending;
      ga.residual = v.residual.str();
      std::string blocks;
      for (const std::string &m : v.offending)
        blocks += (blocks.empty() ? "" : ", ") + m;
      audit.findings.push_back(
          {"generator-refuted", g.name + " leaves residual blocks {" + blocks +
                                    "} under the case constraints"});
    }
    audit.generators.push_back(std::move(ga));
  }

  std::vector<VectorField> claimed_fields, extracted_fields;
  for (const Generator &g : c.claimed)
    claimed_fields.push_back(from_generator(g));
  for (const Generator &g : basis_from_solution(c))
    extracted_fields.push_back(from_generator(g));

  std::vector<size_t> claimed_outside, extracted_outside;
  for (size_t i = 0; i < claimed_fields.size(); ++i)
    if (!span_contains(extracted_fields, claimed_fields[i])) {
      claimed_outside.push_back(i);
      audit.findings.push_back(
          {"basis-span-mismatch",
           claimed_fields[i].name + " = " +
               detail::field_str(claimed_fields[i]) +
               " is not spanned by the component solution"});
    }
  for (size_t i = 0; i < extracted_fields.size(); ++i)
    if (!span_contains(claimed_fields, extracted_fields[i])) {
      extracted_outside.push_back(i);
      audit.findings.push_back(
          {"basis-span-mismatch",
           "solution direction " + extracted_fields[i].name + " = " +
               detail::field_str(extracted_fields[i]) +
               " is not spanned by the printed list"});
    }

  // A single mismatched pair is treated as a transcription slip when the
  // swap strictly improves agreement with the printed bracket table.
  std::vector<VectorField> basis = claimed_fields;
  const auto claims = detail::claimed_bracket_map(c);
  if (claimed_outside.size() == 1 && extracted_outside.size() == 1) {
    std::vector<VectorField> swapped = claimed_fields;
    VectorField repl = extracted_fields[extracted_outside[0]];
    repl.name = claimed_fields[claimed_outside[0]].name;
    swapped[claimed_outside[0]] = repl;
    const auto before = detail::bracket_mismatch_count(claimed_fields, claims);
    const auto after = detail::bracket_mismatch_count(swapped, claims);
    if (after && (!before || *after < *before)) {
      audit.corrections.push_back(
          repl.name + " read as " + detail::field_str(repl) +
          " (the solution direction); as printed it was " +
          detail::field_str(claimed_fields[claimed_outside[0]]));
      audit.findings.push_back({"transcription-fix", audit.corrections.back()});
      basis = std::move(swapped);
    }
  }

  try {
    audit.algebra = structure_constants(basis);
    audit.basis_closed = true;
  } catch (const NonClosureError &err) {
    audit.findings.push_back({"basis-not-closed", err.what()});
  }

  if (audit.algebra) {
    const LieAlgebra &alg = *audit.algebra;
    if (!jacobi_holds(alg.table))
      throw std::logic_error("case " + c.label +
                             ": structure constants violate the Jacobi "
                             "identity");
    if (!killing_ad_invariant(alg.table))
      throw std::logic_error("case " + c.label +
                             ": Killing form is not ad-invariant");

    audit.bracket_table_available = c.brackets_claimed;
    if (!c.brackets_claimed)
      audit.findings.push_back(
          {"missing-bracket-table",
           "no commutator table is printed for this case; computed table "
           "reported without comparison"});
    for (size_t i = 0; i < alg.n; ++i)
      for (size_t j = i + 1; j < alg.n; ++j) {
        const auto it = claims.find({static_cast<int>(i), static_cast<int>(j)});
        const StructureRow claimed =
            it == claims.end() ? StructureRow{} : it->second;
        const StructureRow &computed = alg.table[i][j];
        if (claimed.empty() && computed.empty())
          continue;
        BracketAudit ba;
        ba.i = static_cast<int>(i) + 1;
        ba.j = static_cast<int>(j) + 1;
        ba.claimed = claimed;
        ba.computed = computed;
        ba.match = !c.brackets_claimed || claimed == computed;
        if (c.brackets_claimed && !ba.match)
          audit.findings.push_back(
              {"bracket-mismatch",
               "[" + alg.basis[i].name + ", " + alg.basis[j].name +
                   "] computes to " + detail::row_str(computed, alg.basis) +
                   " but the table says " +
                   detail::row_str(claimed, alg.basis)});
        audit.brackets.push_back(std::move(ba));
      }
  }
  return audit;
}

inline nlohmann::ordered_json structure_row_json(const StructureRow &row) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto &[k, coeff] : row)
    out[std::to_string(k + 1)] = to_string(coeff);
  return out;
}

inline nlohmann::ordered_json audit_json(const CaseAudit &audit) {
  nlohmann::ordered_json j;
  j["case"] = audit.label;
  j["constraints"] = audit.constraints;
  j["inequalities"] = audit.inequalities;
  j["generators"] = nlohmann::ordered_json::array();
  for (const GeneratorAudit &g : audit.generators) {
    nlohmann::ordered_json gj;
    gj["name"] = g.name;
    gj["status"] = g.verified ? "verified" : "refuted";
    if (!g.verified) {
      gj["offending"] = g.offending;
      gj["residual"] = g.residual;
    }
    j["generators"].push_back(std::move(gj));
  }
  j["corrections"] = audit.corrections;
  j["basis_closed"] = audit.basis_closed;
  j["bracket_table_available"] = audit.bracket_table_available;
  j["brackets"] = nlohmann::ordered_json::array();
  for (const BracketAudit &b : audit.brackets) {
    nlohmann::ordered_json bj;
    bj["i"] = b.i;
    bj["j"] = b.j;
    bj["claimed"] = structure_row_json(b.claimed);
    bj["computed"] = structure_row_json(b.computed);
    bj["match"] = b.match;
    j["brackets"].push_back(std::move(bj));
  }
  j["findings"] = nlohmann::ordered_json::array();
  for (const Finding &f : audit.findings)
    j["findings"].push_back({{"kind", f.kind}, {"detail", f.detail}});
  int verified = 0;
  for (const GeneratorAudit &g : audit.generators)
    verified += g.verified ? 1 : 0;
  int mismatches = 0;
  for (const BracketAudit &b : audit.brackets)
    mismatches += b.match ? 0 : 1;
  j["summary"] = {{"generators_verified", verified},
                  {"generators_refuted",
                   static_cast<int>(audit.generators.size()) - verified},
                  {"bracket_mismatches", mismatches}};
  return j;
}

/// Exported structure of a computed algebra: nonzero brackets over i < j and
/// the full Killing form, with exact rational entries rendered as strings.
inline nlohmann::ordered_json algebra_json(const LieAlgebra &alg) {
  nlohmann::ordered_json j;
  j["n"] = alg.n;
  j["basis"] = nlohmann::ordered_json::array();
  for (const VectorField &f : alg.basis)
    j["basis"].push_back(f.name);
  j["brackets"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < alg.n; ++i)
    for (size_t j2 = i + 1; j2 < alg.n; ++j2) {
      if (alg.table[i][j2].empty())
        continue;
      nlohmann::ordered_json bj;
      bj["i"] = i + 1;
      bj["j"] = j2 + 1;
      bj["coeffs"] = structure_row_json(alg.table[i][j2]);
      j["brackets"].push_back(std::move(bj));
    }
  const RatMat kappa = killing_form(alg.table);
  j["killing"] = nlohmann::ordered_json::array();
  for (size_t r = 0; r < alg.n; ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (size_t cidx = 0; cidx < alg.n; ++cidx)
      row.push_back(to_string(kappa[r][cidx]));
    j["killing"].push_back(std::move(row));
  }
  return j;
}

} // namespace bianchi
