#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sepeq/charts.hpp"
#include "sepeq/diffop.hpp"

namespace sepeq {

enum class SystemKind { Laplace, HelmholtzFlat, HelmholtzSphere };

struct ChartUse {
  std::string chart;  // id in the chart registry
  std::string cell;   // one-letter label of the matching Laplace separable family
};

// For a Laplace potential V = sum_k a_k V_k: dividing by U = V(vector) yields
// the named constant-curvature system. Vector entries may carry parameters.
struct TransformSpec {
  std::string target;
  std::vector<Expr> vector;
  std::string constraint;  // e.g. "a2 != 0"; empty when unconditional
};

struct WordSpec {
  std::string name;
  std::string word;
};

struct RelationSpec {
  std::string name;
  std::string lhs, rhs;
};

struct SuperintegrableSystem {
  std::string id;
  SystemKind kind = SystemKind::HelmholtzFlat;
  bool degenerate = false;
  std::vector<std::string> variables;   // x,y or s1,s2,s3
  std::vector<std::string> parameters;
  Expr potential;
  std::vector<ChartUse> charts;
  std::vector<TransformSpec> transforms;  // Laplace systems only
  std::vector<WordSpec> generators;       // named operator words ("H" first)
  std::vector<WordSpec> derived;          // abbreviations available in relations
  std::vector<RelationSpec> relations;
  std::string notes;
};

int catalog_version();
std::vector<std::string> system_ids();
bool has_system(const std::string& id);
const SuperintegrableSystem& get_system(const std::string& id);

// ---------------------------------------------------------------------------
// Operator words: a small language over differential operators. Identifiers
// resolve through `atoms` (operators), then `scalars` (functions on the
// chart), then fall back to parameters. Products compose; [a,b], {a,b} and
// {a,b,c} are the commutator, the anticommutator and the triple symmetrizer;
// '^' iterates composition; '/' divides by an order-zero factor.
struct WordEnv {
  const DiffContext* ctx = nullptr;
  std::map<std::string, DiffOp> atoms;
  std::map<std::string, Expr> scalars;
  // Triple symmetrizer normalization: 1 sums all six orderings, 1/6 averages.
  mpq_class triple_scale = 1;
};
DiffOp parse_operator(const std::string& src, const WordEnv& env);

// ---------------------------------------------------------------------------
// Realization on a two-variable working chart. Flat systems live on the plain
// (x, y) chart; sphere systems are realized on the rational sphere chart with
// the ambient coordinates substituted, which quotients by the constraint.
struct SystemRealization {
  DiffContext ctx;
  std::map<std::string, DiffOp> atoms;       // Dx/Dy or J1/J2/J3
  std::map<std::string, Expr> scalars;       // chart vars; ambient coordinates
  mpq_class triple_scale = 1;
  DiffOp hamiltonian;                        // built from kind + potential
  std::map<std::string, DiffOp> generators;  // realized named words (+derived)
  SystemRealization() : hamiltonian(2) {}
  WordEnv word_env() const;  // atoms + generators + scalars over `ctx`
};
SystemRealization realize(const SuperintegrableSystem& sys, mpq_class triple_scale = 1);

// ---------------------------------------------------------------------------
// Symmetry checks.
bool is_symmetry(const DiffOp& cand, const DiffOp& h, const DiffContext& ctx,
                 const ZeroTestConfig& cfg);

struct ConformalCheckResult {
  bool conformal = false;  // [cand, h] = multiplier o h
  bool strict = false;     // [cand, h] = 0
  DiffOp multiplier, remainder;
  ConformalCheckResult() : multiplier(2), remainder(2) {}
};
ConformalCheckResult is_conformal_symmetry(const DiffOp& cand, const DiffOp& h,
                                           const DiffContext& ctx,
                                           const ZeroTestConfig& cfg);

// ---------------------------------------------------------------------------
// Structure-relation verification.
struct RelationReport {
  std::string name;
  std::string verdict;   // "exact" | "on-shell" | "fail"
  bool numeric = false;  // a zero test fell back to the numeric backend
};
struct StructureReport {
  std::string system;
  std::string triple_convention;  // "sum" | "average" | "" when unused
  std::vector<RelationReport> relations;
  bool all_pass = false;
};
StructureReport verify_structure_relations(const std::string& id, const ZeroTestConfig& cfg);
// Same check against explicit relation strings (fixtures perturb these).
StructureReport verify_relations(const SuperintegrableSystem& sys,
                                 const std::vector<RelationSpec>& relations,
                                 const ZeroTestConfig& cfg);

// ---------------------------------------------------------------------------
// Bounded symmetry discovery: exact linear algebra on the coefficient
// equations of [h, L] = 0 over a finite ansatz, sampled to full rank, with a
// verification pass. Multiples of the identity and of h (by any parameter
// monomial representable in the ansatz) are excluded from the result.
struct DiscoveryConfig {
  int order = 2;  // highest derivative order of the ansatz
  int degree = 2; // total polynomial degree bound for coefficients
  std::vector<std::pair<std::string, int>> denominators;  // factor -> max power
  std::vector<std::string> parameters;  // potential parameters
  int param_degree = 0;                 // degree bound in those parameters
  long sample_range = 50;
  int oversample = 6;  // extra sample points beyond the minimum
};
struct DiscoveryResult {
  std::vector<DiffOp> basis;
  bool verified = true;  // false when a sampled solution failed verification
};
DiscoveryResult discover_symmetries(const DiffOp& h, const DiffContext& ctx,
                                    const DiscoveryConfig& dcfg,
                                    const ZeroTestConfig& cfg);
// True when `expected` lies in the span of the discovered basis together with
// the excluded identity/hamiltonian multiples, inside the same ansatz space.
bool discovery_recovers(const DiffOp& h, const DiffOp& expected, const DiffContext& ctx,
                        const DiscoveryConfig& dcfg, const ZeroTestConfig& cfg);

}  // namespace sepeq
