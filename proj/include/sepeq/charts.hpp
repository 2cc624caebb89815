#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sepeq/diffop.hpp"
#include "sepeq/eval.hpp"
#include "sepeq/expr.hpp"

namespace sepeq {

// Ambient model a chart maps into: the plane (x, y) or the unit sphere
// embedded in (s1, s2, s3).
enum class Space { Flat, Sphere };

// An auxiliary symbol appearing in a chart's formulas (a square root or a
// circular/hyperbolic function of one chart variable), with its definition in
// terms of the chart variables and its per-variable derivative rules.
struct AuxDef {
  std::string name;
  Expr def;                        // explicit definition (sqrt/exp nodes allowed)
  std::array<Expr, 2> d;           // derivative wrt vars[0], vars[1] (aux-symbol form)
};

// A separable coordinate chart.
struct Chart {
  std::string id;
  Space space = Space::Flat;
  std::vector<std::string> vars;   // the two chart variables
  std::vector<std::string> params; // chart parameters (drawn generically)
  std::vector<AuxDef> aux;
  std::vector<Expr> embed;         // x,y (flat) or s1,s2,s3 (sphere)
  bool exact = false;              // every aux symbol reachable by a rational section
  // Exact sections per variable: fill values for the variable and its aux
  // symbols from one rational draw. Unset entries mean the variable needs no
  // aux (rational draw suffices) unless `exact` is false.
  std::array<std::function<void(Rng&, const ZeroTestConfig&, std::map<std::string, GQ>&)>, 2>
      section{};
  std::map<std::string, GQ> base;  // generic base values for vars and params

  DiffContext context() const;     // vars + aux rules + joint sampler
};

// Chart construction helpers (used by the registry and by tests probing
// alternative readings of a chart).
// Declare `name` = sqrt(radicand); derivative rules are expressed through the
// aux symbol itself so downstream coefficients stay radical-free.
void add_sqrt_aux(Chart& ch, const std::string& name, const Expr& radicand);
// Declare a circular pair cs = cos(vars[k]), sn = sin(vars[k]).
void add_circle_aux(Chart& ch, int k, const std::string& cs_name, const std::string& sn_name);

// Registry ------------------------------------------------------------------
const Chart& get_chart(const std::string& id);
bool has_chart(const std::string& id);
std::vector<std::string> chart_ids();

// Fully resolved generic base point: vars and params exactly; aux symbols
// exactly when a section covers them, otherwise numerically (principal
// branches at the base).
struct ChartBasePoint {
  std::map<std::string, GQ> exact;
  std::map<std::string, MpComplex> numeric;
  bool all_exact = true;
};
ChartBasePoint chart_base_point(const Chart& ch, mpfr_prec_t prec);

// Pushforwards of the ambient coordinate derivatives to the chart: 2 operators
// (d_x, d_y) for flat charts, 3 tangential operators for sphere charts.
std::vector<DiffOp> chart_pushforward(const Chart& ch);

// Induced metric coefficients g_uu, g_vv, g_uv of the ambient metric.
struct ChartMetric {
  Expr guu, gvv, guv;
};
ChartMetric chart_metric(const Chart& ch);

// Invariant checks: orthogonality (g_uv = 0), sphere constraint where
// applicable, and consistency of every declared aux derivative rule with the
// aux definition. Returns an empty string on success, else a description.
std::string check_chart(const Chart& ch, const ZeroTestConfig& cfg);

}  // namespace sepeq
