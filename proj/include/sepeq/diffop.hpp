#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sepeq/eval.hpp"
#include "sepeq/expr.hpp"

namespace sepeq {

// Per-variable derivative orders; keys of the normal form.
using MultiIndex = std::vector<int>;

// A coordinate chart's differential data: the ordered variable names, the
// derivative rules for auxiliary symbols (one map per variable), and an
// optional sampler that draws points on the auxiliary variety.
struct DiffContext {
  std::vector<std::string> vars;
  std::vector<std::map<std::string, Expr>> aux;  // aux[i]: d(symbol)/d(vars[i])
  std::optional<Sampler> sampler;
  // Per-variable derivative memos, shared between copies of a context so the
  // towers built by repeated compositions reuse one node per derivative.
  mutable std::vector<std::shared_ptr<DerivMemo>> deriv_memo;

  int nvars() const { return static_cast<int>(vars.size()); }
  int index_of(const std::string& v) const;
  const std::map<std::string, Expr>* rules_for(int i) const {
    if (i < 0 || i >= static_cast<int>(aux.size()) || aux[static_cast<std::size_t>(i)].empty())
      return nullptr;
    return &aux[static_cast<std::size_t>(i)];
  }
  DerivMemo* memo_for(int i) const;
  const Sampler* sampler_ptr() const { return sampler ? &*sampler : nullptr; }

  static DiffContext plain(std::vector<std::string> names) {
    DiffContext c;
    c.vars = std::move(names);
    c.aux.resize(c.vars.size());
    return c;
  }
};

// Linear differential operator in normal form: sum of coeff(x) * d^alpha with
// all derivatives pushed to the right of their coefficients.
class DiffOp {
 public:
  DiffOp() = default;
  explicit DiffOp(int nvars) : nvars_(nvars) {}

  static DiffOp zero(int nvars) { return DiffOp(nvars); }
  static DiffOp identity(int nvars);
  static DiffOp mult(const Expr& f, int nvars);   // multiplication by f
  static DiffOp partial(int k, int nvars);        // d/d vars[k]
  // coeff * d^alpha as a one-term operator
  static DiffOp monomial(const Expr& coeff, MultiIndex alpha);

  int nvars() const { return nvars_; }
  const std::map<MultiIndex, Expr>& terms() const { return terms_; }
  bool syntactically_zero() const { return terms_.empty(); }
  int order() const;

  void add_term(const MultiIndex& alpha, const Expr& coeff);
  void erase_term(const MultiIndex& alpha);
  Expr coefficient(const MultiIndex& alpha) const;  // zero constant if absent

  DiffOp operator+(const DiffOp& o) const;
  DiffOp operator-(const DiffOp& o) const;
  DiffOp operator-() const;
  DiffOp left_mul(const Expr& f) const;  // f * (*this)
  DiffOp scaled(const GQ& c) const;
  DiffOp substitute_coeffs(const std::map<std::string, Expr>& repl) const;

  std::string str(const DiffContext& ctx) const;

 private:
  int nvars_ = 0;
  std::map<MultiIndex, Expr> terms_;
};

// Operator composition (a after b) by the generalized Leibniz rule.
DiffOp compose(const DiffOp& a, const DiffOp& b, const DiffContext& ctx);
DiffOp commutator(const DiffOp& a, const DiffOp& b, const DiffContext& ctx);
DiffOp anticommutator(const DiffOp& a, const DiffOp& b, const DiffContext& ctx);

// Fully symmetrized product: the average of all six orderings of a, b, c.
DiffOp symmetrized_triple(const DiffOp& a, const DiffOp& b, const DiffOp& c,
                          const DiffContext& ctx);

// op(f) as an expression.
Expr apply(const DiffOp& op, const Expr& f, const DiffContext& ctx);

// exp(-phi) op exp(phi): every d_k becomes d_k + grad_phi[k]. The components
// must form a gradient (equal mixed partials), which makes the shifted
// derivations commute.
DiffOp gauge_conjugate(const DiffOp& op, const std::vector<Expr>& grad_phi,
                       const DiffContext& ctx);

// Rewrites an operator in a new chart: coefficients get `subst` applied
// (old coordinates as expressions in the new ones); each old derivative d_i
// becomes the first-order operator pushforward[i] over the new context.
DiffOp change_variables(const DiffOp& op, const std::map<std::string, Expr>& subst,
                        const std::vector<DiffOp>& pushforward, const DiffContext& new_ctx);

// Division with remainder by a second-order operator h in the direction
// `elim_var`: returns remainder and quotient with op = remainder + quotient o h
// and remainder of derivative order <= 1 in elim_var. Requires h to contain
// d_{elim}^2 with a syntactically nonzero coefficient.
struct ReduceResult {
  DiffOp remainder, quotient;
};
ReduceResult reduce_mod(const DiffOp& op, const DiffOp& h, int elim_var, const DiffContext& ctx);

// All-coefficients-vanish test, sharing sample points across coefficients.
MultiZeroReport operator_zero_report(const DiffOp& op, const DiffContext& ctx,
                                     const ZeroTestConfig& cfg);
bool operator_is_zero(const DiffOp& op, const DiffContext& ctx, const ZeroTestConfig& cfg);

// Drops terms whose coefficients vanish at cfg.trials exact sample points —
// the same confidence model as the zero tests. Compositions leave behind
// top-order terms whose coefficients cancel as functions but not as syntax
// trees; pruning them before further composition or reduction keeps the
// expression swell bounded. Coefficients that cannot be evaluated exactly
// (radicals, numeric-only samplers) are conservatively kept.
DiffOp prune_vanishing_terms(const DiffOp& op, const DiffContext& ctx,
                             const ZeroTestConfig& cfg = {});

}  // namespace sepeq
