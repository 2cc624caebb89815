#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sepeq/rational.hpp"

namespace sepeq {

enum class Kind {
  Constant,
  Variable,
  Parameter,
  Sum,
  Product,
  Quotient,
  Power,  // integer exponent, possibly negative
  Sqrt,
  Exp,
};

class Expr;

struct ExprNode {
  Kind kind;
  GQ value;          // Constant
  std::string name;  // Variable / Parameter
  long expo = 0;     // Power
  std::vector<Expr> kids;
  std::size_t hash = 0;
  bool radical_free = true;  // no Sqrt/Exp anywhere below
};

// Immutable shared-subtree expression DAG. Construction performs constant
// folding and flattening of nested sums/products, nothing else.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}

  bool valid() const { return n_ != nullptr; }
  const ExprNode& node() const { return *n_; }
  const ExprNode* ptr() const { return n_.get(); }
  Kind kind() const { return n_->kind; }
  bool radical_free() const { return n_->radical_free; }

  bool is_constant() const { return n_->kind == Kind::Constant; }
  bool is_zero_constant() const { return is_constant() && n_->value.is_zero(); }
  bool is_one_constant() const { return is_constant() && n_->value.is_one(); }
  const GQ& value() const { return n_->value; }
  const std::string& name() const { return n_->name; }

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;

 private:
  std::shared_ptr<const ExprNode> n_;
};

// --- constructors ---
Expr constant(const GQ& v);
Expr constant(long v);
Expr frac(long num, long den);
Expr imag_unit();
Expr variable(const std::string& name);
Expr parameter(const std::string& name);
Expr sum(std::vector<Expr> kids);
Expr product(std::vector<Expr> kids);
Expr quotient(const Expr& num, const Expr& den);
Expr pow_int(const Expr& base, long k);
Expr sqrt_of(const Expr& a);
Expr exp_of(const Expr& a);

inline Expr operator*(long a, const Expr& b) { return product({constant(a), b}); }
inline Expr operator+(long a, const Expr& b) { return sum({constant(a), b}); }
inline Expr operator-(long a, const Expr& b) { return sum({constant(a), product({constant(-1), b})}); }
inline Expr operator*(const GQ& a, const Expr& b) { return product({constant(a), b}); }

// --- queries ---
std::set<std::string> free_symbols(const Expr& e);
std::size_t dag_size(const Expr& e);
std::string to_string(const Expr& e);

// --- transforms ---
// Persistent derivative memo. Entries map a subexpression node to its
// derivative and pin the keyed node alive (first pair member) so pointer keys
// cannot be recycled. A memo is only valid for one fixed (variable, aux-rule)
// pair; reusing it across calls lets repeated derivatives share subtrees,
// which keeps operator compositions from rebuilding identical towers.
struct DerivMemo {
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> entries;
};

// d e / d var. `aux_rules` optionally supplies derivatives of named symbols
// (chart auxiliary square roots, trig pairs, ...) with respect to `var`.
Expr differentiate(const Expr& e, const std::string& var,
                   const std::map<std::string, Expr>* aux_rules = nullptr,
                   DerivMemo* memo = nullptr);

// Replaces variables AND parameters by name (flat namespace).
Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl);

}  // namespace sepeq
