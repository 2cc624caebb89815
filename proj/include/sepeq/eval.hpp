#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sepeq/expr.hpp"
#include "sepeq/numeric.hpp"
#include "sepeq/rng.hpp"

namespace sepeq {

// Raised when an evaluation hits a pole / 0^negative; zero tests treat the
// sample point as unlucky and redraw.
struct UnluckyPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an exact evaluation meets sqrt/exp.
struct NotRational : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Assignment {
  enum class Backend { Exact, Numeric };
  Backend backend = Backend::Exact;
  mpfr_prec_t precision = 128;
  std::map<std::string, GQ> exact;
  std::map<std::string, MpComplex> numeric;  // numeric-only values (override exact)

  static Assignment of(std::map<std::string, GQ> vals) {
    Assignment a;
    a.exact = std::move(vals);
    return a;
  }
};

// Memoizing single-point evaluators; reuse across many expressions sharing
// subtrees at the same point.  The cache stores the evaluated Expr alongside
// its value so the keyed node stays alive for the evaluator's lifetime;
// without that pin, a node freed between eval() calls could be reallocated at
// the same address and silently hit a stale cache entry.
class ExactEval {
 public:
  explicit ExactEval(const std::map<std::string, GQ>& vals) : vals_(vals) {}
  GQ eval(const Expr& e);

 private:
  const std::map<std::string, GQ>& vals_;
  std::unordered_map<const ExprNode*, std::pair<Expr, GQ>> memo_;
};

class NumericEval {
 public:
  NumericEval(const Assignment& a) : a_(a) {}
  MpComplex eval(const Expr& e);

 private:
  const Assignment& a_;
  std::unordered_map<const ExprNode*, std::pair<Expr, MpComplex>> memo_;
};

// Convenience single-shot evaluation (exact throws NotRational on radicals).
GQ evaluate_exact(const Expr& e, const std::map<std::string, GQ>& vals);
MpComplex evaluate_numeric(const Expr& e, const Assignment& a);

struct ZeroTestConfig {
  std::uint64_t seed = 20260816ull;
  int trials = 12;        // >= 8
  long range = 20000;     // >= 1e4
  mpfr_prec_t precision = 128;
  double tolerance = 1e-20;
};

// Draws values for a set of symbols. `covered` lists the symbols this sampler
// assigns; symbols outside it are drawn uniformly by the zero tester. When a
// variety has no rational section, `exact_capable` is false and only the
// numeric draw is usable (values live on the variety via principal branches,
// local to a base point so branches stay coherent).
struct Sampler {
  std::vector<std::string> covered;
  bool exact_capable = true;
  // Appends values for covered symbols. Exact map may be left untouched when
  // !exact_capable.
  std::function<void(Rng&, const ZeroTestConfig&, std::map<std::string, GQ>& exact)> draw_exact;
  std::function<void(Rng&, const ZeroTestConfig&, std::map<std::string, MpComplex>& numeric,
                     mpfr_prec_t prec)> draw_numeric;
};

struct ZeroReport {
  bool zero = false;
  bool numeric = false;  // verdict produced by the numeric backend
  int trials = 0;
  std::string witness;   // sample point where a nonzero value appeared
};

// Probabilistic zero test (Schwartz-Zippel over random Gaussian rationals,
// numeric fallback for radical-bearing expressions).
ZeroReport zero_test(const Expr& e, const ZeroTestConfig& cfg, const Sampler* sampler = nullptr);

// Joint test: all expressions tested at the same sample points (cheaper and
// the natural notion for operator identities). Returns first failing index in
// `witness_index` if nonzero.
struct MultiZeroReport {
  bool zero = false;
  bool numeric = false;
  int trials = 0;
  int witness_index = -1;
  std::string witness;
};
MultiZeroReport zero_test_all(const std::vector<Expr>& es, const ZeroTestConfig& cfg,
                              const Sampler* sampler = nullptr);

bool is_zero(const Expr& e, const ZeroTestConfig& cfg, const Sampler* sampler = nullptr);

}  // namespace sepeq
