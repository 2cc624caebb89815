#include "sepeq/eval.hpp"

#include <set>
#include <sstream>

namespace sepeq {

GQ ExactEval::eval(const Expr& e) {
  const ExprNode* n = e.ptr();
  auto it = memo_.find(n);
  if (it != memo_.end()) return it->second.second;
  GQ out;
  switch (n->kind) {
    case Kind::Constant:
      out = n->value;
      break;
    case Kind::Variable:
    case Kind::Parameter: {
      auto v = vals_.find(n->name);
      if (v == vals_.end()) throw std::runtime_error("unbound symbol: " + n->name);
      out = v->second;
      break;
    }
    case Kind::Sum: {
      for (const auto& k : n->kids) out = out + eval(Expr(k));
      break;
    }
    case Kind::Product: {
      out = GQ(1);
      for (const auto& k : n->kids) {
        out = out * eval(Expr(k));
        if (out.is_zero()) break;
      }
      break;
    }
    case Kind::Quotient: {
      GQ den = eval(Expr(n->kids[1]));
      if (den.is_zero()) throw UnluckyPoint("division by zero at sample point");
      out = eval(Expr(n->kids[0])) / den;
      break;
    }
    case Kind::Power: {
      GQ b = eval(Expr(n->kids[0]));
      if (b.is_zero() && n->expo < 0) throw UnluckyPoint("0^negative at sample point");
      out = b.pow(n->expo);
      break;
    }
    case Kind::Sqrt: {
      GQ b = eval(Expr(n->kids[0]));
      if (b.is_zero()) { out = GQ(0); break; }
      // Exact square roots only for perfect squares of rationals (no imaginary part).
      if (b.im == 0 && b.re > 0) {
        mpq_class r = b.re;
        mpz_class ns, ds;
        if (mpz_root(ns.get_mpz_t(), r.get_num().get_mpz_t(), 2) &&
            mpz_root(ds.get_mpz_t(), r.get_den().get_mpz_t(), 2)) {
          out = GQ(mpq_class(ns, ds));
          break;
        }
      }
      throw NotRational("sqrt of non-square at exact sample point");
    }
    case Kind::Exp:
      throw NotRational("exp under exact evaluation");
  }
  memo_.emplace(n, std::make_pair(e, out));
  return out;
}

MpComplex NumericEval::eval(const Expr& e) {
  const ExprNode* n = e.ptr();
  auto it = memo_.find(n);
  if (it != memo_.end()) return it->second.second;
  const mpfr_prec_t prec = a_.precision;
  MpComplex out = MpComplex::from_double(0.0, 0.0, prec);
  switch (n->kind) {
    case Kind::Constant:
      out = MpComplex::from_gq(n->value, prec);
      break;
    case Kind::Variable:
    case Kind::Parameter: {
      auto v = a_.numeric.find(n->name);
      if (v != a_.numeric.end()) { out = v->second; break; }
      auto w = a_.exact.find(n->name);
      if (w == a_.exact.end()) throw std::runtime_error("unbound symbol: " + n->name);
      out = MpComplex::from_gq(w->second, prec);
      break;
    }
    case Kind::Sum: {
      for (const auto& k : n->kids) out = out + eval(Expr(k));
      break;
    }
    case Kind::Product: {
      out = MpComplex::from_double(1.0, 0.0, prec);
      for (const auto& k : n->kids) out = out * eval(Expr(k));
      break;
    }
    case Kind::Quotient: {
      MpComplex den = eval(Expr(n->kids[1]));
      if (den.is_zero()) throw UnluckyPoint("division by zero at sample point");
      out = eval(Expr(n->kids[0])) / den;
      break;
    }
    case Kind::Power: {
      MpComplex b = eval(Expr(n->kids[0]));
      if (b.is_zero() && n->expo < 0) throw UnluckyPoint("0^negative at sample point");
      out = b.pow(n->expo);
      break;
    }
    case Kind::Sqrt:
      out = eval(Expr(n->kids[0])).sqrt();
      break;
    case Kind::Exp:
      out = eval(Expr(n->kids[0])).exp();
      break;
  }
  memo_.emplace(n, std::make_pair(e, out));
  return out;
}

GQ evaluate_exact(const Expr& e, const std::map<std::string, GQ>& vals) {
  ExactEval ev(vals);
  return ev.eval(e);
}

MpComplex evaluate_numeric(const Expr& e, const Assignment& a) {
  NumericEval ev(a);
  return ev.eval(e);
}

namespace {

std::string describe_point(const std::map<std::string, GQ>& exact,
                           const std::map<std::string, MpComplex>& numeric) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : exact) {
    if (!first) os << ", ";
    os << k << "=" << v.str();
    first = false;
  }
  for (const auto& [k, v] : numeric) {
    if (!first) os << ", ";
    os << k << "=" << v.str(10);
    first = false;
  }
  return os.str();
}

// Collect the symbols a sampler does not cover.
std::vector<std::string> uncovered_symbols(const std::vector<Expr>& es, const Sampler* sampler) {
  std::set<std::string> all;
  for (const auto& e : es) {
    auto fs = free_symbols(e);
    all.insert(fs.begin(), fs.end());
  }
  if (sampler) {
    for (const auto& s : sampler->covered) all.erase(s);
  }
  return {all.begin(), all.end()};
}

}  // namespace

MultiZeroReport zero_test_all(const std::vector<Expr>& es, const ZeroTestConfig& cfg,
                              const Sampler* sampler) {
  MultiZeroReport rep;
  // Fast path: every expression already folded to the zero constant.
  bool all_const_zero = true;
  for (const auto& e : es) {
    if (!e.valid() || !e.is_zero_constant()) { all_const_zero = false; break; }
  }
  if (all_const_zero) {
    rep.zero = true;
    return rep;
  }

  bool exact_possible =
      (!sampler || sampler->exact_capable);
  if (exact_possible) {
    for (const auto& e : es)
      if (!e.radical_free()) { exact_possible = false; break; }
  }
  rep.numeric = !exact_possible;

  const std::vector<std::string> free_syms = uncovered_symbols(es, sampler);
  Rng rng(cfg.seed);
  const int max_draws = cfg.trials * 10;  // unlucky points (poles) do not count
  int done = 0;

  for (int draw = 0; draw < max_draws && done < cfg.trials; ++draw) {
    if (exact_possible) {
      std::map<std::string, GQ> point;
      for (const auto& s : free_syms) point[s] = rng.gaussian(cfg.range);
      if (sampler && sampler->draw_exact) sampler->draw_exact(rng, cfg, point);
      try {
        ExactEval ev(point);
        for (std::size_t i = 0; i < es.size(); ++i) {
          if (!ev.eval(es[i]).is_zero()) {
            rep.zero = false;
            rep.witness_index = static_cast<int>(i);
            rep.witness = describe_point(point, {});
            rep.trials = done + 1;
            return rep;
          }
        }
        ++done;
      } catch (const UnluckyPoint&) {
        continue;  // redraw
      } catch (const NotRational&) {
        // Radical appeared dynamically (e.g. via substitution product); fall
        // back to the numeric backend for the remaining trials.
        exact_possible = false;
        rep.numeric = true;
        continue;
      }
    } else {
      Assignment a;
      a.backend = Assignment::Backend::Numeric;
      a.precision = cfg.precision;
      for (const auto& s : free_syms) a.exact[s] = rng.gaussian(cfg.range);
      std::map<std::string, GQ> extra_exact;
      if (sampler && sampler->draw_numeric) {
        // Definition-based draws keep auxiliary symbols coherent with any
        // sqrt/exp nodes of the same quantities appearing in the expressions.
        sampler->draw_numeric(rng, cfg, a.numeric, cfg.precision);
      } else if (sampler && sampler->draw_exact && sampler->exact_capable) {
        sampler->draw_exact(rng, cfg, extra_exact);
        for (auto& [k, v] : extra_exact) a.exact[k] = v;
      }
      try {
        NumericEval ev(a);
        // Scale-aware comparison: an identity violated at magnitude m is
        // judged against m, not against 1, so huge coefficients do not mask
        // real discrepancies and tiny ones do not trip roundoff.
        for (std::size_t i = 0; i < es.size(); ++i) {
          MpReal mag = ev.eval(es[i]).abs();
          MpReal tol = MpReal::from_double(cfg.tolerance, cfg.precision);
          if (mag > tol) {
            rep.zero = false;
            rep.witness_index = static_cast<int>(i);
            rep.witness = describe_point(a.exact, a.numeric) + " |value|=" + mag.str(6);
            rep.trials = done + 1;
            return rep;
          }
        }
        ++done;
      } catch (const UnluckyPoint&) {
        continue;
      }
    }
  }
  if (done < cfg.trials)
    throw std::runtime_error("zero test exhausted redraws without completing trials");
  rep.zero = true;
  rep.trials = done;
  return rep;
}

ZeroReport zero_test(const Expr& e, const ZeroTestConfig& cfg, const Sampler* sampler) {
  MultiZeroReport m = zero_test_all({e}, cfg, sampler);
  ZeroReport r;
  r.zero = m.zero;
  r.numeric = m.numeric;
  r.trials = m.trials;
  r.witness = m.witness;
  return r;
}

bool is_zero(const Expr& e, const ZeroTestConfig& cfg, const Sampler* sampler) {
  return zero_test(e, cfg, sampler).zero;
}

}  // namespace sepeq
