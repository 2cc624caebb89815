#include "sepeq/diffop.hpp"

#include <sstream>
#include <stdexcept>

namespace sepeq {

int DiffContext::index_of(const std::string& v) const {
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (vars[k] == v) return static_cast<int>(k);
  throw std::invalid_argument("unknown variable: " + v);
}

DerivMemo* DiffContext::memo_for(int i) const {
  if (i < 0 || i >= static_cast<int>(vars.size())) return nullptr;
  if (deriv_memo.size() != vars.size()) deriv_memo.assign(vars.size(), nullptr);
  auto& slot = deriv_memo[static_cast<std::size_t>(i)];
  if (!slot) slot = std::make_shared<DerivMemo>();
  return slot.get();
}

DiffOp DiffOp::identity(int nvars) {
  DiffOp op(nvars);
  op.add_term(MultiIndex(static_cast<std::size_t>(nvars), 0), constant(1));
  return op;
}

DiffOp DiffOp::mult(const Expr& f, int nvars) {
  DiffOp op(nvars);
  op.add_term(MultiIndex(static_cast<std::size_t>(nvars), 0), f);
  return op;
}

DiffOp DiffOp::partial(int k, int nvars) {
  DiffOp op(nvars);
  MultiIndex a(static_cast<std::size_t>(nvars), 0);
  a[static_cast<std::size_t>(k)] = 1;
  op.add_term(a, constant(1));
  return op;
}

DiffOp DiffOp::monomial(const Expr& coeff, MultiIndex alpha) {
  DiffOp op(static_cast<int>(alpha.size()));
  op.add_term(alpha, coeff);
  return op;
}

int DiffOp::order() const {
  int best = -1;
  for (const auto& [a, c] : terms_) {
    (void)c;
    int tot = 0;
    for (int v : a) tot += v;
    if (tot > best) best = tot;
  }
  return best;  // -1 for the zero operator
}

void DiffOp::add_term(const MultiIndex& alpha, const Expr& coeff) {
  if (static_cast<int>(alpha.size()) != nvars_)
    throw std::invalid_argument("multi-index arity mismatch");
  if (coeff.is_zero_constant()) return;
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    terms_.emplace(alpha, coeff);
  } else {
    Expr s = it->second + coeff;
    if (s.is_zero_constant())
      terms_.erase(it);
    else
      it->second = s;
  }
}

void DiffOp::erase_term(const MultiIndex& alpha) { terms_.erase(alpha); }

Expr DiffOp::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? constant(0) : it->second;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
  DiffOp r = *this;
  for (const auto& [a, c] : o.terms_) r.add_term(a, c);
  return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + (-o); }

DiffOp DiffOp::operator-() const {
  DiffOp r(nvars_);
  for (const auto& [a, c] : terms_) r.add_term(a, -c);
  return r;
}

DiffOp DiffOp::left_mul(const Expr& f) const {
  if (f.is_zero_constant()) return DiffOp(nvars_);
  DiffOp r(nvars_);
  for (const auto& [a, c] : terms_) r.add_term(a, f * c);
  return r;
}

DiffOp DiffOp::scaled(const GQ& v) const { return left_mul(constant(v)); }

DiffOp DiffOp::substitute_coeffs(const std::map<std::string, Expr>& repl) const {
  DiffOp r(nvars_);
  for (const auto& [a, c] : terms_) r.add_term(a, substitute(c, repl));
  return r;
}

std::string DiffOp::str(const DiffContext& ctx) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : terms_) {
    if (!first) os << " + ";
    os << "(" << to_string(c) << ")";
    for (std::size_t k = 0; k < a.size(); ++k)
      for (int j = 0; j < a[k]; ++j) os << "*d" << ctx.vars[k];
    first = false;
  }
  return os.str();
}

namespace {

// Iterated derivative d^delta applied to an expression, with chart aux rules.
Expr multi_diff(const Expr& e, const MultiIndex& delta, const DiffContext& ctx) {
  Expr cur = e;
  for (std::size_t k = 0; k < delta.size(); ++k)
    for (int j = 0; j < delta[k]; ++j) {
      if (cur.is_constant()) return cur.is_zero_constant() ? cur : constant(0);
      cur = differentiate(cur, ctx.vars[k], ctx.rules_for(static_cast<int>(k)),
                          ctx.memo_for(static_cast<int>(k)));
    }
  return cur;
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - j + 1) / j;
  return r;
}

// Enumerate gamma <= alpha componentwise.
bool next_sub_index(MultiIndex& g, const MultiIndex& alpha) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] < alpha[k]) {
      ++g[k];
      for (std::size_t j = 0; j < k; ++j) g[j] = 0;
      return true;
    }
  }
  return false;
}

}  // namespace

DiffOp compose(const DiffOp& a, const DiffOp& b, const DiffContext& ctx) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("compose arity mismatch");
  DiffOp r(a.nvars());
  for (const auto& [alpha, ca] : a.terms()) {
    for (const auto& [beta, cb] : b.terms()) {
      MultiIndex gamma(alpha.size(), 0);
      do {
        long mult = 1;
        for (std::size_t k = 0; k < alpha.size(); ++k) mult *= binom(alpha[k], gamma[k]);
        MultiIndex rest(alpha.size());
        for (std::size_t k = 0; k < alpha.size(); ++k) rest[k] = alpha[k] - gamma[k];
        Expr dcb = multi_diff(cb, rest, ctx);
        if (dcb.is_zero_constant()) continue;
        MultiIndex out(alpha.size());
        for (std::size_t k = 0; k < alpha.size(); ++k) out[k] = gamma[k] + beta[k];
        Expr term = (mult == 1) ? ca * dcb : product({constant(mult), ca, dcb});
        r.add_term(out, term);
      } while (next_sub_index(gamma, alpha));
    }
  }
  return r;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b, const DiffContext& ctx) {
  return compose(a, b, ctx) - compose(b, a, ctx);
}

DiffOp anticommutator(const DiffOp& a, const DiffOp& b, const DiffContext& ctx) {
  return compose(a, b, ctx) + compose(b, a, ctx);
}

DiffOp symmetrized_triple(const DiffOp& a, const DiffOp& b, const DiffOp& c,
                          const DiffContext& ctx) {
  const DiffOp* p[3] = {&a, &b, &c};
  int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  DiffOp acc(a.nvars());
  for (auto& pm : perms)
    acc = acc + compose(compose(*p[pm[0]], *p[pm[1]], ctx), *p[pm[2]], ctx);
  return acc.left_mul(frac(1, 6));
}

Expr apply(const DiffOp& op, const Expr& f, const DiffContext& ctx) {
  std::vector<Expr> parts;
  for (const auto& [alpha, c] : op.terms()) {
    Expr df = multi_diff(f, alpha, ctx);
    if (df.is_zero_constant()) continue;
    parts.push_back(c * df);
  }
  return parts.empty() ? constant(0) : sum(std::move(parts));
}

DiffOp gauge_conjugate(const DiffOp& op, const std::vector<Expr>& grad_phi,
                       const DiffContext& ctx) {
  const int n = op.nvars();
  if (static_cast<int>(grad_phi.size()) != n)
    throw std::invalid_argument("gauge gradient arity mismatch");
  std::vector<DiffOp> factor;
  for (int k = 0; k < n; ++k)
    factor.push_back(DiffOp::partial(k, n) + DiffOp::mult(grad_phi[static_cast<std::size_t>(k)], n));
  DiffOp r(n);
  for (const auto& [alpha, c] : op.terms()) {
    DiffOp word = DiffOp::identity(n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < alpha[static_cast<std::size_t>(k)]; ++j)
        word = compose(factor[static_cast<std::size_t>(k)], word, ctx);
    r = r + word.left_mul(c);
  }
  return r;
}

DiffOp change_variables(const DiffOp& op, const std::map<std::string, Expr>& subst,
                        const std::vector<DiffOp>& pushforward, const DiffContext& new_ctx) {
  const int m = new_ctx.nvars();
  DiffOp r(m);
  for (const auto& [alpha, c] : op.terms()) {
    DiffOp word = DiffOp::identity(m);
    for (std::size_t k = 0; k < alpha.size(); ++k)
      for (int j = 0; j < alpha[k]; ++j) word = compose(pushforward[k], word, new_ctx);
    r = r + word.left_mul(substitute(c, subst));
  }
  return r;
}

ReduceResult reduce_mod(const DiffOp& op, const DiffOp& h, int elim_var,
                        const DiffContext& ctx) {
  const int n = op.nvars();
  MultiIndex lead(static_cast<std::size_t>(n), 0);
  lead[static_cast<std::size_t>(elim_var)] = 2;
  Expr c2 = h.coefficient(lead);
  if (c2.is_zero_constant())
    throw std::invalid_argument("reduction pivot coefficient is absent");
  DiffOp rest = h;  // h - c2 * d_elim^2
  rest.erase_term(lead);
  Expr inv_c2 = quotient(constant(1), c2);

  DiffOp work = op;
  DiffOp quotient_acc(n);
  for (;;) {
    // pick the term with the highest elim-degree >= 2
    const MultiIndex* pick = nullptr;
    int best = 1;
    for (const auto& [a, c] : work.terms()) {
      (void)c;
      if (a[static_cast<std::size_t>(elim_var)] > best) {
        best = a[static_cast<std::size_t>(elim_var)];
        pick = &a;
      }
    }
    if (!pick) break;
    MultiIndex alpha = *pick;
    Expr coeff = work.coefficient(alpha);
    work.erase_term(alpha);
    MultiIndex prefix = alpha;
    prefix[static_cast<std::size_t>(elim_var)] -= 2;
    // C d^alpha = Q o h - Q o rest with Q = C d^prefix o (1/c2)
    DiffOp q = compose(DiffOp::monomial(coeff, prefix), DiffOp::mult(inv_c2, n), ctx);
    quotient_acc = quotient_acc + q;
    work = work - compose(q, rest, ctx);
  }
  return {work, quotient_acc};
}

MultiZeroReport operator_zero_report(const DiffOp& op, const DiffContext& ctx,
                                     const ZeroTestConfig& cfg) {
  std::vector<Expr> coeffs;
  for (const auto& [a, c] : op.terms()) {
    (void)a;
    coeffs.push_back(c);
  }
  if (coeffs.empty()) {
    MultiZeroReport r;
    r.zero = true;
    return r;
  }
  return zero_test_all(coeffs, cfg, ctx.sampler_ptr());
}

bool operator_is_zero(const DiffOp& op, const DiffContext& ctx, const ZeroTestConfig& cfg) {
  return operator_zero_report(op, ctx, cfg).zero;
}

DiffOp prune_vanishing_terms(const DiffOp& op, const DiffContext& ctx,
                             const ZeroTestConfig& cfg) {
  DiffOp out(op.nvars());
  for (const auto& [a, c] : op.terms()) {
    MultiZeroReport rep = zero_test_all({c}, cfg, ctx.sampler_ptr());
    if (rep.zero && !rep.numeric) continue;  // exact-path vanishing only
    out.add_term(a, c);
  }
  return out;
}

}  // namespace sepeq
