#include "sepeq/expr.hpp"

#include <stdexcept>
#include <unordered_map>

namespace sepeq {

namespace {

std::size_t mix(std::size_t a, std::size_t b) {
  return (a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

std::shared_ptr<const ExprNode> make_node(ExprNode&& n) {
  n.hash = (std::size_t)n.kind * 0x100000001b3ull;
  switch (n.kind) {
    case Kind::Constant:
      n.hash = mix(n.hash, gq_hash(n.value));
      n.radical_free = true;
      break;
    case Kind::Variable:
    case Kind::Parameter:
      n.hash = mix(n.hash, std::hash<std::string>{}(n.name));
      n.radical_free = true;
      break;
    default: {
      bool rf = n.kind != Kind::Sqrt && n.kind != Kind::Exp;
      for (const auto& k : n.kids) {
        n.hash = mix(n.hash, k.node().hash);
        rf = rf && k.radical_free();
      }
      n.hash = mix(n.hash, (std::size_t)n.expo);
      n.radical_free = rf;
    }
  }
  return std::make_shared<const ExprNode>(std::move(n));
}

const Expr& zero_expr() {
  static Expr z = constant(0);
  return z;
}
const Expr& one_expr() {
  static Expr o = constant(1);
  return o;
}

}  // namespace

Expr constant(const GQ& v) {
  ExprNode n;
  n.kind = Kind::Constant;
  n.value = v;
  return Expr(make_node(std::move(n)));
}

Expr constant(long v) { return constant(GQ(v)); }
Expr frac(long num, long den) { return constant(GQ(num, den)); }
Expr imag_unit() { return constant(GQ::i()); }

Expr variable(const std::string& name) {
  ExprNode n;
  n.kind = Kind::Variable;
  n.name = name;
  return Expr(make_node(std::move(n)));
}

Expr parameter(const std::string& name) {
  ExprNode n;
  n.kind = Kind::Parameter;
  n.name = name;
  return Expr(make_node(std::move(n)));
}

Expr sum(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  GQ cval(0);
  for (auto& k : kids) {
    if (!k.valid()) throw std::invalid_argument("sum: invalid child");
    if (k.kind() == Kind::Sum) {
      for (const auto& g : k.node().kids) {
        if (g.is_constant())
          cval += g.value();
        else
          flat.push_back(g);
      }
    } else if (k.is_constant()) {
      cval += k.value();
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (!cval.is_zero()) flat.push_back(constant(cval));
  if (flat.empty()) return zero_expr();
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = Kind::Sum;
  n.kids = std::move(flat);
  return Expr(make_node(std::move(n)));
}

Expr product(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  GQ cval(1);
  for (auto& k : kids) {
    if (!k.valid()) throw std::invalid_argument("product: invalid child");
    if (k.kind() == Kind::Product) {
      for (const auto& g : k.node().kids) {
        if (g.is_constant())
          cval *= g.value();
        else
          flat.push_back(g);
      }
    } else if (k.is_constant()) {
      cval *= k.value();
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (cval.is_zero()) return zero_expr();
  if (!cval.is_one()) flat.insert(flat.begin(), constant(cval));
  if (flat.empty()) return one_expr();
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = Kind::Product;
  n.kids = std::move(flat);
  return Expr(make_node(std::move(n)));
}

Expr quotient(const Expr& num, const Expr& den) {
  if (!num.valid() || !den.valid()) throw std::invalid_argument("quotient: invalid child");
  if (den.is_constant()) {
    if (den.value().is_zero()) throw std::domain_error("quotient: constant zero denominator");
    return product({constant(GQ(1) / den.value()), num});
  }
  if (num.is_zero_constant()) return zero_expr();
  ExprNode n;
  n.kind = Kind::Quotient;
  n.kids = {num, den};
  return Expr(make_node(std::move(n)));
}

Expr pow_int(const Expr& base, long k) {
  if (!base.valid()) throw std::invalid_argument("pow_int: invalid base");
  if (k == 0) return one_expr();
  if (k == 1) return base;
  if (base.is_constant()) {
    if (base.value().is_zero() && k < 0) throw std::domain_error("pow_int: 0^negative");
    return constant(base.value().pow(k));
  }
  if (base.kind() == Kind::Power) return pow_int(base.node().kids[0], base.node().expo * k);
  ExprNode n;
  n.kind = Kind::Power;
  n.expo = k;
  n.kids = {base};
  return Expr(make_node(std::move(n)));
}

Expr sqrt_of(const Expr& a) {
  if (!a.valid()) throw std::invalid_argument("sqrt: invalid child");
  if (a.is_zero_constant()) return zero_expr();
  if (a.is_one_constant()) return one_expr();
  ExprNode n;
  n.kind = Kind::Sqrt;
  n.kids = {a};
  return Expr(make_node(std::move(n)));
}

Expr exp_of(const Expr& a) {
  if (!a.valid()) throw std::invalid_argument("exp: invalid child");
  if (a.is_zero_constant()) return one_expr();
  ExprNode n;
  n.kind = Kind::Exp;
  n.kids = {a};
  return Expr(make_node(std::move(n)));
}

Expr Expr::operator-() const { return product({constant(-1), *this}); }
Expr Expr::operator+(const Expr& o) const { return sum({*this, o}); }
Expr Expr::operator-(const Expr& o) const { return sum({*this, product({constant(-1), o})}); }
Expr Expr::operator*(const Expr& o) const { return product({*this, o}); }
Expr Expr::operator/(const Expr& o) const { return quotient(*this, o); }

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  std::unordered_map<const ExprNode*, bool> seen;
  std::vector<const ExprNode*> stack{e.ptr()};
  while (!stack.empty()) {
    const ExprNode* n = stack.back();
    stack.pop_back();
    if (seen.count(n)) continue;
    seen[n] = true;
    if (n->kind == Kind::Variable || n->kind == Kind::Parameter) out.insert(n->name);
    for (const auto& k : n->kids) stack.push_back(k.ptr());
  }
  return out;
}

std::size_t dag_size(const Expr& e) {
  std::unordered_map<const ExprNode*, bool> seen;
  std::vector<const ExprNode*> stack{e.ptr()};
  std::size_t count = 0;
  while (!stack.empty()) {
    const ExprNode* n = stack.back();
    stack.pop_back();
    if (seen.count(n)) continue;
    seen[n] = true;
    ++count;
    for (const auto& k : n->kids) stack.push_back(k.ptr());
  }
  return count;
}

namespace {

void print(const ExprNode* n, std::string& out) {
  switch (n->kind) {
    case Kind::Constant: {
      const GQ& v = n->value;
      bool needs_paren = v.im != 0 || v.re < 0 || v.re.get_den() != 1;
      if (needs_paren) out += "(";
      out += v.str();
      if (needs_paren) out += ")";
      break;
    }
    case Kind::Variable:
    case Kind::Parameter:
      out += n->name;
      break;
    case Kind::Sum: {
      out += "(";
      for (std::size_t i = 0; i < n->kids.size(); ++i) {
        if (i) out += " + ";
        print(n->kids[i].ptr(), out);
      }
      out += ")";
      break;
    }
    case Kind::Product: {
      for (std::size_t i = 0; i < n->kids.size(); ++i) {
        if (i) out += "*";
        print(n->kids[i].ptr(), out);
      }
      break;
    }
    case Kind::Quotient:
      out += "(";
      print(n->kids[0].ptr(), out);
      out += ")/(";
      print(n->kids[1].ptr(), out);
      out += ")";
      break;
    case Kind::Power: {
      out += "(";
      print(n->kids[0].ptr(), out);
      out += ")^" + std::to_string(n->expo);
      break;
    }
    case Kind::Sqrt:
      out += "sqrt(";
      print(n->kids[0].ptr(), out);
      out += ")";
      break;
    case Kind::Exp:
      out += "exp(";
      print(n->kids[0].ptr(), out);
      out += ")";
      break;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  if (!e.valid()) return "<null>";
  print(e.ptr(), out);
  return out;
}

namespace {

struct DiffCtx {
  const std::string& var;
  const std::map<std::string, Expr>* rules;
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>>& memo;
};

Expr diff(const Expr& e, DiffCtx& ctx) {
  auto it = ctx.memo.find(e.ptr());
  if (it != ctx.memo.end()) return it->second.second;
  const ExprNode& n = e.node();
  Expr out;
  switch (n.kind) {
    case Kind::Constant:
      out = constant(0);
      break;
    case Kind::Variable:
    case Kind::Parameter: {
      if (n.name == ctx.var) {
        out = constant(1);
      } else if (ctx.rules) {
        auto r = ctx.rules->find(n.name);
        out = r != ctx.rules->end() ? r->second : constant(0);
      } else {
        out = constant(0);
      }
      break;
    }
    case Kind::Sum: {
      std::vector<Expr> kids;
      kids.reserve(n.kids.size());
      for (const auto& k : n.kids) kids.push_back(diff(k, ctx));
      out = sum(std::move(kids));
      break;
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        Expr di = diff(n.kids[i], ctx);
        if (di.is_zero_constant()) continue;
        std::vector<Expr> factors;
        factors.push_back(di);
        for (std::size_t j = 0; j < n.kids.size(); ++j)
          if (j != i) factors.push_back(n.kids[j]);
        terms.push_back(product(std::move(factors)));
      }
      out = sum(std::move(terms));
      break;
    }
    case Kind::Quotient: {
      const Expr& a = n.kids[0];
      const Expr& b = n.kids[1];
      Expr da = diff(a, ctx), db = diff(b, ctx);
      out = quotient(da * b - a * db, pow_int(b, 2));
      break;
    }
    case Kind::Power: {
      Expr db = diff(n.kids[0], ctx);
      out = product({constant(n.expo), pow_int(n.kids[0], n.expo - 1), db});
      break;
    }
    case Kind::Sqrt: {
      Expr db = diff(n.kids[0], ctx);
      out = quotient(db, product({constant(2), e}));
      break;
    }
    case Kind::Exp: {
      Expr db = diff(n.kids[0], ctx);
      out = product({db, e});
      break;
    }
  }
  ctx.memo.emplace(e.ptr(), std::make_pair(e, out));
  return out;
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var,
                   const std::map<std::string, Expr>* aux_rules, DerivMemo* memo) {
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> local;
  DiffCtx ctx{var, aux_rules, memo ? memo->entries : local};
  return diff(e, ctx);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl) {
  std::unordered_map<const ExprNode*, Expr> memo;
  struct Walker {
    const std::map<std::string, Expr>& repl;
    std::unordered_map<const ExprNode*, Expr>& memo;
    Expr walk(const Expr& x) {
      auto it = memo.find(x.ptr());
      if (it != memo.end()) return it->second;
      const ExprNode& n = x.node();
      Expr out;
      switch (n.kind) {
        case Kind::Constant:
          out = x;
          break;
        case Kind::Variable:
        case Kind::Parameter: {
          auto r = repl.find(n.name);
          out = r != repl.end() ? r->second : x;
          break;
        }
        default: {
          std::vector<Expr> kids;
          kids.reserve(n.kids.size());
          bool changed = false;
          for (const auto& k : n.kids) {
            Expr nk = walk(k);
            changed = changed || nk.ptr() != k.ptr();
            kids.push_back(std::move(nk));
          }
          if (!changed) {
            out = x;
          } else {
            switch (n.kind) {
              case Kind::Sum: out = sum(std::move(kids)); break;
              case Kind::Product: out = product(std::move(kids)); break;
              case Kind::Quotient: out = quotient(kids[0], kids[1]); break;
              case Kind::Power: out = pow_int(kids[0], n.expo); break;
              case Kind::Sqrt: out = sqrt_of(kids[0]); break;
              case Kind::Exp: out = exp_of(kids[0]); break;
              default: throw std::logic_error("substitute: unreachable");
            }
          }
        }
      }
      memo.emplace(x.ptr(), out);
      return out;
    }
  } w{repl, memo};
  return w.walk(e);
}

}  // namespace sepeq
