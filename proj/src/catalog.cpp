#include "sepeq/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sepeq/linalg.hpp"
#include "sepeq/parser.hpp"
#include "sepeq/rng.hpp"

namespace sepeq {

namespace {

// ---------------------------------------------------------------------------
// Registry loading.

SystemKind kind_from(const std::string& s) {
  if (s == "laplace") return SystemKind::Laplace;
  if (s == "helmholtz-flat") return SystemKind::HelmholtzFlat;
  if (s == "helmholtz-sphere") return SystemKind::HelmholtzSphere;
  throw std::runtime_error("systems data: unknown kind '" + s + "'");
}

SuperintegrableSystem load_system(const nlohmann::json& j) {
  SuperintegrableSystem s;
  s.id = j.at("id").get<std::string>();
  s.kind = kind_from(j.at("kind").get<std::string>());
  s.degenerate = j.value("degenerate", false);
  s.variables = j.at("variables").get<std::vector<std::string>>();
  s.parameters = j.at("parameters").get<std::vector<std::string>>();
  std::set<std::string> vars(s.variables.begin(), s.variables.end());
  s.potential = parse_expr(j.at("potential").get<std::string>(), vars);
  for (const auto& name : free_symbols(s.potential)) {
    if (vars.count(name)) continue;
    if (std::find(s.parameters.begin(), s.parameters.end(), name) == s.parameters.end())
      throw std::runtime_error("systems data: undeclared symbol '" + name +
                               "' in potential of " + s.id);
  }
  for (const auto& jc : j.value("charts", nlohmann::json::array())) {
    ChartUse use;
    use.chart = jc.at("chart").get<std::string>();
    use.cell = jc.value("cell", "");
    if (!has_chart(use.chart))
      throw std::runtime_error("systems data: " + s.id + " lists unknown chart '" +
                               use.chart + "'");
    const bool sphere_chart = get_chart(use.chart).space == Space::Sphere;
    const bool sphere_system = s.kind == SystemKind::HelmholtzSphere;
    if (sphere_chart != sphere_system)
      throw std::runtime_error("systems data: " + s.id + " chart '" + use.chart +
                               "' lives on the wrong space");
    s.charts.push_back(std::move(use));
  }
  for (const auto& jt : j.value("transforms", nlohmann::json::array())) {
    TransformSpec t;
    t.target = jt.at("target").get<std::string>();
    for (const auto& je : jt.at("vector"))
      t.vector.push_back(parse_expr(je.get<std::string>(), {}));
    t.constraint = jt.value("constraint", "");
    s.transforms.push_back(std::move(t));
  }
  auto words = [&](const char* key, std::vector<WordSpec>& out) {
    for (const auto& jg : j.value(key, nlohmann::json::array()))
      out.push_back({jg.at("name").get<std::string>(), jg.at("word").get<std::string>()});
  };
  words("generators", s.generators);
  words("derived", s.derived);
  for (const auto& jr : j.value("relations", nlohmann::json::array()))
    s.relations.push_back({jr.at("name").get<std::string>(),
                           jr.at("lhs").get<std::string>(),
                           jr.at("rhs").get<std::string>()});
  s.notes = j.value("notes", "");
  return s;
}

struct Registry {
  int version = 0;
  std::vector<std::string> ids;
  std::map<std::string, SuperintegrableSystem> by_id;
};

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    std::string path;
    if (const char* env = std::getenv("SEPEQ_DATA_FILE"))
      path = env;
    else
      path = std::string(SEPEQ_DATA_DIR) + "/systems.json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open systems data file: " + path);
    nlohmann::json j;
    in >> j;
    r.version = j.at("version").get<int>();
    for (const auto& js : j.at("systems")) {
      SuperintegrableSystem s = load_system(js);
      r.ids.push_back(s.id);
      r.by_id.emplace(s.id, std::move(s));
    }
    for (const auto& [id, s] : r.by_id)
      for (const TransformSpec& t : s.transforms) {
        if (!r.by_id.count(t.target))
          throw std::runtime_error("systems data: " + id + " transform targets unknown system '" +
                                   t.target + "'");
        if (t.vector.size() != s.parameters.size())
          throw std::runtime_error("systems data: " + id + " transform to " + t.target +
                                   " has a vector of the wrong length");
      }
    return r;
  }();
  return reg;
}

}  // namespace

int catalog_version() { return registry().version; }

std::vector<std::string> system_ids() { return registry().ids; }

bool has_system(const std::string& id) { return registry().by_id.count(id) != 0; }

const SuperintegrableSystem& get_system(const std::string& id) {
  auto it = registry().by_id.find(id);
  if (it == registry().by_id.end())
    throw std::invalid_argument("unknown system id: " + id);
  return it->second;
}

// ---------------------------------------------------------------------------
// Operator-word parser.

namespace {

class WordParser {
 public:
  WordParser(const std::string& src, const WordEnv& env) : src_(src), env_(env) {
    if (!env.ctx) throw std::invalid_argument("operator word needs a context");
    n_ = env.ctx->nvars();
  }

  DiffOp parse() {
    DiffOp r = expr();
    skip();
    if (pos_ != src_.size()) fail("trailing input");
    return r;
  }

  bool used_triple() const { return used_triple_; }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("operator word '" + src_ + "': " + what + " at position " +
                                std::to_string(pos_));
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  static bool scalar_part(const DiffOp& d, Expr* out) {
    if (d.order() > 0) return false;
    MultiIndex zero(static_cast<std::size_t>(d.nvars()), 0);
    *out = d.coefficient(zero);
    return true;
  }

  DiffOp mul(const DiffOp& a, const DiffOp& b) {
    Expr sa;
    if (scalar_part(a, &sa)) return b.left_mul(sa);
    return compose(a, b, *env_.ctx);
  }

  DiffOp expr() {
    DiffOp acc = eat('-') ? -term() : term();
    for (;;) {
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  DiffOp term() {
    DiffOp acc = postfix();
    for (;;) {
      if (eat('*')) {
        acc = mul(acc, postfix());
      } else if (eat('/')) {
        DiffOp d = postfix();
        Expr sa, sb;
        if (!scalar_part(acc, &sa) || !scalar_part(d, &sb))
          fail("'/' needs order-zero operands");
        acc = DiffOp::mult(quotient(sa, sb), n_);
      } else {
        return acc;
      }
    }
  }

  DiffOp postfix() {
    DiffOp base = primary();
    while (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) fail("'^' needs an integer exponent");
      long e = std::stol(src_.substr(start, pos_ - start));
      if (e < 1) fail("exponent must be positive");
      DiffOp acc = base;
      for (long k = 1; k < e; ++k) acc = mul(acc, base);
      base = acc;
    }
    return base;
  }

  DiffOp primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      DiffOp r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (c == '[') {
      ++pos_;
      DiffOp a = expr();
      if (!eat(',')) fail("expected ',' in commutator");
      DiffOp b = expr();
      if (!eat(']')) fail("expected ']'");
      return commutator(a, b, *env_.ctx);
    }
    if (c == '{') {
      ++pos_;
      DiffOp a = expr();
      if (!eat(',')) fail("expected ',' in bracket");
      DiffOp b = expr();
      if (eat(',')) {
        DiffOp d = expr();
        if (!eat('}')) fail("expected '}'");
        used_triple_ = true;
        // symmetrized_triple averages the six orderings; rescale to convention
        mpq_class s = mpq_class(6) * env_.triple_scale;
        return symmetrized_triple(a, b, d, *env_.ctx).scaled(GQ(s));
      }
      if (!eat('}')) fail("expected '}'");
      return anticommutator(a, b, *env_.ctx);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      mpq_class q(src_.substr(start, pos_ - start));
      return DiffOp::mult(constant(q), n_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      std::string name = src_.substr(start, pos_ - start);
      auto ai = env_.atoms.find(name);
      if (ai != env_.atoms.end()) return ai->second;
      auto si = env_.scalars.find(name);
      if (si != env_.scalars.end()) return DiffOp::mult(si->second, n_);
      return DiffOp::mult(parameter(name), n_);
    }
    fail("unexpected character");
  }

  const std::string& src_;
  const WordEnv& env_;
  int n_ = 0;
  std::size_t pos_ = 0;
  bool used_triple_ = false;
};

}  // namespace

DiffOp parse_operator(const std::string& src, const WordEnv& env) {
  return WordParser(src, env).parse();
}

// ---------------------------------------------------------------------------
// Realization.

WordEnv SystemRealization::word_env() const {
  WordEnv env;
  env.ctx = &ctx;
  env.atoms = atoms;
  for (const auto& [name, op] : generators) env.atoms[name] = op;
  env.scalars = scalars;
  env.triple_scale = triple_scale;
  return env;
}

SystemRealization realize(const SuperintegrableSystem& sys, mpq_class triple_scale) {
  SystemRealization r;
  r.triple_scale = triple_scale;
  std::map<std::string, Expr> ambient;
  if (sys.kind == SystemKind::HelmholtzSphere) {
    const Chart& ch = get_chart("stereographic");
    r.ctx = ch.context();
    std::vector<DiffOp> d = chart_pushforward(ch);
    const std::vector<Expr>& s = ch.embed;
    for (std::size_t k = 0; k < sys.variables.size(); ++k) {
      ambient[sys.variables[k]] = s[k];
      r.scalars[sys.variables[k]] = s[k];
    }
    r.atoms["J1"] = d[2].left_mul(s[1]) - d[1].left_mul(s[2]);
    r.atoms["J2"] = d[0].left_mul(s[2]) - d[2].left_mul(s[0]);
    r.atoms["J3"] = d[1].left_mul(s[0]) - d[0].left_mul(s[1]);
    DiffOp lap(2);
    for (const char* jn : {"J1", "J2", "J3"})
      lap = lap + compose(r.atoms[jn], r.atoms[jn], r.ctx);
    // The rotation squares leave cross and first-order terms whose
    // coefficients cancel as functions; prune them so reductions modulo the
    // Hamiltonian stay small.
    r.hamiltonian =
        prune_vanishing_terms(lap + DiffOp::mult(substitute(sys.potential, ambient), 2), r.ctx);
  } else {
    r.ctx = DiffContext::plain({"x", "y"});
    r.atoms["Dx"] = DiffOp::partial(0, 2);
    r.atoms["Dy"] = DiffOp::partial(1, 2);
    r.hamiltonian = DiffOp::monomial(constant(1), {2, 0}) +
                    DiffOp::monomial(constant(1), {0, 2}) + DiffOp::mult(sys.potential, 2);
  }
  for (const std::string& v : r.ctx.vars) r.scalars[v] = variable(v);

  for (const auto& group : {&sys.generators, &sys.derived})
    for (const WordSpec& w : *group)
      r.generators[w.name] = prune_vanishing_terms(parse_operator(w.word, r.word_env()), r.ctx);
  return r;
}

// ---------------------------------------------------------------------------
// Symmetry checks.

bool is_symmetry(const DiffOp& cand, const DiffOp& h, const DiffContext& ctx,
                 const ZeroTestConfig& cfg) {
  return operator_is_zero(commutator(cand, h, ctx), ctx, cfg);
}

ConformalCheckResult is_conformal_symmetry(const DiffOp& cand, const DiffOp& h,
                                           const DiffContext& ctx, const ZeroTestConfig& cfg) {
  ConformalCheckResult res;
  res.multiplier = DiffOp::zero(h.nvars());
  res.remainder = DiffOp::zero(h.nvars());
  DiffOp c = commutator(cand, h, ctx);
  if (operator_is_zero(c, ctx, cfg)) {
    res.strict = true;
    res.conformal = true;
    return res;
  }
  ReduceResult rr = reduce_mod(prune_vanishing_terms(c, ctx, cfg), h, 0, ctx);
  res.conformal = operator_is_zero(rr.remainder, ctx, cfg);
  res.multiplier = rr.quotient;
  res.remainder = rr.remainder;
  return res;
}

// ---------------------------------------------------------------------------
// Structure relations.

namespace {

StructureReport verify_with_convention(const SuperintegrableSystem& sys,
                                       const std::vector<RelationSpec>& relations,
                                       mpq_class triple_scale, bool* used_triple,
                                       const ZeroTestConfig& cfg) {
  StructureReport rep;
  rep.system = sys.id;
  rep.all_pass = true;
  SystemRealization r = realize(sys, triple_scale);
  WordEnv env = r.word_env();
  env.triple_scale = triple_scale;
  *used_triple = false;
  for (const RelationSpec& rel : relations) {
    WordParser lp(rel.lhs, env), rp(rel.rhs, env);
    DiffOp lhs = lp.parse();
    DiffOp rhs = rp.parse();
    *used_triple = *used_triple || lp.used_triple() || rp.used_triple();
    DiffOp diff = lhs - rhs;
    RelationReport rr;
    rr.name = rel.name;
    MultiZeroReport z = operator_zero_report(diff, r.ctx, cfg);
    if (z.zero) {
      rr.verdict = "exact";
      rr.numeric = z.numeric;
    } else {
      ReduceResult red =
          reduce_mod(prune_vanishing_terms(diff, r.ctx, cfg), r.hamiltonian, 0, r.ctx);
      MultiZeroReport z2 = operator_zero_report(red.remainder, r.ctx, cfg);
      rr.verdict = z2.zero ? "on-shell" : "fail";
      rr.numeric = z2.numeric;
      if (!z2.zero) rep.all_pass = false;
    }
    rep.relations.push_back(std::move(rr));
  }
  return rep;
}

}  // namespace

StructureReport verify_relations(const SuperintegrableSystem& sys,
                                 const std::vector<RelationSpec>& relations,
                                 const ZeroTestConfig& cfg) {
  bool used_triple = false;
  StructureReport rep = verify_with_convention(sys, relations, 1, &used_triple, cfg);
  rep.triple_convention = used_triple ? "sum" : "";
  if (rep.all_pass || !used_triple) return rep;
  StructureReport avg =
      verify_with_convention(sys, relations, mpq_class(1, 6), &used_triple, cfg);
  if (avg.all_pass) {
    avg.triple_convention = "average";
    return avg;
  }
  return rep;
}

StructureReport verify_structure_relations(const std::string& id, const ZeroTestConfig& cfg) {
  const SuperintegrableSystem& sys = get_system(id);
  if (sys.relations.empty()) {
    StructureReport rep;
    rep.system = id;
    rep.all_pass = true;
    return rep;
  }
  return verify_relations(sys, sys.relations, cfg);
}

// ---------------------------------------------------------------------------
// Bounded symmetry discovery.

namespace {

struct AnsatzSpace {
  std::vector<DiffOp> ops;                 // funcs x indices, grouped by index
  std::vector<Expr> funcs;                 // coefficient-function basis
  std::vector<MultiIndex> indices;         // derivative part per basis group
  std::vector<std::string> symbols;        // symbols to draw when sampling
};

// Pole-tolerant evaluation of a batch of expressions at a fresh random point.
std::map<std::string, GQ> draw_point(Rng& rng, const std::vector<std::string>& symbols,
                                     long range) {
  std::map<std::string, GQ> pt;
  for (const auto& s : symbols) pt[s] = rng.gaussian(range);
  return pt;
}

std::vector<Expr> ansatz_functions(const DiffContext& ctx, const DiscoveryConfig& dcfg,
                                   const ZeroTestConfig& cfg) {
  const Expr xv = variable(ctx.vars[0]);
  const Expr yv = variable(ctx.vars[1]);

  std::vector<Expr> polys;
  for (int px = 0; px <= dcfg.degree; ++px)
    for (int py = 0; py + px <= dcfg.degree; ++py) {
      Expr m = constant(1);
      if (px > 0) m = m * pow_int(xv, px);
      if (py > 0) m = m * pow_int(yv, py);
      polys.push_back(m);
    }

  // Denominator exponent combinations (product over the registered factors).
  std::vector<std::vector<int>> dens{{}};
  for (const auto& [factor, maxp] : dcfg.denominators) {
    (void)factor;
    std::vector<std::vector<int>> next;
    for (const auto& d : dens)
      for (int e = 0; e <= maxp; ++e) {
        auto dd = d;
        dd.push_back(e);
        next.push_back(std::move(dd));
      }
    dens = std::move(next);
  }

  std::vector<Expr> pmonos{constant(1)};
  {
    std::vector<std::vector<int>> stack{{}};
    for (const auto& p : dcfg.parameters) {
      (void)p;
      std::vector<std::vector<int>> next;
      for (const auto& d : stack)
        for (int e = 0; e + std::accumulate(d.begin(), d.end(), 0) <= dcfg.param_degree; ++e) {
          auto dd = d;
          dd.push_back(e);
          next.push_back(std::move(dd));
        }
      stack = std::move(next);
    }
    pmonos.clear();
    for (const auto& exps : stack) {
      Expr m = constant(1);
      for (std::size_t k = 0; k < exps.size(); ++k)
        if (exps[k] > 0) m = m * pow_int(parameter(dcfg.parameters[k]), exps[k]);
      pmonos.push_back(m);
    }
  }

  std::vector<Expr> funcs;
  for (const Expr& poly : polys)
    for (const auto& exps : dens) {
      Expr denom = constant(1);
      bool any = false;
      for (std::size_t k = 0; k < exps.size(); ++k)
        if (exps[k] > 0) {
          std::set<std::string> fv{ctx.vars.begin(), ctx.vars.end()};
          Expr f = parse_expr(dcfg.denominators[k].first, fv);
          denom = denom * pow_int(f, exps[k]);
          any = true;
        }
      Expr base = any ? quotient(poly, denom) : poly;
      for (const Expr& pm : pmonos) funcs.push_back(base * pm);
    }

  // Drop linearly dependent coefficient functions (duplicates like y * 1/y).
  std::vector<std::string> syms;
  {
    std::set<std::string> s;
    for (const Expr& f : funcs)
      for (const auto& name : free_symbols(f)) s.insert(name);
    syms.assign(s.begin(), s.end());
  }
  const int npts = static_cast<int>(funcs.size()) + 8;
  Rng rng(cfg.seed ^ 0x517cc1b727220a95ull);
  MatGQ m;  // rows: sample points, cols: functions
  int made = 0, guard = 0;
  while (made < npts && guard < npts * 10) {
    ++guard;
    auto pt = draw_point(rng, syms, dcfg.sample_range);
    try {
      ExactEval ev(pt);
      std::vector<GQ> row;
      row.reserve(funcs.size());
      for (const Expr& f : funcs) row.push_back(ev.eval(f));
      m.push_back(std::move(row));
      ++made;
    } catch (const UnluckyPoint&) {
      continue;
    }
  }
  std::vector<int> pivots = exact_rref(m);
  std::vector<Expr> kept;
  for (int c : pivots) kept.push_back(funcs[static_cast<std::size_t>(c)]);
  return kept;
}

AnsatzSpace build_ansatz(const DiffContext& ctx, const DiscoveryConfig& dcfg,
                         const ZeroTestConfig& cfg) {
  AnsatzSpace a;
  a.funcs = ansatz_functions(ctx, dcfg, cfg);
  for (int ox = 0; ox <= dcfg.order; ++ox)
    for (int oy = 0; oy + ox <= dcfg.order; ++oy) {
      MultiIndex alpha{ox, oy};
      a.indices.push_back(alpha);
      for (const Expr& f : a.funcs) a.ops.push_back(DiffOp::monomial(f, alpha));
    }
  std::set<std::string> s;
  for (const DiffOp& b : a.ops)
    for (const auto& [alpha, c] : b.terms()) {
      (void)alpha;
      for (const auto& name : free_symbols(c)) s.insert(name);
    }
  a.symbols.assign(s.begin(), s.end());
  return a;
}

// Rows kept in fully reduced echelon form: every row is monic at its pivot
// column and zero at every other row's pivot, so insertion order is
// irrelevant and each insert costs O(rank * cols).
struct EchelonAccumulator {
  MatGQ rows;
  std::vector<int> pivots;

  // Reduces `row` against the basis; keeps it when it raises the rank.
  bool insert(std::vector<GQ> row) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::size_t pc = static_cast<std::size_t>(pivots[k]);
      if (row[pc].is_zero()) continue;
      GQ f = row[pc];
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] - f * rows[k][j];
    }
    int p = -1;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) {
        p = static_cast<int>(j);
        break;
      }
    if (p < 0) return false;
    GQ lead = row[static_cast<std::size_t>(p)];
    for (auto& v : row) v = v / lead;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      GQ f = rows[k][static_cast<std::size_t>(p)];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < row.size(); ++j)
        rows[k][j] = rows[k][j] - f * row[j];
    }
    rows.push_back(std::move(row));
    pivots.push_back(p);
    return true;
  }
};

// Row-space basis of the coefficient system "sum_k c_k ops[k] == 0", sampled
// at random points (one row per point and derivative index) until the rank
// stops growing for several consecutive points.
MatGQ sample_rows(const std::vector<DiffOp>& ops, const std::vector<std::string>& extra_symbols,
                  const DiscoveryConfig& dcfg, const ZeroTestConfig& cfg,
                  unsigned long long salt) {
  std::set<MultiIndex> support;
  std::set<std::string> symset(extra_symbols.begin(), extra_symbols.end());
  for (const DiffOp& o : ops)
    for (const auto& [alpha, c] : o.terms()) {
      support.insert(alpha);
      for (const auto& n : free_symbols(c)) symset.insert(n);
    }
  std::vector<std::string> syms(symset.begin(), symset.end());
  const std::size_t cols = ops.size();

  EchelonAccumulator acc;
  Rng rng(cfg.seed ^ salt);
  int stall = 0, guard = 0;
  const int max_points = 40 + static_cast<int>(cols);
  while (stall < 3 && guard < max_points) {
    ++guard;
    auto pt = draw_point(rng, syms, dcfg.sample_range);
    try {
      ExactEval ev(pt);
      std::vector<std::vector<GQ>> batch;
      for (const MultiIndex& alpha : support) {
        std::vector<GQ> row;
        row.reserve(cols);
        for (const DiffOp& o : ops) {
          Expr c = o.coefficient(alpha);
          row.push_back(c.is_zero_constant() ? GQ(0) : ev.eval(c));
        }
        batch.push_back(std::move(row));
      }
      bool grew = false;
      for (auto& r : batch) grew = acc.insert(std::move(r)) || grew;
      stall = grew ? 0 : stall + 1;
      if (acc.rows.size() == cols) break;  // only the zero solution remains
    } catch (const UnluckyPoint&) {
      continue;
    }
  }
  return acc.rows;
}

DiffOp combine(const AnsatzSpace& a, const std::vector<GQ>& c, int nvars) {
  DiffOp op(nvars);
  for (std::size_t k = 0; k < a.ops.size(); ++k)
    if (!c[k].is_zero()) op = op + a.ops[k].scaled(c[k]);
  return op;
}

// Exact fit of `target` in the ansatz, verified; nullopt when it does not
// fit. The ansatz is block-diagonal in the derivative index, so each
// coefficient is matched against the function basis separately.
std::optional<std::vector<GQ>> vectorize(const AnsatzSpace& a, const DiffOp& target,
                                         const DiffContext& ctx, const DiscoveryConfig& dcfg,
                                         const ZeroTestConfig& cfg) {
  const std::size_t nf = a.funcs.size();
  std::vector<GQ> result(a.ops.size(), GQ(0));
  std::set<std::string> symset(a.symbols.begin(), a.symbols.end());
  for (const auto& [alpha, c] : target.terms()) {
    (void)alpha;
    for (const auto& n : free_symbols(c)) symset.insert(n);
  }
  std::vector<std::string> syms(symset.begin(), symset.end());
  Rng rng(cfg.seed ^ 0xa0761d6478bd642full);
  for (const auto& [alpha, coeff] : target.terms()) {
    auto pos = std::find(a.indices.begin(), a.indices.end(), alpha);
    if (pos == a.indices.end()) return std::nullopt;
    std::size_t block = static_cast<std::size_t>(pos - a.indices.begin()) * nf;
    MatGQ m;
    std::vector<GQ> rhs;
    int made = 0, guard = 0;
    const int want = static_cast<int>(nf) + dcfg.oversample;
    while (made < want && guard < want * 20) {
      ++guard;
      auto pt = draw_point(rng, syms, dcfg.sample_range);
      try {
        ExactEval ev(pt);
        std::vector<GQ> row;
        row.reserve(nf);
        for (const Expr& f : a.funcs) row.push_back(ev.eval(f));
        GQ rv = ev.eval(coeff);
        m.push_back(std::move(row));
        rhs.push_back(rv);
        ++made;
      } catch (const UnluckyPoint&) {
        continue;
      }
    }
    auto sol = exact_solve(m, rhs);
    if (!sol) return std::nullopt;
    for (std::size_t j = 0; j < nf; ++j) result[block + j] = (*sol)[j];
  }
  DiffOp fit = combine(a, result, target.nvars());
  if (!operator_is_zero(fit - target, ctx, cfg)) return std::nullopt;
  return result;
}

struct DiscoveryCore {
  AnsatzSpace ansatz;
  std::vector<std::vector<GQ>> nullvecs;  // verified solution vectors
  bool verified = true;
};

DiscoveryCore discovery_core(const DiffOp& h, const DiffContext& ctx,
                             const DiscoveryConfig& dcfg, const ZeroTestConfig& cfg) {
  DiscoveryCore core;
  core.ansatz = build_ansatz(ctx, dcfg, cfg);
  std::vector<DiffOp> comms;
  comms.reserve(core.ansatz.ops.size());
  for (const DiffOp& b : core.ansatz.ops) comms.push_back(commutator(h, b, ctx));
  MatGQ rows = sample_rows(comms, core.ansatz.symbols, dcfg, cfg, 0xe7037ed1a0b428dbull);
  std::vector<std::vector<GQ>> null = exact_nullspace(rows, static_cast<int>(comms.size()));
  for (auto& v : null) {
    DiffOp op = combine(core.ansatz, v, h.nvars());
    if (is_symmetry(op, h, ctx, cfg))
      core.nullvecs.push_back(std::move(v));
    else
      core.verified = false;  // sampled system admitted a spurious solution
  }
  return core;
}

// Reduce `vec` by the row space of `rows` (rows in echelon form with `pivots`).
void reduce_by(std::vector<GQ>& vec, const MatGQ& rows, const std::vector<int>& pivots) {
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    int c = pivots[r];
    if (vec[static_cast<std::size_t>(c)].is_zero()) continue;
    GQ factor = vec[static_cast<std::size_t>(c)] / rows[r][static_cast<std::size_t>(c)];
    for (std::size_t k = 0; k < vec.size(); ++k)
      vec[k] = vec[k] - factor * rows[r][k];
  }
}

}  // namespace

DiscoveryResult discover_symmetries(const DiffOp& h, const DiffContext& ctx,
                                    const DiscoveryConfig& dcfg, const ZeroTestConfig& cfg) {
  DiscoveryCore core = discovery_core(h, ctx, dcfg, cfg);
  DiscoveryResult res;
  res.verified = core.verified;

  // Excluded subspace: parameter-monomial multiples of the identity and of h,
  // as far as they are representable inside the ansatz.
  std::vector<Expr> pmonos{constant(1)};
  for (const auto& p : dcfg.parameters) {
    std::vector<Expr> next = pmonos;
    for (const Expr& m : pmonos)
      for (int e = 1; e <= dcfg.param_degree; ++e) next.push_back(m * pow_int(parameter(p), e));
    pmonos = std::move(next);
  }
  MatGQ excluded;
  for (const Expr& pm : pmonos) {
    for (const DiffOp* seed : {static_cast<const DiffOp*>(nullptr), &h}) {
      DiffOp target = seed ? seed->left_mul(pm) : DiffOp::mult(pm, h.nvars());
      auto v = vectorize(core.ansatz, target, ctx, dcfg, cfg);
      if (v) excluded.push_back(std::move(*v));
    }
  }
  std::vector<int> epivots = exact_rref(excluded);

  MatGQ kept;
  for (auto v : core.nullvecs) {
    reduce_by(v, excluded, epivots);
    bool nonzero = false;
    for (const GQ& g : v)
      if (!g.is_zero()) {
        nonzero = true;
        break;
      }
    if (nonzero) kept.push_back(std::move(v));
  }
  exact_rref(kept);
  for (const auto& v : kept) {
    bool nonzero = false;
    for (const GQ& g : v)
      if (!g.is_zero()) {
        nonzero = true;
        break;
      }
    if (!nonzero) continue;
    DiffOp op = combine(core.ansatz, v, h.nvars());
    if (is_symmetry(op, h, ctx, cfg))
      res.basis.push_back(std::move(op));
    else
      res.verified = false;
  }
  return res;
}

bool discovery_recovers(const DiffOp& h, const DiffOp& expected, const DiffContext& ctx,
                        const DiscoveryConfig& dcfg, const ZeroTestConfig& cfg) {
  DiscoveryCore core = discovery_core(h, ctx, dcfg, cfg);
  auto v = vectorize(core.ansatz, expected, ctx, dcfg, cfg);
  if (!v) return false;
  MatGQ m = core.nullvecs;
  std::size_t rank_without = exact_rref(m).size();
  m = core.nullvecs;
  m.push_back(*v);
  std::size_t rank_with = exact_rref(m).size();
  return rank_with == rank_without;
}

}  // namespace sepeq
