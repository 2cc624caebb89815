#include "sepeq/charts.hpp"

#include <set>
#include <stdexcept>

#include "sepeq/parser.hpp"

namespace sepeq {

namespace {

Expr parse_in(const Chart& ch, const std::string& src) {
  std::set<std::string> vs(ch.vars.begin(), ch.vars.end());
  return parse_expr(src, vs);
}

// Collected symbol-form derivative rules (wrt vars[k]) of all aux declared so far.
std::map<std::string, Expr> rules_so_far(const Chart& ch, int k) {
  std::map<std::string, Expr> r;
  for (const auto& a : ch.aux) r[a.name] = a.d[static_cast<std::size_t>(k)];
  return r;
}

}  // namespace

// Declare `name` = sqrt(radicand). Derivative rules are radicand'/(2*name),
// expressed through the aux symbol itself so downstream coefficients stay
// radical-free.
void add_sqrt_aux(Chart& ch, const std::string& name, const Expr& radicand) {
  AuxDef a;
  a.name = name;
  a.def = sqrt_of(radicand);
  Expr sym = parameter(name);
  for (int k = 0; k < 2; ++k) {
    auto rules = rules_so_far(ch, k);
    Expr dr = differentiate(radicand, ch.vars[static_cast<std::size_t>(k)], &rules);
    a.d[static_cast<std::size_t>(k)] = quotient(dr, product({constant(2), sym}));
  }
  ch.aux.push_back(std::move(a));
}

// Declare a circular pair cs_name = cos(var), sn_name = sin(var) attached to
// chart variable index k (definitions through exp(i var)).
void add_circle_aux(Chart& ch, int k, const std::string& cs_name, const std::string& sn_name) {
  const std::string& v = ch.vars[static_cast<std::size_t>(k)];
  Expr e = exp_of(product({imag_unit(), variable(v)}));
  Expr einv = exp_of(product({constant(-1), imag_unit(), variable(v)}));
  Expr half = frac(1, 2);
  Expr cs_def = product({half, sum({e, einv})});
  Expr sn_def = product({quotient(half, imag_unit()), sum({e, product({constant(-1), einv})})});
  AuxDef cs{cs_name, cs_def, {constant(0), constant(0)}};
  AuxDef sn{sn_name, sn_def, {constant(0), constant(0)}};
  cs.d[static_cast<std::size_t>(k)] = product({constant(-1), parameter(sn_name)});
  sn.d[static_cast<std::size_t>(k)] = parameter(cs_name);
  ch.aux.push_back(std::move(cs));
  ch.aux.push_back(std::move(sn));
}

namespace {

// Rational point on cos^2 + sin^2 = 1 via the half-angle parametrization.
void draw_circle(Rng& rng, long range, const std::string& cs, const std::string& sn,
                 std::map<std::string, GQ>& out) {
  mpq_class t = rng.rational(range);
  mpq_class den = 1 + t * t;
  out[cs] = GQ(mpq_class((1 - t * t) / den), 0);
  out[sn] = GQ(mpq_class(2 * t / den), 0);
}

// Rational point on m^2 - p^2 = 1 with m, p > 0 (t drawn in (0,1)).
void draw_hyperbola(Rng& rng, long range, const std::string& m, const std::string& p,
                    std::map<std::string, GQ>& out) {
  long den = rng.between(3, range < 3 ? 3 : range);
  long num = rng.between(1, den - 1);
  mpq_class t(num, den);
  t.canonicalize();
  mpq_class d = 1 - t * t;
  out[m] = GQ(mpq_class((1 + t * t) / d), 0);
  out[p] = GQ(mpq_class(2 * t / d), 0);
}

GQ positive_rational(Rng& rng, long range) {
  return GQ(mpq_class(rng.between(1, range), rng.between(1, range)), 0);
}

Sampler make_chart_sampler(const Chart* chp) {
  Sampler s;
  for (const auto& v : chp->vars) s.covered.push_back(v);
  for (const auto& a : chp->aux) s.covered.push_back(a.name);
  for (const auto& p : chp->params) s.covered.push_back(p);
  s.exact_capable = chp->exact;
  if (chp->exact) {
    s.draw_exact = [chp](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
      for (int k = 0; k < 2; ++k) {
        const auto& sec = chp->section[static_cast<std::size_t>(k)];
        if (sec)
          sec(rng, cfg, out);
        else
          out[chp->vars[static_cast<std::size_t>(k)]] = rng.gaussian_nonzero(cfg.range);
      }
      for (const auto& p : chp->params) {
        // Modulus-type chart parameters degenerate at 0 and 1; draw elsewhere.
        mpq_class val;
        do {
          val = rng.rational(cfg.range) + 2;
        } while (val == 0 || val == 1);
        out[p] = GQ(val, 0);
      }
    };
  }
  s.draw_numeric = [chp](Rng& rng, const ZeroTestConfig& cfg,
                         std::map<std::string, MpComplex>& out, mpfr_prec_t prec) {
    // Vars and params are drawn in a small complex box around the base point so
    // principal branches of the aux definitions stay coherent across samples.
    Assignment a;
    a.backend = Assignment::Backend::Numeric;
    a.precision = prec;
    auto local = [&](const std::string& sym) {
      auto it = chp->base.find(sym);
      if (it == chp->base.end())
        throw std::runtime_error("chart " + chp->id + ": no base value for " + sym);
      mpq_class dre = rng.rational(cfg.range) / (8 * cfg.range);
      mpq_class dim = rng.rational(cfg.range) / (8 * cfg.range);
      GQ val = it->second + GQ(dre, dim);
      MpComplex z = MpComplex::from_gq(val, prec);
      out[sym] = z;
      a.numeric[sym] = z;
    };
    for (const auto& v : chp->vars) local(v);
    for (const auto& p : chp->params) local(p);
    for (const auto& ax : chp->aux) {
      MpComplex z = evaluate_numeric(ax.def, a);
      out[ax.name] = z;
      a.numeric[ax.name] = z;
    }
  };
  return s;
}

}  // namespace

DiffContext Chart::context() const {
  DiffContext ctx;
  ctx.vars = vars;
  ctx.aux.resize(2);
  for (int k = 0; k < 2; ++k)
    for (const auto& a : aux)
      ctx.aux[static_cast<std::size_t>(k)][a.name] = a.d[static_cast<std::size_t>(k)];
  ctx.sampler = make_chart_sampler(this);
  return ctx;
}

ChartBasePoint chart_base_point(const Chart& ch, mpfr_prec_t prec) {
  ChartBasePoint bp;
  bp.exact = ch.base;
  Assignment a;
  a.backend = Assignment::Backend::Numeric;
  a.precision = prec;
  for (const auto& kv : ch.base) a.numeric[kv.first] = MpComplex::from_gq(kv.second, prec);
  for (const auto& ax : ch.aux) {
    if (ch.base.count(ax.name)) {
      a.numeric[ax.name] = MpComplex::from_gq(ch.base.at(ax.name), prec);
      continue;
    }
    MpComplex z = evaluate_numeric(ax.def, a);
    bp.numeric[ax.name] = z;
    a.numeric[ax.name] = z;
    bp.all_exact = false;
  }
  return bp;
}

std::vector<DiffOp> chart_pushforward(const Chart& ch) {
  const int m = static_cast<int>(ch.embed.size());
  std::vector<std::array<Expr, 2>> J;
  J.reserve(static_cast<std::size_t>(m));
  for (const auto& e : ch.embed) {
    std::array<Expr, 2> row{constant(0), constant(0)};
    for (int k = 0; k < 2; ++k) {
      auto rules = rules_so_far(ch, k);
      row[static_cast<std::size_t>(k)] =
          differentiate(e, ch.vars[static_cast<std::size_t>(k)], &rules);
    }
    J.push_back(row);
  }
  std::vector<DiffOp> out;
  if (ch.space == Space::Flat) {
    if (m != 2) throw std::runtime_error("flat chart must embed into (x, y)");
    Expr det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    DiffOp dx = DiffOp::monomial(quotient(J[1][1], det), {1, 0}) +
                DiffOp::monomial(quotient(-J[1][0], det), {0, 1});
    DiffOp dy = DiffOp::monomial(quotient(-J[0][1], det), {1, 0}) +
                DiffOp::monomial(quotient(J[0][0], det), {0, 1});
    out.push_back(dx);
    out.push_back(dy);
  } else {
    if (m != 3) throw std::runtime_error("sphere chart must embed into (s1, s2, s3)");
    // Tangential derivatives via the pseudo-inverse of the 3x2 Jacobian:
    // D_i = sum_j (g^{-1} J^T)_{j i} d_{u_j} with g = J^T J.
    Expr g00 = J[0][0] * J[0][0] + J[1][0] * J[1][0] + J[2][0] * J[2][0];
    Expr g01 = J[0][0] * J[0][1] + J[1][0] * J[1][1] + J[2][0] * J[2][1];
    Expr g11 = J[0][1] * J[0][1] + J[1][1] * J[1][1] + J[2][1] * J[2][1];
    Expr det = g00 * g11 - g01 * g01;
    for (int i = 0; i < 3; ++i) {
      // (g^{-1})_{0b} J_{ib}, b = 0,1  -> coefficient of d_u
      Expr cu = quotient(g11 * J[static_cast<std::size_t>(i)][0] -
                             g01 * J[static_cast<std::size_t>(i)][1],
                         det);
      Expr cv = quotient(g00 * J[static_cast<std::size_t>(i)][1] -
                             g01 * J[static_cast<std::size_t>(i)][0],
                         det);
      out.push_back(DiffOp::monomial(cu, {1, 0}) + DiffOp::monomial(cv, {0, 1}));
    }
  }
  return out;
}

ChartMetric chart_metric(const Chart& ch) {
  ChartMetric g{constant(0), constant(0), constant(0)};
  std::vector<Expr> guu, gvv, guv;
  for (const auto& e : ch.embed) {
    auto r0 = rules_so_far(ch, 0);
    auto r1 = rules_so_far(ch, 1);
    Expr eu = differentiate(e, ch.vars[0], &r0);
    Expr ev = differentiate(e, ch.vars[1], &r1);
    guu.push_back(eu * eu);
    gvv.push_back(ev * ev);
    guv.push_back(eu * ev);
  }
  g.guu = sum(std::move(guu));
  g.gvv = sum(std::move(gvv));
  g.guv = sum(std::move(guv));
  return g;
}

std::string check_chart(const Chart& ch, const ZeroTestConfig& cfg) {
  DiffContext ctx = ch.context();
  const Sampler* smp = ctx.sampler_ptr();

  // Aux derivative rules match the declared definitions.
  for (const auto& a : ch.aux) {
    for (int k = 0; k < 2; ++k) {
      std::map<std::string, Expr> rules;
      for (const auto& b : ch.aux) {
        if (b.name == a.name) break;
        rules[b.name] = b.d[static_cast<std::size_t>(k)];
      }
      Expr dd = differentiate(a.def, ch.vars[static_cast<std::size_t>(k)], &rules);
      // The definition's own value must also match the symbol.
      if (!is_zero(dd - a.d[static_cast<std::size_t>(k)], cfg, smp))
        return "aux rule mismatch for d " + a.name + " / d " + ch.vars[static_cast<std::size_t>(k)];
    }
    if (!is_zero(a.def - parameter(a.name), cfg, smp))
      return "aux definition incoherent with sampler for " + a.name;
  }

  ChartMetric g = chart_metric(ch);
  if (!is_zero(g.guv, cfg, smp)) return "metric cross term g_uv does not vanish";

  if (ch.space == Space::Sphere) {
    Expr c = ch.embed[0] * ch.embed[0] + ch.embed[1] * ch.embed[1] + ch.embed[2] * ch.embed[2] -
             constant(1);
    if (!is_zero(c, cfg, smp)) return "embedding leaves the unit sphere";
  }
  return "";
}

// --- registry ---------------------------------------------------------------

namespace {

Chart make_cartesian() {
  Chart ch;
  ch.id = "cartesian";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "u"), parse_in(ch, "v")};
  ch.base = {{"u", GQ(mpq_class(7, 5), 0)}, {"v", GQ(mpq_class(5, 3), 0)}};
  return ch;
}

Chart make_polar() {
  Chart ch;
  ch.id = "polar";
  ch.vars = {"r", "th"};
  ch.exact = true;
  add_circle_aux(ch, 1, "cs", "sn");
  ch.embed = {parse_in(ch, "r*cs"), parse_in(ch, "r*sn")};
  ch.section[0] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    out["r"] = positive_rational(rng, cfg.range);
  };
  ch.section[1] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    out["th"] = GQ(rng.rational(cfg.range), 0);
    draw_circle(rng, cfg.range, "cs", "sn", out);
  };
  ch.base = {{"r", GQ(mpq_class(5, 3), 0)},
             {"th", GQ(mpq_class(1, 7), 0)},
             {"cs", GQ(mpq_class(4, 5), 0)},
             {"sn", GQ(mpq_class(3, 5), 0)}};
  return ch;
}

// x = (u^2 - v^2)/2, y = u v.
Chart make_parabolic() {
  Chart ch;
  ch.id = "parabolic";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "(u^2 - v^2)/2"), parse_in(ch, "u*v")};
  ch.base = {{"u", GQ(mpq_class(3, 2), 0)}, {"v", GQ(mpq_class(5, 7), 0)}};
  return ch;
}

// x = u^2 - v^2, y = 2 u v.
Chart make_parabolic_sum() {
  Chart ch;
  ch.id = "parabolic-sum";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "u^2 - v^2"), parse_in(ch, "2*u*v")};
  ch.base = {{"u", GQ(mpq_class(3, 2), 0)}, {"v", GQ(mpq_class(5, 7), 0)}};
  return ch;
}

// x + i y = 2 i (u + v), x - i y = -2 (u - v)^2.
Chart make_semi_hyperbolic() {
  Chart ch;
  ch.id = "semi-hyperbolic";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "-(u - v)^2 + i*(u + v)"), parse_in(ch, "-i*(u - v)^2 + (u + v)")};
  ch.base = {{"u", GQ(mpq_class(4, 3), 0)}, {"v", GQ(mpq_class(1, 5), 0)}};
  return ch;
}

// x + i y = u v, x - i y = (u^2 + v^2)/(u v).
Chart make_hyperbolic() {
  Chart ch;
  ch.id = "hyperbolic";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "(u^2 + v^2 + u^2*v^2)/(2*u*v)"),
              parse_in(ch, "i*(u^2 + v^2 - u^2*v^2)/(2*u*v)")};
  ch.base = {{"u", GQ(mpq_class(3, 2), 0)}, {"v", GQ(mpq_class(5, 7), 0)}};
  return ch;
}

Chart make_elliptic() {
  Chart ch;
  ch.id = "elliptic";
  ch.vars = {"u", "v"};
  ch.params = {"cpar"};
  ch.exact = true;
  add_sqrt_aux(ch, "mu", parse_in(ch, "u"));
  add_sqrt_aux(ch, "pu", parse_in(ch, "u - 1"));
  add_sqrt_aux(ch, "nv", parse_in(ch, "v"));
  add_sqrt_aux(ch, "qv", parse_in(ch, "v - 1"));
  // x = cpar*sqrt((u-1)(v-1)), y = cpar*sqrt(-u v) = i*cpar*sqrt(u)*sqrt(v)
  ch.embed = {parse_in(ch, "cpar*pu*qv"), parse_in(ch, "i*cpar*mu*nv")};
  ch.section[0] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    draw_hyperbola(rng, cfg.range, "mu", "pu", out);
    out["u"] = out["mu"] * out["mu"];
  };
  ch.section[1] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    draw_hyperbola(rng, cfg.range, "nv", "qv", out);
    out["v"] = out["nv"] * out["nv"];
  };
  ch.base = {{"u", GQ(mpq_class(25, 16), 0)}, {"mu", GQ(mpq_class(5, 4), 0)},
             {"pu", GQ(mpq_class(3, 4), 0)},  {"v", GQ(mpq_class(25, 9), 0)},
             {"nv", GQ(mpq_class(5, 3), 0)},  {"qv", GQ(mpq_class(4, 3), 0)},
             {"cpar", GQ(mpq_class(7, 5), 0)}};
  return ch;
}

// x = sin(th) cos(ph) / (1 + cos(th)), y = sin(th) sin(ph) / (1 + cos(th)).
Chart make_spherical_flat() {
  Chart ch;
  ch.id = "spherical-flat";
  ch.vars = {"th", "ph"};
  ch.exact = true;
  add_circle_aux(ch, 0, "cth", "sth");
  add_circle_aux(ch, 1, "cph", "sph");
  ch.embed = {parse_in(ch, "sth*cph/(1 + cth)"), parse_in(ch, "sth*sph/(1 + cth)")};
  ch.section[0] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    out["th"] = GQ(rng.rational(cfg.range), 0);
    draw_circle(rng, cfg.range, "cth", "sth", out);
  };
  ch.section[1] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    out["ph"] = GQ(rng.rational(cfg.range), 0);
    draw_circle(rng, cfg.range, "cph", "sph", out);
  };
  ch.base = {{"th", GQ(mpq_class(1, 7), 0)}, {"cth", GQ(mpq_class(3, 5), 0)},
             {"sth", GQ(mpq_class(4, 5), 0)}, {"ph", GQ(mpq_class(2, 7), 0)},
             {"cph", GQ(mpq_class(4, 5), 0)}, {"sph", GQ(mpq_class(3, 5), 0)}};
  return ch;
}

// x^2 = (cu-1)(cv-1) / ((1-c)(1+w)^2), y^2 = c(u-1)(v-1) / ((c-1)(1+w)^2),
// w = sqrt(c u v). The second coordinate is a square for the same reason as
// the first: both arise from a stereographic image of the sphere chart below.
Chart make_ellipsoidal_flat() {
  Chart ch;
  ch.id = "ellipsoidal-flat";
  ch.vars = {"u", "v"};
  ch.params = {"cpar"};
  ch.exact = false;
  add_sqrt_aux(ch, "w", parse_in(ch, "cpar*u*v"));
  add_sqrt_aux(ch, "xr",
               parse_in(ch, "(cpar*u - 1)*(cpar*v - 1)/((1 - cpar)*(1 + w)^2)"));
  add_sqrt_aux(ch, "yr",
               parse_in(ch, "cpar*(u - 1)*(v - 1)/((cpar - 1)*(1 + w)^2)"));
  ch.embed = {parse_in(ch, "xr"), parse_in(ch, "yr")};
  ch.base = {{"u", GQ(mpq_class(7, 4), mpq_class(1, 5))},
             {"v", GQ(mpq_class(5, 2), mpq_class(-2, 9))},
             {"cpar", GQ(mpq_class(2, 3), mpq_class(1, 11))}};
  return ch;
}

// --- sphere charts ---

Chart make_spherical() {
  Chart ch;
  ch.id = "spherical";
  ch.space = Space::Sphere;
  ch.vars = {"th", "ph"};
  ch.exact = true;
  add_circle_aux(ch, 0, "cth", "sth");
  add_circle_aux(ch, 1, "cph", "sph");
  ch.embed = {parse_in(ch, "sth*cph"), parse_in(ch, "sth*sph"), parse_in(ch, "cth")};
  ch.section[0] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    out["th"] = GQ(rng.rational(cfg.range), 0);
    draw_circle(rng, cfg.range, "cth", "sth", out);
  };
  ch.section[1] = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& out) {
    out["ph"] = GQ(rng.rational(cfg.range), 0);
    draw_circle(rng, cfg.range, "cph", "sph", out);
  };
  ch.base = {{"th", GQ(mpq_class(1, 7), 0)}, {"cth", GQ(mpq_class(3, 5), 0)},
             {"sth", GQ(mpq_class(4, 5), 0)}, {"ph", GQ(mpq_class(2, 7), 0)},
             {"cph", GQ(mpq_class(4, 5), 0)}, {"sph", GQ(mpq_class(3, 5), 0)}};
  return ch;
}

Chart make_horospherical() {
  Chart ch;
  ch.id = "horospherical";
  ch.space = Space::Sphere;
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "(i/2)*(v + (u^2 - 1)/v)"), parse_in(ch, "(1/2)*(v + (u^2 + 1)/v)"),
              parse_in(ch, "i*u/v")};
  ch.base = {{"u", GQ(mpq_class(2, 5), 0)}, {"v", GQ(mpq_class(4, 3), 0)}};
  return ch;
}

Chart make_ellipsoidal() {
  Chart ch;
  ch.id = "ellipsoidal";
  ch.space = Space::Sphere;
  ch.vars = {"u", "v"};
  ch.params = {"cpar"};
  ch.exact = false;
  add_sqrt_aux(ch, "e1", parse_in(ch, "(cpar*u - 1)*(cpar*v - 1)/(1 - cpar)"));
  add_sqrt_aux(ch, "e2", parse_in(ch, "cpar*(u - 1)*(v - 1)/(cpar - 1)"));
  add_sqrt_aux(ch, "e3", parse_in(ch, "cpar*u*v"));
  ch.embed = {parse_in(ch, "e1"), parse_in(ch, "e2"), parse_in(ch, "e3")};
  ch.base = {{"u", GQ(mpq_class(7, 4), mpq_class(1, 5))},
             {"v", GQ(mpq_class(5, 2), mpq_class(-2, 9))},
             {"cpar", GQ(mpq_class(2, 3), mpq_class(1, 11))}};
  return ch;
}

// Characterizing operator c^2 (J1 + i J2)^2 - J3^2.
Chart make_degenerate_elliptic_1() {
  Chart ch;
  ch.id = "degenerate-elliptic-1";
  ch.space = Space::Sphere;
  ch.vars = {"u", "v"};
  ch.params = {"cpar"};
  ch.exact = true;
  Expr plus = parse_in(ch, "4*cpar*u*v/((u^2 + 1)*(v^2 + 1))");        // s1 + i s2
  Expr minus =
      parse_in(ch, "(u^2*v^2 + 1)*(u^2 + v^2)/(cpar*u*v*(u^2 + 1)*(v^2 + 1))");  // s1 - i s2
  Expr half = frac(1, 2);
  ch.embed = {half * (plus + minus), quotient(half, imag_unit()) * (plus - minus),
              parse_in(ch, "(u^2 - 1)*(v^2 - 1)/((u^2 + 1)*(v^2 + 1))")};
  ch.base = {{"u", GQ(mpq_class(3, 4), 0)},
             {"v", GQ(mpq_class(2, 5), 0)},
             {"cpar", GQ(mpq_class(7, 5), 0)}};
  return ch;
}

// Characterizing operator {J3, J1 - i J2}. The second combination carries an
// extra factor i relative to a common transcription; without it the image
// fails s1^2 + s2^2 + s3^2 = 1 identically, so the constraint fixes the sign.
Chart make_degenerate_elliptic_2() {
  Chart ch;
  ch.id = "degenerate-elliptic-2";
  ch.space = Space::Sphere;
  ch.vars = {"u", "v"};
  ch.exact = true;
  Expr plus = parse_in(ch, "-i*u*v");                                  // s1 + i s2
  Expr minus = parse_in(ch, "(i/4)*(u^2 + v^2)^2/(u^3*v^3)");          // s1 - i s2
  Expr half = frac(1, 2);
  ch.embed = {half * (plus + minus), quotient(half, imag_unit()) * (plus - minus),
              parse_in(ch, "(i/2)*(u^2 - v^2)/(u*v)")};
  ch.base = {{"u", GQ(mpq_class(3, 4), 0)}, {"v", GQ(mpq_class(2, 5), 0)}};
  return ch;
}

// Rational chart of the sphere used for ambient identity checks:
// s = (2x, 1 - x^2 - y^2, 2y) / (x^2 + y^2 + 1).
Chart make_stereographic() {
  Chart ch;
  ch.id = "stereographic";
  ch.space = Space::Sphere;
  ch.vars = {"x", "y"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "2*x/(x^2 + y^2 + 1)"),
              parse_in(ch, "(1 - x^2 - y^2)/(x^2 + y^2 + 1)"),
              parse_in(ch, "2*y/(x^2 + y^2 + 1)")};
  ch.base = {{"x", GQ(mpq_class(3, 7), 0)}, {"y", GQ(mpq_class(2, 9), 0)}};
  return ch;
}

// x = (u^2+v^2)/(4uv) + uv/(u^2 v^2 + 1), y = -i(u^2+v^2)/(4uv) + i uv/(u^2 v^2 + 1).
Chart make_degenerate_elliptic_flat() {
  Chart ch;
  ch.id = "degenerate-elliptic-flat";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "(u^2 + v^2)/(4*u*v) + u*v/(u^2*v^2 + 1)"),
              parse_in(ch, "-i*(u^2 + v^2)/(4*u*v) + i*u*v/(u^2*v^2 + 1)")};
  ch.base = {{"u", GQ(mpq_class(3, 4), 0)}, {"v", GQ(mpq_class(2, 5), 0)}};
  return ch;
}

// x = (1/2)(u^2+v^2-1)/(u - i v), y = -(i/2)(u^2+v^2+1)/(u - i v).
Chart make_horospherical_flat() {
  Chart ch;
  ch.id = "horospherical-flat";
  ch.vars = {"u", "v"};
  ch.exact = true;
  ch.embed = {parse_in(ch, "(1/2)*(u^2 + v^2 - 1)/(u - i*v)"),
              parse_in(ch, "-(i/2)*(u^2 + v^2 + 1)/(u - i*v)")};
  ch.base = {{"u", GQ(mpq_class(2, 3), 0)}, {"v", GQ(mpq_class(1, 2), 0)}};
  return ch;
}

std::map<std::string, Chart> build_registry() {
  std::map<std::string, Chart> r;
  for (Chart ch : {make_cartesian(), make_polar(), make_parabolic(), make_parabolic_sum(),
                   make_semi_hyperbolic(), make_hyperbolic(), make_elliptic(),
                   make_spherical_flat(), make_ellipsoidal_flat(), make_horospherical_flat(),
                   make_degenerate_elliptic_flat(), make_spherical(), make_horospherical(),
                   make_ellipsoidal(), make_degenerate_elliptic_1(),
                   make_degenerate_elliptic_2(), make_stereographic()})
    r.emplace(ch.id, std::move(ch));
  return r;
}

const std::map<std::string, Chart>& registry() {
  static const std::map<std::string, Chart> r = build_registry();
  return r;
}

}  // namespace

const Chart& get_chart(const std::string& id) {
  const auto& r = registry();
  auto it = r.find(id);
  if (it == r.end()) throw std::runtime_error("unknown chart: " + id);
  return it->second;
}

bool has_chart(const std::string& id) { return registry().count(id) != 0; }

std::vector<std::string> chart_ids() {
  std::vector<std::string> out;
  for (const auto& kv : registry()) out.push_back(kv.first);
  return out;
}

}  // namespace sepeq
