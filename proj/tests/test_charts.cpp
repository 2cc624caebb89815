#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sepeq/charts.hpp"
#include "sepeq/diffop.hpp"
#include "sepeq/parser.hpp"

using namespace sepeq;

namespace {

const ZeroTestConfig kCfg{};

Expr pe(const std::string& src, const Chart& ch) {
  std::set<std::string> vs(ch.vars.begin(), ch.vars.end());
  return parse_expr(src, vs);
}

bool chart_zero(const Expr& e, const DiffContext& ctx) {
  return is_zero(e, kCfg, ctx.sampler_ptr());
}

}  // namespace

TEST_CASE("registry enumerates the expected charts") {
  std::vector<std::string> want = {"cartesian",
                                   "polar",
                                   "parabolic",
                                   "parabolic-sum",
                                   "semi-hyperbolic",
                                   "hyperbolic",
                                   "elliptic",
                                   "spherical-flat",
                                   "ellipsoidal-flat",
                                   "horospherical-flat",
                                   "degenerate-elliptic-flat",
                                   "spherical",
                                   "horospherical",
                                   "ellipsoidal",
                                   "degenerate-elliptic-1",
                                   "degenerate-elliptic-2",
                                   "stereographic"};
  auto ids = chart_ids();
  for (const auto& w : want) {
    INFO("chart ", w);
    CHECK(has_chart(w));
  }
  CHECK(ids.size() == want.size());
  CHECK_THROWS(get_chart("no-such-chart"));
}

TEST_CASE("every registered chart passes its structural checks") {
  for (const auto& id : chart_ids()) {
    INFO("chart ", id);
    const Chart& ch = get_chart(id);
    std::string err = check_chart(ch, kCfg);
    INFO(err);
    CHECK(err.empty());
  }
}

TEST_CASE("flat pushforwards invert the Jacobian") {
  for (const auto& id : chart_ids()) {
    const Chart& ch = get_chart(id);
    if (ch.space != Space::Flat) continue;
    INFO("chart ", id);
    DiffContext ctx = ch.context();
    auto D = chart_pushforward(ch);
    REQUIRE(D.size() == 2);
    std::vector<Expr> tests;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Expr got = apply(D[static_cast<std::size_t>(a)], ch.embed[static_cast<std::size_t>(b)], ctx);
        tests.push_back(a == b ? got - constant(1) : got);
      }
    auto rep = zero_test_all(tests, kCfg, ctx.sampler_ptr());
    INFO("witness ", rep.witness, " index ", rep.witness_index);
    CHECK(rep.zero);
  }
}

TEST_CASE("sphere pushforwards project onto the tangent plane") {
  for (const auto& id : chart_ids()) {
    const Chart& ch = get_chart(id);
    if (ch.space != Space::Sphere) continue;
    INFO("chart ", id);
    DiffContext ctx = ch.context();
    auto D = chart_pushforward(ch);
    REQUIRE(D.size() == 3);
    std::vector<Expr> tests;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Expr got = apply(D[static_cast<std::size_t>(a)], ch.embed[static_cast<std::size_t>(b)], ctx);
        Expr want = -(ch.embed[static_cast<std::size_t>(a)] * ch.embed[static_cast<std::size_t>(b)]);
        if (a == b) want = want + constant(1);
        tests.push_back(got - want);
      }
    auto rep = zero_test_all(tests, kCfg, ctx.sampler_ptr());
    INFO("witness ", rep.witness, " index ", rep.witness_index);
    CHECK(rep.zero);

    // The radial combination s . D vanishes identically.
    DiffOp radial = DiffOp::zero(2);
    for (int a = 0; a < 3; ++a)
      radial = radial + D[static_cast<std::size_t>(a)].left_mul(ch.embed[static_cast<std::size_t>(a)]);
    CHECK(operator_is_zero(radial, ctx, kCfg));
  }
}

TEST_CASE("stereographic pushforward matches closed forms") {
  const Chart& ch = get_chart("stereographic");
  DiffContext ctx = ch.context();
  auto D = chart_pushforward(ch);
  Expr x = variable("x"), y = variable("y");
  DiffOp o1 = DiffOp::monomial((constant(1) + y * y - x * x) * frac(1, 2), {1, 0}) +
              DiffOp::monomial(-(x * y), {0, 1});
  DiffOp o2 = DiffOp::monomial(-x, {1, 0}) + DiffOp::monomial(-y, {0, 1});
  DiffOp o3 = DiffOp::monomial(-(x * y), {1, 0}) +
              DiffOp::monomial((constant(1) + x * x - y * y) * frac(1, 2), {0, 1});
  CHECK(operator_is_zero(D[0] - o1, ctx, kCfg));
  CHECK(operator_is_zero(D[1] - o2, ctx, kCfg));
  CHECK(operator_is_zero(D[2] - o3, ctx, kCfg));
}

TEST_CASE("rotation generators close under the pushforward") {
  for (const std::string id : {"stereographic", "spherical"}) {
    INFO("chart ", id);
    const Chart& ch = get_chart(id);
    DiffContext ctx = ch.context();
    auto D = chart_pushforward(ch);
    auto J = [&](int a, int b) {
      return D[static_cast<std::size_t>(b)].left_mul(ch.embed[static_cast<std::size_t>(a)]) -
             D[static_cast<std::size_t>(a)].left_mul(ch.embed[static_cast<std::size_t>(b)]);
    };
    DiffOp L1 = J(1, 2), L2 = J(2, 0), L3 = J(0, 1);
    CHECK(operator_is_zero(commutator(L1, L2, ctx) + L3, ctx, kCfg));
    CHECK(operator_is_zero(commutator(L2, L3, ctx) + L1, ctx, kCfg));
    CHECK(operator_is_zero(commutator(L3, L1, ctx) + L2, ctx, kCfg));
  }
}

TEST_CASE("polar Laplacian reduces to the radial-angular form") {
  const Chart& ch = get_chart("polar");
  DiffContext ctx = ch.context();
  auto D = chart_pushforward(ch);
  DiffOp lap = compose(D[0], D[0], ctx) + compose(D[1], D[1], ctx);
  Expr r = variable("r");
  DiffOp want = DiffOp::monomial(constant(1), {2, 0}) +
                DiffOp::monomial(quotient(constant(1), r), {1, 0}) +
                DiffOp::monomial(quotient(constant(1), r * r), {0, 2});
  CHECK(operator_is_zero(lap - want, ctx, kCfg));
}

TEST_CASE("spherical Laplacian reduces to the polar form on the sphere") {
  const Chart& ch = get_chart("spherical");
  DiffContext ctx = ch.context();
  auto D = chart_pushforward(ch);
  DiffOp lap = DiffOp::zero(2);
  for (const auto& d : D) lap = lap + compose(d, d, ctx);
  Expr cth = parameter("cth"), sth = parameter("sth");
  DiffOp want = DiffOp::monomial(constant(1), {2, 0}) +
                DiffOp::monomial(quotient(cth, sth), {1, 0}) +
                DiffOp::monomial(quotient(constant(1), sth * sth), {0, 2});
  CHECK(operator_is_zero(lap - want, ctx, kCfg));
}

TEST_CASE("metric coefficients match closed forms") {
  auto check_metric = [&](const std::string& id, const std::string& guu,
                          const std::string& gvv) {
    INFO("chart ", id);
    const Chart& ch = get_chart(id);
    DiffContext ctx = ch.context();
    ChartMetric g = chart_metric(ch);
    CHECK(chart_zero(g.guu - pe(guu, ch), ctx));
    CHECK(chart_zero(g.gvv - pe(gvv, ch), ctx));
  };
  check_metric("polar", "1", "r^2");
  check_metric("parabolic", "u^2 + v^2", "u^2 + v^2");
  check_metric("parabolic-sum", "4*(u^2 + v^2)", "4*(u^2 + v^2)");
  check_metric("semi-hyperbolic", "-8*i*(u - v)", "8*i*(u - v)");
  check_metric("hyperbolic", "(u^2 - v^2)/u^2", "(v^2 - u^2)/v^2");
  check_metric("elliptic", "cpar^2*(v - u)/(4*u*(u - 1))", "cpar^2*(u - v)/(4*v*(v - 1))");
  check_metric("horospherical-flat", "1/(u - i*v)^2", "1/(u - i*v)^2");
  check_metric("spherical-flat", "1/(1 + cth)^2", "sth^2/(1 + cth)^2");
  check_metric("degenerate-elliptic-flat",
               "(u^2 - v^2)*(1 - u^2*v^2)/(u^2*(u^2*v^2 + 1)^2)",
               "(v^2 - u^2)*(1 - u^2*v^2)/(v^2*(u^2*v^2 + 1)^2)");
}

TEST_CASE("alternate linear reading of the ellipsoidal image is rejected") {
  // Taking the second coordinate linearly (not as a square) breaks
  // orthogonality of the induced metric, so the squared reading is the only
  // consistent one.
  Chart bad;
  bad.id = "ellipsoidal-flat-linear";
  bad.vars = {"u", "v"};
  bad.params = {"cpar"};
  bad.exact = false;
  add_sqrt_aux(bad, "w", pe("cpar*u*v", bad));
  add_sqrt_aux(bad, "xr", pe("(cpar*u - 1)*(cpar*v - 1)/((1 - cpar)*(1 + w)^2)", bad));
  bad.embed = {parameter("xr"), pe("cpar*(u - 1)*(v - 1)/((cpar - 1)*(1 + w)^2)", bad)};
  bad.base = {{"u", GQ(mpq_class(7, 4), mpq_class(1, 5))},
              {"v", GQ(mpq_class(5, 2), mpq_class(-2, 9))},
              {"cpar", GQ(mpq_class(2, 3), mpq_class(1, 11))}};
  DiffContext ctx = bad.context();
  ChartMetric g = chart_metric(bad);
  CHECK_FALSE(chart_zero(g.guv, ctx));
  // The accepted squared reading is orthogonal (also covered by the
  // registry-wide structural check).
  const Chart& good = get_chart("ellipsoidal-flat");
  DiffContext gctx = good.context();
  CHECK(chart_zero(chart_metric(good).guv, gctx));
}

TEST_CASE("base points resolve exactly where sections exist") {
  CHECK(chart_base_point(get_chart("polar"), 128).all_exact);
  CHECK(chart_base_point(get_chart("elliptic"), 128).all_exact);
  CHECK(chart_base_point(get_chart("degenerate-elliptic-2"), 128).all_exact);

  ChartBasePoint bp = chart_base_point(get_chart("ellipsoidal"), 192);
  CHECK_FALSE(bp.all_exact);
  REQUIRE(bp.numeric.count("e1"));
  REQUIRE(bp.numeric.count("e2"));
  REQUIRE(bp.numeric.count("e3"));
  MpComplex s = bp.numeric.at("e1") * bp.numeric.at("e1") +
                bp.numeric.at("e2") * bp.numeric.at("e2") +
                bp.numeric.at("e3") * bp.numeric.at("e3");
  MpReal err = (s - MpComplex::from_double(1.0, 0.0, 192)).abs();
  CHECK(err < MpReal::from_double(1e-40, 192));

  ChartBasePoint bf = chart_base_point(get_chart("ellipsoidal-flat"), 192);
  CHECK_FALSE(bf.all_exact);
  CHECK(bf.numeric.count("xr"));
  CHECK(bf.numeric.count("yr"));
}

TEST_CASE("chart contexts feed the operator algebra") {
  // Transforming the flat Laplacian into parabolic coordinates produces the
  // conformally rescaled form (u^2 + v^2)^{-1} (d_u^2 + d_v^2).
  const Chart& ch = get_chart("parabolic");
  DiffContext ctx = ch.context();
  DiffContext amb = DiffContext::plain({"x", "y"});
  DiffOp lap_amb = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});
  std::map<std::string, Expr> subst = {{"x", ch.embed[0]}, {"y", ch.embed[1]}};
  DiffOp pushed = change_variables(lap_amb, subst, chart_pushforward(ch), ctx);
  Expr lam = pe("u^2 + v^2", ch);
  DiffOp want = DiffOp::monomial(quotient(constant(1), lam), {2, 0}) +
                DiffOp::monomial(quotient(constant(1), lam), {0, 2});
  CHECK(operator_is_zero(pushed - want, ctx, kCfg));
}
