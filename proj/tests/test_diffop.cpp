#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepeq/diffop.hpp"
#include "sepeq/eval.hpp"
#include "sepeq/expr.hpp"

using namespace sepeq;

namespace {

// Convenience: check that an operator's coefficients all vanish identically.
bool op_zero(const DiffOp& op, const DiffContext& ctx) {
  ZeroTestConfig cfg;
  return operator_is_zero(op, ctx, cfg);
}

Sampler circle_sampler() {
  Sampler circle;
  circle.covered = {"c", "s"};
  circle.exact_capable = true;
  circle.draw_exact = [](Rng& rng, const ZeroTestConfig& cfg, std::map<std::string, GQ>& m) {
    GQ t = GQ(rng.rational(cfg.range));
    GQ den = GQ(1) + t * t;
    m["c"] = (GQ(1) - t * t) / den;
    m["s"] = (GQ(2) * t) / den;
  };
  return circle;
}

}  // namespace

TEST_CASE("construction and basic accessors") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x");
  DiffOp id = DiffOp::identity(2);
  CHECK(id.order() == 0);
  CHECK(id.coefficient({0, 0}).is_one_constant());
  DiffOp dx = DiffOp::partial(0, 2);
  CHECK(dx.order() == 1);
  DiffOp m = DiffOp::mult(x, 2);
  CHECK(m.order() == 0);
  CHECK(DiffOp::zero(2).syntactically_zero());
  CHECK(DiffOp::zero(2).order() == -1);
  // adding opposite constant coefficients folds the term away
  DiffOp t = DiffOp::monomial(constant(3), {1, 1});
  t.add_term({1, 1}, constant(-3));
  CHECK(t.syntactically_zero());
  CHECK(!dx.str(ctx).empty());
}

TEST_CASE("compose: first-order times first-order") {
  // (x^2 d_x) o (x y d_y) = x^2 y d_y + x^3 y d_x d_y
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  DiffOp a = DiffOp::monomial(pow_int(x, 2), {1, 0});
  DiffOp b = DiffOp::monomial(product({x, y}), {0, 1});
  DiffOp ab = compose(a, b, ctx);
  DiffOp expect = DiffOp::monomial(product({pow_int(x, 2), y}), {0, 1}) +
                  DiffOp::monomial(product({pow_int(x, 3), y}), {1, 1});
  CHECK(op_zero(ab - expect, ctx));
  CHECK(ab.order() == 2);
}

TEST_CASE("compose: rotation generator squared") {
  // J = s1 d2 - s2 d1 on ambient 3-space;
  // J o J = s1^2 d2^2 + s2^2 d1^2 - 2 s1 s2 d1 d2 - s1 d1 - s2 d2
  DiffContext ctx = DiffContext::plain({"s1", "s2", "s3"});
  Expr s1 = variable("s1"), s2 = variable("s2");
  DiffOp j = DiffOp::monomial(s1, {0, 1, 0}) + DiffOp::monomial(-s2, {1, 0, 0});
  DiffOp jj = compose(j, j, ctx);
  DiffOp expect = DiffOp::monomial(pow_int(s1, 2), {0, 2, 0}) +
                  DiffOp::monomial(pow_int(s2, 2), {2, 0, 0}) +
                  DiffOp::monomial(product({constant(-2), s1, s2}), {1, 1, 0}) +
                  DiffOp::monomial(-s1, {1, 0, 0}) + DiffOp::monomial(-s2, {0, 1, 0});
  CHECK(op_zero(jj - expect, ctx));
}

TEST_CASE("commutator of rotation generators") {
  // [J1, J2] = -J3 for J1 = x2 d3 - x3 d2, J2 = x3 d1 - x1 d3, J3 = x1 d2 - x2 d1
  DiffContext ctx = DiffContext::plain({"x1", "x2", "x3"});
  Expr x1 = variable("x1"), x2 = variable("x2"), x3 = variable("x3");
  DiffOp j1 = DiffOp::monomial(x2, {0, 0, 1}) + DiffOp::monomial(-x3, {0, 1, 0});
  DiffOp j2 = DiffOp::monomial(x3, {1, 0, 0}) + DiffOp::monomial(-x1, {0, 0, 1});
  DiffOp j3 = DiffOp::monomial(x1, {0, 1, 0}) + DiffOp::monomial(-x2, {1, 0, 0});
  CHECK(op_zero(commutator(j1, j2, ctx) + j3, ctx));
  CHECK(op_zero(commutator(j2, j3, ctx) + j1, ctx));
  CHECK(op_zero(commutator(j3, j1, ctx) + j2, ctx));
}

TEST_CASE("compose is associative") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  DiffOp a = DiffOp::monomial(product({pow_int(x, 2), y}), {1, 0}) + DiffOp::mult(y, 2);
  DiffOp b = DiffOp::monomial(constant(1), {1, 1}) + DiffOp::monomial(x, {0, 1});
  DiffOp c = DiffOp::monomial(y, {0, 2}) + DiffOp::mult(x, 2);
  DiffOp l = compose(compose(a, b, ctx), c, ctx);
  DiffOp r = compose(a, compose(b, c, ctx), ctx);
  CHECK(op_zero(l - r, ctx));
  CHECK(l.order() <= a.order() + b.order() + c.order());
}

TEST_CASE("jacobi identity") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  DiffOp a = DiffOp::monomial(product({pow_int(x, 2), y}), {1, 0});
  DiffOp b = DiffOp::monomial(constant(1), {1, 1});
  DiffOp c = DiffOp::monomial(y, {0, 2}) + DiffOp::mult(x, 2);
  DiffOp j = commutator(a, commutator(b, c, ctx), ctx) +
             commutator(b, commutator(c, a, ctx), ctx) +
             commutator(c, commutator(a, b, ctx), ctx);
  CHECK(op_zero(j, ctx));
}

TEST_CASE("anticommutator and symmetrized triple") {
  DiffContext ctx = DiffContext::plain({"x"});
  Expr x = variable("x");
  DiffOp d = DiffOp::partial(0, 1);
  DiffOp m = DiffOp::mult(x, 1);
  // {d, x} = 2 x d + 1
  DiffOp acm = anticommutator(d, m, ctx);
  DiffOp expect = DiffOp::monomial(product({constant(2), x}), {1}) + DiffOp::identity(1);
  CHECK(op_zero(acm - expect, ctx));
  // fully symmetrized (d, x, d) = x d^2 + d
  DiffOp st = symmetrized_triple(d, m, d, ctx);
  DiffOp expect3 = DiffOp::monomial(x, {2}) + DiffOp::partial(0, 1);
  CHECK(op_zero(st - expect3, ctx));
  // symmetric under permutations of the arguments
  CHECK(op_zero(st - symmetrized_triple(m, d, d, ctx), ctx));
}

TEST_CASE("apply to expressions") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  DiffOp lap = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});
  Expr f = product({pow_int(x, 3), y});
  Expr lf = apply(lap, f, ctx);
  // d_xx (x^3 y) = 6 x y, d_yy (x^3 y) = 0
  Expr expect = product({constant(6), x, y});
  ZeroTestConfig cfg;
  CHECK(is_zero(lf - expect, cfg));
}

TEST_CASE("left_mul, scaled, substitute_coeffs") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  DiffOp a = DiffOp::monomial(x, {1, 0}) + DiffOp::identity(2);
  DiffOp fa = a.left_mul(y);
  DiffOp expect = DiffOp::monomial(product({y, x}), {1, 0}) + DiffOp::mult(y, 2);
  CHECK(op_zero(fa - expect, ctx));
  DiffOp sa = a.scaled(GQ(-3));
  CHECK(op_zero(sa + a + a + a, ctx));
  DiffOp sub = a.substitute_coeffs({{"x", pow_int(y, 2)}});
  DiffOp expect2 = DiffOp::monomial(pow_int(y, 2), {1, 0}) + DiffOp::identity(2);
  CHECK(op_zero(sub - expect2, ctx));
}

TEST_CASE("gauge conjugation by a quadratic phase") {
  // exp(-x^2/2) (d_xx + d_yy) exp(x^2/2) = d_xx + 2x d_x + (x^2 + 1) + d_yy
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x");
  DiffOp lap = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});
  DiffOp g = gauge_conjugate(lap, {x, constant(0)}, ctx);
  DiffOp expect = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2}) +
                  DiffOp::monomial(product({constant(2), x}), {1, 0}) +
                  DiffOp::mult(sum({pow_int(x, 2), constant(1)}), 2);
  CHECK(op_zero(g - expect, ctx));
  // conjugating back recovers the original operator
  DiffOp back = gauge_conjugate(g, {-x, constant(0)}, ctx);
  CHECK(op_zero(back - lap, ctx));
}

TEST_CASE("gauge conjugation preserves composition") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  std::vector<Expr> grad{product({x, pow_int(y, 2)}),
                         product({pow_int(x, 2), y})};  // gradient of x^2 y^2 / 2
  DiffOp a = DiffOp::monomial(y, {1, 0}) + DiffOp::monomial(constant(1), {0, 2});
  DiffOp b = DiffOp::monomial(x, {0, 1});
  DiffOp lhs = gauge_conjugate(compose(a, b, ctx), grad, ctx);
  DiffOp rhs = compose(gauge_conjugate(a, grad, ctx), gauge_conjugate(b, grad, ctx), ctx);
  CHECK(op_zero(lhs - rhs, ctx));
}

TEST_CASE("change of variables: plane laplacian in polar form") {
  // with x = r c, y = r s on the circle c^2 + s^2 = 1:
  // d_x = c d_r - (s/r) d_t, d_y = s d_r + (c/r) d_t,
  // d_xx + d_yy = d_rr + (1/r) d_r + (1/r^2) d_tt
  DiffContext polar;
  polar.vars = {"r", "t"};
  Expr r = variable("r"), c = parameter("c"), s = parameter("s");
  polar.aux.resize(2);
  polar.aux[1] = {{"c", -s}, {"s", c}};
  polar.sampler = circle_sampler();

  DiffOp dx =DiffOp::monomial(c, {1, 0}) + DiffOp::monomial(quotient(-s, r), {0, 1});
  DiffOp dy = DiffOp::monomial(s, {1, 0}) + DiffOp::monomial(quotient(c, r), {0, 1});
  std::map<std::string, Expr> subst{{"x", product({r, c})}, {"y", product({r, s})}};

  DiffOp lap = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});
  DiffOp moved = change_variables(lap, subst, {dx, dy}, polar);
  DiffOp expect = DiffOp::monomial(constant(1), {2, 0}) +
                  DiffOp::monomial(quotient(constant(1), r), {1, 0}) +
                  DiffOp::monomial(quotient(constant(1), pow_int(r, 2)), {0, 2});
  CHECK(op_zero(moved - expect, polar));

  // change of variables respects composition
  DiffOp a = DiffOp::monomial(variable("x"), {1, 0});
  DiffOp b = DiffOp::monomial(variable("y"), {0, 1}) + DiffOp::identity(2);
  DiffContext cart = DiffContext::plain({"x", "y"});
  DiffOp lhs = change_variables(compose(a, b, cart), subst, {dx, dy}, polar);
  DiffOp rhs = compose(change_variables(a, subst, {dx, dy}, polar),
                       change_variables(b, subst, {dx, dy}, polar), polar);
  CHECK(op_zero(lhs - rhs, polar));
}

TEST_CASE("change of variables: square-root substitution") {
  // xi = sqrt(u) turns d_xi^2 into 4 u d_uu + 2 d_u
  DiffContext uctx = DiffContext::plain({"u"});
  Expr u = variable("u");
  DiffOp dxx = DiffOp::monomial(constant(1), {2});
  DiffOp push = DiffOp::monomial(product({constant(2), sqrt_of(u)}), {1});
  DiffOp moved = change_variables(dxx, {{"xi", sqrt_of(u)}}, {push}, uctx);
  DiffOp expect = DiffOp::monomial(product({constant(4), u}), {2}) +
                  DiffOp::monomial(constant(2), {1});
  CHECK(op_zero(moved - expect, uctx));
}

TEST_CASE("dilation commutator and division") {
  // D = x d_x + y d_y satisfies [D, lap] = -2 lap
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  DiffOp dil = DiffOp::monomial(x, {1, 0}) + DiffOp::monomial(y, {0, 1});
  DiffOp lap = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});
  DiffOp com = commutator(dil, lap, ctx);
  CHECK(op_zero(com + lap + lap, ctx));
  // dividing the commutator by lap in the x-direction: quotient -2, remainder 0
  ReduceResult rr = reduce_mod(com, lap, 0, ctx);
  CHECK(op_zero(rr.remainder, ctx));
  CHECK(op_zero(rr.quotient + DiffOp::identity(2) + DiffOp::identity(2), ctx));
}

TEST_CASE("division by a second-order operator") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  Expr x = variable("x"), y = variable("y");
  // h with nonconstant leading coefficient in the eliminated direction
  DiffOp h = DiffOp::monomial(x, {2, 0}) + DiffOp::monomial(y, {0, 1}) + DiffOp::identity(2);
  DiffOp op = DiffOp::monomial(product({x, y}), {3, 0}) +
              DiffOp::monomial(pow_int(y, 2), {2, 1}) + DiffOp::monomial(x, {1, 0}) +
              DiffOp::monomial(constant(5), {0, 2});
  ReduceResult rr = reduce_mod(op, h, 0, ctx);
  // remainder has x-order at most one
  for (const auto& [alpha, coeff] : rr.remainder.terms()) {
    (void)coeff;
    CHECK(alpha[0] <= 1);
  }
  DiffOp recomposed = rr.remainder + compose(rr.quotient, h, ctx);
  CHECK(op_zero(op - recomposed, ctx));
}

TEST_CASE("zero report carries a witness for nonzero operators") {
  DiffContext ctx = DiffContext::plain({"x"});
  DiffOp nz = DiffOp::monomial(variable("x"), {1});
  ZeroTestConfig cfg;
  MultiZeroReport rep = operator_zero_report(nz, ctx, cfg);
  CHECK_FALSE(rep.zero);
  CHECK(!rep.witness.empty());
}
