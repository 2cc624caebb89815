#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "sepeq/catalog.hpp"
#include "sepeq/parser.hpp"

using namespace sepeq;

namespace {

const ZeroTestConfig kCfg{};

Expr pot(const char* src, std::initializer_list<const char*> vars) {
  std::set<std::string> vs;
  for (const char* v : vars) vs.insert(v);
  return parse_expr(src, vs);
}

bool same_function(const Expr& a, const Expr& b) { return is_zero(a - b, kCfg); }

}  // namespace

TEST_CASE("registry loads the full catalog") {
  CHECK(catalog_version() == 1);
  std::vector<std::string> ids = system_ids();
  CHECK(ids.size() == 41);
  CHECK(has_system("[1111]"));
  CHECK(has_system("E3'"));
  CHECK(has_system("S9"));
  CHECK(!has_system("S10"));
  CHECK_THROWS_AS((void)get_system("S10"), std::invalid_argument);
  int laplace = 0, flat = 0, sphere = 0, degenerate = 0;
  for (const auto& id : ids) {
    const auto& s = get_system(id);
    if (s.kind == SystemKind::Laplace) ++laplace;
    if (s.kind == SystemKind::HelmholtzFlat) ++flat;
    if (s.kind == SystemKind::HelmholtzSphere) ++sphere;
    if (s.degenerate) ++degenerate;
  }
  CHECK(laplace == 12);
  CHECK(flat == 20);
  CHECK(sphere == 9);
  CHECK(degenerate == 17);
}

TEST_CASE("registry potentials match their printed forms") {
  CHECK(same_function(get_system("S9").potential,
                      pot("(a1*s2^2*s3^2 + a2*s1^2*s3^2 + a3*s1^2*s2^2)/(s1*s2*s3)^2",
                          {"s1", "s2", "s3"})));
  CHECK(same_function(get_system("[31]").potential,
                      pot("a1 - a2*x + 4*a3*x^2 + a3*y^2 + a4/y^2", {"x", "y"})));
  CHECK(same_function(get_system("E2").potential,
                      pot("4*alpha*x^2 + alpha*y^2 + beta*x + gamma/y^2", {"x", "y"})));
  CHECK(same_function(get_system("E1").potential,
                      pot("alpha*x^2 + alpha*y^2 + beta/x^2 + gamma/y^2", {"x", "y"})));
}

TEST_CASE("catalog entries are internally consistent") {
  for (const auto& id : system_ids()) {
    CAPTURE(id);
    const SuperintegrableSystem& s = get_system(id);
    CHECK(s.id == id);
    if (s.kind == SystemKind::HelmholtzSphere) {
      REQUIRE(s.variables == std::vector<std::string>{"s1", "s2", "s3"});
    } else {
      REQUIRE(s.variables == std::vector<std::string>{"x", "y"});
    }
    CHECK(!s.charts.empty());
    for (const ChartUse& cu : s.charts) {
      CAPTURE(cu.chart);
      REQUIRE(has_chart(cu.chart));
      const Chart& ch = get_chart(cu.chart);
      CHECK((ch.space == Space::Sphere) == (s.kind == SystemKind::HelmholtzSphere));
      CHECK(!cu.cell.empty());
    }
    std::set<std::string> declared(s.variables.begin(), s.variables.end());
    declared.insert(s.parameters.begin(), s.parameters.end());
    for (const std::string& name : free_symbols(s.potential)) CHECK(declared.count(name) == 1);
    if (s.kind != SystemKind::Laplace) CHECK(s.transforms.empty());
    for (const TransformSpec& t : s.transforms) {
      CAPTURE(t.target);
      REQUIRE(has_system(t.target));
      CHECK(get_system(t.target).kind != SystemKind::Laplace);
      CHECK(t.vector.size() == s.parameters.size());
    }
    if (s.kind == SystemKind::Laplace) CHECK(s.parameters.size() == (s.degenerate ? 2u : 4u));
    if (s.kind != SystemKind::Laplace)
      CHECK(s.parameters.size() == (s.degenerate ? (id == "E12" ? 2u : 1u) : 3u));
  }
}

TEST_CASE("degenerate families restrict the four-parameter potentials") {
  auto zero = constant(0);
  auto restricted = [&](const char* base, std::map<std::string, Expr> repl) {
    return substitute(get_system(base).potential, repl);
  };
  CHECK(same_function(restricted("[1111]", {{"a1", zero}, {"a2", zero}}),
                      get_system("A").potential));
  CHECK(same_function(restricted("[211]", {{"a2", zero}, {"a3", zero}}),
                      get_system("B").potential));
  CHECK(same_function(
      restricted("[211]",
                 {{"a1", zero}, {"a2", zero}, {"a3", parameter("a4")}, {"a4", parameter("a3")}}),
      get_system("C").potential));
  CHECK(same_function(restricted("[31]", {{"a3", zero}, {"a4", zero}}),
                      get_system("D").potential));
  CHECK(same_function(restricted("[22]", {{"a2", zero}, {"a4", zero}}),
                      get_system("E").potential));
  CHECK(same_function(restricted("[4]", {{"a3", zero}, {"a4", zero}}),
                      get_system("F").potential));
}

TEST_CASE("sphere realization carries a rotation algebra") {
  SystemRealization r = realize(get_system("S9"));
  REQUIRE(r.atoms.count("J1"));
  REQUIRE(r.atoms.count("J2"));
  REQUIRE(r.atoms.count("J3"));
  const DiffOp &J1 = r.atoms["J1"], &J2 = r.atoms["J2"], &J3 = r.atoms["J3"];
  CHECK(operator_is_zero(commutator(J1, J2, r.ctx) + J3, r.ctx, kCfg));
  CHECK(operator_is_zero(commutator(J2, J3, r.ctx) + J1, r.ctx, kCfg));
  CHECK(operator_is_zero(commutator(J3, J1, r.ctx) + J2, r.ctx, kCfg));
  REQUIRE(r.generators.count("H"));
  REQUIRE(r.generators.count("L1"));
  REQUIRE(r.generators.count("L2"));
  REQUIRE(r.generators.count("L3"));
  REQUIRE(r.generators.count("R"));
  CHECK(operator_is_zero(r.generators["H"] - r.hamiltonian, r.ctx, kCfg));
}

TEST_CASE("registered generators commute with their Hamiltonians") {
  for (const char* id : {"S9", "S3"}) {
    CAPTURE(id);
    const SuperintegrableSystem& sys = get_system(id);
    SystemRealization r = realize(sys);
    for (const WordSpec& g : sys.generators) {
      CAPTURE(g.name);
      CHECK(is_symmetry(r.generators[g.name], r.hamiltonian, r.ctx, kCfg));
    }
  }
}

TEST_CASE("structure relations hold for the three-parameter sphere system") {
  // The sixth-order coefficient towers of the squared-commutator relation make
  // exact evaluation cost grow with the bit length of the sample coordinates,
  // so this check samples from a smaller box. Total degrees stay near 10^2
  // while the box holds ~1.5e3 distinct rationals per symbol, keeping the
  // per-trial vanishing bound near 1e-1 and the 12-trial bound near 1e-12.
  ZeroTestConfig cfg;
  cfg.range = 50;
  StructureReport rep = verify_structure_relations("S9", cfg);
  REQUIRE(rep.relations.size() == 4);
  for (const RelationReport& rr : rep.relations) {
    CAPTURE(rr.name);
    CHECK(rr.verdict == "exact");
    MESSAGE(rr.name << ": " << rr.verdict << (rr.numeric ? std::string(" (numeric)") : std::string()));
  }
  CHECK(rep.all_pass);
  MESSAGE("triple convention: " << rep.triple_convention);
  CHECK(rep.triple_convention == "sum");
}

TEST_CASE("structure relations hold for the one-parameter sphere system") {
  StructureReport rep = verify_structure_relations("S3", kCfg);
  REQUIRE(rep.relations.size() == 4);
  for (const RelationReport& rr : rep.relations) {
    CAPTURE(rr.name);
    CHECK(rr.verdict != "fail");
    MESSAGE(rr.name << ": " << rr.verdict << (rr.numeric ? std::string(" (numeric)") : std::string()));
  }
  CHECK(rep.all_pass);
  CHECK(rep.triple_convention == "");
}

TEST_CASE("a perturbed structure relation is rejected") {
  const SuperintegrableSystem& sys = get_system("S9");
  RelationSpec bad = sys.relations[0];
  std::size_t at = bad.rhs.find("4*{L1,L3}");
  REQUIRE(at != std::string::npos);
  bad.rhs.replace(at, 1, "5");
  StructureReport rep = verify_relations(sys, {bad}, kCfg);
  REQUIRE(rep.relations.size() == 1);
  CHECK(rep.relations[0].verdict == "fail");
  CHECK(!rep.all_pass);
}

TEST_CASE("symmetry tests separate symmetries from non-symmetries") {
  SystemRealization r = realize(get_system("E1"));
  DiffOp cand = DiffOp::monomial(constant(1), {2, 0}) +
                DiffOp::mult(pot("alpha*x^2 + beta/x^2", {"x", "y"}), 2);
  CHECK(is_symmetry(cand, r.hamiltonian, r.ctx, kCfg));
  CHECK(!is_symmetry(DiffOp::partial(0, 2), r.hamiltonian, r.ctx, kCfg));
}

TEST_CASE("conformal symmetries are recognized with their multipliers") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  DiffOp lap = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});

  DiffOp dilation =
      DiffOp::monomial(variable("x"), {1, 0}) + DiffOp::monomial(variable("y"), {0, 1});
  ConformalCheckResult res = is_conformal_symmetry(dilation, lap, ctx, kCfg);
  CHECK(res.conformal);
  CHECK(!res.strict);
  CHECK(operator_is_zero(res.multiplier - DiffOp::mult(constant(-2), 2), ctx, kCfg));

  ConformalCheckResult strict = is_conformal_symmetry(DiffOp::partial(0, 2), lap, ctx, kCfg);
  CHECK(strict.conformal);
  CHECK(strict.strict);

  DiffOp warped = DiffOp::monomial(pow_int(variable("x"), 2), {0, 1});
  CHECK(!is_conformal_symmetry(warped, lap, ctx, kCfg).conformal);
}

TEST_CASE("discovery finds the first-order symmetries of the free operator") {
  DiffContext ctx = DiffContext::plain({"x", "y"});
  DiffOp lap = DiffOp::monomial(constant(1), {2, 0}) + DiffOp::monomial(constant(1), {0, 2});
  DiscoveryConfig dcfg;
  dcfg.order = 1;
  dcfg.degree = 1;
  DiscoveryResult res = discover_symmetries(lap, ctx, dcfg, kCfg);
  CHECK(res.verified);
  CHECK(res.basis.size() == 3);
  DiffOp rot = DiffOp::monomial(variable("x"), {0, 1}) - DiffOp::monomial(variable("y"), {1, 0});
  CHECK(discovery_recovers(lap, rot, ctx, dcfg, kCfg));
  CHECK(discovery_recovers(lap, DiffOp::partial(0, 2), ctx, dcfg, kCfg));
  DiffOp boost = DiffOp::monomial(variable("x"), {1, 0});  // x d/dx alone: not a symmetry
  CHECK(!discovery_recovers(lap, boost, ctx, dcfg, kCfg));
}

TEST_CASE("discovery recovers the quadratic symmetry of the shifted oscillator") {
  SystemRealization r = realize(get_system("E2"));
  DiscoveryConfig dcfg;
  dcfg.order = 2;
  dcfg.degree = 2;
  dcfg.parameters = {"alpha", "beta", "gamma"};
  dcfg.param_degree = 1;
  DiffOp expected =
      DiffOp::monomial(constant(1), {2, 0}) + DiffOp::mult(pot("4*alpha*x^2 + beta*x", {"x", "y"}), 2);
  CHECK(discovery_recovers(r.hamiltonian, expected, r.ctx, dcfg, kCfg));
  DiscoveryResult res = discover_symmetries(r.hamiltonian, r.ctx, dcfg, kCfg);
  CHECK(res.verified);
  REQUIRE(res.basis.size() == 1);
  CHECK(is_symmetry(res.basis[0], r.hamiltonian, r.ctx, kCfg));
}

TEST_CASE("discovery finds the rotation generator of the one-parameter sphere system") {
  SystemRealization r = realize(get_system("S3"));
  DiscoveryConfig dcfg;
  dcfg.order = 1;
  dcfg.degree = 2;
  DiscoveryResult res = discover_symmetries(r.hamiltonian, r.ctx, dcfg, kCfg);
  CHECK(res.verified);
  REQUIRE(res.basis.size() == 1);
  CHECK(discovery_recovers(r.hamiltonian, r.atoms["J3"], r.ctx, dcfg, kCfg));
}
