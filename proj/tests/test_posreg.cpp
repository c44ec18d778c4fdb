#include "test_main.hpp"

#include "wsm/error.hpp"
#include "wsm/posreg.hpp"

using namespace wsm;

namespace {

Rational Q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}
PositiveRegularPoly poly(const std::string& s, std::size_t m = 0) {
  return PositiveRegularPoly::from_polynomial(GradedPolynomial::parse(s, m));
}
MultiIndex mi(std::vector<std::uint32_t> v) { return MultiIndex(std::move(v)); }

}  // namespace

TEST_CASE("input validation") {
  CHECK_THROWS_AS(poly("z1^2 + z2", 2), Error);    // z1 missing linearly
  CHECK_THROWS_AS(poly("z1 - 1/2*z1^2", 1), Error);  // negative higher coefficient
  CHECK_THROWS_AS(poly("1 + z1", 1), Error);
  CHECK_THROWS_AS(poly("i*z1", 1), Error);
  const auto p = poly("1/2*z1 + 1/2*z2 + 1/4*z1*z2");
  CHECK(p.arity() == 2);
  CHECK(p.extra() == 1);
  CHECK(p.coefficient(2) == Q(1, 4));
}

TEST_CASE("delta coefficients") {
  for (const auto& [b, d] : delta_coefficients(poly("z"), 12)) CHECK(d == 1);
  const auto two = delta_coefficients(poly("z1 + z2"), 6);
  CHECK(two.at(mi({1, 1})) == 2);
  CHECK(two.at(mi({2, 3})) == 10);
  const auto q = delta_coefficients(poly("1/2*z + 1/2*z^2"), 3);
  CHECK(q.at(mi({0})) == 1);
  CHECK(q.at(mi({1})) == Q(1, 2));
  CHECK(q.at(mi({2})) == Q(3, 4));
  CHECK(q.at(mi({3})) == Q(5, 8));
  try {
    (void)delta_coefficients(poly("1/2*z + 1/2*z^2"), 3, SignConvention::printed);
    FAIL("printed sign should fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::sign_convention);
  }
}

TEST_CASE("hp space") {
  for (std::size_t m : {1U, 2U, 3U}) {
    std::string s = "z1";
    for (std::size_t i = 2; i <= m; ++i) s += " + z" + std::to_string(i);
    const auto h = hp_space(poly(s, m), 20);
    const auto da = builtin_space(SpaceKind::drury_arveson, m);
    for (std::uint32_t k = 0; k <= (m == 3 ? 12U : 20U); ++k)
      for (const auto& a : enumerate_level(m, k)) REQUIRE(h.weight(a) == da.weight(a));
  }
  CHECK(hp_space(poly("1/2*z + 1/2*z^2"), 4).weight(mi({2})) == Q(4, 3));
  CHECK_THROWS_AS((void)hp_space(poly("z"), 3).weight(mi({4})), Error);
}

TEST_CASE("defect projection") {
  CHECK(defect_projection_check(poly("z"), 10).pass);
  CHECK(defect_projection_check(poly("z1 + z2"), 8).pass);
  CHECK(defect_projection_check(poly("1/2*z1 + 1/2*z2 + 1/4*z1*z2"), 12).pass);
  CHECK(defect_projection_check(poly("1/2*z + 1/2*z^2"), 12).pass);
}

TEST_CASE("jp data") {
  const auto jp = jp_data(poly("1/2*z1 + 1/2*z2 + 1/4*z1*z2"));
  REQUIRE(jp.extra == 1);
  CHECK(jp.lambda_squared[0] == 1);
  REQUIRE(jp.lambda[0]);
  CHECK(*jp.lambda[0] == 1);
  CHECK(jp.n.str() == WeightVector({1, 1, 2}).str());
  CHECK(jp.quasi_homogeneous);
  CHECK(jp.generators[0] == "Z3 - Z1*Z2");

  const auto jq = jp_data(poly("1/3*z + 1/2*z^2"));
  CHECK(jq.lambda_squared[0] == Q(9, 2));  // b / a^2
  CHECK(!jq.lambda[0]);
  CHECK(jq.n.str() == WeightVector({1, 2}).str());

  const auto j0 = jp_data(poly("z1 + z2"));
  CHECK(j0.extra == 0);
  CHECK(jp_ideal(j0).is_zero());
}

TEST_CASE("xp blocks") {
  const auto p = poly("1/2*z + 1/2*z^2");
  const auto x = xp_blocks(p, 8);
  CHECK(x[0].domain.size() == 1);
  CHECK(x[0].coeff_squared[0] == 1);
  CHECK(x[0].sv_squared[0] == 1);
  const auto& l2 = x[2];
  REQUIRE(l2.domain.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(l2.target[c] == 0);
    if (l2.domain[c] == mi({2, 0})) CHECK(l2.coeff_squared[c] == Q(1, 4));
    else CHECK(l2.coeff_squared[c] == Q(1, 2));
  }
  for (const auto* s : {"1/2*z + 1/2*z^2", "1/2*z1 + 1/2*z2 + 1/4*z1*z2", "z1 + z2", "1/3*z1 + 1/5*z2 + 1/7*z1^2*z2"})
    for (const auto& lvl : xp_blocks(poly(s), 8)) {
      for (double sv : lvl.singular_values) CHECK(sv <= 1 + kContractiveSlack);
      // Rows have disjoint supports, so each exact squared row norm is a squared singular value.
      for (const auto& r : lvl.sv_squared) CHECK(r == 1);
    }
}

TEST_CASE("kernel versus ideal") {
  const auto k = kernel_vs_ideal(poly("1/2*z + 1/2*z^2"), 8);
  CHECK(k[0].kernel_dim == 0);
  CHECK(k[1].kernel_dim == 0);
  CHECK(k[1].ideal_dim == 0);
  CHECK(k[2].kernel_dim == 1);
  CHECK(k[2].ideal_dim == 1);
  for (const auto& l : k) {
    CHECK(l.equal);
    CHECK(l.contained);
  }
  for (const auto& l : kernel_vs_ideal(poly("1/2*z1 + 1/2*z2 + 1/4*z1*z2"), 8)) {
    CHECK(l.equal);
    CHECK(l.contained);
  }
}

TEST_CASE("module map") {
  CHECK(xp_module_map_check(poly("z1 + z2"), 6).pass);
  const auto p = poly("1/2*z + 1/2*z^2");
  const auto good = xp_module_map_check(p, 8);
  CHECK(good.pass);
  CHECK(good.checked > 0);
  auto jp = jp_data(p);
  jp.lambda_squared[0] = 3;
  const auto bad = xp_module_map_check(p, jp, 8);
  CHECK(!bad.pass);
  CHECK(bad.witness.find("Q_2") != std::string::npos);
}

TEST_CASE("reports") {
  const auto p = poly("1/2*z1 + 1/2*z2 + 1/4*z1*z2");
  const auto r = preg_check_report(p, 8, 8);
  CHECK(!r.has_exact_fail());
  CHECK(to_json(r).dump() == to_json(preg_check_report(p, 8, 8)).dump());
  const auto d = preg_delta_report(poly("1/2*z + 1/2*z^2"), 4, SignConvention::printed);
  CHECK(d.has_exact_fail());
}
