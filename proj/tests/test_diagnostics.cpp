#include "test_main.hpp"

#include <cmath>

#include "wsm/diagnostics.hpp"
#include "wsm/error.hpp"

using namespace wsm;

namespace {

GradedPolynomial P(const std::string& s, std::size_t m) { return GradedPolynomial::parse(s, m); }
Rational Q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}
WeightedShiftSpace da(std::size_t m) { return builtin_space(SpaceKind::drury_arveson, m); }
WeightedShiftSpace hardy(std::size_t m) { return builtin_space(SpaceKind::hardy_ball, m); }
GradedIdeal ideal(std::size_t m, std::initializer_list<const char*> gens) {
  std::vector<GradedPolynomial> g;
  for (const auto* s : gens) g.push_back(P(s, m));
  return GradedIdeal(m, g);
}

double real_at(const Table& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c].name == col) return t.rows[row][c].real;
  FAIL("missing column " << col);
  return 0;
}
const Cell& cell_at(const Table& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c].name == col) return t.rows[row][c];
  throw std::runtime_error("missing column " + col);
}

}  // namespace

TEST_CASE("normality report examples") {
  {
    const auto r = ModuleRealization::full(hardy(2), 21);
    const auto rep = normality_report(r, 20, {2.5});
    CHECK(rep.verdict("spherical_defect_zero").verdict == Verdict::exact_pass);
    CHECK(rep.verdict("self_commutators_hermitian").verdict == Verdict::exact_pass);
    CHECK(rep.verdict("commutator_decay").verdict == Verdict::trend_consistent);
    CHECK_FALSE(rep.has_exact_fail());
  }
  {
    const auto r = ModuleRealization::full(builtin_space(SpaceKind::polydisk_hardy, 2, {{"c2", "1/2"}}), 31);
    const auto rep = normality_report(r, 30, {});
    const auto& t = rep.table("levels");
    for (std::size_t k = 0; k <= 30; ++k) {
      CHECK(real_at(t, k, "comm_1_1_norm") == doctest::Approx(0.5));
      CHECK(real_at(t, k, "comm_1_2_norm") == 0.0);
      CHECK(cell_at(t, k, "self_commutator_trace").text == "1");
    }
    CHECK(rep.verdict("commutator_decay").verdict == Verdict::trend_inconsistent);
    CHECK(rep.verdict("spherical_defect_zero").verdict == Verdict::exact_pass);
  }
  {
    const auto r = ModuleRealization::full(da(2), 41);
    const auto rep = normality_report(r, 40, {1, 2, 3}, 4);
    const auto& t = rep.table("levels");
    for (std::size_t k = 0; k <= 40; ++k) CHECK(real_at(t, k, "defect_norm") == doctest::Approx(1.0 / (k + 1)));
    CHECK(rep.verdict("spherical_defect_zero").verdict == Verdict::reported_only);
    const auto& fits = rep.table("decay");
    const auto last = fits.rows.size() - 1;
    CHECK(cell_at(fits, last, "operator").text == "I - sum M_i* M_i");
    CHECK(real_at(fits, last, "slope") == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(rep.verdict("defect_decay").verdict == Verdict::trend_consistent);
  }
}

TEST_CASE("normality report is deterministic across job counts") {
  const auto a = normality_report(ModuleRealization::quotient(hardy(2), ideal(2, {"z1+z2"}), 17), 16, {2}, 1);
  const auto b = normality_report(ModuleRealization::quotient(hardy(2), ideal(2, {"z1+z2"}), 17), 16, {2}, 8);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK_THROWS_AS((void)normality_report(ModuleRealization::full(hardy(2), 10), 10, {}), Error);
}

TEST_CASE("trace identity") {
  auto r = trace_identity(hardy(2), 1);
  CHECK(r.computed == 1);
  CHECK(r.telescoping == 1);
  CHECK(r.binomial_formula == 1);
  CHECK(r.defect_zero);
  r = trace_identity(hardy(2), 2);
  CHECK(r.computed == 1);
  CHECK(r.telescoping == 1);
  CHECK(r.binomial_formula == 2);

  // Unilateral shift: the self-commutator is the projection onto constants.
  const auto disk = hardy(1);
  CHECK(trace_identity(disk, 0).computed == 1);
  CHECK(trace_identity(disk, 1).computed == 0);
  CHECK(trace_identity(disk, 1).binomial_formula == 1);
  for (std::uint32_t k = 2; k <= 6; ++k) {
    CHECK(trace_identity(disk, k).computed == 0);
    CHECK(trace_identity(disk, k).telescoping == 0);
  }

  for (std::size_t m : {2, 3, 4})
    for (std::uint32_t k = 0; k <= 12; ++k) {
      const auto rec = trace_identity(hardy(m), k);
      CHECK(rec.defect_zero);
      CHECK(rec.equal);
    }
  // Drury-Arveson has a nonzero defect, so the identity is not asserted there.
  CHECK_FALSE(trace_identity(da(2), 3).defect_zero);
  const auto rep = trace_report(da(2), 6);
  CHECK(rep.verdict("trace_equals_telescoping").verdict == Verdict::reported_only);
  const auto hrep = trace_report(hardy(3), 20);
  CHECK(hrep.verdict("trace_equals_telescoping").verdict == Verdict::exact_pass);
  CHECK(hrep.verdict("binomial_formula").verdict == Verdict::reported_only);
}

TEST_CASE("summability verdicts") {
  const auto r = ModuleRealization::full(da(2), 4096);
  const auto defect = spherical_defect_blocks(r, 4096);
  const auto s2 = schatten_partial(defect, r, 2, 128);
  auto v = summability_verdict(s2, 2);
  CHECK(v.outcome == Summability::divergent_trend);
  CHECK(v.last_increment == doctest::Approx(std::log(2.0)).epsilon(0.02));
  CHECK(v.verdict == Verdict::trend_consistent);

  const auto s25 = schatten_partial(defect, r, 2.5, 4096);
  v = summability_verdict(s25, 2);
  CHECK(v.outcome == Summability::convergent_trend);
  CHECK(v.tail_estimate < 0.05);
  CHECK(v.slope == doctest::Approx(-1.5).epsilon(0.01));

  SchattenSeries zero;
  zero.p = 1;
  zero.level_terms.assign(32, 0.0);
  zero.partial_sums.assign(32, 0.0);
  CHECK(summability_verdict(zero, 2).outcome == Summability::convergent_trend);

  SchattenSeries shortseries;
  shortseries.level_terms.assign(15, 1.0);
  for (int i = 0; i < 15; ++i) shortseries.partial_sums.push_back(i + 1.0);
  CHECK(summability_verdict(shortseries, 2).outcome == Summability::inconclusive);
  CHECK(summability_verdict(shortseries, 2).verdict == Verdict::reported_only);
}

TEST_CASE("quotient shift weights") {
  // Frozen from the independent Fraction oracle (tests/oracles/quotient_weights_oracle.py).
  const auto w1 = quotient_shift_weights(hardy(2), P("z1+z2", 2), 200);
  CHECK(w1.variable == 0);
  CHECK(*w1.scale == 2);
  CHECK(w1.squared[0] == Q(1, 4));
  CHECK(w1.squared[2] == Q(3, 8));
  CHECK(w1.moduli[20] * w1.moduli[20] == doctest::Approx(0.4772727272727273));
  CHECK(w1.moduli[200] * w1.moduli[200] == doctest::Approx(0.4975247524752475));
  CHECK(w1.deviation[20] == doctest::Approx(0.02299157908160554).epsilon(1e-12));
  CHECK(w1.deviation[200] == doctest::Approx(0.0024783185561854104).epsilon(1e-12));

  const auto w2 = quotient_shift_weights(hardy(2), P("z1+2i*z2", 2), 200);
  CHECK(*w2.scale == Q(5, 4));
  CHECK(w2.squared[0] == Q(2, 5));
  CHECK(w2.moduli[20] * w2.moduli[20] == doctest::Approx(0.7636363636363637));
  CHECK(w2.moduli[200] * w2.moduli[200] == doctest::Approx(0.7960396039603961));
  CHECK(w2.deviation[200] < w2.deviation[20]);
  CHECK(w2.deviation[200] < 0.05);
  for (std::uint32_t k = 0; k <= 200; ++k) {
    // normalized^2 = (k+1)/(k+2) exactly
    CHECK(w2.squared[k] * *w2.scale == Q(k + 1, k + 2));
  }

  // <z1>: the quotient is the z2-axis, weights are its shift ratios.
  const auto w0 = quotient_shift_weights(hardy(2), P("z1", 2), 30);
  CHECK(w0.variable == 1);
  for (std::uint32_t k = 0; k <= 30; ++k)
    CHECK(w0.squared[k] == hardy(2).shift_ratio(MultiIndex(std::vector<std::uint32_t>{0, k}), 1));

  const auto rep = qweights_report(hardy(2), P("z1+z2", 2), 200);
  CHECK(rep.verdict("weights_converge").verdict == Verdict::trend_consistent);
  CHECK_THROWS_AS((void)quotient_shift_weights(hardy(2), P("z1^2", 2), 5), Error);
  CHECK_THROWS_AS((void)quotient_shift_weights(hardy(3), P("z1+z2", 3), 5), Error);
}

TEST_CASE("trace inequality") {
  for (const char* g : {"z1+z2", "z1"}) {
    const auto q = ModuleRealization::quotient(hardy(2), ideal(2, {g}), 41);
    CHECK(bounded_quotient_dimension(q) == 1);
    const auto rep = section5_report(q, 40, 4);
    CHECK(rep.verdict("inequality").verdict == Verdict::exact_pass);
    for (const auto& row : rep.table("levels").rows) {
      CHECK(row[6].real >= 0);
      CHECK(row[7].real >= 0);
    }
    CHECK(rep.verdict("n_norms_decay").verdict == Verdict::trend_consistent);
  }
  // <z1>: X_k is the z2-axis row defect 1/(k+1).
  const auto q1 = ModuleRealization::quotient(hardy(2), ideal(2, {"z1"}), 12);
  for (std::uint32_t k = 0; k <= 10; ++k) CHECK(section5_check(q1, k, 1).x_trace == GaussRational(Q(1, k + 1)));

  const auto disk = ModuleRealization::quotient(hardy(1), GradedIdeal(1, {}), 12);
  for (std::uint32_t k = 1; k <= 10; ++k) {
    const auto l = section5_check(disk, k, 1);
    CHECK(l.lhs == doctest::Approx(0.0));
    CHECK(l.rhs == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS((void)bounded_quotient_dimension(ModuleRealization::quotient(hardy(2), GradedIdeal(2, {}), 12)),
                  Error);
}

TEST_CASE("koszul euler characteristic") {
  // Frozen from tests/oracles/koszul_oracle.py (sympy ranks).
  using H = std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>;
  const auto full = koszul_euler(KoszulModule::full, 2, std::nullopt, 10);
  CHECK(full.homology == H{{{0, 0}, 1}});
  CHECK(full.euler == 1);
  CHECK(full.index == -1);
  CHECK(full.d_squared_zero);
  CHECK(full.stabilized);

  const std::vector<std::pair<GradedIdeal, H>> cases{
      {ideal(2, {"z1"}), H{{{0, 1}, 1}}},
      {ideal(2, {"z1+z2"}), H{{{0, 1}, 1}}},
      {ideal(2, {"z1", "z2"}), H{{{0, 1}, 2}, {{1, 2}, 1}}},
      {ideal(2, {"z1^2", "z1*z2", "z2^2"}), H{{{0, 2}, 3}, {{1, 3}, 2}}},
  };
  for (const auto& [I, expected] : cases) {
    const auto res = koszul_euler(KoszulModule::ideal, 2, I, 10);
    CHECK(res.homology == expected);
    CHECK(res.euler == 1);
    CHECK(res.index == -1);
    CHECK(res.d_squared_zero);
    const auto rep = koszul_report(KoszulModule::ideal, 2, I, 10);
    CHECK(rep.verdict("euler_characteristic").verdict == Verdict::exact_pass);
  }

  // Redundant generators do not change anything.
  const auto red = koszul_euler(KoszulModule::ideal, 2, ideal(2, {"z1", "z2", "z1+z2", "z1^2"}), 10);
  CHECK(red.euler == 1);
  CHECK(red.homology == H{{{0, 1}, 2}, {{1, 2}, 1}});

  // Quotients by nonzero ideals have chi = 0; the value is reported only.
  const auto q = koszul_euler(KoszulModule::quotient, 2, ideal(2, {"z1"}), 10);
  CHECK(q.homology == H{{{0, 0}, 1}, {{1, 1}, 1}});
  CHECK(q.euler == 0);
  CHECK(koszul_report(KoszulModule::quotient, 2, ideal(2, {"z1"}), 10).verdict("euler_characteristic").verdict ==
        Verdict::reported_only);

  // m = 3, complete intersection: Tor of <z1, z2, z3>.
  const auto m3 = koszul_euler(KoszulModule::ideal, 3, ideal(3, {"z1", "z2", "z3"}), 8);
  CHECK(m3.homology == H{{{0, 1}, 3}, {{1, 2}, 3}, {{2, 3}, 1}});
  CHECK(m3.euler == 1);

  // Degree bound too small: inconclusive.
  const auto small = koszul_report(KoszulModule::ideal, 2, ideal(2, {"z1^4"}), 4);
  CHECK(small.verdict("euler_characteristic").verdict == Verdict::reported_only);
}

TEST_CASE("report serialization") {
  const auto rep = trace_report(hardy(2), 3);
  const auto j = to_json(rep);
  CHECK(j["scenario"] == "trace");
  CHECK(j["tables"][0]["columns"][1]["tier"] == "exact");
  CHECK(j["verdicts"][0]["verdict"] == "exact-pass");
  const auto csv = to_csv(rep.table("trace"));
  CHECK(csv.rfind("k,computed,telescoping,binomial_formula,defect_zero,asserted,equal\n", 0) == 0);
  CHECK(csv.find("\n2,1,1,2,true,true,true\n") != std::string::npos);
}
