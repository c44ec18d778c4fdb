#include "test_main.hpp"

#include <cmath>
#include <random>

#include "wsm/error.hpp"
#include "wsm/operators.hpp"

using namespace wsm;

namespace {

GradedPolynomial P(const std::string& s, std::size_t m) { return GradedPolynomial::parse(s, m); }
Rational Q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}
MultiIndex mi(std::initializer_list<std::uint32_t> v) { return MultiIndex(std::vector<std::uint32_t>(v)); }

WeightedShiftSpace da(std::size_t m) { return builtin_space(SpaceKind::drury_arveson, m); }
WeightedShiftSpace hardy(std::size_t m) { return builtin_space(SpaceKind::hardy_ball, m); }
WeightedShiftSpace polydisk(std::size_t m, const std::string& c2 = "1") {
  return builtin_space(SpaceKind::polydisk_hardy, m, {{"c2", c2}});
}

// <B x, y>_{k+d} = <x, B* y>_k for all coordinate vectors, i.e. G' B = (B*)^dagger G.
void check_adjoint(const ModuleRealization& r, const GradedOperator& op, std::uint32_t K) {
  const auto adj = adjoint_blocks(op, r);
  for (std::uint32_t k = 0; k <= K; ++k) {
    const auto t = static_cast<std::uint32_t>(static_cast<int>(k) + op.degree());
    const auto lhs = r.gram(t) * *op.block(k);
    const auto rhs = adj.block(t)->adjoint() * r.gram(k);
    CHECK(lhs == rhs);
  }
}

}  // namespace

TEST_CASE("mult_blocks examples") {
  const auto r = ModuleRealization::full(da(2), 6);
  const auto m2 = mult_blocks(r, P("z2", 2), 5);
  const auto lvl0 = r.level(1);
  const auto lvl1 = r.level(2);
  const auto f = float_block(m2, r, 1);
  const auto row = lvl1->index->position.at(mi({1, 1}));
  const auto col = lvl0->index->position.at(mi({1, 0}));
  CHECK(std::norm(f(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))) == doctest::Approx(0.5));
  CHECK(weight_ratio(r.space(), mi({1, 1}), mi({1, 0})) == Q(1, 2));

  const auto pr = ModuleRealization::full(polydisk(2), 8);
  const auto m1 = mult_blocks(pr, P("z1", 2), 7);
  for (std::uint32_t k = 0; k <= 7; ++k) {
    const auto b = float_block(m1, pr, k);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (std::abs(b(i, j)) > 0) CHECK(std::abs(b(i, j)) == doctest::Approx(1.0));
  }

  const auto one = mult_blocks(r, P("1", 2), 6);
  for (std::uint32_t k = 0; k <= 6; ++k) CHECK(*one.block(k) == ExactMatrix::identity(r.dim(k)));
}

TEST_CASE("mult_blocks preconditions") {
  const auto r = ModuleRealization::full(da(2), 4);
  CHECK_THROWS_AS((void)mult_blocks(r, P("z1+z2^2", 2), 2), Error);
  CHECK_THROWS_AS((void)mult_blocks(r, P("z1^2", 2), 3), Error);
  const auto m = mult_blocks(r, P("z1^2", 2), 2);
  CHECK_THROWS_AS((void)m.block(3), Error);
  CHECK_THROWS_AS((void)r.level(5), Error);
}

TEST_CASE("adjoint examples") {
  const auto r = ModuleRealization::full(da(2), 6);
  const auto m1 = mult_blocks(r, P("z1", 2), 5);
  const auto adj = adjoint_blocks(m1, r);
  CHECK(adj.degree() == -1);
  CHECK(adj.valid_through() == 6);
  for (std::uint32_t k = 0; k <= 6; ++k) {
    const auto src = r.level(k);
    const auto b = adj.block(k);
    for (std::size_t j = 0; j < src->dim; ++j) {
      const auto& a = src->index->monomials[j];
      if (a[0] == 0) {
        for (std::size_t i = 0; i < b->rows(); ++i) CHECK(b->at(i, j).is_zero());
        continue;
      }
      const auto lower = a - MultiIndex::unit(2, 0);
      const auto i = r.level(k - 1)->index->position.at(lower);
      CHECK(b->at(i, j) == GaussRational(r.space().weight(a) / r.space().weight(lower)));
    }
  }

  const auto id = identity_blocks(r, 6);
  const auto ida = adjoint_blocks(id, r);
  for (std::uint32_t k = 0; k <= 6; ++k) CHECK(*ida.block(k) == ExactMatrix::identity(r.dim(k)));

  const auto shift_r = ModuleRealization::full(polydisk(1), 5);
  const auto s_adj = adjoint_blocks(mult_blocks(shift_r, P("z", 1), 4), shift_r);
  CHECK(s_adj.block(0)->rows() == 0);
  CHECK(s_adj.block(1)->at(0, 0) == GaussRational(1));
}

TEST_CASE("commutator examples") {
  // Unilateral shift: [S, S*] = SS* - S*S = -P_0; the self-commutator [S*, S] is P_0.
  const auto r = ModuleRealization::full(polydisk(1), 12);
  const auto c = commutator_blocks(r, P("z", 1), P("z", 1), 11);
  CHECK(c.degree() == 0);
  CHECK(c.valid_through() == 10);
  CHECK(c.block(0)->at(0, 0) == GaussRational(-1));
  for (std::uint32_t k = 1; k <= 10; ++k) CHECK(c.block(k)->is_zero());
  CHECK_THROWS_AS((void)c.block(11), Error);
  const auto sc = self_commutator_sum_blocks(r, 11);
  CHECK(sc.block(0)->at(0, 0) == GaussRational(1));
  for (std::uint32_t k = 1; k <= 11; ++k) CHECK(sc.block(k)->is_zero());

  // T_i = M_{z_i}/sqrt(2) on the bidisk: [T_1*, T_1] is (1/2) times the projection onto {alpha_1 = 0}.
  const auto pr = ModuleRealization::full(polydisk(2, "1/2"), 31);
  const auto pc = commutator_blocks(pr, P("z1", 2), P("z1", 2), 31);
  for (std::uint32_t k = 0; k <= 30; ++k) {
    CHECK(pc.block(k)->trace() == GaussRational(Q(-1, 2)));
    CHECK(operator_norm(pc, pr, k) == doctest::Approx(0.5));
  }

  const auto hr = ModuleRealization::full(hardy(2), 31);
  const auto hc = commutator_blocks(hr, P("z1", 2), P("z1", 2), 31);
  double prev = operator_norm(hc, hr, 0);
  for (std::uint32_t k = 1; k <= 30; ++k) {
    const double cur = operator_norm(hc, hr, k);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 0.05);
  CHECK_THROWS_AS((void)commutator_blocks(hr, P("z1^2", 2), P("z1", 2), 1), Error);
}

TEST_CASE("adjoint consistency is exact") {
  const auto full = ModuleRealization::full(da(2), 7);
  check_adjoint(full, mult_blocks(full, P("z1", 2), 6), 6);
  check_adjoint(full, mult_blocks(full, P("(1/2)*z1^2 + 3i*z1*z2", 2), 5), 5);
  const auto b3 = ModuleRealization::full(builtin_space(SpaceKind::bergman_ball, 3), 5);
  check_adjoint(b3, mult_blocks(b3, P("z1*z3 - z2^2", 3), 3), 3);

  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+z2", 2)}), 8);
  check_adjoint(q, mult_blocks(q, P("z1", 2), 7), 7);
  const auto q2 = ModuleRealization::quotient(hardy(3), GradedIdeal(3, {P("z1^2 - 2i*z2*z3", 3)}), 5);
  check_adjoint(q2, mult_blocks(q2, P("z2 + (1/3)*z3", 3), 4), 4);
  const auto q3 = ModuleRealization::quotient(da(2), GradedIdeal(2, {P("z1+2i*z2", 2)}), 6);
  check_adjoint(q3, mult_blocks(q3, P("z1", 2), 5), 5);
}

TEST_CASE("commutator antisymmetry") {
  const auto r = ModuleRealization::full(hardy(2), 7);
  const auto f = P("z1", 2);
  const auto g = P("z1*z2", 2);
  const auto fg = commutator_blocks(r, f, g, 7);
  const auto gf = commutator_blocks(r, g, f, 7);
  const auto fg_adj = adjoint_blocks(fg, r);
  CHECK(fg.degree() == -1);
  CHECK(gf.degree() == 1);
  // [A, B]^* = [B^*, A^*], so [M_f, M_g^*]^* = [M_g, M_f^*].
  CHECK(fg_adj.valid_through() == 4);
  for (std::uint32_t k = 0; k <= 4; ++k) CHECK(*fg_adj.block(k) == *gf.block(k));

  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+z2", 2)}), 10);
  const auto c = commutator_blocks(q, P("z1", 2), P("z1", 2), 9);
  const auto ca = adjoint_blocks(c, q);
  for (std::uint32_t k = 0; k <= 8; ++k) CHECK(*ca.block(k) == *c.block(k));
}

TEST_CASE("finite defect identity") {
  for (const auto& space : {da(2), hardy(3), builtin_space(SpaceKind::bergman_ball, 2), polydisk(2, "1/2")}) {
    const auto r = ModuleRealization::full(space, 9);
    const auto lhs = spherical_defect_blocks(r, 8) - row_defect_blocks(r, 8);
    const auto rhs = self_commutator_sum_blocks(r, 8);
    for (std::uint32_t k = 0; k <= 8; ++k) CHECK(*lhs.block(k) == rhs.block(k)->scaled(GaussRational(-1)));
  }
}

TEST_CASE("diagonal defect fast paths agree with composition") {
  for (const auto& space : {da(3), hardy(2), builtin_space(SpaceKind::bergman_ball, 2), polydisk(3, "2/3")}) {
    const auto r = ModuleRealization::full(space, 7);
    const std::size_t m = r.arity();
    GradedOperator sph = identity_blocks(r, 6);
    GradedOperator row = identity_blocks(r, 6);
    for (std::size_t i = 0; i < m; ++i) {
      const auto mi_ = mult_blocks(r, GradedPolynomial::monomial(MultiIndex::unit(m, i)), 6);
      const auto ad = adjoint_blocks(mi_, r);
      sph = sph - compose(ad, mi_, r);
      row = row - compose(mi_, ad, r);
    }
    const auto fs = spherical_defect_blocks(r, 6);
    const auto fr = row_defect_blocks(r, 6);
    for (std::uint32_t k = 0; k <= 6; ++k) {
      CHECK(*fs.block(k) == *sph.block(k));
      CHECK(*fr.block(k) == *row.block(k));
    }
  }
}

TEST_CASE("quotient realization") {
  const auto z = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {}), 6);
  for (std::uint32_t k = 0; k <= 6; ++k) CHECK(z.dim(k) == k + 1);

  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+z2", 2)}), 20);
  for (std::uint32_t k = 0; k <= 20; ++k) {
    CHECK(q.dim(k) == 1);
    CHECK(q.ideal_dim(k) + q.dim(k) == k + 1);
  }

  const auto m2 = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1^2", 2), P("z1*z2", 2), P("z2^2", 2)}), 6);
  CHECK(m2.dim(0) == 1);
  CHECK(m2.dim(1) == 2);
  for (std::uint32_t k = 2; k <= 6; ++k) CHECK(m2.dim(k) == 0);
  CHECK(block_shift_data(m2, 0, 1).rows() == 0);

  CHECK_THROWS_AS((void)ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z2 - z1^2", 2)}, WeightVector({1, 2})), 3),
                  Error);
}

TEST_CASE("block shift data") {
  // Zero ideal, m = 1: 1x1 blocks whose normalized modulus^2 is the shift ratio.
  const auto b1 = builtin_space(SpaceKind::bergman_ball, 1);
  const auto z = ModuleRealization::quotient(b1, GradedIdeal(1, {}), 10);
  const auto mz = mult_blocks(z, P("z", 1), 9);
  for (std::uint32_t k = 0; k <= 9; ++k) {
    CHECK(block_shift_data(z, 0, k).rows() == 1);
    CHECK(std::norm(float_block(mz, z, k)(0, 0)) == doctest::Approx(to_double(b1.shift_ratio(mi({k}), 0))));
  }

  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+z2", 2)}), 12);
  for (std::uint32_t k = 0; k < 12; ++k) {
    const auto a = block_shift_data(q, 0, k);
    CHECK(a.rows() == 1);
    CHECK(a.cols() == 1);
  }

  // <z1> in m = 2: the quotient is the z2-axis module.
  const auto sp = hardy(2);
  const auto q1 = ModuleRealization::quotient(sp, GradedIdeal(2, {P("z1", 2)}), 12);
  const auto mz2 = mult_blocks(q1, P("z2", 2), 11);
  for (std::uint32_t k = 0; k < 12; ++k) {
    CHECK(block_shift_data(q1, 0, k).is_zero());
    CHECK(std::norm(float_block(mz2, q1, k)(0, 0)) == doctest::Approx(to_double(sp.shift_ratio(mi({0, k}), 1))));
  }
  CHECK_THROWS_AS((void)block_shift_data(q1, 0, 12), Error);
  CHECK_THROWS_AS((void)block_shift_data(q1, 2, 0), Error);
}

TEST_CASE("quotient compressions commute") {
  const auto q = ModuleRealization::quotient(hardy(3), GradedIdeal(3, {P("z1*z2 - z3^2", 3), P("z1+i*z2", 3)}), 7);
  const auto a = mult_blocks(q, P("z1", 3), 6);
  const auto b = mult_blocks(q, P("z3", 3), 6);
  const auto ab = compose(a, b, q);
  const auto ba = compose(b, a, q);
  const auto direct = mult_blocks(q, P("z1*z3", 3), 5);
  for (std::uint32_t k = 0; k <= 5; ++k) {
    CHECK(*ab.block(k) == *ba.block(k));
    CHECK(*ab.block(k) == *direct.block(k));
  }
}

TEST_CASE("float tier normalization in quotients") {
  // |A_k|^2 = <A v, A v> / <v, v> computed exactly from Gram data.
  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+2i*z2", 2)}), 30);
  const auto m1 = mult_blocks(q, P("z1", 2), 29);
  for (std::uint32_t k = 0; k <= 29; ++k) {
    const auto a = m1.block(k)->at(0, 0);
    const Rational exact = a.norm2() * q.gram(k + 1).at(0, 0).re() / q.gram(k).at(0, 0).re();
    CHECK(std::norm(float_block(m1, q, k)(0, 0)) == doctest::Approx(to_double(exact)).epsilon(1e-12));
    CHECK(operator_norm(m1, q, k) <= 1.0 + 1e-12);
  }
}

TEST_CASE("pn_split") {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 0.5;
  h(1, 1) = -0.25;
  auto s = pn_split(h);
  CHECK(std::abs(s.positive(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(s.positive(1, 1)) < 1e-12);
  CHECK(std::abs(s.negative(1, 1) - 0.25) < 1e-12);
  CHECK(std::abs(s.negative(0, 0)) < 1e-12);

  CMatrix pos(2, 2);
  pos << 2.0, std::complex<double>(0, 1), std::complex<double>(0, -1), 2.0;
  CHECK(pn_split(pos).negative.norm() < 1e-12);

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS((void)pn_split(bad), Error);
  CHECK_THROWS_AS((void)pn_split(CMatrix::Zero(2, 3)), Error);

  std::mt19937 gen(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 9;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = {nd(gen), nd(gen)};
    const CMatrix herm = a + a.adjoint();
    const auto sp = pn_split(herm);
    CHECK((sp.positive - sp.negative - herm).norm() <= 1e-9 * herm.norm());
    CHECK((sp.positive * sp.negative).norm() <= 1e-9 * herm.squaredNorm());
    Eigen::SelfAdjointEigenSolver<CMatrix> ep(sp.positive);
    Eigen::SelfAdjointEigenSolver<CMatrix> en(sp.negative);
    CHECK(ep.eigenvalues().minCoeff() >= -kPsdSlack * herm.norm());
    CHECK(en.eigenvalues().minCoeff() >= -kPsdSlack * herm.norm());
  }

  // Split of the compressed self-commutators in the <z1+z2> quotient.
  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+z2", 2)}), 42);
  const auto c = commutator_blocks(q, P("z1", 2), P("z1", 2), 41);
  double first = -1;
  double last = 0;
  for (std::uint32_t k = 0; k <= 40; ++k) {
    const auto split = pn_split(-float_block(c, q, k));
    last = split.positive.norm() + split.negative.norm();
    if (first < 0) first = last;
  }
  CHECK(last < first);
}

TEST_CASE("schatten partial sums") {
  const auto r = ModuleRealization::full(da(2), 400);
  const auto defect = spherical_defect_blocks(r, 400);
  for (std::uint32_t k = 0; k <= 30; ++k) {
    const auto b = defect.block(k);
    CHECK(b->is_diagonal());
    for (std::size_t i = 0; i < b->rows(); ++i) CHECK(b->at(i, i) == GaussRational(Q(-1, k + 1)));
  }
  const auto s1 = schatten_partial(defect, r, 1, 100);
  for (std::uint32_t K = 0; K <= 100; ++K) CHECK(s1.partial_sums[K] == doctest::Approx(K + 1.0));
  const auto s3 = schatten_partial(defect, r, 3, 400);
  CHECK(s3.total() - s3.partial_sums[100] < 0.01);
  CHECK_THROWS_AS((void)schatten_partial(defect, r, 1, 401), Error);
  CHECK_THROWS_AS((void)schatten_partial(defect, r, 0.5, 10), Error);

  const auto hr = ModuleRealization::full(hardy(2), 20);
  CHECK(schatten_partial(spherical_defect_blocks(hr, 20), hr, 2, 20).total() == 0.0);

  // Generic SVD route on a non-diagonal operator.
  const auto q = ModuleRealization::quotient(hardy(2), GradedIdeal(2, {P("z1+z2", 2)}), 10);
  const auto c = commutator_blocks(q, P("z1", 2), P("z1", 2), 10);
  const auto sc = schatten_partial(c, q, 1, 9);
  CHECK(sc.level_terms.size() == 10);
  for (std::uint32_t k = 0; k <= 9; ++k)
    CHECK(sc.level_terms[k] == doctest::Approx(std::abs(to_complex(c.block(k)->at(0, 0)))));
}
