#include "wsm/operators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "wsm/error.hpp"

namespace wsm {

// ---------------------------------------------------------------- realization

ModuleRealization ModuleRealization::full(WeightedShiftSpace space, std::uint32_t max_level) {
  auto s = std::make_shared<State>(std::move(space), std::nullopt, max_level);
  return ModuleRealization(std::move(s));
}

ModuleRealization ModuleRealization::quotient(WeightedShiftSpace space, GradedIdeal ideal, std::uint32_t max_level) {
  if (ideal.arity() != space.arity()) throw Error(ErrorCode::dimension_mismatch, "ideal and space arity differ");
  if (!ideal.plain_homogeneous())
    throw Error(ErrorCode::mode_error, "quotient realization needs a plain-homogeneous ideal");
  auto s = std::make_shared<State>(std::move(space), std::move(ideal), max_level);
  return ModuleRealization(std::move(s));
}

std::shared_ptr<const RealizedLevel> ModuleRealization::level(std::uint32_t k) const {
  if (k > state_->max_level)
    throw Error(ErrorCode::window_error,
                "level " + std::to_string(k) + " is beyond the realized window " + std::to_string(state_->max_level));
  if (!is_quotient()) return build(k);
  {
    std::lock_guard lock(state_->mutex);
    auto it = state_->levels.find(k);
    if (it != state_->levels.end()) return it->second;
  }
  auto lvl = build(k);
  std::lock_guard lock(state_->mutex);
  return state_->levels.try_emplace(k, std::move(lvl)).first->second;
}

std::size_t ModuleRealization::dim(std::uint32_t k) const {
  if (!is_quotient()) {
    if (k > state_->max_level) (void)level(k);  // window error
    return level_dimension(arity(), k);
  }
  return level(k)->dim;
}

std::shared_ptr<const RealizedLevel> ModuleRealization::build(std::uint32_t k) const {
  auto lvl = std::make_shared<RealizedLevel>();
  lvl->k = k;
  lvl->index = std::make_shared<const LevelIndex>(enumerate_level(arity(), k));
  if (!is_quotient()) {
    lvl->dim = lvl->index->size();
    return lvl;
  }
  const auto& monos = lvl->index->monomials;
  const auto ideal_level = state_->ideal->level(k);
  lvl->ideal_rows = ideal_level->basis;
  std::vector<Rational> w;
  w.reserve(monos.size());
  for (const auto& a : monos) w.push_back(space().weight(a));
  // S_k^perp = {v : sum_beta v_beta conj(b_beta) omega_beta = 0 for every b in S_k}.
  RowEchelon constraints(monos.size());
  for (const auto& b : lvl->ideal_rows) {
    SparseVector row;
    for (const auto& [c, x] : b) row.emplace_back(c, x.conj() * GaussRational(w[c]));
    constraints.insert(row);
  }
  lvl->complement = constraints.nullspace();
  lvl->dim = lvl->complement.size();
  if (lvl->dim + lvl->ideal_rows.size() != monos.size())
    throw Error(ErrorCode::structural_error, "dim S_k + dim S_k^perp != dim H_k");
  lvl->gram = ExactMatrix(lvl->dim, lvl->dim);
  for (std::size_t i = 0; i < lvl->dim; ++i)
    for (std::size_t j = 0; j < lvl->dim; ++j) {
      // <v_j, v_i> = sum_beta v_j(beta) conj(v_i(beta)) omega_beta, stored at (i, j).
      GaussRational acc;
      const auto& vi = lvl->complement[i];
      const auto& vj = lvl->complement[j];
      std::size_t a = 0;
      std::size_t b = 0;
      while (a < vi.size() && b < vj.size()) {
        if (vi[a].first < vj[b].first) ++a;
        else if (vj[b].first < vi[a].first) ++b;
        else {
          acc += vj[b].second * vi[a].second.conj() * GaussRational(w[vi[a].first]);
          ++a;
          ++b;
        }
      }
      lvl->gram.add(i, j, acc);
    }
  return lvl;
}

std::vector<GradedPolynomial> ModuleRealization::complement_basis(std::uint32_t k) const {
  const auto lvl = level(k);
  std::vector<GradedPolynomial> out;
  if (!is_quotient()) {
    for (const auto& a : lvl->index->monomials) out.push_back(GradedPolynomial::monomial(a));
    return out;
  }
  for (const auto& v : lvl->complement) out.push_back(lvl->index->polynomial(v, arity()));
  return out;
}

ExactMatrix ModuleRealization::gram(std::uint32_t k) const {
  const auto lvl = level(k);
  if (is_quotient()) return lvl->gram;
  std::vector<GaussRational> d;
  for (const auto& a : lvl->index->monomials) d.emplace_back(space().weight(a));
  return ExactMatrix::diagonal(d);
}

Rational weight_ratio(const WeightedShiftSpace& space, const MultiIndex& beta, const MultiIndex& alpha) {
  const std::size_t m = space.arity();
  MultiIndex base(m);
  for (std::size_t i = 0; i < m; ++i) base[i] = std::min(alpha[i], beta[i]);
  auto climb = [&](const MultiIndex& target) {
    Rational r = 1;
    MultiIndex cur = base;
    for (std::size_t i = 0; i < m; ++i)
      while (cur[i] < target[i]) {
        r *= space.shift_ratio(cur, i);
        ++cur[i];
      }
    return r;
  };
  return climb(beta) / climb(alpha);
}

// ------------------------------------------------------------------ operators

GradedOperator::GradedOperator(std::string name, int degree, std::uint32_t valid_through, Generator gen, bool cache)
    : name_(std::move(name)), degree_(degree), valid_through_(valid_through), store_(std::make_shared<Store>()) {
  store_->gen = std::move(gen);
  store_->cache = cache;
}

GradedOperator::Block GradedOperator::block(std::uint32_t k) const {
  if (!store_) throw Error(ErrorCode::structural_error, "empty operator");
  if (k > valid_through_)
    throw Error(ErrorCode::window_error, name_ + ": block " + std::to_string(k) + " is outside the valid window 0.." +
                                             std::to_string(valid_through_));
  if (!store_->cache) return std::make_shared<const ExactMatrix>(store_->gen(k));
  {
    std::lock_guard lock(store_->mutex);
    auto it = store_->blocks.find(k);
    if (it != store_->blocks.end()) return it->second;
  }
  auto b = std::make_shared<const ExactMatrix>(store_->gen(k));
  std::lock_guard lock(store_->mutex);
  return store_->blocks.try_emplace(k, std::move(b)).first->second;
}

GradedOperator GradedOperator::scaled(const GaussRational& c) const {
  auto self = *this;
  return {name_, degree_, valid_through_, [self, c](std::uint32_t k) { return self.block(k)->scaled(c); },
          store_->cache};
}

GradedOperator GradedOperator::truncated(std::uint32_t valid_through) const {
  if (valid_through > valid_through_)
    throw Error(ErrorCode::window_error, name_ + ": cannot widen the valid window");
  GradedOperator out = *this;
  out.valid_through_ = valid_through;
  return out;
}

GradedOperator GradedOperator::renamed(std::string name) const {
  GradedOperator out = *this;
  out.name_ = std::move(name);
  return out;
}

namespace {

std::uint32_t checked_window(long v, const std::string& what) {
  if (v < 0) throw Error(ErrorCode::window_error, what + ": empty valid window");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

GradedOperator compose(const GradedOperator& a, const GradedOperator& b, const ModuleRealization& r) {
  const int d = a.degree() + b.degree();
  const long valid = std::min<long>(b.valid_through(), static_cast<long>(a.valid_through()) - b.degree());
  const std::string name = a.name() + " * " + b.name();
  return {name, d, checked_window(valid, name), [a, b, r, d](std::uint32_t k) {
            const long mid = static_cast<long>(k) + b.degree();
            const long tgt = static_cast<long>(k) + d;
            const std::size_t rows = tgt < 0 ? 0 : r.dim(static_cast<std::uint32_t>(tgt));
            if (mid < 0) return ExactMatrix(rows, r.dim(k));
            return *a.block(static_cast<std::uint32_t>(mid)) * *b.block(k);
          }};
}

namespace {

GradedOperator combine(const GradedOperator& a, const GradedOperator& b, bool subtract) {
  if (a.degree() != b.degree()) throw Error(ErrorCode::dimension_mismatch, "operator degrees differ");
  const auto valid = std::min(a.valid_through(), b.valid_through());
  const std::string name = a.name() + (subtract ? " - " : " + ") + b.name();
  return {name, a.degree(), valid, [a, b, subtract](std::uint32_t k) {
            return subtract ? *a.block(k) - *b.block(k) : *a.block(k) + *b.block(k);
          }};
}

}  // namespace

GradedOperator operator+(const GradedOperator& a, const GradedOperator& b) { return combine(a, b, false); }
GradedOperator operator-(const GradedOperator& a, const GradedOperator& b) { return combine(a, b, true); }

GradedOperator identity_blocks(const ModuleRealization& r, std::uint32_t K) {
  if (K > r.max_level()) throw Error(ErrorCode::window_error, "identity beyond realized window");
  return {"I", 0, K, [r](std::uint32_t k) { return ExactMatrix::identity(r.dim(k)); }};
}

GradedOperator mult_blocks(const ModuleRealization& r, const GradedPolynomial& p, std::uint32_t K) {
  if (p.arity() != r.arity()) throw Error(ErrorCode::dimension_mismatch, "multiplier arity mismatch");
  if (!p.is_homogeneous()) throw Error(ErrorCode::mode_error, "multiplier " + p.str() + " is not homogeneous");
  const auto d = static_cast<std::uint32_t>(p.degree());
  if (static_cast<std::uint64_t>(K) + d > r.max_level())
    throw Error(ErrorCode::window_error, "multiplier of degree " + std::to_string(d) + " up to level " +
                                             std::to_string(K) + " needs realized levels beyond " +
                                             std::to_string(r.max_level()));
  auto gen = [r, p, d](std::uint32_t k) {
    const auto src = r.level(k);
    const auto dst = r.level(k + d);
    if (!r.is_quotient()) {
      ExactMatrix b(dst->dim, src->dim);
      for (std::size_t j = 0; j < src->dim; ++j)
        for (const auto& [gamma, c] : p.terms())
          b.add(dst->index->position.at(src->index->monomials[j] + gamma), j, c);
      return b;
    }
    // Compression: coordinates c of P(M_p v) solve G' c = V'^dagger diag(omega) M_p v.
    std::vector<Rational> w;
    for (const auto& a : dst->index->monomials) w.push_back(r.space().weight(a));
    ExactMatrix rhs(dst->dim, src->dim);
    for (std::size_t j = 0; j < src->dim; ++j) {
      std::map<std::size_t, GaussRational> image;
      for (const auto& [c, x] : src->complement[j])
        for (const auto& [gamma, pc] : p.terms())
          image[dst->index->position.at(src->index->monomials[c] + gamma)] += x * pc;
      for (std::size_t i = 0; i < dst->dim; ++i) {
        GaussRational acc;
        for (const auto& [c, x] : dst->complement[i]) {
          auto it = image.find(c);
          if (it != image.end()) acc += it->second * x.conj() * GaussRational(w[c]);
        }
        rhs.add(i, j, acc);
      }
    }
    return dst->dim == 0 ? rhs : solve(dst->gram, rhs);
  };
  return {"M[" + p.str() + "]", static_cast<int>(d), K, gen};
}

GradedOperator adjoint_blocks(const GradedOperator& op, const ModuleRealization& r) {
  const int d = op.degree();
  const std::string name = op.name() + "*";
  const auto valid = checked_window(static_cast<long>(op.valid_through()) + d, name);
  auto gen = [op, r, d](std::uint32_t j) {
    const long k = static_cast<long>(j) - d;
    if (k < 0) return ExactMatrix(0, r.dim(j));
    const auto src = static_cast<std::uint32_t>(k);
    const auto b = op.block(src);
    if (!r.is_quotient()) {
      const auto from = r.level(src);
      const auto to = r.level(j);
      ExactMatrix out(b->cols(), b->rows());
      for (std::size_t row = 0; row < b->rows(); ++row)
        for (const auto& [col, x] : b->row(row))
          out.add(col, row,
                  x.conj() * GaussRational(weight_ratio(r.space(), to->index->monomials[row], from->index->monomials[col])));
      return out;
    }
    const auto gk = r.level(src)->gram;
    const auto gj = r.level(j)->gram;
    const ExactMatrix rhs = b->adjoint() * gj;
    return gk.rows() == 0 ? rhs : solve(gk, rhs);
  };
  return {name, -d, valid, gen};
}

GradedOperator commutator_blocks(const ModuleRealization& r, const GradedPolynomial& f, const GradedPolynomial& g,
                                 std::uint32_t K) {
  if (!f.is_homogeneous() || !g.is_homogeneous())
    throw Error(ErrorCode::mode_error, "commutator symbols must be homogeneous");
  const auto df = static_cast<std::uint32_t>(f.degree());
  const auto dg = static_cast<std::uint32_t>(g.degree());
  if (K > r.max_level()) throw Error(ErrorCode::window_error, "commutator beyond realized window");
  if (K < std::max(df, dg)) throw Error(ErrorCode::window_error, "commutator window is empty");
  const auto mf = mult_blocks(r, f, K - df);
  const auto mgs = adjoint_blocks(mult_blocks(r, g, K - dg), r);
  const auto c = compose(mf, mgs, r) - compose(mgs, mf, r);
  return c.truncated(K - std::max(df, dg)).renamed("[M[" + f.str() + "], M[" + g.str() + "]*]");
}

GradedOperator self_commutator_sum_blocks(const ModuleRealization& r, std::uint32_t K) {
  if (K + 1 > r.max_level()) throw Error(ErrorCode::window_error, "self-commutator needs level K+1");
  const std::size_t m = r.arity();
  std::optional<GradedOperator> acc;
  for (std::size_t i = 0; i < m; ++i) {
    const auto mi = mult_blocks(r, GradedPolynomial::monomial(MultiIndex::unit(m, i)), K);
    const auto mis = adjoint_blocks(mi, r);
    const auto term = compose(mis, mi, r) - compose(mi, mis, r);
    acc = acc ? *acc + term : term;
  }
  return acc->truncated(K).renamed("sum [M_i*, M_i]");
}

GradedOperator spherical_defect_blocks(const ModuleRealization& r, std::uint32_t K) {
  if (K > r.max_level()) throw Error(ErrorCode::window_error, "defect beyond realized window");
  const std::size_t m = r.arity();
  if (!r.is_quotient()) {
    // Monomials are orthogonal, so the defect is diagonal with eigenvalues
    // 1 - sum_i omega(alpha + e_i)/omega(alpha). Streamed: never cached.
    auto gen = [r](std::uint32_t k) {
      const auto monos = enumerate_level(r.arity(), k);
      std::vector<GaussRational> d;
      d.reserve(monos.size());
      for (const auto& a : monos) d.emplace_back(spherical_defect_diagonal(r.space(), a));
      return ExactMatrix::diagonal(d);
    };
    return {"I - sum M_i* M_i", 0, K, gen, false};
  }
  if (K + 1 > r.max_level()) throw Error(ErrorCode::window_error, "quotient defect needs level K+1");
  GradedOperator acc = identity_blocks(r, K);
  for (std::size_t i = 0; i < m; ++i) {
    const auto mi = mult_blocks(r, GradedPolynomial::monomial(MultiIndex::unit(m, i)), K);
    acc = acc - compose(adjoint_blocks(mi, r), mi, r);
  }
  return acc.truncated(K).renamed("I - sum M_i* M_i");
}

GradedOperator row_defect_blocks(const ModuleRealization& r, std::uint32_t K) {
  if (K > r.max_level()) throw Error(ErrorCode::window_error, "defect beyond realized window");
  const std::size_t m = r.arity();
  if (!r.is_quotient()) {
    auto gen = [r](std::uint32_t k) {
      const auto monos = enumerate_level(r.arity(), k);
      std::vector<GaussRational> d;
      d.reserve(monos.size());
      for (const auto& a : monos) {
        Rational v = 1;
        for (std::size_t i = 0; i < a.size(); ++i)
          if (a[i] > 0) v -= r.space().shift_ratio(a - MultiIndex::unit(a.size(), i), i);
        d.emplace_back(v);
      }
      return ExactMatrix::diagonal(d);
    };
    return {"I - sum M_i M_i*", 0, K, gen, false};
  }
  GradedOperator acc = identity_blocks(r, K);
  for (std::size_t i = 0; i < m; ++i) {
    const auto mi = mult_blocks(r, GradedPolynomial::monomial(MultiIndex::unit(m, i)), K);
    acc = acc - compose(mi, adjoint_blocks(mi, r), r);
  }
  return acc.truncated(K).renamed("I - sum M_i M_i*");
}

ModuleRealization quotient_realization(const WeightedShiftSpace& space, const GradedIdeal& ideal, std::uint32_t K) {
  return ModuleRealization::quotient(space, ideal, K);
}

ExactMatrix block_shift_data(const ModuleRealization& r, std::size_t i, std::uint32_t k) {
  if (i >= r.arity()) throw Error(ErrorCode::invalid_argument, "variable index out of range");
  if (k + 1 > r.max_level()) throw Error(ErrorCode::window_error, "A_{i,k} needs level k+1");
  return *mult_blocks(r, GradedPolynomial::monomial(MultiIndex::unit(r.arity(), i)), k).block(k);
}

// ------------------------------------------------------------------ float tier

namespace {

// Upper-triangular U with G / scale = U^dagger U, plus the scale itself.
struct LevelFrame {
  Eigen::MatrixXcd upper;
  Rational scale;
};

LevelFrame level_frame(const ModuleRealization& r, std::uint32_t k) {
  const auto lvl = r.level(k);
  LevelFrame f;
  if (lvl->dim == 0) {
    f.scale = 1;
    return f;
  }
  f.scale = lvl->gram.at(0, 0).re();
  const CMatrix g = to_float(lvl->gram, Rational(1) / f.scale);
  Eigen::LLT<CMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::structural_error, "Gram matrix is not positive definite");
  f.upper = llt.matrixU();
  return f;
}

bool at_most_one_per_line(const ExactMatrix& b) {
  std::vector<int> col_count(b.cols(), 0);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    if (b.row(r).size() > 1) return false;
    for (const auto& [c, x] : b.row(r))
      if (++col_count[c] > 1) return false;
  }
  return true;
}

}  // namespace

CMatrix float_block(const GradedOperator& op, const ModuleRealization& r, std::uint32_t k) {
  const auto b = op.block(k);
  const long tgt = static_cast<long>(k) + op.degree();
  if (tgt < 0 || b->rows() == 0 || b->cols() == 0) return CMatrix::Zero(b->rows(), b->cols());
  const auto t = static_cast<std::uint32_t>(tgt);
  if (!r.is_quotient()) {
    const auto from = r.level(k);
    const auto to = r.level(t);
    CMatrix out = CMatrix::Zero(b->rows(), b->cols());
    for (std::size_t row = 0; row < b->rows(); ++row)
      for (const auto& [col, x] : b->row(row)) {
        const double s = t == k && row == col
                             ? 1.0
                             : std::sqrt(to_double(weight_ratio(r.space(), to->index->monomials[row],
                                                                from->index->monomials[col])));
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = to_complex(x) * s;
      }
    return out;
  }
  const auto src = level_frame(r, k);
  const auto dst = level_frame(r, t);
  const CMatrix mid = dst.upper * to_float(*b);
  // mid * U_src^{-1} via a triangular solve on the transposed system.
  const CMatrix right = src.upper.adjoint().triangularView<Eigen::Lower>().solve(mid.adjoint()).adjoint();
  return right * std::sqrt(to_double(dst.scale / src.scale));
}

RVector singular_values(const GradedOperator& op, const ModuleRealization& r, std::uint32_t k) {
  const auto b = op.block(k);
  const auto n = static_cast<Eigen::Index>(std::min(b->rows(), b->cols()));
  if (n == 0) return RVector(0);
  if (!r.is_quotient() && at_most_one_per_line(*b)) {
    // Partial permutation pattern: singular values are the entry moduli.
    const CMatrix f = float_block(op, r, k);
    std::vector<double> s;
    for (std::size_t row = 0; row < b->rows(); ++row)
      for (const auto& [col, x] : b->row(row))
        s.push_back(std::abs(f(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))));
    s.resize(static_cast<std::size_t>(n), 0.0);
    std::sort(s.begin(), s.end(), std::greater<>());
    return Eigen::Map<RVector>(s.data(), n);
  }
  const CMatrix f = float_block(op, r, k);
  if (n > 64) return Eigen::BDCSVD<CMatrix>(f).singularValues();
  return Eigen::JacobiSVD<CMatrix>(f).singularValues();
}

double operator_norm(const GradedOperator& op, const ModuleRealization& r, std::uint32_t k) {
  const auto s = singular_values(op, r, k);
  return s.size() == 0 ? 0.0 : s.maxCoeff();
}

PNSplit pn_split(const CMatrix& h) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::not_hermitian, "pn_split needs a square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale)
    throw Error(ErrorCode::not_hermitian, "matrix is not Hermitian within tolerance");
  PNSplit out{CMatrix::Zero(h.rows(), h.cols()), CMatrix::Zero(h.rows(), h.cols())};
  if (h.rows() == 0) return out;
  const CMatrix sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  const auto& v = es.eigenvectors();
  const auto& ev = es.eigenvalues();
  out.positive = v * ev.cwiseMax(0.0).asDiagonal() * v.adjoint();
  out.negative = v * (-ev).cwiseMax(0.0).asDiagonal() * v.adjoint();
  return out;
}

SchattenSeries schatten_partial(const GradedOperator& op, const ModuleRealization& r, double p, std::uint32_t K) {
  if (p < 1) throw Error(ErrorCode::invalid_argument, "Schatten exponent must be >= 1");
  if (K > op.valid_through())
    throw Error(ErrorCode::window_error, op.name() + ": Schatten sum to level " + std::to_string(K) +
                                             " exceeds the valid window " + std::to_string(op.valid_through()));
  SchattenSeries s;
  s.p = p;
  double acc = 0;
  for (std::uint32_t k = 0; k <= K; ++k) {
    const auto b = op.block(k);
    double term = 0;
    if (op.degree() == 0 && b->is_diagonal()) {
      // Diagonal levels often repeat one value; convert each distinct run once.
      const GaussRational* last = nullptr;
      double last_term = 0;
      for (std::size_t i = 0; i < b->rows(); ++i)
        for (const auto& [c, x] : b->row(i)) {
          if (!last || !(*last == x)) {
            last = &x;
            last_term = std::pow(std::abs(to_complex(x)), p);
          }
          term += last_term;
        }
    } else {
      const auto sv = singular_values(op, r, k);
      for (Eigen::Index i = 0; i < sv.size(); ++i) term += std::pow(sv(i), p);
    }
    acc += term;
    s.level_terms.push_back(term);
    s.partial_sums.push_back(acc);
  }
  return s;
}

}  // namespace wsm
