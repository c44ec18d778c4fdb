#include "wsm/ideal.hpp"

#include <algorithm>

#include "wsm/error.hpp"

namespace wsm {

LevelIndex::LevelIndex(std::vector<MultiIndex> monos) : monomials(std::move(monos)) {
  position.reserve(monomials.size());
  for (std::size_t i = 0; i < monomials.size(); ++i) position.emplace(monomials[i], i);
}

SparseVector LevelIndex::coordinates(const GradedPolynomial& p) const {
  std::map<std::size_t, GaussRational> m;
  for (const auto& [alpha, c] : p.terms()) {
    auto it = position.find(alpha);
    if (it == position.end())
      throw Error(ErrorCode::structural_error, "monomial " + alpha.str() + " is not in this level");
    m.emplace(it->second, c);
  }
  return make_sparse(m);
}

GradedPolynomial LevelIndex::polynomial(const SparseVector& v, std::size_t m) const {
  GradedPolynomial::Terms t;
  for (const auto& [c, x] : v) t.emplace(monomials.at(c), x);
  return {m, std::move(t)};
}

namespace {

std::vector<GradedPolynomial> nonzero(std::size_t m, std::vector<GradedPolynomial> gens) {
  std::vector<GradedPolynomial> out;
  for (auto& g : gens) {
    if (g.arity() != m) throw Error(ErrorCode::dimension_mismatch, "generator arity does not match ideal");
    if (!g.is_zero()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

GradedIdeal::GradedIdeal(std::size_t m, std::vector<GradedPolynomial> generators)
    : m_(m), gens_(nonzero(m, std::move(generators))), mode_(HomogeneityMode::plain) {
  if (m_ == 0) throw Error(ErrorCode::invalid_arity, "variable count must be >= 1");
  for (const auto& g : gens_)
    if (!g.is_homogeneous()) throw Error(ErrorCode::mode_error, "generator " + g.str() + " is not homogeneous");
}

GradedIdeal::GradedIdeal(std::size_t m, std::vector<GradedPolynomial> generators, WeightVector n)
    : m_(m), gens_(nonzero(m, std::move(generators))), mode_(HomogeneityMode::quasi), weight_(std::move(n)) {
  if (m_ == 0) throw Error(ErrorCode::invalid_arity, "variable count must be >= 1");
  if (weight_->size() != m_) throw Error(ErrorCode::dimension_mismatch, "weight vector arity mismatch");
  for (const auto& g : gens_)
    if (!g.quasi_degree(*weight_))
      throw Error(ErrorCode::mode_error, "generator " + g.str() + " is not quasi-homogeneous for " + weight_->str());
}

GradedIdeal::GradedIdeal(const GradedIdeal& other)
    : m_(other.m_), gens_(other.gens_), mode_(other.mode_), weight_(other.weight_) {
  std::lock_guard lock(other.cache_mutex_);
  plain_cache_ = other.plain_cache_;
  weighted_cache_ = other.weighted_cache_;
}

GradedIdeal& GradedIdeal::operator=(const GradedIdeal& other) {
  if (this == &other) return *this;
  GradedIdeal tmp(other);
  std::scoped_lock lock(cache_mutex_);
  m_ = tmp.m_;
  gens_ = std::move(tmp.gens_);
  mode_ = tmp.mode_;
  weight_ = std::move(tmp.weight_);
  plain_cache_ = std::move(tmp.plain_cache_);
  weighted_cache_ = std::move(tmp.weighted_cache_);
  return *this;
}

bool GradedIdeal::plain_homogeneous() const noexcept {
  return std::all_of(gens_.begin(), gens_.end(), [](const auto& g) { return g.is_homogeneous(); });
}

std::uint64_t GradedIdeal::max_generator_degree() const noexcept {
  std::uint64_t d = 0;
  for (const auto& g : gens_) d = std::max(d, g.degree());
  return d;
}

std::shared_ptr<const IdealLevel> GradedIdeal::build(std::uint32_t degree, bool weighted) const {
  auto index = std::make_shared<const LevelIndex>(weighted ? enumerate_weighted_level(*weight_, degree)
                                                           : enumerate_level(m_, degree));
  RowEchelon ech(index->size());
  for (const auto& g : gens_) {
    const std::uint64_t gd = weighted ? *g.quasi_degree(*weight_) : g.degree();
    if (gd > degree) continue;
    const auto shift = static_cast<std::uint32_t>(degree - gd);
    const auto multipliers = weighted ? enumerate_weighted_level(*weight_, shift) : enumerate_level(m_, shift);
    for (const auto& beta : multipliers) ech.insert(index->coordinates(g.shifted(beta)));
  }
  auto lvl = std::make_shared<IdealLevel>();
  lvl->index = std::move(index);
  lvl->basis = ech.rref();
  lvl->pivots = ech.pivot_columns();
  return lvl;
}

std::shared_ptr<const IdealLevel> GradedIdeal::level(std::uint32_t k) const {
  if (!plain_homogeneous())
    throw Error(ErrorCode::mode_error, "plain graded levels need homogeneous generators");
  {
    std::lock_guard lock(cache_mutex_);
    auto it = plain_cache_.find(k);
    if (it != plain_cache_.end()) return it->second;
  }
  auto lvl = build(k, false);
  std::lock_guard lock(cache_mutex_);
  return plain_cache_.try_emplace(k, std::move(lvl)).first->second;
}

std::shared_ptr<const IdealLevel> GradedIdeal::weighted_level(std::uint32_t l) const {
  if (mode_ != HomogeneityMode::quasi) throw Error(ErrorCode::mode_error, "weighted levels need a quasi-mode ideal");
  {
    std::lock_guard lock(cache_mutex_);
    auto it = weighted_cache_.find(l);
    if (it != weighted_cache_.end()) return it->second;
  }
  auto lvl = build(l, true);
  std::lock_guard lock(cache_mutex_);
  return weighted_cache_.try_emplace(l, std::move(lvl)).first->second;
}

std::vector<GradedPolynomial> graded_basis(const GradedIdeal& ideal, std::uint32_t k) {
  const auto lvl = ideal.level(k);
  std::vector<GradedPolynomial> out;
  for (const auto& row : lvl->basis) out.push_back(lvl->index->polynomial(row, ideal.arity()));
  return out;
}

std::vector<GradedPolynomial> weighted_graded_basis(const GradedIdeal& ideal, std::uint32_t l) {
  const auto lvl = ideal.weighted_level(l);
  std::vector<GradedPolynomial> out;
  for (const auto& row : lvl->basis) out.push_back(lvl->index->polynomial(row, ideal.arity()));
  return out;
}

std::uint64_t hilbert_function(const GradedIdeal& ideal, std::uint32_t k) {
  const auto lvl = ideal.level(k);
  return lvl->index->size() - lvl->basis.size();
}

namespace {

// Monomial-basis coefficients of sum_j d_j * C(k - k0, j).
std::vector<Rational> newton_to_monomial(const std::vector<Rational>& diffs, long k0) {
  std::vector<Rational> coeffs(diffs.size(), Rational(0));
  std::vector<Rational> basis{Rational(1)};  // C(k - k0, j) as a polynomial in k
  for (std::size_t j = 0; j < diffs.size(); ++j) {
    for (std::size_t i = 0; i < basis.size(); ++i) coeffs[i] += diffs[j] * basis[i];
    // basis <- basis * (k - k0 - j) / (j + 1)
    std::vector<Rational> next(basis.size() + 1, Rational(0));
    const Rational shift(-(k0 + static_cast<long>(j)));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i];
      next[i] += basis[i] * shift;
    }
    for (auto& x : next) x /= static_cast<long>(j + 1);
    basis = std::move(next);
  }
  while (!coeffs.empty() && sgn(coeffs.back()) == 0) coeffs.pop_back();
  return coeffs;
}

Rational evaluate(const std::vector<Rational>& coeffs, long k) {
  Rational v = 0;
  for (std::size_t j = coeffs.size(); j-- > 0;) v = v * k + coeffs[j];
  return v;
}

}  // namespace

HilbertData hilbert_samuel_fit(const GradedIdeal& ideal, std::uint32_t k_max, unsigned window) {
  if (window == 0) throw Error(ErrorCode::invalid_argument, "window must be >= 1");
  if (k_max < 2 * window + ideal.max_generator_degree())
    throw Error(ErrorCode::invalid_argument,
                "k_max must be at least 2*window + max generator degree (" +
                    std::to_string(2 * window + ideal.max_generator_degree()) + ")");
  HilbertData data;
  data.window = window;
  std::vector<Rational> values;
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    const auto lvl = ideal.level(k);
    const std::uint64_t dl = lvl->index->size();
    const std::uint64_t di = lvl->basis.size();
    data.table.push_back({k, di, dl, dl - di});
    values.emplace_back(static_cast<unsigned long>(dl - di));
  }
  const long k0 = static_cast<long>(k_max) - static_cast<long>(window);
  std::vector<Rational> diffs;
  std::vector<Rational> row(values.begin() + k0, values.end());
  while (!row.empty()) {
    diffs.push_back(row.front());
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
  }
  const auto coeffs = newton_to_monomial(diffs, k0);
  for (long k = k0 - static_cast<long>(window); k < k0; ++k)
    if (evaluate(coeffs, k) != values[static_cast<std::size_t>(k)]) return data;
  data.stabilized = true;
  data.coefficients = coeffs;
  data.degree = static_cast<int>(coeffs.size()) - 1;
  long K = k0 - static_cast<long>(window);
  while (K > 0 && evaluate(coeffs, K - 1) == values[static_cast<std::size_t>(K - 1)]) --K;
  data.stabilization_degree = static_cast<std::uint32_t>(K);
  return data;
}

std::vector<ResidueLevel> residue_decompose(const GradedIdeal& ideal, std::uint32_t l_max) {
  if (ideal.mode() != HomogeneityMode::quasi)
    throw Error(ErrorCode::mode_error, "residue decomposition needs a quasi-mode ideal");
  const auto& n = *ideal.weight();
  const auto classes = residue_classes(n);
  std::vector<ResidueLevel> out;
  for (std::uint32_t l = 0; l <= l_max; ++l) {
    const auto lvl = ideal.weighted_level(l);
    ResidueLevel rl{l, lvl->basis.size(), {}, 0};
    std::uint64_t sum = 0;
    for (const auto& cls : classes) {
      // dim(J ∩ V) = dim J - rank of J projected onto the coordinates outside V.
      RowEchelon outside(lvl->index->size());
      for (const auto& row : lvl->basis) {
        SparseVector proj;
        for (const auto& [c, x] : row)
          if (!(residue_of(lvl->index->monomials[c], n) == cls)) proj.emplace_back(c, x);
        outside.insert(proj);
      }
      const std::uint64_t d = lvl->basis.size() - outside.rank();
      rl.class_dims.emplace_back(cls, d);
      sum += d;
    }
    rl.defect = rl.dim_component - sum;
    out.push_back(std::move(rl));
  }
  return out;
}

}  // namespace wsm
