#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wsm/linalg.hpp"
#include "wsm/polynomial.hpp"

namespace wsm {

// Monomial basis of a (plain or weighted) level with its coordinate lookup.
struct LevelIndex {
  std::vector<MultiIndex> monomials;
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> position;

  explicit LevelIndex(std::vector<MultiIndex> monos);
  [[nodiscard]] std::size_t size() const noexcept { return monomials.size(); }
  [[nodiscard]] SparseVector coordinates(const GradedPolynomial& p) const;
  [[nodiscard]] GradedPolynomial polynomial(const SparseVector& v, std::size_t m) const;
};

// Exact reduced echelon basis of one level of an ideal, in LevelIndex coordinates.
struct IdealLevel {
  std::shared_ptr<const LevelIndex> index;
  std::vector<SparseVector> basis;  // RREF rows
  std::vector<std::size_t> pivots;
};

enum class HomogeneityMode { plain, quasi };

class GradedIdeal {
 public:
  // Plain mode: every generator must be homogeneous.
  GradedIdeal(std::size_t m, std::vector<GradedPolynomial> generators);
  // Quasi mode: every generator must be quasi-homogeneous for the weight n.
  GradedIdeal(std::size_t m, std::vector<GradedPolynomial> generators, WeightVector n);

  GradedIdeal(const GradedIdeal& other);
  GradedIdeal& operator=(const GradedIdeal& other);

  [[nodiscard]] std::size_t arity() const noexcept { return m_; }
  [[nodiscard]] HomogeneityMode mode() const noexcept { return mode_; }
  [[nodiscard]] const std::optional<WeightVector>& weight() const noexcept { return weight_; }
  [[nodiscard]] const std::vector<GradedPolynomial>& generators() const noexcept { return gens_; }
  [[nodiscard]] bool is_zero() const noexcept { return gens_.empty(); }
  // Every generator homogeneous in the plain grading.
  [[nodiscard]] bool plain_homogeneous() const noexcept;
  [[nodiscard]] std::uint64_t max_generator_degree() const noexcept;

  // I_k = span{z^beta g_j : |beta| + deg g_j = k}; mode error unless plain_homogeneous().
  [[nodiscard]] std::shared_ptr<const IdealLevel> level(std::uint32_t k) const;
  // J_l = span{z^beta g_j : wdeg(beta) + wdeg(g_j) = l}; quasi mode only.
  [[nodiscard]] std::shared_ptr<const IdealLevel> weighted_level(std::uint32_t l) const;

 private:
  std::shared_ptr<const IdealLevel> build(std::uint32_t degree, bool weighted) const;

  std::size_t m_;
  std::vector<GradedPolynomial> gens_;
  HomogeneityMode mode_;
  std::optional<WeightVector> weight_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::uint32_t, std::shared_ptr<const IdealLevel>> plain_cache_;
  mutable std::map<std::uint32_t, std::shared_ptr<const IdealLevel>> weighted_cache_;
};

std::vector<GradedPolynomial> graded_basis(const GradedIdeal& ideal, std::uint32_t k);
std::vector<GradedPolynomial> weighted_graded_basis(const GradedIdeal& ideal, std::uint32_t l);

// dim H_k - dim I_k.
std::uint64_t hilbert_function(const GradedIdeal& ideal, std::uint32_t k);

struct HilbertRow {
  std::uint32_t k;
  std::uint64_t dim_ideal;
  std::uint64_t dim_level;
  std::uint64_t dim_quotient;
};

struct HilbertData {
  std::vector<HilbertRow> table;
  unsigned window = 5;
  bool stabilized = false;
  // Coefficients c_0..c_d of the eventual polynomial sum_j c_j k^j (empty if not stabilized).
  std::vector<Rational> coefficients;
  int degree = -1;
  std::uint32_t stabilization_degree = 0;
};

inline constexpr unsigned kHilbertSamuelWindow = 5;

// Fits the eventual polynomial by forward differences on the last window+1
// values and confirms it on the window values before them.
HilbertData hilbert_samuel_fit(const GradedIdeal& ideal, std::uint32_t k_max,
                               unsigned window = kHilbertSamuelWindow);

struct ResidueLevel {
  std::uint32_t level;
  std::uint64_t dim_component;
  std::vector<std::pair<MultiIndex, std::uint64_t>> class_dims;
  std::uint64_t defect;  // dim J_l - sum of class dims
};

std::vector<ResidueLevel> residue_decompose(const GradedIdeal& ideal, std::uint32_t l_max);

}  // namespace wsm
