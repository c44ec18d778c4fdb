#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wsm/ideal.hpp"
#include "wsm/linalg.hpp"
#include "wsm/space.hpp"

namespace wsm {

// One graded level of a realized module. For the full space the coordinates
// are the monomials themselves; for a quotient they are the columns of
// `complement`, a basis of S_k^perp written in monomial coordinates.
struct RealizedLevel {
  std::uint32_t k = 0;
  std::shared_ptr<const LevelIndex> index;
  std::vector<SparseVector> ideal_rows;  // RREF basis of S_k (quotients only)
  std::vector<SparseVector> complement;  // basis of S_k^perp (quotients only)
  ExactMatrix gram;                      // Gram matrix of `complement` (quotients only)
  std::size_t dim = 0;
};

// The full module H or the quotient H / [I] for a plain-homogeneous ideal I,
// realized level by level up to max_level. Levels are built on first use.
class ModuleRealization {
 public:
  static ModuleRealization full(WeightedShiftSpace space, std::uint32_t max_level);
  static ModuleRealization quotient(WeightedShiftSpace space, GradedIdeal ideal, std::uint32_t max_level);

  [[nodiscard]] const WeightedShiftSpace& space() const noexcept { return state_->space; }
  [[nodiscard]] const std::optional<GradedIdeal>& ideal() const noexcept { return state_->ideal; }
  [[nodiscard]] bool is_quotient() const noexcept { return state_->ideal.has_value(); }
  [[nodiscard]] std::size_t arity() const noexcept { return state_->space.arity(); }
  [[nodiscard]] std::uint32_t max_level() const noexcept { return state_->max_level; }

  // Throws window_error beyond max_level. Quotient levels are cached; full
  // space levels are cheap and rebuilt on request.
  [[nodiscard]] std::shared_ptr<const RealizedLevel> level(std::uint32_t k) const;
  [[nodiscard]] std::size_t dim(std::uint32_t k) const;
  // dim S_k (0 for the full space).
  [[nodiscard]] std::size_t ideal_dim(std::uint32_t k) const { return level(k)->ideal_rows.size(); }
  [[nodiscard]] std::vector<GradedPolynomial> complement_basis(std::uint32_t k) const;

  // Exact Gram matrix of level k in the weighted inner product. For the full
  // space this is diag(omega) and needs absolute weights.
  [[nodiscard]] ExactMatrix gram(std::uint32_t k) const;

 private:
  struct State {
    State(WeightedShiftSpace s, std::optional<GradedIdeal> i, std::uint32_t k)
        : space(std::move(s)), ideal(std::move(i)), max_level(k) {}
    WeightedShiftSpace space;
    std::optional<GradedIdeal> ideal;
    std::uint32_t max_level;
    mutable std::mutex mutex;
    mutable std::map<std::uint32_t, std::shared_ptr<const RealizedLevel>> levels;
  };
  explicit ModuleRealization(std::shared_ptr<State> s) : state_(std::move(s)) {}
  std::shared_ptr<const RealizedLevel> build(std::uint32_t k) const;

  std::shared_ptr<State> state_;
};

// omega(beta) / omega(alpha) via chains of shift ratios; never forms absolute weights.
Rational weight_ratio(const WeightedShiftSpace& space, const MultiIndex& beta, const MultiIndex& alpha);

enum class Tier { exact, floating };

// Degree-d graded operator: block k maps level-k coordinates to level-(k+d)
// coordinates. Blocks exist exactly for 0 <= k <= valid_through; asking for
// anything beyond is a window error. Blocks are produced on demand by a
// generator and cached unless the operator was built as streaming.
class GradedOperator {
 public:
  using Block = std::shared_ptr<const ExactMatrix>;
  using Generator = std::function<ExactMatrix(std::uint32_t)>;

  GradedOperator() = default;
  GradedOperator(std::string name, int degree, std::uint32_t valid_through, Generator gen, bool cache = true);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] std::uint32_t valid_through() const noexcept { return valid_through_; }
  [[nodiscard]] Tier tier() const noexcept { return Tier::exact; }
  [[nodiscard]] Block block(std::uint32_t k) const;

  [[nodiscard]] GradedOperator scaled(const GaussRational& c) const;
  [[nodiscard]] GradedOperator truncated(std::uint32_t valid_through) const;
  [[nodiscard]] GradedOperator renamed(std::string name) const;

 private:
  struct Store {
    Generator gen;
    bool cache = true;
    std::mutex mutex;
    std::map<std::uint32_t, Block> blocks;
  };
  std::string name_;
  int degree_ = 0;
  std::uint32_t valid_through_ = 0;
  std::shared_ptr<Store> store_;
};

// A after B; the window shrinks so every block only touches valid data.
GradedOperator compose(const GradedOperator& a, const GradedOperator& b, const ModuleRealization& r);
GradedOperator operator+(const GradedOperator& a, const GradedOperator& b);
GradedOperator operator-(const GradedOperator& a, const GradedOperator& b);

GradedOperator identity_blocks(const ModuleRealization& r, std::uint32_t K);

// Compression of M_p to the realized module, levels 0..K (p homogeneous).
GradedOperator mult_blocks(const ModuleRealization& r, const GradedPolynomial& p, std::uint32_t K);
// Weighted adjoint: block (k+d -> k) = G_k^{-1} B_k^dagger G_{k+d}.
GradedOperator adjoint_blocks(const GradedOperator& op, const ModuleRealization& r);
// [M_f, M_g^*] with window K - max(deg f, deg g).
GradedOperator commutator_blocks(const ModuleRealization& r, const GradedPolynomial& f, const GradedPolynomial& g,
                                 std::uint32_t K);
// [M_f, M_g^*] = M_f M_g^* - M_g^* M_f, the convention of condition (B).
// sum_i [M_{z_i}^*, M_{z_i}] on levels 0..K-1 (so level K+1 is needed).
GradedOperator self_commutator_sum_blocks(const ModuleRealization& r, std::uint32_t K);
// I - sum_i M_i^* M_i (column/spherical defect) on levels 0..K.
GradedOperator spherical_defect_blocks(const ModuleRealization& r, std::uint32_t K);
// I - sum_i M_i M_i^* (row defect) on levels 0..K.
GradedOperator row_defect_blocks(const ModuleRealization& r, std::uint32_t K);

ModuleRealization quotient_realization(const WeightedShiftSpace& space, const GradedIdeal& ideal, std::uint32_t K);

// A_{i,k}: S_k^perp -> S_{k+1}^perp for multiplication by z_i (i is 0-based).
ExactMatrix block_shift_data(const ModuleRealization& r, std::size_t i, std::uint32_t k);

// Float tier: block k in orthonormal coordinates of the weighted inner product.
CMatrix float_block(const GradedOperator& op, const ModuleRealization& r, std::uint32_t k);
RVector singular_values(const GradedOperator& op, const ModuleRealization& r, std::uint32_t k);
double operator_norm(const GradedOperator& op, const ModuleRealization& r, std::uint32_t k);

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kPsdSlack = 1e-9;

struct PNSplit {
  CMatrix positive;
  CMatrix negative;
};
// H = P - N with P, N >= 0 and PN = 0, from the spectral decomposition.
PNSplit pn_split(const CMatrix& h);

struct SchattenSeries {
  double p = 1;
  std::vector<double> level_terms;  // sum of sigma^p on each level
  std::vector<double> partial_sums;
  [[nodiscard]] double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};
SchattenSeries schatten_partial(const GradedOperator& op, const ModuleRealization& r, double p, std::uint32_t K);

}  // namespace wsm
