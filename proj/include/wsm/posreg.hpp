#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsm/ideal.hpp"
#include "wsm/report.hpp"
#include "wsm/space.hpp"

namespace wsm {

struct HigherTerm {
  Rational a;
  MultiIndex alpha;  // |alpha| >= 2
};

// P(z) = sum_{i<=m} a_i z_i + sum_j a_j z^{alpha_j} with a_i > 0 and a_j >= 0.
class PositiveRegularPoly {
 public:
  PositiveRegularPoly(std::vector<Rational> linear, std::vector<HigherTerm> higher);
  // m is the polynomial's arity; every z_i must appear linearly with a positive
  // rational coefficient, there is no constant term and all coefficients are >= 0.
  static PositiveRegularPoly from_polynomial(const GradedPolynomial& p);

  [[nodiscard]] std::size_t arity() const noexcept { return linear_.size(); }
  [[nodiscard]] std::size_t extra() const noexcept { return higher_.size(); }
  [[nodiscard]] const std::vector<Rational>& linear() const noexcept { return linear_; }
  [[nodiscard]] const std::vector<HigherTerm>& higher() const noexcept { return higher_; }
  // Coefficient attached to Z_i in the m + K' variable model (i 0-based).
  [[nodiscard]] const Rational& coefficient(std::size_t i) const;
  [[nodiscard]] std::uint64_t max_higher_degree() const noexcept;
  [[nodiscard]] GradedPolynomial polynomial() const;
  [[nodiscard]] std::string str() const { return polynomial().str(); }

 private:
  std::vector<Rational> linear_;
  std::vector<HigherTerm> higher_;
};

// all_plus: kernel (1 - sum_all a_i z^{alpha_i} w^{alpha_i})^{-1}. printed: the
// higher-order sum enters with the opposite sign, as typeset.
enum class SignConvention { all_plus, printed };

using DeltaTable = std::map<MultiIndex, Rational>;

// delta_0 = 1, delta_beta = sum_i a_i delta_{beta - e_i} +/- sum_j a_j delta_{beta - alpha_j};
// sign_convention error as soon as some delta_beta <= 0.
DeltaTable delta_coefficients(const PositiveRegularPoly& p, std::uint32_t D,
                              SignConvention sign = SignConvention::all_plus);

// omega(beta) = 1 / delta_beta for |beta| <= D.
WeightedShiftSpace hp_space(const PositiveRegularPoly& p, std::uint32_t D);

struct DefectEntry {
  MultiIndex beta;
  Rational value;
  Rational expected;
};

struct DefectProjectionCheck {
  std::vector<DefectEntry> entries;
  bool pass = true;
  std::optional<MultiIndex> witness;
};

// Diagonal of I - sum_i a_i M_i M_i^* - sum_j a_j M^{alpha_j} M^{alpha_j *} on H_P:
// 1 at the constant, 0 at every z^beta with 0 < |beta| <= D.
DefectProjectionCheck defect_projection_check(const PositiveRegularPoly& p, std::uint32_t D);

// Variables Z_1..Z_m, Z_{m+1}..Z_{m+K'}. With Z_i = sqrt(a_i) Y_i the generators
// Q_j = Z_{m+j} - lambda_j Z^{alpha_j} become sqrt(a_{m+j}) (Y_{m+j} - Y^{alpha_j}),
// so J_P is computed over Q in Y coordinates.
struct JPData {
  std::size_t m = 0;
  std::size_t extra = 0;
  std::vector<Rational> lambda_squared;
  std::vector<std::optional<Rational>> lambda;  // when the square root is rational
  std::vector<std::string> generators;          // Q_j in Z coordinates
  std::vector<GradedPolynomial> rescaled;       // Y_{m+j} - Y^{alpha_j}
  WeightVector n;
  bool quasi_homogeneous = false;
};

JPData jp_data(const PositiveRegularPoly& p);
// J_P in Y coordinates, quasi mode for n (empty when K' = 0).
GradedIdeal jp_ideal(const JPData& jp);

struct XPLevel {
  std::uint32_t level = 0;
  std::vector<MultiIndex> domain;       // Z^beta with wdeg(beta) = level
  std::vector<MultiIndex> codomain;     // z^gamma with |gamma| = level
  std::vector<std::size_t> target;      // row of sigma(beta) for each column
  std::vector<Rational> coeff_squared;  // |coefficient|^2 = prod a_i^{beta_i}
  std::vector<Rational> sv_squared;     // exact squared singular values, one per row
  std::vector<double> singular_values;  // float tier (SVD of the normalized matrix)
};

// X_P Z^beta = prod sqrt(a_i)^{beta_i} z^{sigma(beta)} from the (m+K')-variable
// Drury-Arveson space into H_P, per weighted level 0..l_max.
std::vector<XPLevel> xp_blocks(const PositiveRegularPoly& p, std::uint32_t l_max);

struct KernelLevel {
  std::uint32_t level = 0;
  std::uint64_t kernel_dim = 0;
  std::uint64_t ideal_dim = 0;
  bool equal = false;
  bool contained = false;  // J_P level maps to zero exactly
};

std::vector<KernelLevel> kernel_vs_ideal(const PositiveRegularPoly& p, std::uint32_t l_max);

struct ModuleMapCheck {
  bool pass = true;
  std::size_t checked = 0;
  std::string witness;
};

// X_P M_{Z_i} = M_{x_i} X_P on squared data, and X_P (Q_j Z^beta) = 0, i.e.
// lambda_j^2 a^{alpha_j} = a_{m+j}, on all levels up to l_max.
ModuleMapCheck xp_module_map_check(const PositiveRegularPoly& p, const JPData& jp, std::uint32_t l_max);
ModuleMapCheck xp_module_map_check(const PositiveRegularPoly& p, std::uint32_t l_max);

inline constexpr double kContractiveSlack = 1e-10;

Report preg_delta_report(const PositiveRegularPoly& p, std::uint32_t D, SignConvention sign);
Report preg_kernel_report(const PositiveRegularPoly& p, std::uint32_t l_max);
// All checks together: defect projection to degree D, J_P data,
// module map, kernel equality and contractivity to weighted level l_max.
Report preg_check_report(const PositiveRegularPoly& p, std::uint32_t l_max, std::uint32_t D);

}  // namespace wsm
