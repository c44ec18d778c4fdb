#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wsm/operators.hpp"
#include "wsm/report.hpp"

namespace wsm {

// ---- essential normality -------------------------------------------------

struct DecayFit {
  double slope = 0;  // least-squares slope of log(norm) against log(k+1); NaN if undefined
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  bool vanishing = false;  // every norm in the window below kVanishingNorm
};

inline constexpr double kVanishingNorm = 1e-13;
inline constexpr double kDecaySlope = -0.1;

// Fit over the upper half [K/2, K] of a per-level norm series.
DecayFit fit_decay(const std::vector<double>& norms);

// Levels 0..K of all [M_{z_i}, M_{z_j}^*] blocks and of the spherical defect;
// the realization must reach level K+1.
Report normality_report(const ModuleRealization& r, std::uint32_t K, const std::vector<double>& p_list,
                        unsigned jobs = 1);

// ---- trace identity --------------------------------------------------------

struct TraceRecord {
  std::uint32_t k = 0;
  Rational computed;         // Tr(sum_i [M_i^*, M_i]) on H_k
  Integer telescoping;       // dim H_k - dim H_{k-1}
  Integer binomial_formula;  // C(m+k-1, k-1) - C(m+k-2, k-2), k >= 1
  bool defect_zero = false;  // spherical defect vanishes on levels k-1 and k
  bool equal = false;        // computed == telescoping
};

TraceRecord trace_identity(const WeightedShiftSpace& space, std::uint32_t k);
Report trace_report(const WeightedShiftSpace& space, std::uint32_t K);

// ---- summability -----------------------------------------------------------

enum class Summability { divergent_trend, convergent_trend, inconclusive };
std::string to_string(Summability s);

inline constexpr double kIncrementFloor = 0.05;
inline constexpr double kTailCeiling = 0.05;
inline constexpr unsigned kMinDoublings = 4;

struct SummabilityRecord {
  double p = 1;
  std::size_t m = 1;
  Summability outcome = Summability::inconclusive;
  // (K, S(K) - S(K/2)) for K = 2^j up to the series end, plus the final K.
  std::vector<std::pair<std::uint32_t, double>> increments;
  double last_increment = 0;
  double slope = 0;          // decay exponent of level terms (negative)
  double tail_estimate = 0;  // estimated sum beyond K; infinite when slope >= -1
  Verdict verdict = Verdict::reported_only;
  std::string detail;
};

SummabilityRecord summability_verdict(const SchattenSeries& s, std::size_t m, double floor = kIncrementFloor);

// ---- quotient shift weights ------------------------------------------------

struct QuotientWeights {
  std::size_t variable = 0;            // 0-based index of the measured shift
  std::vector<Rational> squared;       // |w_k|^2 exact, k = 0..K
  std::vector<double> moduli;          // |w_k|
  std::optional<Rational> scale;       // squared normalization (hardy-ball only)
  std::vector<double> normalized;      // |w_k| * sqrt(scale)
  std::vector<double> deviation;       // |normalized - 1|
};

// Ideal <a z1 + b z2> in m = 2. Measures M_{z1} compressed to the quotient
// (M_{z2} when b = 0). Each S_k^perp must be one-dimensional.
QuotientWeights quotient_shift_weights(const WeightedShiftSpace& space, const GradedPolynomial& generator,
                                       std::uint32_t K);
Report qweights_report(const WeightedShiftSpace& space, const GradedPolynomial& generator, std::uint32_t K);

// ---- trace inequality ------------------------------------------------------

inline constexpr double kSection5Slack = 1e-8;

struct Section5Level {
  std::uint32_t k = 0;
  std::size_t dim = 0;
  GaussRational x_trace;
  double x_norm = 0;
  double p_trace = 0;     // Tr(sum_i P_{i,k})
  double n_norm_sum = 0;  // sum_i ||N_{i,k}||
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

// sup_k dim S_k^perp; scenario error unless the Hilbert polynomial has degree 0.
std::size_t bounded_quotient_dimension(const ModuleRealization& q);
// Needs level k+1.
Section5Level section5_check(const ModuleRealization& q, std::uint32_t k, std::size_t m0);
Report section5_report(const ModuleRealization& q, std::uint32_t K, unsigned jobs = 1);

// ---- Koszul complex --------------------------------------------------------

enum class KoszulModule { full, ideal, quotient };
std::string to_string(KoszulModule k);

struct KoszulResult {
  KoszulModule module = KoszulModule::full;
  std::size_t m = 0;
  std::uint32_t d_max = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> homology;  // (p, t) -> dim, nonzero only
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> chain_dims;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> ranks;  // rank of d_p at degree t
  bool d_squared_zero = false;
  Integer euler;
  Integer index;
  bool sufficient_degree = false;  // d_max >= max generator degree + m
  bool stabilized = false;         // last three degrees carry no homology
};

KoszulResult koszul_euler(KoszulModule module, std::size_t m, const std::optional<GradedIdeal>& ideal,
                          std::uint32_t d_max);
Report koszul_report(KoszulModule module, std::size_t m, const std::optional<GradedIdeal>& ideal,
                     std::uint32_t d_max);

}  // namespace wsm
