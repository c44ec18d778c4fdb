#include "wsm/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wsm/error.hpp"
#include "wsm/parallel.hpp"

namespace wsm {

namespace {

GradedPolynomial variable(std::size_t m, std::size_t i) { return GradedPolynomial::monomial(MultiIndex::unit(m, i)); }

nlohmann::ordered_json space_json(const WeightedShiftSpace& s) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(s.kind());
  j["name"] = s.name();
  j["m"] = s.arity();
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.params()) j["params"][k] = v;
  return j;
}

nlohmann::ordered_json ideal_json(const std::optional<GradedIdeal>& ideal) {
  auto gens = nlohmann::ordered_json::array();
  if (ideal)
    for (const auto& g : ideal->generators()) gens.push_back(g.str());
  return gens;
}

double spectral_norm(const CMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Integer binomial(long n, long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

}  // namespace

// ------------------------------------------------------------------ decay fit

DecayFit fit_decay(const std::vector<double>& norms) {
  DecayFit f;
  f.slope = std::numeric_limits<double>::quiet_NaN();
  if (norms.empty()) return f;
  const auto K = static_cast<std::uint32_t>(norms.size() - 1);
  f.from = K / 2;
  f.to = K;
  f.vanishing = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::uint32_t k = f.from; k <= f.to; ++k) {
    if (norms[k] >= kVanishingNorm) f.vanishing = false;
    if (norms[k] <= 0) continue;
    const double x = std::log(k + 1.0);
    const double y = std::log(norms[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 3) {
    const double den = n * sxx - sx * sx;
    if (den > 0) f.slope = (n * sxy - sx * sy) / den;
  }
  return f;
}

namespace {

Verdict decay_verdict(const DecayFit& f) {
  if (f.vanishing) return Verdict::trend_consistent;
  if (std::isnan(f.slope)) return Verdict::reported_only;
  return f.slope <= kDecaySlope ? Verdict::trend_consistent : Verdict::trend_inconsistent;
}

}  // namespace

// ------------------------------------------------------------------ normality

Report normality_report(const ModuleRealization& r, std::uint32_t K, const std::vector<double>& p_list,
                        unsigned jobs) {
  if (static_cast<std::uint64_t>(K) + 1 > r.max_level())
    throw Error(ErrorCode::window_error, "normality report to level " + std::to_string(K) + " needs level " +
                                             std::to_string(K + 1) + " realized");
  const std::size_t m = r.arity();
  Report rep;
  rep.scenario = "normality";
  rep.params["tool_version"] = kToolVersion;
  rep.params["space"] = space_json(r.space());
  rep.params["ideal"] = ideal_json(r.ideal());
  rep.params["max_level"] = K;
  rep.params["schatten"] = p_list;
  rep.params["decay_slope_threshold"] = kDecaySlope;
  rep.params["vanishing_norm"] = kVanishingNorm;

  std::vector<std::vector<GradedOperator>> comm(m, std::vector<GradedOperator>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) comm[i][j] = commutator_blocks(r, variable(m, i), variable(m, j), K + 1);
  const auto defect = spherical_defect_blocks(r, K);
  const auto selfsum = self_commutator_sum_blocks(r, K);

  struct LevelData {
    std::size_t dim = 0;
    double defect_norm = 0;
    bool defect_zero = false;
    GaussRational self_trace;
    std::vector<double> comm_norms;
    bool hermitian = true;
  };
  std::vector<LevelData> levels(K + 1);
  parallel_for(K + 1, jobs, [&](std::size_t idx) {
    const auto k = static_cast<std::uint32_t>(idx);
    auto& d = levels[idx];
    d.dim = r.dim(k);
    d.defect_zero = defect.block(k)->is_zero();
    d.defect_norm = d.defect_zero ? 0.0 : operator_norm(defect, r, k);
    d.self_trace = selfsum.block(k)->trace();
    const auto g = r.gram(k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const auto b = comm[i][j].block(k);
        d.comm_norms.push_back(b->is_zero() ? 0.0 : operator_norm(comm[i][j], r, k));
        if (i == j) {
          const auto gb = g * *b;
          if (!(gb == gb.adjoint())) d.hermitian = false;
        }
      }
  });

  Table t{"levels", {{"k", "exact"}, {"dim", "exact"}, {"defect_norm", "float"}, {"defect_zero", "exact"},
                     {"self_commutator_trace", "exact"}},
          {}};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      t.columns.push_back({"comm_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_norm", "float"});
  t.columns.push_back({"hermitian", "exact"});
  for (std::uint32_t k = 0; k <= K; ++k) {
    const auto& d = levels[k];
    std::vector<Cell> row{Cell::count(k), Cell::count(static_cast<std::int64_t>(d.dim)), Cell::number(d.defect_norm),
                          Cell::boolean(d.defect_zero), Cell::exact(d.self_trace)};
    for (double v : d.comm_norms) row.push_back(Cell::number(v));
    row.push_back(Cell::boolean(d.hermitian));
    t.add_row(std::move(row));
  }
  rep.tables.push_back(std::move(t));

  // Decay fits.
  Table fits{"decay", {{"operator", "meta"}, {"from", "exact"}, {"to", "exact"}, {"slope", "float"},
                       {"vanishing", "float"}},
             {}};
  std::vector<std::string> growing;
  auto add_fit = [&](const std::string& name, const std::vector<double>& series) {
    const auto f = fit_decay(series);
    fits.add_row({Cell::label(name), Cell::count(f.from), Cell::count(f.to), Cell::number(f.slope),
                  Cell::boolean(f.vanishing)});
    return f;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> s;
      for (const auto& d : levels) s.push_back(d.comm_norms[i * m + j]);
      const auto name = "[M_z" + std::to_string(i + 1) + ", M_z" + std::to_string(j + 1) + "*]";
      if (decay_verdict(add_fit(name, s)) != Verdict::trend_consistent) growing.push_back(name);
    }
  std::vector<double> defect_series;
  for (const auto& d : levels) defect_series.push_back(d.defect_norm);
  const auto defect_fit = add_fit("I - sum M_i* M_i", defect_series);
  rep.tables.push_back(std::move(fits));

  // Schatten partial sums.
  Table sch{"schatten", {{"operator", "meta"}, {"p", "meta"}, {"K", "exact"}, {"partial_sum", "float"},
                         {"last_increment", "float"}, {"tail_estimate", "float"}, {"outcome", "meta"}},
            {}};
  std::vector<VerdictRecord> summ;
  auto add_schatten = [&](const std::string& name, const GradedOperator& op) {
    for (double p : p_list) {
      const auto s = schatten_partial(op, r, p, K);
      auto v = summability_verdict(s, m);
      if (r.is_quotient()) {
        v.verdict = Verdict::reported_only;
        v.detail += "; the p > m threshold concerns the full module, quotient reported only";
      }
      sch.add_row({Cell::label(name), Cell::number(p), Cell::count(K), Cell::number(s.total()),
                   Cell::number(v.last_increment), Cell::number(v.tail_estimate), Cell::label(to_string(v.outcome))});
      summ.push_back({"summability " + name + " p=" + fmt(p), v.verdict, v.detail});
    }
  };
  add_schatten("I - sum M_i* M_i", defect);
  for (std::size_t i = 0; i < m; ++i)
    add_schatten("[M_z" + std::to_string(i + 1) + ", M_z" + std::to_string(i + 1) + "*]", comm[i][i]);
  rep.tables.push_back(std::move(sch));

  // Verdicts.
  std::optional<std::uint32_t> first_nonzero;
  for (std::uint32_t k = 0; k <= K && !first_nonzero; ++k)
    if (!levels[k].defect_zero) first_nonzero = k;
  if (!first_nonzero)
    rep.verdicts.push_back({"spherical_defect_zero", Verdict::exact_pass,
                            "I - sum M_i* M_i vanishes exactly on levels 0.." + std::to_string(K)});
  else
    rep.verdicts.push_back({"spherical_defect_zero", Verdict::reported_only,
                            "defect nonzero from level " + std::to_string(*first_nonzero)});
  bool herm = true;
  for (const auto& d : levels) herm = herm && d.hermitian;
  rep.verdicts.push_back({"self_commutators_hermitian", herm ? Verdict::exact_pass : Verdict::exact_fail,
                          "[M_zi, M_zi*] self-adjoint in the weighted inner product, exact"});
  if (growing.empty())
    rep.verdicts.push_back({"commutator_decay", Verdict::trend_consistent,
                            "all commutator norms vanish or decay with slope <= " + fmt(kDecaySlope)});
  else {
    std::string names;
    for (const auto& n : growing) names += (names.empty() ? "" : ", ") + n;
    rep.verdicts.push_back({"commutator_decay", Verdict::trend_inconsistent, "no decay for " + names});
  }
  rep.verdicts.push_back({"defect_decay", decay_verdict(defect_fit),
                          defect_fit.vanishing ? "defect vanishes" : "slope " + fmt(defect_fit.slope)});
  for (auto& v : summ) rep.verdicts.push_back(std::move(v));
  return rep;
}

// ------------------------------------------------------------------ trace

TraceRecord trace_identity(const WeightedShiftSpace& space, std::uint32_t k) {
  const std::size_t m = space.arity();
  TraceRecord rec;
  rec.k = k;
  rec.computed = 0;
  rec.defect_zero = true;
  for (const auto& a : enumerate_level(m, k)) {
    for (std::size_t i = 0; i < m; ++i) {
      rec.computed += space.shift_ratio(a, i);
      if (a[i] > 0) rec.computed -= space.shift_ratio(a - MultiIndex::unit(m, i), i);
    }
    if (spherical_defect_diagonal(space, a) != 0) rec.defect_zero = false;
  }
  if (k > 0)
    for (const auto& a : enumerate_level(m, k - 1))
      if (spherical_defect_diagonal(space, a) != 0) rec.defect_zero = false;
  rec.telescoping = Integer(level_dimension(m, k)) - (k > 0 ? Integer(level_dimension(m, k - 1)) : Integer(0));
  const long mk = static_cast<long>(m) + static_cast<long>(k);
  rec.binomial_formula = k == 0 ? Integer(0) : binomial(mk - 1, static_cast<long>(k) - 1) - binomial(mk - 2, static_cast<long>(k) - 2);
  rec.equal = rec.computed == Rational(rec.telescoping);
  return rec;
}

Report trace_report(const WeightedShiftSpace& space, std::uint32_t K) {
  Report rep;
  rep.scenario = "trace";
  rep.params["tool_version"] = kToolVersion;
  rep.params["space"] = space_json(space);
  rep.params["max_level"] = K;
  Table t{"trace", {{"k", "exact"}, {"computed", "exact"}, {"telescoping", "exact"}, {"binomial_formula", "exact"},
                    {"defect_zero", "exact"}, {"asserted", "exact"}, {"equal", "exact"}},
          {}};
  std::size_t asserted = 0;
  std::vector<std::uint32_t> failed;
  std::vector<std::uint32_t> binomial_agree;
  for (std::uint32_t k = 0; k <= K; ++k) {
    const auto rec = trace_identity(space, k);
    if (rec.defect_zero) {
      ++asserted;
      if (!rec.equal) failed.push_back(k);
    }
    if (k > 0 && Rational(rec.binomial_formula) == rec.computed) binomial_agree.push_back(k);
    t.add_row({Cell::count(k), Cell::exact(rec.computed), Cell::exact(Rational(rec.telescoping)),
               k == 0 ? Cell::none() : Cell::exact(Rational(rec.binomial_formula)), Cell::boolean(rec.defect_zero),
               Cell::boolean(rec.defect_zero), Cell::boolean(rec.equal)});
  }
  rep.tables.push_back(std::move(t));
  if (asserted == 0)
    rep.verdicts.push_back({"trace_equals_telescoping", Verdict::reported_only,
                            "spherical defect is nonzero, identity not asserted"});
  else if (failed.empty())
    rep.verdicts.push_back({"trace_equals_telescoping", Verdict::exact_pass,
                            "exact equality on " + std::to_string(asserted) + " levels with zero defect"});
  else
    rep.verdicts.push_back({"trace_equals_telescoping", Verdict::exact_fail,
                            "first mismatch at k=" + std::to_string(failed.front())});
  std::string agree;
  for (auto k : binomial_agree) agree += (agree.empty() ? "" : ",") + std::to_string(k);
  rep.verdicts.push_back({"binomial_formula", Verdict::reported_only,
                          "binomial formula matches the computed trace at k in {" + agree + "}"});
  return rep;
}

// ------------------------------------------------------------------ summability

std::string to_string(Summability s) {
  switch (s) {
    case Summability::divergent_trend: return "divergent-trend";
    case Summability::convergent_trend: return "convergent-trend";
    case Summability::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SummabilityRecord summability_verdict(const SchattenSeries& s, std::size_t m, double floor) {
  SummabilityRecord rec;
  rec.p = s.p;
  rec.m = m;
  rec.slope = std::numeric_limits<double>::quiet_NaN();
  rec.tail_estimate = std::numeric_limits<double>::quiet_NaN();
  const auto& S = s.partial_sums;
  const std::string threshold = "p=" + fmt(s.p) + (s.p > static_cast<double>(m) ? " > " : " <= ") + "m=" +
                                std::to_string(m);
  if (S.size() < (1u << kMinDoublings)) {
    rec.detail = "series has " + std::to_string(S.size()) + " levels, fewer than " +
                 std::to_string(kMinDoublings) + " doublings; " + threshold;
    return rec;
  }
  const auto K = static_cast<std::uint32_t>(S.size() - 1);
  for (std::uint32_t k = 2; k <= K; k *= 2) rec.increments.emplace_back(k, S[k] - S[k / 2]);
  if (rec.increments.back().first != K) rec.increments.emplace_back(K, S[K] - S[K / 2]);
  rec.last_increment = S[K] - S[K / 2];

  // Decay exponent of the level terms over [K/2, K].
  const auto fit = fit_decay(s.level_terms);
  rec.slope = fit.slope;
  if (rec.last_increment > floor) {
    rec.outcome = Summability::divergent_trend;
  } else if (fit.vanishing || s.total() == 0) {
    rec.tail_estimate = 0;
    rec.outcome = Summability::convergent_trend;
  } else if (!std::isnan(fit.slope) && fit.slope < -1) {
    const double a = -fit.slope;
    const double c = s.level_terms[K] * std::pow(K + 1.0, a);
    rec.tail_estimate = c * std::pow(K + 1.5, 1 - a) / (a - 1);
    rec.outcome = rec.tail_estimate < kTailCeiling ? Summability::convergent_trend : Summability::inconclusive;
  } else {
    rec.tail_estimate = std::numeric_limits<double>::infinity();
  }

  std::ostringstream d;
  d << "increment S(" << K << ")-S(" << K / 2 << ")=" << fmt(rec.last_increment) << " (floor " << fmt(floor)
    << "), tail estimate " << fmt(rec.tail_estimate) << " (ceiling " << fmt(kTailCeiling) << "); " << threshold;
  rec.detail = d.str();
  switch (rec.outcome) {
    case Summability::inconclusive: rec.verdict = Verdict::reported_only; break;
    case Summability::divergent_trend: rec.verdict = Verdict::trend_consistent; break;
    case Summability::convergent_trend:
      rec.verdict = s.p > static_cast<double>(m) ? Verdict::trend_consistent : Verdict::trend_inconsistent;
      break;
  }
  return rec;
}

// ------------------------------------------------------------------ quotient weights

QuotientWeights quotient_shift_weights(const WeightedShiftSpace& space, const GradedPolynomial& generator,
                                       std::uint32_t K) {
  if (space.arity() != 2 || generator.arity() != 2)
    throw Error(ErrorCode::invalid_arity, "quotient shift weights need m = 2");
  if (!generator.is_homogeneous() || generator.degree() != 1 || generator.terms().empty())
    throw Error(ErrorCode::invalid_argument, "generator must be a nonzero linear form a*z1 + b*z2");
  const auto a = generator.coefficient(MultiIndex::unit(2, 0));
  const auto b = generator.coefficient(MultiIndex::unit(2, 1));
  const auto q = ModuleRealization::quotient(space, GradedIdeal(2, {generator}), K + 1);
  QuotientWeights w;
  w.variable = b.is_zero() ? 1 : 0;
  if (space.kind() == SpaceKind::hardy_ball)
    w.scale = (!a.is_zero() && !b.is_zero()) ? Rational(1) + a.norm2() / b.norm2() : Rational(1);
  for (std::uint32_t k = 0; k <= K; ++k) {
    if (q.dim(k) != 1 || q.dim(k + 1) != 1)
      throw Error(ErrorCode::structural_error, "S_k^perp is not one-dimensional at level " + std::to_string(k));
    const auto A = block_shift_data(q, w.variable, k);
    const Rational sq = A.at(0, 0).norm2() * q.gram(k + 1).at(0, 0).re() / q.gram(k).at(0, 0).re();
    w.squared.push_back(sq);
    w.moduli.push_back(std::sqrt(to_double(sq)));
    if (w.scale) {
      const double n = std::sqrt(to_double(sq * *w.scale));
      w.normalized.push_back(n);
      w.deviation.push_back(std::abs(n - 1.0));
    }
  }
  return w;
}

Report qweights_report(const WeightedShiftSpace& space, const GradedPolynomial& generator, std::uint32_t K) {
  const auto w = quotient_shift_weights(space, generator, K);
  Report rep;
  rep.scenario = "qweights";
  rep.params["tool_version"] = kToolVersion;
  rep.params["space"] = space_json(space);
  rep.params["ideal"] = nlohmann::ordered_json::array({generator.str()});
  rep.params["max_level"] = K;
  rep.params["measured_variable"] = "z" + std::to_string(w.variable + 1);
  rep.params["normalization"] = w.scale ? nlohmann::ordered_json(to_string(*w.scale)) : nlohmann::ordered_json();
  rep.params["final_deviation_threshold"] = 0.05;
  Table t{"weights", {{"k", "exact"}, {"w_squared", "exact"}, {"modulus", "float"}, {"normalized", "float"},
                      {"deviation", "float"}},
          {}};
  for (std::uint32_t k = 0; k <= K; ++k)
    t.add_row({Cell::count(k), Cell::exact(w.squared[k]), Cell::number(w.moduli[k]),
               w.scale ? Cell::number(w.normalized[k]) : Cell::none(),
               w.scale ? Cell::number(w.deviation[k]) : Cell::none()});
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back({"one_dimensional", Verdict::exact_pass,
                          "dim S_k^perp = 1 exactly for k = 0.." + std::to_string(K + 1)});
  if (!w.scale || K < 10) {
    rep.verdicts.push_back({"weights_converge", Verdict::reported_only,
                            w.scale ? "window too short for a trend" : "no reference normalization for this space"});
    return rep;
  }
  const std::uint32_t early = K / 10;
  bool monotone = true;
  for (std::uint32_t k = early + 1; k <= K; ++k) monotone = monotone && w.deviation[k] <= w.deviation[k - 1];
  const bool ok = w.deviation[K] < w.deviation[early] && w.deviation[K] < 0.05;
  std::ostringstream d;
  d.precision(17);
  d << "deviation at k=" << early << ": " << w.deviation[early] << ", at k=" << K << ": " << w.deviation[K]
    << " (threshold 0.05); " << (monotone ? "monotone" : "not monotone") << " over [" << early << ", " << K << "]";
  rep.verdicts.push_back({"weights_converge", ok ? Verdict::trend_consistent : Verdict::trend_inconsistent, d.str()});
  return rep;
}

// ------------------------------------------------------------------ trace inequality

std::size_t bounded_quotient_dimension(const ModuleRealization& q) {
  const GradedIdeal ideal = q.ideal() ? *q.ideal() : GradedIdeal(q.arity(), {});
  const auto need = static_cast<std::uint32_t>(2 * kHilbertSamuelWindow + ideal.max_generator_degree());
  const auto fit = hilbert_samuel_fit(ideal, std::max(q.max_level(), need));
  if (!fit.stabilized) throw Error(ErrorCode::scenario_error, "Hilbert function has not stabilized");
  if (fit.degree > 0)
    throw Error(ErrorCode::scenario_error, "quotient has unbounded level dimension (Hilbert polynomial degree " +
                                               std::to_string(fit.degree) + ")");
  std::size_t m0 = 0;
  for (const auto& row : fit.table) m0 = std::max<std::size_t>(m0, row.dim_quotient);
  return m0;
}

Section5Level section5_check(const ModuleRealization& q, std::uint32_t k, std::size_t m0) {
  const std::size_t m = q.arity();
  Section5Level out;
  out.k = k;
  out.dim = q.dim(k);
  GradedOperator x = identity_blocks(q, k);
  std::vector<GradedOperator> comms;
  for (std::size_t i = 0; i < m; ++i) {
    const auto mi = mult_blocks(q, variable(m, i), k);
    const auto ms = adjoint_blocks(mi, q);
    const auto row = compose(mi, ms, q);
    x = x - row;
    comms.push_back(row - compose(ms, mi, q));
  }
  out.x_trace = x.block(k)->trace();
  if (out.dim == 0) {
    out.holds = true;
    return out;
  }
  out.x_norm = spectral_norm(float_block(x, q, k));
  for (const auto& c : comms) {
    const auto split = pn_split(float_block(c, q, k));
    out.p_trace += split.positive.trace().real();
    out.n_norm_sum += spectral_norm(split.negative);
  }
  out.lhs = std::max(0.0, out.p_trace);
  out.rhs = static_cast<double>(m0) * (2 * out.x_norm + out.n_norm_sum);
  out.holds = out.lhs <= out.rhs + kSection5Slack;
  return out;
}

Report section5_report(const ModuleRealization& q, std::uint32_t K, unsigned jobs) {
  if (static_cast<std::uint64_t>(K) + 1 > q.max_level())
    throw Error(ErrorCode::window_error, "trace inequality check to level " + std::to_string(K) + " needs level " +
                                             std::to_string(K + 1));
  const auto m0 = bounded_quotient_dimension(q);
  std::vector<Section5Level> levels(K + 1);
  parallel_for(K + 1, jobs, [&](std::size_t k) { levels[k] = section5_check(q, static_cast<std::uint32_t>(k), m0); });
  Report rep;
  rep.scenario = "section5";
  rep.params["tool_version"] = kToolVersion;
  rep.params["space"] = space_json(q.space());
  rep.params["ideal"] = ideal_json(q.ideal());
  rep.params["max_level"] = K;
  rep.params["M0"] = m0;
  rep.params["slack"] = kSection5Slack;
  Table t{"levels", {{"k", "exact"}, {"dim", "exact"}, {"x_trace", "exact"}, {"x_norm", "float"},
                     {"p_trace", "float"}, {"n_norm_sum", "float"}, {"lhs", "float"}, {"rhs", "float"},
                     {"holds", "float"}},
          {}};
  std::vector<std::uint32_t> failed;
  std::vector<double> n_series;
  for (const auto& l : levels) {
    if (!l.holds) failed.push_back(l.k);
    n_series.push_back(l.n_norm_sum);
    t.add_row({Cell::count(l.k), Cell::count(static_cast<std::int64_t>(l.dim)), Cell::exact(l.x_trace),
               Cell::number(l.x_norm), Cell::number(l.p_trace), Cell::number(l.n_norm_sum), Cell::number(l.lhs),
               Cell::number(l.rhs), Cell::boolean(l.holds)});
  }
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back({"inequality", failed.empty() ? Verdict::exact_pass : Verdict::exact_fail,
                          failed.empty() ? "Tr(sum P_ik) <= M0 (2||X_k|| + sum ||N_ik||) on levels 0.." +
                                               std::to_string(K) + " (float slack 1e-8)"
                                         : "fails at k=" + std::to_string(failed.front())});
  const auto f = fit_decay(n_series);
  rep.verdicts.push_back({"n_norms_decay", decay_verdict(f),
                          f.vanishing ? "N parts vanish" : "slope " + fmt(f.slope)});
  return rep;
}

// ------------------------------------------------------------------ Koszul

std::string to_string(KoszulModule k) {
  switch (k) {
    case KoszulModule::full: return "full";
    case KoszulModule::ideal: return "ideal";
    case KoszulModule::quotient: return "quotient";
  }
  return "full";
}

namespace {

// Chain group C_p at total degree t in ambient coordinates: monomials of
// degree t-p tensored with p-subsets of the variables.
class KoszulFrame {
 public:
  KoszulFrame(std::size_t m, std::uint32_t d_max) : m_(m), subsets_(m + 1), index_(m + 1) {
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      const auto p = static_cast<std::size_t>(__builtin_popcount(mask));
      index_[p][mask] = subsets_[p].size();
      subsets_[p].push_back(mask);
    }
    for (std::uint32_t d = 0; d <= d_max; ++d) levels_.push_back(std::make_shared<LevelIndex>(enumerate_level(m, d)));
  }

  [[nodiscard]] std::size_t size(std::size_t p, std::uint32_t t) const {
    if (p > m_ || t < p) return 0;
    return levels_[t - p]->size() * subsets_[p].size();
  }
  [[nodiscard]] const LevelIndex& level(std::uint32_t d) const { return *levels_[d]; }
  [[nodiscard]] std::size_t subset_count(std::size_t p) const { return subsets_[p].size(); }

  // Coordinate of (monomial position at level t-p) x (p-subset position).
  [[nodiscard]] std::size_t coord(std::size_t p, std::size_t mono, std::size_t sub) const {
    return mono * subsets_[p].size() + sub;
  }

  // d(f e_S) = sum_j (-1)^j z_{s_j} f e_{S \ s_j}.
  [[nodiscard]] SparseVector apply(std::size_t p, std::uint32_t t, const SparseVector& v) const {
    std::map<std::size_t, GaussRational> acc;
    const auto nsub = subsets_[p].size();
    const auto& from = *levels_[t - p];
    const auto& to = *levels_[t - p + 1];
    for (const auto& [c, x] : v) {
      const auto mono = c / nsub;
      const auto mask = subsets_[p][c % nsub];
      int j = 0;
      for (std::size_t var = 0; var < m_; ++var) {
        if (!(mask & (1u << var))) continue;
        const auto target = to.position.at(from.monomials[mono] + MultiIndex::unit(m_, var));
        const auto sub = index_[p - 1].at(mask & ~(1u << var));
        auto& slot = acc[coord(p - 1, target, sub)];
        slot += (j % 2 == 0) ? x : -x;
        ++j;
      }
    }
    SparseVector out;
    for (auto& [c, x] : acc)
      if (!x.is_zero()) out.emplace_back(c, std::move(x));
    return out;
  }

 private:
  std::size_t m_;
  std::vector<std::vector<std::uint32_t>> subsets_;
  std::vector<std::map<std::uint32_t, std::size_t>> index_;
  std::vector<std::shared_ptr<LevelIndex>> levels_;
};

// Basis of C_p(I) at degree t: I_{t-p} tensor Lambda^p.
std::vector<SparseVector> ideal_chain_basis(const KoszulFrame& f, const GradedIdeal& ideal, std::size_t p,
                                            std::uint32_t t) {
  std::vector<SparseVector> out;
  if (t < p) return out;
  const auto lvl = ideal.level(t - p);
  const auto& own = f.level(t - p);
  for (const auto& row : lvl->basis)
    for (std::size_t s = 0; s < f.subset_count(p); ++s) {
      SparseVector v;
      for (const auto& [c, x] : row) v.emplace_back(f.coord(p, own.position.at(lvl->index->monomials[c]), s), x);
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(std::move(v));
    }
  return out;
}

std::vector<SparseVector> full_chain_basis(const KoszulFrame& f, std::size_t p, std::uint32_t t) {
  std::vector<SparseVector> out;
  for (std::size_t c = 0; c < f.size(p, t); ++c) out.push_back({{c, GaussRational(1)}});
  return out;
}

}  // namespace

KoszulResult koszul_euler(KoszulModule module, std::size_t m, const std::optional<GradedIdeal>& ideal,
                          std::uint32_t d_max) {
  if (m == 0) throw Error(ErrorCode::invalid_arity, "arity must be at least 1");
  if (module != KoszulModule::full) {
    if (!ideal) throw Error(ErrorCode::invalid_argument, "ideal and quotient modules need an ideal");
    if (ideal->arity() != m) throw Error(ErrorCode::dimension_mismatch, "ideal arity differs from m");
    if (!ideal->plain_homogeneous()) throw Error(ErrorCode::mode_error, "Koszul complex needs a plain-homogeneous ideal");
  }
  KoszulResult res;
  res.module = module;
  res.m = m;
  res.d_max = d_max;
  const std::uint64_t gen_deg = module == KoszulModule::full ? 0 : ideal->max_generator_degree();
  res.sufficient_degree = d_max >= gen_deg + m;
  const KoszulFrame frame(m, d_max);

  res.d_squared_zero = true;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> rank;
  for (std::uint32_t t = 0; t <= d_max; ++t) {
    for (std::size_t p = 0; p <= m; ++p) {
      std::uint64_t dim = frame.size(p, t);
      std::uint64_t ideal_dim = 0;
      if (module != KoszulModule::full && t >= p) ideal_dim = ideal->level(t - p)->basis.size() * frame.subset_count(p);
      if (module == KoszulModule::ideal) dim = ideal_dim;
      if (module == KoszulModule::quotient) dim -= ideal_dim;
      res.chain_dims[{static_cast<std::uint32_t>(p), t}] = dim;
      if (p == 0 || t < p) continue;
      const auto sources = module == KoszulModule::ideal ? ideal_chain_basis(frame, *ideal, p, t)
                                                         : full_chain_basis(frame, p, t);
      RowEchelon ech(frame.size(p - 1, t));
      std::uint64_t base = 0;
      if (module == KoszulModule::quotient) {
        for (const auto& v : ideal_chain_basis(frame, *ideal, p - 1, t)) ech.insert(v);
        base = ech.rank();
      }
      for (const auto& v : sources) {
        const auto dv = frame.apply(p, t, v);
        ech.insert(dv);
        if (module == KoszulModule::full && p >= 2 && !frame.apply(p - 1, t, dv).empty()) res.d_squared_zero = false;
      }
      rank[{static_cast<std::uint32_t>(p), t}] = ech.rank() - base;
    }
    // d o d = 0 is checked on the ambient complex, which every module is a sub or quotient of.
    if (module != KoszulModule::full)
      for (std::size_t p = 2; p <= m && p <= t; ++p)
        for (const auto& v : full_chain_basis(frame, p, t))
          if (!frame.apply(p - 1, t, frame.apply(p, t, v)).empty()) res.d_squared_zero = false;
  }
  res.ranks = rank;
  res.euler = 0;
  for (std::uint32_t t = 0; t <= d_max; ++t)
    for (std::size_t p = 0; p <= m; ++p) {
      const std::pair<std::uint32_t, std::uint32_t> key{static_cast<std::uint32_t>(p), t};
      const std::pair<std::uint32_t, std::uint32_t> up{static_cast<std::uint32_t>(p + 1), t};
      const std::uint64_t r_out = rank.count(key) ? rank[key] : 0;
      const std::uint64_t r_in = rank.count(up) ? rank[up] : 0;
      const std::uint64_t h = res.chain_dims[key] - r_out - r_in;
      if (h == 0) continue;
      res.homology[key] = h;
      res.euler += (p % 2 == 0 ? Integer(h) : Integer(-static_cast<long>(h)));
    }
  res.index = -res.euler;
  res.stabilized = d_max >= 2;
  for (const auto& [key, h] : res.homology)
    if (key.second + 3 > d_max) res.stabilized = false;
  return res;
}

Report koszul_report(KoszulModule module, std::size_t m, const std::optional<GradedIdeal>& ideal,
                     std::uint32_t d_max) {
  const auto res = koszul_euler(module, m, ideal, d_max);
  Report rep;
  rep.scenario = "koszul";
  rep.params["tool_version"] = kToolVersion;
  rep.params["module"] = to_string(module);
  rep.params["m"] = m;
  rep.params["ideal"] = ideal_json(module == KoszulModule::full ? std::nullopt : ideal);
  rep.params["max_level"] = d_max;
  Table h{"homology", {{"p", "exact"}, {"t", "exact"}, {"dim", "exact"}}, {}};
  for (const auto& [key, d] : res.homology)
    h.add_row({Cell::count(key.first), Cell::count(key.second), Cell::count(static_cast<std::int64_t>(d))});
  Table c{"chain", {{"t", "exact"}, {"p", "exact"}, {"dim", "exact"}, {"rank_d", "exact"}}, {}};
  for (std::uint32_t t = 0; t <= d_max; ++t)
    for (std::uint32_t p = 0; p <= m; ++p) {
      const auto it = res.ranks.find({p, t});
      c.add_row({Cell::count(t), Cell::count(p), Cell::count(static_cast<std::int64_t>(res.chain_dims.at({p, t}))),
                 Cell::count(it == res.ranks.end() ? 0 : static_cast<std::int64_t>(it->second))});
    }
  Table e{"euler", {{"euler_characteristic", "exact"}, {"index", "exact"}, {"stabilized", "exact"},
                    {"sufficient_degree", "exact"}},
          {}};
  e.add_row({Cell::exact(Rational(res.euler)), Cell::exact(Rational(res.index)), Cell::boolean(res.stabilized),
             Cell::boolean(res.sufficient_degree)});
  rep.tables.push_back(std::move(h));
  rep.tables.push_back(std::move(c));
  rep.tables.push_back(std::move(e));
  rep.verdicts.push_back({"d_squared_zero", res.d_squared_zero ? Verdict::exact_pass : Verdict::exact_fail,
                          "d o d = 0 on every chain group up to degree " + std::to_string(d_max)});
  const bool conclusive = res.stabilized && res.sufficient_degree;
  const std::string chi = "chi = " + res.euler.get_str() + ", index = " + res.index.get_str();
  const bool submodule = module == KoszulModule::full || (module == KoszulModule::ideal && !ideal->is_zero());
  if (!conclusive)
    rep.verdicts.push_back({"euler_characteristic", Verdict::reported_only,
                            chi + "; inconclusive (homology near degree " + std::to_string(d_max) +
                                " or degree bound below generator degree + m)"});
  else if (!submodule)
    rep.verdicts.push_back({"euler_characteristic", Verdict::reported_only, chi});
  else
    rep.verdicts.push_back({"euler_characteristic", res.euler == 1 ? Verdict::exact_pass : Verdict::exact_fail,
                            chi + " (expected index -1 for a nonzero submodule)"});
  return rep;
}

}  // namespace wsm
