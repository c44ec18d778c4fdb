#include "wsm/posreg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "wsm/error.hpp"

namespace wsm {

// ------------------------------------------------------------------ polynomial

PositiveRegularPoly::PositiveRegularPoly(std::vector<Rational> linear, std::vector<HigherTerm> higher)
    : linear_(std::move(linear)) {
  if (linear_.empty()) throw Error(ErrorCode::invalid_arity, "positive regular polynomial needs m >= 1");
  for (std::size_t i = 0; i < linear_.size(); ++i)
    if (sgn(linear_[i]) <= 0)
      throw Error(ErrorCode::invalid_argument, "linear coefficient a_" + std::to_string(i + 1) + " must be positive");
  for (auto& h : higher) {
    if (h.alpha.size() != linear_.size()) throw Error(ErrorCode::dimension_mismatch, "higher term arity mismatch");
    if (h.alpha.degree() < 2) throw Error(ErrorCode::invalid_argument, "higher terms need degree >= 2");
    if (sgn(h.a) < 0) throw Error(ErrorCode::invalid_argument, "higher coefficients must be nonnegative");
    for (const auto& o : higher_)
      if (o.alpha == h.alpha) throw Error(ErrorCode::invalid_argument, "repeated higher term " + h.alpha.str());
    if (sgn(h.a) > 0) higher_.push_back(std::move(h));
  }
}

PositiveRegularPoly PositiveRegularPoly::from_polynomial(const GradedPolynomial& p) {
  const std::size_t m = p.arity();
  std::vector<Rational> linear(m);
  std::vector<HigherTerm> higher;
  for (const auto& [alpha, c] : p.terms()) {
    if (!c.is_real()) throw Error(ErrorCode::invalid_argument, "coefficients must be real rationals");
    if (alpha.degree() == 0) throw Error(ErrorCode::invalid_argument, "P must have no constant term");
    if (alpha.degree() == 1) {
      for (std::size_t i = 0; i < m; ++i)
        if (alpha[i] == 1) linear[i] = c.re();
      continue;
    }
    higher.push_back({c.re(), alpha});
  }
  return {std::move(linear), std::move(higher)};
}

const Rational& PositiveRegularPoly::coefficient(std::size_t i) const {
  if (i < linear_.size()) return linear_[i];
  if (i - linear_.size() < higher_.size()) return higher_[i - linear_.size()].a;
  throw Error(ErrorCode::invalid_argument, "coefficient index out of range");
}

std::uint64_t PositiveRegularPoly::max_higher_degree() const noexcept {
  std::uint64_t d = 1;
  for (const auto& h : higher_) d = std::max(d, h.alpha.degree());
  return d;
}

GradedPolynomial PositiveRegularPoly::polynomial() const {
  const std::size_t m = arity();
  GradedPolynomial::Terms t;
  for (std::size_t i = 0; i < m; ++i) t[MultiIndex::unit(m, i)] = GaussRational(linear_[i]);
  for (const auto& h : higher_) t[h.alpha] = GaussRational(h.a);
  return {m, std::move(t)};
}

// ------------------------------------------------------------------ delta and H_P

DeltaTable delta_coefficients(const PositiveRegularPoly& p, std::uint32_t D, SignConvention sign) {
  const std::size_t m = p.arity();
  DeltaTable delta;
  for (std::uint32_t d = 0; d <= D; ++d)
    for (const auto& beta : enumerate_level(m, d)) {
      Rational v = d == 0 ? Rational(1) : Rational(0);
      for (std::size_t i = 0; i < m; ++i)
        if (beta[i] > 0) v += p.linear()[i] * delta.at(beta - MultiIndex::unit(m, i));
      for (const auto& h : p.higher())
        if (beta.dominates(h.alpha)) {
          const Rational t = h.a * delta.at(beta - h.alpha);
          if (sign == SignConvention::all_plus) v += t;
          else v -= t;
        }
      if (sgn(v) <= 0)
        throw Error(ErrorCode::sign_convention, "delta at " + beta.str() + " is " + to_string(v) +
                                                    " (nonpositive under the chosen sign convention)");
      delta.emplace(beta, std::move(v));
    }
  return delta;
}

WeightedShiftSpace hp_space(const PositiveRegularPoly& p, std::uint32_t D) {
  std::map<MultiIndex, Rational> table;
  for (const auto& [beta, d] : delta_coefficients(p, D)) table.emplace(beta, Rational(1) / d);
  return custom_space(p.arity(), table, "H_P");
}

DefectProjectionCheck defect_projection_check(const PositiveRegularPoly& p, std::uint32_t D) {
  const std::size_t m = p.arity();
  const auto h = hp_space(p, D);
  DefectProjectionCheck out;
  for (std::uint32_t d = 0; d <= D; ++d)
    for (const auto& beta : enumerate_level(m, d)) {
      // M^gamma M^{gamma*} z^beta = omega(beta)/omega(beta - gamma) z^beta when beta >= gamma.
      Rational v = 1;
      const Rational w = h.weight(beta);
      for (std::size_t i = 0; i < m; ++i)
        if (beta[i] > 0) v -= p.linear()[i] * w / h.weight(beta - MultiIndex::unit(m, i));
      for (const auto& t : p.higher())
        if (beta.dominates(t.alpha)) v -= t.a * w / h.weight(beta - t.alpha);
      const Rational expected = d == 0 ? 1 : 0;
      if (v != expected && out.pass) {
        out.pass = false;
        out.witness = beta;
      }
      out.entries.push_back({beta, v, expected});
    }
  return out;
}

// ------------------------------------------------------------------ J_P

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
  Integer num;
  Integer den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational power(const Rational& a, std::uint64_t e) {
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), a.get_num_mpz_t(), e);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), a.get_den_mpz_t(), e);
  return r;
}

// prod a^beta over the m + K' model variables.
Rational coefficient_squared(const PositiveRegularPoly& p, const MultiIndex& beta) {
  Rational r = 1;
  for (std::size_t i = 0; i < beta.size(); ++i)
    if (beta[i] > 0) r *= power(p.coefficient(i), beta[i]);
  return r;
}

MultiIndex sigma(const PositiveRegularPoly& p, const MultiIndex& beta) {
  const std::size_t m = p.arity();
  MultiIndex out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = beta[i];
  for (std::size_t j = 0; j < p.extra(); ++j)
    for (std::size_t i = 0; i < m; ++i) out[i] += beta[m + j] * p.higher()[j].alpha[i];
  return out;
}

MultiIndex lift(const MultiIndex& alpha, std::size_t total) {
  MultiIndex out(total);
  for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = alpha[i];
  return out;
}

std::string z_monomial(const MultiIndex& a, const char* var) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += var + std::to_string(i + 1);
    if (a[i] > 1) s += "^" + std::to_string(a[i]);
  }
  return s.empty() ? "1" : s;
}

WeightVector model_weight(const PositiveRegularPoly& p) {
  std::vector<std::uint32_t> n(p.arity(), 1);
  for (const auto& h : p.higher()) n.push_back(static_cast<std::uint32_t>(h.alpha.degree()));
  return WeightVector(std::move(n));
}

}  // namespace

JPData jp_data(const PositiveRegularPoly& p) {
  JPData jp;
  jp.m = p.arity();
  jp.extra = p.extra();
  jp.n = model_weight(p);
  const std::size_t total = jp.m + jp.extra;
  jp.quasi_homogeneous = true;
  for (std::size_t j = 0; j < jp.extra; ++j) {
    const auto& h = p.higher()[j];
    Rational denom = 1;
    for (std::size_t i = 0; i < jp.m; ++i) denom *= power(p.linear()[i], h.alpha[i]);
    const Rational l2 = h.a / denom;
    jp.lambda_squared.push_back(l2);
    jp.lambda.push_back(rational_sqrt(l2));
    const std::string lam = jp.lambda.back() ? to_string(*jp.lambda.back()) : "sqrt(" + to_string(l2) + ")";
    const std::string lead = lam == "1" ? "" : lam + "*";
    jp.generators.push_back("Z" + std::to_string(jp.m + j + 1) + " - " + lead + z_monomial(h.alpha, "Z"));
    GradedPolynomial::Terms t;
    t[MultiIndex::unit(total, jp.m + j)] = GaussRational(1);
    t[lift(h.alpha, total)] = GaussRational(-1);
    GradedPolynomial q(total, std::move(t));
    const auto qd = q.quasi_degree(jp.n);
    if (!qd || *qd != h.alpha.degree()) jp.quasi_homogeneous = false;
    jp.rescaled.push_back(std::move(q));
  }
  return jp;
}

GradedIdeal jp_ideal(const JPData& jp) { return GradedIdeal(jp.m + jp.extra, jp.rescaled, jp.n); }

// ------------------------------------------------------------------ X_P

std::vector<XPLevel> xp_blocks(const PositiveRegularPoly& p, std::uint32_t l_max) {
  const std::size_t m = p.arity();
  const std::size_t total = m + p.extra();
  const auto n = model_weight(p);
  const auto hp = hp_space(p, l_max);
  const auto da = builtin_space(SpaceKind::drury_arveson, total);
  std::vector<XPLevel> out;
  for (std::uint32_t l = 0; l <= l_max; ++l) {
    XPLevel x;
    x.level = l;
    x.domain = enumerate_weighted_level(n, l);
    const LevelIndex rows(enumerate_level(m, l));
    x.codomain = rows.monomials;
    x.sv_squared.assign(rows.size(), Rational(0));
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(x.domain.size()));
    for (std::size_t c = 0; c < x.domain.size(); ++c) {
      const auto& beta = x.domain[c];
      const auto gamma = sigma(p, beta);
      const auto r = rows.position.at(gamma);
      x.target.push_back(r);
      x.coeff_squared.push_back(coefficient_squared(p, beta));
      // Squared entry in orthonormal coordinates: |c|^2 omega_P(gamma) / omega_DA(beta).
      const Rational e2 = x.coeff_squared.back() * hp.weight(gamma) / da.weight(beta);
      x.sv_squared[r] += e2;
      f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = std::sqrt(to_double(e2));
    }
    if (f.size() > 0) {
      const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(f).singularValues();
      x.singular_values.assign(s.data(), s.data() + s.size());
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<KernelLevel> kernel_vs_ideal(const PositiveRegularPoly& p, std::uint32_t l_max) {
  const auto jp = jp_data(p);
  const auto ideal = jp_ideal(jp);
  std::vector<KernelLevel> out;
  for (std::uint32_t l = 0; l <= l_max; ++l) {
    KernelLevel k;
    k.level = l;
    // Each column of X_P is a nonzero multiple of one unit vector, so the rank is
    // the number of distinct image monomials.
    const auto domain = enumerate_weighted_level(jp.n, l);
    std::vector<MultiIndex> images;
    for (const auto& b : domain) images.push_back(sigma(p, b));
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    k.kernel_dim = domain.size() - images.size();
    const auto lvl = ideal.weighted_level(l);
    k.ideal_dim = lvl->basis.size();
    // In Y coordinates X_P Y^beta = z^{sigma(beta)} with coefficient 1.
    k.contained = true;
    for (const auto& row : lvl->basis) {
      std::map<MultiIndex, GaussRational> img;
      for (const auto& [c, x] : row) img[sigma(p, lvl->index->monomials[c])] += x;
      for (const auto& [g, x] : img)
        if (!x.is_zero()) k.contained = false;
    }
    k.equal = k.kernel_dim == k.ideal_dim;
    out.push_back(k);
  }
  return out;
}

ModuleMapCheck xp_module_map_check(const PositiveRegularPoly& p, const JPData& jp, std::uint32_t l_max) {
  const std::size_t m = p.arity();
  const std::size_t total = m + p.extra();
  ModuleMapCheck out;
  auto fail = [&](std::string w) {
    if (out.pass) out.witness = std::move(w);
    out.pass = false;
  };
  for (std::uint32_t l = 0; l <= l_max; ++l)
    for (const auto& beta : enumerate_weighted_level(jp.n, l)) {
      const Rational cb = coefficient_squared(p, beta);
      const auto sb = sigma(p, beta);
      for (std::size_t i = 0; i < total; ++i) {
        if (l + jp.n[i] > l_max) continue;
        // X_P (Z_i Z^beta) against x_i X_P Z^beta, x_i = sqrt(a_i) z^{sigma(e_i)}.
        auto up = beta;
        ++up[i];
        const auto lhs_mono = sigma(p, up);
        const Rational lhs = coefficient_squared(p, up);
        auto rhs_mono = sb;
        rhs_mono += sigma(p, MultiIndex::unit(total, i));
        const Rational rhs = p.coefficient(i) * cb;
        ++out.checked;
        if (!(lhs_mono == rhs_mono) || lhs != rhs)
          fail("X_P M_Z" + std::to_string(i + 1) + " differs from M_x" + std::to_string(i + 1) + " X_P at Z^" +
               beta.str());
      }
      for (std::size_t j = 0; j < p.extra(); ++j) {
        const auto& h = p.higher()[j];
        if (l + h.alpha.degree() > l_max) continue;
        // X_P (Q_j Z^beta) = 0: both terms land on z^{alpha_j + sigma(beta)}.
        auto a = beta;
        ++a[m + j];
        auto b = beta;
        b += lift(h.alpha, total);
        const Rational first = coefficient_squared(p, a);
        const Rational second = jp.lambda_squared[j] * coefficient_squared(p, b);
        ++out.checked;
        if (!(sigma(p, a) == sigma(p, b)) || first != second)
          fail("X_P Q_" + std::to_string(m + j + 1) + " nonzero at Z^" + beta.str() + " (|coefficients|^2 " +
               to_string(first) + " vs " + to_string(second) + ")");
      }
    }
  return out;
}

ModuleMapCheck xp_module_map_check(const PositiveRegularPoly& p, std::uint32_t l_max) {
  return xp_module_map_check(p, jp_data(p), l_max);
}

// ------------------------------------------------------------------ reports

namespace {

nlohmann::ordered_json poly_params(const PositiveRegularPoly& p) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["poly"] = p.str();
  j["m"] = p.arity();
  j["higher_terms"] = p.extra();
  return j;
}

}  // namespace

Report preg_delta_report(const PositiveRegularPoly& p, std::uint32_t D, SignConvention sign) {
  Report rep;
  rep.scenario = "preg-delta";
  rep.params = poly_params(p);
  rep.params["max_level"] = D;
  rep.params["sign"] = sign == SignConvention::all_plus ? "all-plus" : "printed";
  Table t{"delta", {{"beta", "meta"}, {"degree", "exact"}, {"delta", "exact"}, {"weight", "exact"}}, {}};
  try {
    for (const auto& [beta, d] : delta_coefficients(p, D, sign))
      t.add_row({Cell::label(beta.str()), Cell::count(static_cast<std::int64_t>(beta.degree())), Cell::exact(d),
                 Cell::exact(Rational(Rational(1) / d))});
    // Graded order: by degree, then graded-lex as enumerated.
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const auto& a, const auto& b) { return a[1].integer < b[1].integer; });
    rep.verdicts.push_back({"delta_positive", Verdict::exact_pass, "all delta_beta > 0 for |beta| <= " +
                                                                       std::to_string(D)});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::sign_convention) throw;
    rep.verdicts.push_back({"delta_positive", Verdict::exact_fail, e.what()});
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

Report preg_kernel_report(const PositiveRegularPoly& p, std::uint32_t l_max) {
  Report rep;
  rep.scenario = "preg-kernel";
  rep.params = poly_params(p);
  rep.params["max_wlevel"] = l_max;
  const auto jp = jp_data(p);
  rep.params["weight"] = jp.n.str();
  Table t{"kernel", {{"level", "exact"}, {"domain_dim", "exact"}, {"kernel_dim", "exact"}, {"ideal_dim", "exact"},
                     {"equal", "exact"}, {"contained", "exact"}},
          {}};
  bool equal = true;
  bool contained = true;
  std::string first_diff;
  for (const auto& k : kernel_vs_ideal(p, l_max)) {
    equal = equal && k.equal;
    contained = contained && k.contained;
    if (!k.equal && first_diff.empty()) first_diff = "level " + std::to_string(k.level);
    t.add_row({Cell::count(k.level),
               Cell::count(static_cast<std::int64_t>(enumerate_weighted_level(jp.n, k.level).size())),
               Cell::count(static_cast<std::int64_t>(k.kernel_dim)), Cell::count(static_cast<std::int64_t>(k.ideal_dim)),
               Cell::boolean(k.equal), Cell::boolean(k.contained)});
  }
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back({"ideal_in_kernel", contained ? Verdict::exact_pass : Verdict::exact_fail,
                          "X_P kills every weighted level of J_P up to " + std::to_string(l_max)});
  rep.verdicts.push_back({"kernel_equals_ideal", equal ? Verdict::exact_pass : Verdict::exact_fail,
                          equal ? "dim ker X_P = dim [J_P] on levels 0.." + std::to_string(l_max)
                                : "dimensions differ first at " + first_diff});
  return rep;
}

Report preg_check_report(const PositiveRegularPoly& p, std::uint32_t l_max, std::uint32_t D) {
  Report rep = preg_kernel_report(p, l_max);
  rep.scenario = "preg-check";
  rep.params["max_level"] = D;
  rep.params["contractive_slack"] = kContractiveSlack;

  const auto defect = defect_projection_check(p, D);
  Table dt{"defect", {{"beta", "meta"}, {"value", "exact"}, {"expected", "exact"}}, {}};
  for (const auto& e : defect.entries)
    dt.add_row({Cell::label(e.beta.str()), Cell::exact(e.value), Cell::exact(e.expected)});

  const auto jp = jp_data(p);
  Table jt{"jp", {{"generator", "meta"}, {"lambda_squared", "exact"}, {"lambda", "exact"}, {"weighted_degree", "exact"}},
           {}};
  for (std::size_t j = 0; j < jp.extra; ++j)
    jt.add_row({Cell::label(jp.generators[j]), Cell::exact(jp.lambda_squared[j]),
                jp.lambda[j] ? Cell::exact(*jp.lambda[j]) : Cell::none(),
                Cell::count(static_cast<std::int64_t>(p.higher()[j].alpha.degree()))});

  Table st{"xp_singular_values", {{"level", "exact"}, {"rows", "exact"}, {"cols", "exact"},
                                  {"max_sv_squared", "exact"}, {"max_sv", "float"}, {"min_sv", "float"}},
           {}};
  double worst = 0;
  for (const auto& x : xp_blocks(p, l_max)) {
    Rational top = 0;
    for (const auto& s : x.sv_squared) top = std::max(top, s);
    const double mx = x.singular_values.empty() ? 0.0 : x.singular_values.front();
    const double mn = x.singular_values.empty() ? 0.0 : x.singular_values.back();
    worst = std::max(worst, mx);
    st.add_row({Cell::count(x.level), Cell::count(static_cast<std::int64_t>(x.codomain.size())),
                Cell::count(static_cast<std::int64_t>(x.domain.size())), Cell::exact(top), Cell::number(mx),
                Cell::number(mn)});
  }
  const auto mm = xp_module_map_check(p, jp, l_max);

  rep.tables.insert(rep.tables.begin(), std::move(dt));
  rep.tables.push_back(std::move(jt));
  rep.tables.push_back(std::move(st));
  std::vector<VerdictRecord> v;
  v.push_back({"defect_projection", defect.pass ? Verdict::exact_pass : Verdict::exact_fail,
               defect.pass ? "projection onto constants through degree " + std::to_string(D)
                           : "nonzero residue at beta=" + defect.witness->str()});
  v.push_back({"jp_quasi_homogeneous", jp.quasi_homogeneous ? Verdict::exact_pass : Verdict::exact_fail,
               "weight n=" + jp.n.str()});
  v.push_back({"module_map", mm.pass ? Verdict::exact_pass : Verdict::exact_fail,
               mm.pass ? std::to_string(mm.checked) + " intertwining relations" : mm.witness});
  for (auto& r : rep.verdicts) v.push_back(std::move(r));
  v.push_back({"contractive", worst <= 1 + kContractiveSlack ? Verdict::exact_pass : Verdict::exact_fail,
               "max singular value " + std::to_string(worst) + " (float, slack 1e-10)"});
  rep.verdicts = std::move(v);
  return rep;
}

}  // namespace wsm
