#include "wsm/space.hpp"

#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "wsm/error.hpp"

namespace wsm {

class WeightedShiftSpace::Model {
 public:
  Model(SpaceKind kind, std::size_t m, std::string name, std::map<std::string, std::string> params)
      : kind_(kind), m_(m), name_(std::move(name)), params_(std::move(params)) {
    if (m_ == 0) throw Error(ErrorCode::invalid_arity, "variable count must be >= 1");
  }
  virtual ~Model() = default;

  Rational weight(const MultiIndex& alpha) const {
    if (alpha.size() != m_) throw Error(ErrorCode::dimension_mismatch, "multi-index arity mismatch");
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(alpha);
      if (it != cache_.end()) return it->second;
    }
    Rational w = compute(alpha);
    if (sgn(w) <= 0)
      throw Error(ErrorCode::nonpositive_weight, "weight at " + alpha.str() + " is " + w.get_str());
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(alpha, std::move(w)).first->second;
  }

  virtual Rational ratio(const MultiIndex& alpha, std::size_t i) const {
    MultiIndex up = alpha;
    up += MultiIndex::unit(m_, i);
    return weight(up) / weight(alpha);
  }

  virtual Rational defect(const MultiIndex& alpha) const {
    Rational d = 1;
    for (std::size_t i = 0; i < m_; ++i) d -= ratio(alpha, i);
    return d;
  }

  SpaceKind kind_;
  std::size_t m_;
  std::string name_;
  std::map<std::string, std::string> params_;

 protected:
  virtual Rational compute(const MultiIndex& alpha) const = 0;

 private:
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<MultiIndex, Rational, MultiIndexHash> cache_;
};

namespace {

Integer factorial(std::uint64_t n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Integer multi_factorial(const MultiIndex& a) {
  Integer f = 1;
  for (auto v : a.entries()) f *= factorial(v);
  return f;
}

// Ball-type weights alpha! * (m+s-1)! / (|alpha| + m + s - 1)!; s = 1-m gives
// Drury-Arveson, s = 0 the Hardy space, s = 1 the Bergman space.
class BallModel final : public WeightedShiftSpace::Model {
 public:
  BallModel(SpaceKind kind, std::size_t m, long shift, std::map<std::string, std::string> params)
      : Model(kind, m, to_string(kind), std::move(params)), offset_(static_cast<long>(m) + shift - 1) {}

  Rational ratio(const MultiIndex& alpha, std::size_t i) const override {
    if (alpha.size() != m_) throw Error(ErrorCode::dimension_mismatch, "multi-index arity mismatch");
    if (i >= m_) throw Error(ErrorCode::invalid_argument, "variable index out of range");
    Rational r(Integer(alpha[i] + 1), Integer(static_cast<long>(alpha.degree()) + offset_ + 1));
    r.canonicalize();
    return r;
  }

  // The ratios sum to (|alpha|+m)/(|alpha|+offset+1).
  Rational defect(const MultiIndex& alpha) const override {
    if (alpha.size() != m_) throw Error(ErrorCode::dimension_mismatch, "multi-index arity mismatch");
    Rational d(Integer(offset_ + 1 - static_cast<long>(m_)), Integer(static_cast<long>(alpha.degree()) + offset_ + 1));
    d.canonicalize();
    return d;
  }

 protected:
  Rational compute(const MultiIndex& alpha) const override {
    Rational w(multi_factorial(alpha) * factorial(static_cast<std::uint64_t>(offset_)),
               factorial(alpha.degree() + static_cast<std::uint64_t>(offset_)));
    w.canonicalize();
    return w;
  }

 private:
  long offset_;
};

class PolydiskModel final : public WeightedShiftSpace::Model {
 public:
  PolydiskModel(std::size_t m, Rational c2, std::map<std::string, std::string> params)
      : Model(SpaceKind::polydisk_hardy, m, "polydisk-hardy", std::move(params)), c2_(std::move(c2)) {
    if (sgn(c2_) <= 0) throw Error(ErrorCode::nonpositive_weight, "scale c2 must be positive");
  }

  Rational ratio(const MultiIndex& alpha, std::size_t i) const override {
    if (alpha.size() != m_) throw Error(ErrorCode::dimension_mismatch, "multi-index arity mismatch");
    if (i >= m_) throw Error(ErrorCode::invalid_argument, "variable index out of range");
    return c2_;
  }

  Rational defect(const MultiIndex& alpha) const override {
    if (alpha.size() != m_) throw Error(ErrorCode::dimension_mismatch, "multi-index arity mismatch");
    return 1 - Rational(static_cast<long>(m_)) * c2_;
  }

 protected:
  Rational compute(const MultiIndex& alpha) const override {
    Rational w;
    mpz_pow_ui(mpq_numref(w.get_mpq_t()), c2_.get_num_mpz_t(), alpha.degree());
    mpz_pow_ui(mpq_denref(w.get_mpq_t()), c2_.get_den_mpz_t(), alpha.degree());
    return w;
  }

 private:
  Rational c2_;
};

class FunctionModel final : public WeightedShiftSpace::Model {
 public:
  FunctionModel(std::size_t m, WeightFunction f, std::string name, std::map<std::string, std::string> params)
      : Model(SpaceKind::custom, m, std::move(name), std::move(params)), f_(std::move(f)) {}

 protected:
  Rational compute(const MultiIndex& alpha) const override { return f_(alpha); }

 private:
  WeightFunction f_;
};

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::drury_arveson: return "drury-arveson";
    case SpaceKind::hardy_ball: return "hardy-ball";
    case SpaceKind::bergman_ball: return "bergman-ball";
    case SpaceKind::polydisk_hardy: return "polydisk-hardy";
    case SpaceKind::custom: return "custom";
  }
  return "unknown";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "drury-arveson" || name == "da") return SpaceKind::drury_arveson;
  if (name == "hardy-ball") return SpaceKind::hardy_ball;
  if (name == "bergman-ball") return SpaceKind::bergman_ball;
  if (name == "polydisk-hardy") return SpaceKind::polydisk_hardy;
  if (name == "custom") return SpaceKind::custom;
  throw Error(ErrorCode::invalid_argument, "unknown space kind '" + name + "'");
}

std::size_t WeightedShiftSpace::arity() const noexcept { return model_->m_; }
SpaceKind WeightedShiftSpace::kind() const noexcept { return model_->kind_; }
const std::string& WeightedShiftSpace::name() const noexcept { return model_->name_; }
const std::map<std::string, std::string>& WeightedShiftSpace::params() const noexcept {
  return model_->params_;
}
Rational WeightedShiftSpace::weight(const MultiIndex& alpha) const { return model_->weight(alpha); }
Rational WeightedShiftSpace::defect_diagonal(const MultiIndex& alpha) const { return model_->defect(alpha); }
Rational WeightedShiftSpace::shift_ratio(const MultiIndex& alpha, std::size_t i) const {
  if (i >= arity()) throw Error(ErrorCode::invalid_argument, "variable index out of range");
  return model_->ratio(alpha, i);
}

WeightedShiftSpace builtin_space(SpaceKind kind, std::size_t m, const std::map<std::string, std::string>& params) {
  if (m == 0) throw Error(ErrorCode::invalid_arity, "variable count must be >= 1");
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw Error(ErrorCode::invalid_argument, "unknown parameter '" + k + "' for " + to_string(kind));
    }
  };
  switch (kind) {
    case SpaceKind::drury_arveson:
      reject_unknown({});
      return WeightedShiftSpace(std::make_shared<BallModel>(kind, m, 1 - static_cast<long>(m), params));
    case SpaceKind::hardy_ball:
      reject_unknown({});
      return WeightedShiftSpace(std::make_shared<BallModel>(kind, m, 0, params));
    case SpaceKind::bergman_ball:
      reject_unknown({});
      return WeightedShiftSpace(std::make_shared<BallModel>(kind, m, 1, params));
    case SpaceKind::polydisk_hardy: {
      reject_unknown({"c2"});
      auto it = params.find("c2");
      Rational c2 = it == params.end() ? Rational(1) : parse_rational(it->second);
      auto resolved = params;
      resolved["c2"] = c2.get_str();
      return WeightedShiftSpace(std::make_shared<PolydiskModel>(m, std::move(c2), std::move(resolved)));
    }
    case SpaceKind::custom:
      throw Error(ErrorCode::invalid_argument, "custom spaces need a weight table or closed form");
  }
  throw Error(ErrorCode::invalid_argument, "unknown space kind");
}

WeightedShiftSpace custom_space(std::size_t m, WeightFunction weight, std::string name,
                                std::map<std::string, std::string> params) {
  return WeightedShiftSpace(std::make_shared<FunctionModel>(m, std::move(weight), std::move(name), std::move(params)));
}

WeightedShiftSpace custom_space(std::size_t m, const std::map<MultiIndex, Rational>& table, std::string name) {
  for (const auto& [alpha, w] : table) {
    if (alpha.size() != m) throw Error(ErrorCode::dimension_mismatch, "weight table arity mismatch");
    if (sgn(w) <= 0) throw Error(ErrorCode::nonpositive_weight, "weight at " + alpha.str() + " is not positive");
  }
  auto f = [table](const MultiIndex& alpha) -> Rational {
    auto it = table.find(alpha);
    if (it == table.end()) throw Error(ErrorCode::window_error, "weight table has no entry for " + alpha.str());
    return it->second;
  };
  return custom_space(m, std::move(f), std::move(name), {{"table_size", std::to_string(table.size())}});
}

Rational spherical_defect_diagonal(const WeightedShiftSpace& space, const MultiIndex& alpha) {
  return space.defect_diagonal(alpha);
}

WeightedShiftSpace weighted_piece(const WeightedShiftSpace& space, const WeightVector& n, const MultiIndex& residue) {
  if (n.size() != space.arity() || residue.size() != space.arity())
    throw Error(ErrorCode::dimension_mismatch, "weight vector or residue arity mismatch");
  if (!(residue_of(residue, n) == residue))
    throw Error(ErrorCode::invalid_argument, "residue " + residue.str() + " is not in range 0 <= alpha < " + n.str());
  auto f = [space, n, residue](const MultiIndex& beta) { return space.weight(residue_lift(residue, n, beta)); };
  return custom_space(space.arity(), std::move(f), space.name() + "-piece",
                      {{"weight", n.str()}, {"residue", residue.str()}});
}

PartitionReport piece_partition_check(const WeightedShiftSpace& space, const WeightVector& n,
                                      std::uint32_t max_degree) {
  if (n.size() != space.arity()) throw Error(ErrorCode::dimension_mismatch, "weight vector arity mismatch");
  PartitionReport rep;
  std::map<MultiIndex, std::uint64_t> counts;
  for (const auto& r : residue_classes(n)) counts[r] = 0;
  for (std::uint32_t k = 0; k <= max_degree; ++k) {
    rep.expected_total += level_dimension(space.arity(), k);
    for (const auto& a : enumerate_level(space.arity(), k)) {
      auto it = counts.find(residue_of(a, n));
      if (it == counts.end()) throw Error(ErrorCode::structural_error, "residue outside class list");
      ++it->second;
      ++rep.total;
    }
  }
  for (const auto& r : residue_classes(n)) rep.class_sizes.emplace_back(r, counts[r]);
  rep.balanced = rep.total == rep.expected_total;
  return rep;
}

}  // namespace wsm
