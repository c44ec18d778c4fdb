#include "wsm/multi_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "wsm/error.hpp"

namespace wsm {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::dimension_mismatch,
                "length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

std::string join(std::span<const std::uint32_t> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

}  // namespace

std::uint64_t MultiIndex::degree() const noexcept {
  return std::accumulate(e_.begin(), e_.end(), std::uint64_t{0});
}

bool MultiIndex::dominates(const MultiIndex& other) const {
  require_same_length(size(), other.size());
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] < other.e_[i]) return false;
  return true;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& o) {
  require_same_length(size(), o.size());
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] > std::numeric_limits<std::uint32_t>::max() - o.e_[i])
      throw Error(ErrorCode::overflow, "exponent overflow");
    e_[i] += o.e_[i];
  }
  return *this;
}

MultiIndex& MultiIndex::operator-=(const MultiIndex& o) {
  require_same_length(size(), o.size());
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] < o.e_[i]) throw Error(ErrorCode::invalid_argument, "negative exponent");
    e_[i] -= o.e_[i];
  }
  return *this;
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da < db;
  return std::lexicographical_compare(b.e_.begin(), b.e_.end(), a.e_.begin(), a.e_.end());
}

std::string MultiIndex::str() const { return join(e_); }

WeightVector::WeightVector(std::vector<std::uint32_t> entries) : n_(std::move(entries)) {
  for (auto v : n_)
    if (v == 0) throw Error(ErrorCode::invalid_argument, "weight entries must be >= 1");
}

bool WeightVector::is_trivial() const noexcept {
  return std::all_of(n_.begin(), n_.end(), [](auto v) { return v == 1; });
}

std::string WeightVector::str() const { return join(n_); }

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
  std::size_t h = a.size();
  for (auto v : a.entries()) h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t level_dimension(std::size_t m, std::uint64_t k) {
  if (m == 0) throw Error(ErrorCode::invalid_arity, "variable count must be >= 1");
  // C(m-1+k, m-1) built incrementally; each partial product is itself a binomial.
  unsigned __int128 acc = 1;
  for (std::uint64_t j = 1; j < m; ++j) {
    acc = acc * (k + j) / j;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw Error(ErrorCode::overflow, "level dimension overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<MultiIndex> enumerate_level(std::size_t m, std::uint32_t k) {
  const auto count = level_dimension(m, k);
  std::vector<MultiIndex> out;
  out.reserve(count);
  MultiIndex cur(m);
  // Depth-first with the first variable taking its largest value first.
  auto rec = [&](auto&& self, std::size_t pos, std::uint32_t remaining) -> void {
    if (pos + 1 == m) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (std::uint32_t v = remaining + 1; v-- > 0;) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

std::vector<MultiIndex> enumerate_weighted_level(const WeightVector& n, std::uint32_t l) {
  const std::size_t m = n.size();
  if (m == 0) throw Error(ErrorCode::invalid_arity, "variable count must be >= 1");
  std::vector<MultiIndex> out;
  MultiIndex cur(m);
  auto rec = [&](auto&& self, std::size_t pos, std::uint32_t remaining) -> void {
    if (pos + 1 == m) {
      if (remaining % n[pos] == 0) {
        cur[pos] = remaining / n[pos];
        out.push_back(cur);
      }
      return;
    }
    for (std::uint32_t v = remaining / n[pos] + 1; v-- > 0;) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v * n[pos]);
    }
  };
  rec(rec, 0, l);
  std::stable_sort(out.begin(), out.end());
  return out;
}

std::uint64_t weighted_degree(const MultiIndex& alpha, const WeightVector& n) {
  require_same_length(alpha.size(), n.size());
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < n.size(); ++i) d += std::uint64_t{n[i]} * alpha[i];
  return d;
}

MultiIndex residue_of(const MultiIndex& alpha, const WeightVector& n) {
  require_same_length(alpha.size(), n.size());
  MultiIndex r(alpha.size());
  for (std::size_t i = 0; i < n.size(); ++i) r[i] = alpha[i] % n[i];
  return r;
}

MultiIndex residue_lift(const MultiIndex& residue, const WeightVector& n, const MultiIndex& beta) {
  require_same_length(residue.size(), n.size());
  require_same_length(beta.size(), n.size());
  MultiIndex r(residue);
  for (std::size_t i = 0; i < n.size(); ++i) r[i] += n[i] * beta[i];
  return r;
}

std::vector<MultiIndex> residue_classes(const WeightVector& n) {
  std::vector<MultiIndex> out;
  MultiIndex cur(n.size());
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == n.size()) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t v = 0; v < n[pos]; ++v) {
      cur[pos] = v;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace wsm
