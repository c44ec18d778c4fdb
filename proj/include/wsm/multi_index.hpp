#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wsm {

// Exponent vector alpha in N^m; z^alpha = z_1^alpha_1 ... z_m^alpha_m.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t m) : e_(m, 0) {}
  explicit MultiIndex(std::vector<std::uint32_t> entries) : e_(std::move(entries)) {}
  MultiIndex(std::initializer_list<std::uint32_t> entries) : e_(entries) {}

  static MultiIndex unit(std::size_t m, std::size_t i) {
    MultiIndex a(m);
    a.e_[i] = 1;
    return a;
  }

  [[nodiscard]] std::size_t size() const noexcept { return e_.size(); }
  [[nodiscard]] std::uint32_t operator[](std::size_t i) const { return e_[i]; }
  std::uint32_t& operator[](std::size_t i) { return e_[i]; }
  [[nodiscard]] std::span<const std::uint32_t> entries() const noexcept { return e_; }

  // |alpha|
  [[nodiscard]] std::uint64_t degree() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept { return degree() == 0; }
  // Componentwise alpha >= other.
  [[nodiscard]] bool dominates(const MultiIndex& other) const;

  MultiIndex& operator+=(const MultiIndex& o);
  // Requires dominates(o).
  MultiIndex& operator-=(const MultiIndex& o);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  // Graded-lex basis order: lower total degree first; within a level the
  // lexicographically larger exponent comes first, so z1^2 < z1 z2 < z2^2.
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::uint32_t> e_;
};

class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<std::uint32_t> entries);
  static WeightVector ones(std::size_t m) { return WeightVector(std::vector<std::uint32_t>(m, 1)); }

  [[nodiscard]] std::size_t size() const noexcept { return n_.size(); }
  [[nodiscard]] std::uint32_t operator[](std::size_t i) const { return n_[i]; }
  [[nodiscard]] std::span<const std::uint32_t> entries() const noexcept { return n_; }
  [[nodiscard]] bool is_trivial() const noexcept;
  friend bool operator==(const WeightVector&, const WeightVector&) = default;
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::uint32_t> n_;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const noexcept;
};

// Number of monomials of total degree k in m variables, C(m+k-1, k).
std::uint64_t level_dimension(std::size_t m, std::uint64_t k);

// Degree-k monomials in graded-lex order: (k,0,..,0) first, (0,..,0,k) last.
std::vector<MultiIndex> enumerate_level(std::size_t m, std::uint32_t k);

// Monomials with sum_i n_i alpha_i = l, ordered by plain degree then graded-lex.
std::vector<MultiIndex> enumerate_weighted_level(const WeightVector& n, std::uint32_t l);

std::uint64_t weighted_degree(const MultiIndex& alpha, const WeightVector& n);

// (alpha_1 mod n_1, ..., alpha_m mod n_m)
MultiIndex residue_of(const MultiIndex& alpha, const WeightVector& n);

// alpha + n (.) beta, the inverse of the residue split.
MultiIndex residue_lift(const MultiIndex& residue, const WeightVector& n, const MultiIndex& beta);

// All residue classes 0 <= alpha < n in lexicographic order.
std::vector<MultiIndex> residue_classes(const WeightVector& n);

}  // namespace wsm
