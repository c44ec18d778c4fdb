#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "wsm/multi_index.hpp"
#include "wsm/scalar.hpp"

namespace wsm {

// Polynomial in m variables with exact Gaussian-rational coefficients.
// Terms are kept in graded-lex order and never hold a zero coefficient.
class GradedPolynomial {
 public:
  using Terms = std::map<MultiIndex, GaussRational>;

  GradedPolynomial() = default;
  explicit GradedPolynomial(std::size_t m) : m_(m) {}
  GradedPolynomial(std::size_t m, Terms terms);

  static GradedPolynomial monomial(const MultiIndex& alpha, GaussRational c = 1);
  static GradedPolynomial constant(std::size_t m, GaussRational c);

  // Parses the text grammar; variables are z1..zm (or Z1..Zm). When m is 0 the
  // arity is the largest variable index seen (at least 1).
  static GradedPolynomial parse(std::string_view text, std::size_t m = 0);

  [[nodiscard]] std::size_t arity() const noexcept { return m_; }
  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] GaussRational coefficient(const MultiIndex& alpha) const;

  // Largest total degree of a term; 0 for the zero polynomial.
  [[nodiscard]] std::uint64_t degree() const noexcept { return degree_; }
  [[nodiscard]] bool is_homogeneous() const noexcept { return homogeneous_; }
  // Weighted degree if every term shares it, otherwise nullopt. Zero polynomial -> 0.
  [[nodiscard]] std::optional<std::uint64_t> quasi_degree(const WeightVector& n) const;

  GradedPolynomial& operator+=(const GradedPolynomial& o);
  GradedPolynomial& operator-=(const GradedPolynomial& o);
  friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) { return a += b; }
  friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) { return a -= b; }
  friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);
  [[nodiscard]] GradedPolynomial scaled(const GaussRational& c) const;
  // z^beta * this
  [[nodiscard]] GradedPolynomial shifted(const MultiIndex& beta) const;

  friend bool operator==(const GradedPolynomial& a, const GradedPolynomial& b) {
    return a.m_ == b.m_ && a.terms_ == b.terms_;
  }

  [[nodiscard]] std::string str() const;

 private:
  void refresh();

  std::size_t m_ = 0;
  Terms terms_;
  std::uint64_t degree_ = 0;
  bool homogeneous_ = true;
};

}  // namespace wsm
