#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace wsm {

using Rational = mpq_class;
using Integer = mpz_class;

// Exact complex number with rational real and imaginary parts.
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  [[nodiscard]] const Rational& re() const noexcept { return re_; }
  [[nodiscard]] const Rational& im() const noexcept { return im_; }

  [[nodiscard]] bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
  [[nodiscard]] bool is_real() const noexcept { return sgn(im_) == 0; }
  [[nodiscard]] GaussRational conj() const { return {re_, -im_}; }
  // |z|^2, always rational.
  [[nodiscard]] Rational norm2() const { return re_ * re_ + im_ * im_; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  // "a/b", "c/di", or "a/b+c/di".
  [[nodiscard]] std::string str() const;
  // Inverse of str(); throws wsm::Error on malformed input.
  static GaussRational parse(std::string_view text);

 private:
  Rational re_{0};
  Rational im_{0};
};

// Parses "a" or "a/b" into a canonical rational; throws wsm::Error otherwise.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

}  // namespace wsm
