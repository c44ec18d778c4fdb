#include "wsm/scalar.hpp"

#include <cctype>

#include "wsm/error.hpp"

namespace wsm {

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  const Rational d = o.norm2();
  if (sgn(d) == 0) throw Error(ErrorCode::invalid_argument, "division by zero");
  Rational re = (re_ * o.re_ + im_ * o.im_) / d;
  Rational im = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string GaussRational::str() const {
  if (is_real()) return re_.get_str();
  const std::string im = (im_ == 1 ? "" : im_ == -1 ? "-" : im_.get_str()) + "i";
  if (sgn(re_) == 0) return im;
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im;
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto valid = [](const std::string& part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num, true) || !valid(den, false))
    throw Error(ErrorCode::parse_error, "malformed rational '" + std::string(text) + "'");
  Integer n(num[0] == '+' ? num.substr(1) : num);
  Integer d(den);
  if (d == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

GaussRational GaussRational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error(ErrorCode::parse_error, "empty scalar");
  if (s.back() != 'i') return {parse_rational(s)};
  s.pop_back();
  // Split real and imaginary parts at the last sign that is not leading.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  }
  auto imag_of = [](const std::string& part) -> Rational {
    if (part.empty() || part == "+") return 1;
    if (part == "-") return -1;
    return parse_rational(part);
  };
  if (split == std::string::npos) return {Rational(0), imag_of(s)};
  return {parse_rational(s.substr(0, split)), imag_of(s.substr(split))};
}

}  // namespace wsm
