#include "wsm/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "wsm/error.hpp"

namespace wsm {

GradedPolynomial::GradedPolynomial(std::size_t m, Terms terms) : m_(m), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.size() != m_)
      throw Error(ErrorCode::dimension_mismatch, "term arity does not match polynomial arity");
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  refresh();
}

GradedPolynomial GradedPolynomial::monomial(const MultiIndex& alpha, GaussRational c) {
  Terms t;
  t.emplace(alpha, std::move(c));
  return {alpha.size(), std::move(t)};
}

GradedPolynomial GradedPolynomial::constant(std::size_t m, GaussRational c) {
  return monomial(MultiIndex(m), std::move(c));
}

void GradedPolynomial::refresh() {
  degree_ = 0;
  homogeneous_ = true;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    const auto d = alpha.degree();
    if (!first && d != degree_) homogeneous_ = false;
    degree_ = std::max(degree_, d);
    first = false;
  }
}

GaussRational GradedPolynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? GaussRational{} : it->second;
}

std::optional<std::uint64_t> GradedPolynomial::quasi_degree(const WeightVector& n) const {
  if (n.size() != m_) throw Error(ErrorCode::dimension_mismatch, "weight vector arity mismatch");
  std::optional<std::uint64_t> d;
  for (const auto& [alpha, c] : terms_) {
    const auto w = weighted_degree(alpha, n);
    if (d && *d != w) return std::nullopt;
    d = w;
  }
  return d.value_or(0);
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
  if (o.m_ != m_) throw Error(ErrorCode::dimension_mismatch, "polynomial arity mismatch");
  for (const auto& [alpha, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  refresh();
  return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
  return *this += o.scaled(GaussRational(-1));
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
  if (a.m_ != b.m_) throw Error(ErrorCode::dimension_mismatch, "polynomial arity mismatch");
  GradedPolynomial::Terms t;
  for (const auto& [x, cx] : a.terms_)
    for (const auto& [y, cy] : b.terms_) t[x + y] += cx * cy;
  return {a.m_, std::move(t)};
}

GradedPolynomial GradedPolynomial::scaled(const GaussRational& c) const {
  Terms t;
  if (!c.is_zero())
    for (const auto& [alpha, v] : terms_) t.emplace(alpha, v * c);
  return {m_, std::move(t)};
}

GradedPolynomial GradedPolynomial::shifted(const MultiIndex& beta) const {
  Terms t;
  for (const auto& [alpha, v] : terms_) t.emplace(alpha + beta, v);
  return {m_, std::move(t)};
}

std::string GradedPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest degree first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [alpha, c] = *it;
    std::string coeff = c.str();
    const bool negative_real = c.is_real() && sgn(c.re()) < 0;
    if (!c.is_real()) coeff = "(" + coeff + ")";
    if (negative_real) coeff = (-c).str();
    std::string mono;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "z" + std::to_string(i + 1);
      if (alpha[i] > 1) mono += "^" + std::to_string(alpha[i]);
    }
    std::string term;
    if (mono.empty()) term = coeff;
    else if (coeff == "1") term = mono;
    else term = coeff + "*" + mono;
    if (out.empty()) out = (negative_real ? "-" : "") + term;
    else out += (negative_real ? " - " : " + ") + term;
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t m) : s_(text), m_(m) {}

  GradedPolynomial run() {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        advance();
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      parse_term(sign);
      first = false;
      skip_ws();
      if (at_end()) break;
    }
    std::size_t arity = m_ != 0 ? m_ : std::max<std::size_t>(max_var_, 1);
    GradedPolynomial::Terms terms;
    for (auto& [vars, c] : raw_) {
      std::vector<std::uint32_t> e(arity, 0);
      for (auto [v, p] : vars) e[v - 1] += p;
      terms[MultiIndex(std::move(e))] += c;
    }
    return {arity, std::move(terms)};
  }

 private:
  using RawTerm = std::pair<std::vector<std::pair<std::size_t, std::uint32_t>>, GaussRational>;

  [[nodiscard]] bool at_end() const { return pos_ >= s_.size(); }
  [[nodiscard]] char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  std::string digits() {
    skip_ws();
    std::string d;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      d.push_back(peek());
      advance();
    }
    if (d.empty()) fail("expected digits");
    return d;
  }

  void parse_term(int sign) {
    RawTerm term{{}, GaussRational(sign)};
    while (true) {
      skip_ws();
      parse_factor(term);
      skip_ws();
      if (peek() != '*') break;
      advance();
    }
    raw_.push_back(std::move(term));
  }

  void parse_factor(RawTerm& term) {
    const char c = peek();
    if (c == 'z' || c == 'Z') {
      advance();
      const auto idx_col = col_;
      // A bare z is z1, handy for one-variable input.
      const auto idx = std::isdigit(static_cast<unsigned char>(peek())) ? std::stoul(digits()) : 1UL;
      if (idx == 0) throw ParseError("variable index must be >= 1", line_, idx_col);
      if (m_ != 0 && idx > m_)
        throw ParseError("variable z" + std::to_string(idx) + " exceeds arity " + std::to_string(m_),
                         line_, idx_col);
      std::uint32_t power = 1;
      skip_ws();
      if (peek() == '^') {
        advance();
        power = static_cast<std::uint32_t>(std::stoul(digits()));
      }
      max_var_ = std::max<std::size_t>(max_var_, idx);
      term.first.emplace_back(idx, power);
      return;
    }
    if (c == '(') {
      advance();
      const auto start = pos_;
      const auto start_col = col_;
      while (!at_end() && peek() != ')') advance();
      if (at_end()) fail("unterminated '('");
      GaussRational v;
      try {
        v = GaussRational::parse(s_.substr(start, pos_ - start));
      } catch (const Error& e) {
        throw ParseError(e.what(), line_, start_col);
      }
      advance();
      skip_ws();
      if (peek() == 'i') {
        advance();
        v *= GaussRational(Rational(0), Rational(1));
      }
      term.second *= v;
      return;
    }
    if (c == 'i') {
      advance();
      term.second *= GaussRational(Rational(0), Rational(1));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num(digits());
      Integer den(1);
      skip_ws();
      if (peek() == '/') {
        advance();
        const auto den_col = col_;
        den = Integer(digits());
        if (den == 0) throw ParseError("zero denominator", line_, den_col);
      }
      Rational q(num, den);
      q.canonicalize();
      GaussRational v(q);
      skip_ws();
      if (peek() == 'i') {
        advance();
        v = GaussRational(Rational(0), q);
      } else if (peek() == '.' || peek() == 'e' || peek() == 'E') {
        fail("floating-point literals are not accepted; use a/b");
      }
      term.second *= v;
      return;
    }
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t m_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t max_var_ = 0;
  std::vector<RawTerm> raw_;
};

}  // namespace

GradedPolynomial GradedPolynomial::parse(std::string_view text, std::size_t m) {
  return Parser(text, m).run();
}

}  // namespace wsm
