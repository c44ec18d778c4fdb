#include "wsm/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "wsm/error.hpp"

namespace wsm {

SparseVector make_sparse(const std::map<std::size_t, GaussRational>& entries) {
  SparseVector v;
  v.reserve(entries.size());
  for (const auto& [c, x] : entries)
    if (!x.is_zero()) v.emplace_back(c, x);
  return v;
}

RowEchelon::IntRow RowEchelon::clear_denominators(const SparseVector& row) {
  Integer l = 1;
  for (const auto& [c, x] : row) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.re().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.im().get_den_mpz_t());
  }
  IntRow out;
  out.reserve(row.size());
  for (const auto& [c, x] : row) {
    Integer re = x.re().get_num() * (l / x.re().get_den());
    Integer im = x.im().get_num() * (l / x.im().get_den());
    out.push_back({c, {std::move(re), std::move(im)}});
  }
  remove_content(out);
  return out;
}

void RowEchelon::remove_content(IntRow& row) {
  Integer g = 0;
  for (const auto& [c, x] : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.re.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.im.get_mpz_t());
    if (g == 1) return;
  }
  if (g == 0 || g == 1) return;
  for (auto& [c, x] : row) {
    mpz_divexact(x.re.get_mpz_t(), x.re.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(x.im.get_mpz_t(), x.im.get_mpz_t(), g.get_mpz_t());
  }
}

// row <- p*row - a*pivot where p, a are the leading entries of pivot and row.
void RowEchelon::eliminate(IntRow& row, const IntRow& pivot) {
  const GaussInt p = pivot.front().second;
  const GaussInt a = row.front().second;
  auto mul = [](const GaussInt& x, const GaussInt& y) {
    return GaussInt{x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  };
  IntRow out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < row.size() || j < pivot.size()) {
    std::size_t col;
    GaussInt v{0, 0};
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      col = row[i].first;
      v = mul(p, row[i].second);
      ++i;
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      col = pivot[j].first;
      const auto t = mul(a, pivot[j].second);
      v = {-t.re, -t.im};
      ++j;
    } else {
      col = row[i].first;
      const auto x = mul(p, row[i].second);
      const auto y = mul(a, pivot[j].second);
      v = {x.re - y.re, x.im - y.im};
      ++i;
      ++j;
    }
    if (v.re != 0 || v.im != 0) out.push_back({col, std::move(v)});
  }
  remove_content(out);
  row = std::move(out);
}

bool RowEchelon::insert(const SparseVector& row) {
  for (const auto& [c, x] : row)
    if (c >= cols_) throw Error(ErrorCode::dimension_mismatch, "row entry beyond column count");
  IntRow r = clear_denominators(row);
  while (!r.empty()) {
    auto it = pivots_.find(r.front().first);
    if (it == pivots_.end()) {
      const auto lead = r.front().first;
      pivots_.emplace(lead, std::move(r));
      return true;
    }
    eliminate(r, it->second);
  }
  return false;
}

std::vector<std::size_t> RowEchelon::pivot_columns() const {
  std::vector<std::size_t> out;
  out.reserve(pivots_.size());
  for (const auto& [c, r] : pivots_) out.push_back(c);
  return out;
}

std::vector<SparseVector> RowEchelon::rref() const {
  // Work with rational rows, normalized to leading 1, then back-substitute
  // from the last pivot upward.
  std::vector<std::size_t> cols;
  std::vector<std::map<std::size_t, GaussRational>> rows;
  for (const auto& [lead, r] : pivots_) {
    const GaussRational p(Rational(r.front().second.re), Rational(r.front().second.im));
    std::map<std::size_t, GaussRational> m;
    for (const auto& [c, x] : r) m.emplace(c, GaussRational(Rational(x.re), Rational(x.im)) / p);
    cols.push_back(lead);
    rows.push_back(std::move(m));
  }
  for (std::size_t i = rows.size(); i-- > 0;) {
    for (std::size_t j = 0; j < i; ++j) {
      auto it = rows[j].find(cols[i]);
      if (it == rows[j].end()) continue;
      const GaussRational f = it->second;
      for (const auto& [c, x] : rows[i]) {
        auto& slot = rows[j][c];
        slot -= f * x;
        if (slot.is_zero()) rows[j].erase(c);
      }
    }
  }
  std::vector<SparseVector> out;
  out.reserve(rows.size());
  for (const auto& m : rows) out.push_back(make_sparse(m));
  return out;
}

std::vector<SparseVector> RowEchelon::nullspace() const {
  const auto r = rref();
  std::vector<bool> is_pivot(cols_, false);
  std::vector<std::size_t> pivot_of_row;
  for (const auto& row : r) {
    is_pivot[row.front().first] = true;
    pivot_of_row.push_back(row.front().first);
  }
  std::vector<SparseVector> out;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    std::map<std::size_t, GaussRational> v;
    v.emplace(f, GaussRational(1));
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (const auto& [c, x] : r[i])
        if (c == f) v.emplace(pivot_of_row[i], -x);
    }
    out.push_back(make_sparse(v));
  }
  return out;
}

std::size_t exact_rank(const std::vector<SparseVector>& rows, std::size_t cols) {
  RowEchelon e(cols);
  for (const auto& r : rows) e.insert(r);
  return e.rank();
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(i, GaussRational(1));
  return m;
}

ExactMatrix ExactMatrix::diagonal(const std::vector<GaussRational>& d) {
  ExactMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!d[i].is_zero()) m.data_[i].emplace_back(i, d[i]);
  return m;
}

GaussRational ExactMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = data_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  return (it != row.end() && it->first == c) ? it->second : GaussRational{};
}

void ExactMatrix::add(std::size_t r, std::size_t c, const GaussRational& v) {
  if (r >= rows_ || c >= cols_) throw Error(ErrorCode::dimension_mismatch, "matrix index out of range");
  if (v.is_zero()) return;
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    it->second += v;
    if (it->second.is_zero()) row.erase(it);
  } else {
    row.insert(it, {c, v});
  }
}

void ExactMatrix::set_row(std::size_t r, SparseVector v) { data_.at(r) = std::move(v); }

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const auto& r) { return r.empty(); });
}

bool ExactMatrix::is_diagonal() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, x] : data_[r])
      if (c != r) return false;
  return true;
}

std::size_t ExactMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

GaussRational ExactMatrix::trace() const {
  GaussRational t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
  return t;
}

ExactMatrix ExactMatrix::adjoint() const {
  ExactMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, x] : data_[r]) out.data_[c].emplace_back(r, x.conj());
  return out;
}

ExactMatrix ExactMatrix::scaled(const GaussRational& c) const {
  ExactMatrix out(rows_, cols_);
  if (c.is_zero()) return out;
  for (std::size_t r = 0; r < rows_; ++r) {
    out.data_[r].reserve(data_[r].size());
    for (const auto& [col, x] : data_[r]) out.data_[r].emplace_back(col, x * c);
  }
  return out;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product shape mismatch");
  ExactMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    std::map<std::size_t, GaussRational> acc;
    for (const auto& [k, x] : a.data_[r])
      for (const auto& [c, y] : b.data_[k]) acc[c] += x * y;
    out.data_[r] = make_sparse(acc);
  }
  return out;
}

namespace {

ExactMatrix combine(const ExactMatrix& a, const ExactMatrix& b, bool subtract) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::dimension_mismatch, "matrix sum shape mismatch");
  ExactMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::map<std::size_t, GaussRational> acc;
    for (const auto& [c, x] : a.row(r)) acc[c] += x;
    for (const auto& [c, y] : b.row(r)) acc[c] += subtract ? -y : y;
    out.set_row(r, make_sparse(acc));
  }
  return out;
}

}  // namespace

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) { return combine(a, b, false); }
ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) { return combine(a, b, true); }

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

ExactMatrix solve(const ExactMatrix& a, const ExactMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw Error(ErrorCode::dimension_mismatch, "solve shape mismatch");
  if (a.is_diagonal()) {
    ExactMatrix x(n, b.cols());
    for (std::size_t r = 0; r < n; ++r) {
      const GaussRational d = a.at(r, r);
      if (d.is_zero()) throw Error(ErrorCode::invalid_argument, "singular system");
      SparseVector row;
      for (const auto& [c, v] : b.row(r)) row.emplace_back(c, v / d);
      x.set_row(r, std::move(row));
    }
    return x;
  }
  const std::size_t k = b.cols();
  std::vector<std::vector<GaussRational>> m(n, std::vector<GaussRational>(n + k));
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& [c, v] : a.row(r)) m[r][c] = v;
    for (const auto& [c, v] : b.row(r)) m[r][n + c] = v;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) throw Error(ErrorCode::invalid_argument, "singular system");
    std::swap(m[piv], m[col]);
    const GaussRational inv = GaussRational(1) / m[col][col];
    for (auto& x : m[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const GaussRational f = m[r][col];
      for (std::size_t c = col; c < n + k; ++c)
        if (!m[col][c].is_zero()) m[r][c] -= f * m[col][c];
    }
  }
  ExactMatrix x(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    SparseVector row;
    for (std::size_t c = 0; c < k; ++c)
      if (!m[r][n + c].is_zero()) row.emplace_back(c, m[r][n + c]);
    x.set_row(r, std::move(row));
  }
  return x;
}

double to_double(const Rational& q) {
  if (sgn(q) == 0) return 0.0;
  long en = 0;
  long ed = 0;
  const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

std::complex<double> to_complex(const GaussRational& z) { return {to_double(z.re()), to_double(z.im())}; }

CMatrix to_float(const ExactMatrix& m, const Rational& scale) {
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, x] : m.row(r))
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          scale == 1 ? to_complex(x) : to_complex(x * GaussRational(scale));
  return out;
}

}  // namespace wsm
