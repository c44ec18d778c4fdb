#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "wsm/scalar.hpp"

namespace wsm {

// Sparse vector: (column, value) pairs, strictly increasing columns, no zeros.
using SparseVector = std::vector<std::pair<std::size_t, GaussRational>>;

SparseVector make_sparse(const std::map<std::size_t, GaussRational>& entries);

// Incremental row echelon form over the Gaussian integers. Incoming rows are
// cleared of denominators and reduced by cross-multiplication against stored
// pivot rows (r <- p*r - a*q), then divided by their integer content, so no
// fractions are formed during elimination.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t cols) : cols_(cols) {}

  // Returns true when the row was independent of the rows inserted so far.
  bool insert(const SparseVector& row);

  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t rank() const noexcept { return pivots_.size(); }
  [[nodiscard]] std::vector<std::size_t> pivot_columns() const;

  // Reduced row echelon basis (leading 1, zeros above and below each pivot),
  // ordered by pivot column.
  [[nodiscard]] std::vector<SparseVector> rref() const;

  // Basis of {x : R x = 0}: one vector per free column, x_free = 1.
  [[nodiscard]] std::vector<SparseVector> nullspace() const;

 private:
  struct GaussInt {
    Integer re;
    Integer im;
  };
  using IntRow = std::vector<std::pair<std::size_t, GaussInt>>;

  static IntRow clear_denominators(const SparseVector& row);
  static void remove_content(IntRow& row);
  static void eliminate(IntRow& row, const IntRow& pivot);

  std::size_t cols_;
  std::map<std::size_t, IntRow> pivots_;  // keyed by leading column
};

std::size_t exact_rank(const std::vector<SparseVector>& rows, std::size_t cols);

// Sparse exact matrix (row-major).
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix diagonal(const std::vector<GaussRational>& d);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] const SparseVector& row(std::size_t r) const { return data_[r]; }
  [[nodiscard]] GaussRational at(std::size_t r, std::size_t c) const;
  // Adds v to entry (r, c); entries that cancel to zero are dropped.
  void add(std::size_t r, std::size_t c, const GaussRational& v);
  void set_row(std::size_t r, SparseVector v);

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_diagonal() const;
  [[nodiscard]] std::size_t nonzeros() const;
  [[nodiscard]] GaussRational trace() const;
  // Conjugate transpose.
  [[nodiscard]] ExactMatrix adjoint() const;
  [[nodiscard]] ExactMatrix scaled(const GaussRational& c) const;

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVector> data_;
};

// Solves A X = B exactly for square nonsingular A (Gauss-Jordan, exact field ops).
ExactMatrix solve(const ExactMatrix& a, const ExactMatrix& b);

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Exact-to-double conversion that stays accurate for tiny or huge magnitudes.
double to_double(const Rational& q);
std::complex<double> to_complex(const GaussRational& z);
CMatrix to_float(const ExactMatrix& m, const Rational& scale = Rational(1));

}  // namespace wsm
