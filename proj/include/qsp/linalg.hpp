#pragma once

// Sparse and dense linear algebra over Q(q). Everything is exact; the dense
// routines are Gauss-Jordan elimination with a pivot heuristic that prefers
// monomial entries to keep fraction growth down.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qsp/qfield.hpp"

namespace qsp::linalg {

using qfield::RationalFunction;

using SparseVector = std::map<std::size_t, RationalFunction>;

void add_scaled(SparseVector& target, const RationalFunction& c, const SparseVector& v);
SparseVector scaled(const SparseVector& v, const RationalFunction& c);
SparseVector difference(const SparseVector& a, const SparseVector& b);
bool is_zero(const SparseVector& v);

class SparseMatrix {
 public:
  using Column = std::vector<std::pair<std::size_t, RationalFunction>>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(const std::vector<RationalFunction>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Adds value to entry (i, j).
  void add(std::size_t i, std::size_t j, const RationalFunction& value);
  RationalFunction at(std::size_t i, std::size_t j) const;
  const Column& column(std::size_t j) const { return columns_[j]; }
  std::size_t nonzeros() const;

  SparseVector apply(const SparseVector& v) const;
  SparseMatrix transpose() const;

  SparseMatrix& operator+=(const SparseMatrix& o);
  SparseMatrix& operator-=(const SparseMatrix& o);
  friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) { return a += b; }
  friend SparseMatrix operator-(SparseMatrix a, const SparseMatrix& b) { return a -= b; }
  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  SparseMatrix scaled(const RationalFunction& c) const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);
  friend bool operator!=(const SparseMatrix& a, const SparseMatrix& b) { return !(a == b); }

 private:
  void normalize_column(std::size_t j);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Column> columns_;  // each sorted by row index, no zeros
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_sparse(const SparseMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  RationalFunction& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const RationalFunction& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  SparseMatrix to_sparse() const;
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RationalFunction> data_;
};

// Reduced row echelon form, in place. Returns the pivot columns in order.
std::vector<std::size_t> rref(DenseMatrix& m);
std::size_t rank(DenseMatrix m);
// Basis of {x : m x = 0}, one vector per free column, in column order.
std::vector<std::vector<RationalFunction>> nullspace(DenseMatrix m);
// Some x with m x = b, or nullopt when inconsistent.
std::optional<std::vector<RationalFunction>> solve(const DenseMatrix& m, const std::vector<RationalFunction>& b);
std::optional<DenseMatrix> inverse(const DenseMatrix& m);
RationalFunction determinant(DenseMatrix m);

// Span of a growing list of sparse vectors, kept in fully reduced echelon form
// so that membership tests and coordinates are exact.
class EchelonSpan {
 public:
  // Returns true and records v when v is outside the current span.
  bool add(const SparseVector& v);
  bool contains(const SparseVector& v) const;
  // Coefficients c with v = Σ c_k (k-th accepted vector), or nullopt.
  std::optional<SparseVector> coordinates(const SparseVector& v) const;
  std::size_t size() const { return originals_.size(); }
  const std::vector<SparseVector>& vectors() const { return originals_; }

 private:
  struct Row {
    std::size_t pivot;
    SparseVector reduced;  // entry 1 at pivot, 0 at every other pivot
    SparseVector combo;    // reduced = Σ combo[k] originals_[k]
  };
  // Reduces v against the rows; returns the residue and accumulates the
  // multiples subtracted, in terms of originals_.
  SparseVector reduce(const SparseVector& v, SparseVector* used) const;

  std::vector<Row> rows_;
  std::map<std::size_t, std::size_t> pivot_row_;
  std::vector<SparseVector> originals_;
};

}  // namespace qsp::linalg
