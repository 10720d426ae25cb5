#include "qsp/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsp::linalg {

void add_scaled(SparseVector& target, const RationalFunction& c, const SparseVector& v) {
  if (c.is_zero()) return;
  for (const auto& [i, x] : v) {
    auto [it, inserted] = target.try_emplace(i);
    it->second += c.is_one() ? x : c * x;
    if (it->second.is_zero()) target.erase(it);
  }
}

SparseVector scaled(const SparseVector& v, const RationalFunction& c) {
  SparseVector out;
  add_scaled(out, c, v);
  return out;
}

SparseVector difference(const SparseVector& a, const SparseVector& b) {
  SparseVector out = a;
  add_scaled(out, RationalFunction(-1), b);
  return out;
}

bool is_zero(const SparseVector& v) {
  return std::all_of(v.begin(), v.end(), [](const auto& e) { return e.second.is_zero(); });
}

// ---------------------------------------------------------------------------

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].emplace_back(i, RationalFunction(1));
  return m;
}

SparseMatrix SparseMatrix::diagonal(const std::vector<RationalFunction>& d) {
  SparseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!d[i].is_zero()) m.columns_[i].emplace_back(i, d[i]);
  return m;
}

void SparseMatrix::add(std::size_t i, std::size_t j, const RationalFunction& value) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseMatrix::add");
  if (value.is_zero()) return;
  Column& c = columns_[j];
  auto it = std::lower_bound(c.begin(), c.end(), i, [](const auto& e, std::size_t r) { return e.first < r; });
  if (it != c.end() && it->first == i) {
    it->second += value;
    if (it->second.is_zero()) c.erase(it);
  } else {
    c.insert(it, {i, value});
  }
}

RationalFunction SparseMatrix::at(std::size_t i, std::size_t j) const {
  const Column& c = columns_.at(j);
  auto it = std::lower_bound(c.begin(), c.end(), i, [](const auto& e, std::size_t r) { return e.first < r; });
  if (it != c.end() && it->first == i) return it->second;
  return {};
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
  SparseVector out;
  for (const auto& [j, x] : v) {
    if (j >= cols_) throw std::out_of_range("SparseMatrix::apply: index outside matrix");
    if (x.is_zero()) continue;
    for (const auto& [i, a] : columns_[j]) {
      auto [it, inserted] = out.try_emplace(i);
      it->second += a * x;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (const auto& [i, a] : columns_[j]) t.columns_[i].emplace_back(j, a);
  return t;  // columns filled in increasing j, so already sorted
}

void SparseMatrix::normalize_column(std::size_t j) {
  Column& c = columns_[j];
  c.erase(std::remove_if(c.begin(), c.end(), [](const auto& e) { return e.second.is_zero(); }), c.end());
}

SparseMatrix& SparseMatrix::operator+=(const SparseMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("SparseMatrix: shape mismatch");
  for (std::size_t j = 0; j < cols_; ++j)
    for (const auto& [i, a] : o.columns_[j]) add(i, j, a);
  return *this;
}

SparseMatrix& SparseMatrix::operator-=(const SparseMatrix& o) { return *this += o.scaled(RationalFunction(-1)); }

SparseMatrix SparseMatrix::scaled(const RationalFunction& c) const {
  SparseMatrix m(rows_, cols_);
  if (c.is_zero()) return m;
  for (std::size_t j = 0; j < cols_; ++j)
    for (const auto& [i, a] : columns_[j]) m.columns_[j].emplace_back(i, a * c);
  return m;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix: shape mismatch in product");
  SparseMatrix m(a.rows_, b.cols_);
  for (std::size_t j = 0; j < b.cols_; ++j) {
    SparseVector col;
    for (const auto& [k, x] : b.columns_[j]) col.emplace(k, x);
    SparseVector img = a.apply(col);
    for (auto& [i, x] : img) m.columns_[j].emplace_back(i, std::move(x));
  }
  return m;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.columns_ == b.columns_;
}

// ---------------------------------------------------------------------------

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& s) {
  DenseMatrix m(s.rows(), s.cols());
  for (std::size_t j = 0; j < s.cols(); ++j)
    for (const auto& [i, a] : s.column(j)) m(i, j) = a;
  return m;
}

SparseMatrix DenseMatrix::to_sparse() const {
  SparseMatrix s(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero()) s.add(i, j, (*this)(i, j));
  return s;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("DenseMatrix: shape mismatch in product");
  DenseMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
    }
  return m;
}

namespace {

// Lower is simpler. Monomials first, then Laurent polynomials, then fractions.
std::size_t pivot_cost(const RationalFunction& x) {
  std::size_t cost = x.numerator().terms().size() + 4 * (x.denominator().terms().size() - 1);
  return cost;
}

}  // namespace

std::vector<std::size_t> rref(DenseMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = m.rows();
    std::size_t best_cost = 0;
    for (std::size_t r = row; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      std::size_t c = pivot_cost(m(r, col));
      if (best == m.rows() || c < best_cost) {
        best = r;
        best_cost = c;
      }
    }
    if (best == m.rows()) continue;
    if (best != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(row, j));
    const RationalFunction inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j)
      if (!m(row, j).is_zero()) m(row, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const RationalFunction f = m(r, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(r, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(DenseMatrix m) { return rref(m).size(); }

std::vector<std::vector<RationalFunction>> nullspace(DenseMatrix m) {
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<RationalFunction>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<RationalFunction> v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<RationalFunction>> solve(const DenseMatrix& m, const std::vector<RationalFunction>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side size mismatch");
  DenseMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  std::vector<RationalFunction> x(m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
  return x;
}

std::optional<DenseMatrix> inverse(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = m.rows();
  DenseMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  DenseMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

RationalFunction determinant(DenseMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  RationalFunction det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && m(p, col).is_zero()) ++p;
    if (p == n) return {};
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    const RationalFunction inv = m(col, col).inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      const RationalFunction f = m(r, col) * inv;
      for (std::size_t j = col; j < n; ++j)
        if (!m(col, j).is_zero()) m(r, j) -= f * m(col, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------

SparseVector EchelonSpan::reduce(const SparseVector& v, SparseVector* used) const {
  SparseVector w = v;
  // Rows are fully reduced, so each pivot only needs one visit.
  for (const auto& [p, r] : pivot_row_) {
    auto it = w.find(p);
    if (it == w.end()) continue;
    const RationalFunction c = it->second;
    add_scaled(w, -c, rows_[r].reduced);
    if (used) add_scaled(*used, c, rows_[r].combo);
  }
  return w;
}

bool EchelonSpan::add(const SparseVector& v) {
  SparseVector used;
  SparseVector w = reduce(v, &used);
  if (is_zero(w)) return false;
  const std::size_t k = originals_.size();
  originals_.push_back(v);
  // w = v - Σ used_j originals_j
  SparseVector combo = scaled(used, RationalFunction(-1));
  combo[k] = RationalFunction(1);
  std::size_t pivot = w.begin()->first;
  std::size_t best = pivot_cost(w.begin()->second);
  for (const auto& [i, x] : w)
    if (pivot_cost(x) < best) {
      pivot = i;
      best = pivot_cost(x);
    }
  const RationalFunction inv = w.at(pivot).inverse();
  w = scaled(w, inv);
  combo = scaled(combo, inv);
  for (auto& row : rows_) {
    auto it = row.reduced.find(pivot);
    if (it == row.reduced.end()) continue;
    const RationalFunction c = it->second;
    add_scaled(row.reduced, -c, w);
    add_scaled(row.combo, -c, combo);
  }
  pivot_row_[pivot] = rows_.size();
  rows_.push_back({pivot, std::move(w), std::move(combo)});
  return true;
}

bool EchelonSpan::contains(const SparseVector& v) const { return is_zero(reduce(v, nullptr)); }

std::optional<SparseVector> EchelonSpan::coordinates(const SparseVector& v) const {
  SparseVector used;
  if (!is_zero(reduce(v, &used))) return std::nullopt;
  return used;
}

}  // namespace qsp::linalg
