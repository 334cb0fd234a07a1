#include "carnot/linalg.hpp"

#include <sstream>
#include <utility>

namespace carnot {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw DimensionMismatch("matrix entry count != rows * cols");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

Vector Matrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return {s.begin(), s.end()};
}

void Matrix::append_row(std::span<const Rational> row) {
  if (row.size() != cols_) throw DimensionMismatch("row length != column count");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector Matrix::apply(std::span<const Rational> v) const {
  if (v.size() != cols_) throw DimensionMismatch("vector length != column count");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!(*this)(r, c).is_zero() && !v[c].is_zero()) out[r] += (*this)(r, c) * v[c];
  return out;
}

bool Matrix::is_zero() const { return carnot::is_zero(data_); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

RrefResult rref(Matrix m) {
  RrefResult out;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t pivot = lead;
    while (pivot < rows && m(pivot, c).is_zero()) ++pivot;
    if (pivot == rows) continue;
    if (pivot != lead)
      for (std::size_t j = c; j < cols; ++j) std::swap(m(pivot, j), m(lead, j));
    const Rational inv = Rational(1) / m(lead, c);
    for (std::size_t j = c; j < cols; ++j)
      if (!m(lead, j).is_zero()) m(lead, j) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || m(r, c).is_zero()) continue;
      const Rational factor = m(r, c);
      for (std::size_t j = c; j < cols; ++j)
        if (!m(lead, j).is_zero()) m(r, j) -= factor * m(lead, j);
    }
    out.pivots.push_back(c);
    ++lead;
  }
  out.rank = out.pivots.size();
  out.reduced = std::move(m);
  return out;
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  Subspace s(ambient_dim);
  if (vectors.empty()) return s;
  auto r = rref(Matrix::from_rows(vectors, ambient_dim));
  for (std::size_t i = 0; i < r.rank; ++i) s.basis_.push_back(r.reduced.row_vector(i));
  s.pivots_ = std::move(r.pivots);
  return s;
}

Subspace Subspace::full(std::size_t ambient_dim) {
  Subspace s(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    Vector e(ambient_dim);
    e[i] = 1;
    s.basis_.push_back(std::move(e));
    s.pivots_.push_back(i);
  }
  return s;
}

Vector Subspace::coordinates(std::span<const Rational> v) const {
  if (v.size() != ambient_) throw DimensionMismatch("vector length != ambient dimension");
  Vector coords(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) coords[i] = v[pivots_[i]];
  // pivot columns read off the coordinates; the remainder must vanish
  Vector rest(v.begin(), v.end());
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (!coords[i].is_zero()) axpy(-coords[i], basis_[i], rest);
  if (!is_zero(rest)) throw std::domain_error("vector not in subspace");
  return coords;
}

bool Subspace::contains(std::span<const Rational> v) const {
  try {
    coordinates(v);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

Vector Subspace::combine(std::span<const Rational> coords) const {
  if (coords.size() != basis_.size()) throw DimensionMismatch("coordinate count != subspace dimension");
  Vector out(ambient_);
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (!coords[i].is_zero()) axpy(coords[i], basis_[i], out);
  return out;
}

Subspace Subspace::sum(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw DimensionMismatch("subspace ambient mismatch");
  std::vector<Vector> all = basis_;
  all.insert(all.end(), other.basis_.begin(), other.basis_.end());
  return span(ambient_, all);
}

Subspace Subspace::intersection(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw DimensionMismatch("subspace ambient mismatch");
  // a in A ∩ B  <=>  a = Σ x_i a_i = Σ y_j b_j; solve [A^T | -B^T] (x, y) = 0.
  const std::size_t na = dim(), nb = other.dim();
  Matrix sys(ambient_, na + nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t r = 0; r < ambient_; ++r) sys(r, i) = basis_[i][r];
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t r = 0; r < ambient_; ++r) sys(r, na + j) = -other.basis_[j][r];
  std::vector<Vector> vectors;
  const Subspace kernel = nullspace(sys);
  for (const auto& k : kernel.basis()) vectors.push_back(combine(std::span(k).first(na)));
  return span(ambient_, vectors);
}

Subspace nullspace(const Matrix& m) {
  const std::size_t cols = m.cols();
  auto r = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> vectors;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.reduced(i, free);
    vectors.push_back(std::move(v));
  }
  return Subspace::span(cols, vectors);
}

std::optional<Vector> solve(const Matrix& m, std::span<const Rational> b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve: right-hand side length != rows");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  auto red = rref(std::move(aug));
  if (!red.pivots.empty() && red.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t i = 0; i < red.rank; ++i) x[red.pivots[i]] = red.reduced(i, m.cols());
  return x;
}

bool span_equal(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("span_equal: ambient dimensions differ");
  return a == b;
}

bool is_zero(std::span<const Rational> v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vector add(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum length mismatch");
  Vector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Vector scale(const Rational& s, std::span<const Rational> v) {
  Vector out(v.size());
  if (s.is_zero()) return out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out[i] = s * v[i];
  return out;
}

void axpy(const Rational& s, std::span<const Rational> x, std::span<Rational> y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) y[i] += s * x[i];
}

}  // namespace carnot
