#pragma once

// Exact dense linear algebra over the rationals.
//
// Everything that decides a cohomology dimension goes through this header:
// rank, kernel, image and particular solutions are computed by fraction-exact
// Gauss-Jordan elimination with first-nonzero pivoting. DenseMatrix is a
// template so that the floating-point lab can share the same containers.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <regex>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace liedeform {

/// Arbitrary precision rational, always kept in lowest terms.
using Scalar = mpq_class;

template <class T>
using Vec = std::vector<T>;
using Vector = Vec<Scalar>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "p/q" or "p". Throws std::invalid_argument on anything else or q = 0.
inline Scalar parse_scalar(const std::string& text) {
  static const std::regex pattern(R"(\s*([+-]?\d+)(?:/(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw std::invalid_argument("not a rational literal: '" + text + "'");
  }
  std::string digits = m[1].str();
  if (digits.front() == '+') digits.erase(0, 1);
  mpz_class num(digits, 10);
  mpz_class den(1);
  if (m[2].matched) {
    den = mpz_class(m[2].str(), 10);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  }
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(Scalar q) {
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Scalar& q) { return q.get_d(); }

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  /// Builds a matrix whose columns are the given vectors (all of length rows).
  static DenseMatrix from_columns(std::size_t rows, std::span<const Vec<T>> columns) {
    DenseMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw DimensionError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  static DenseMatrix from_rows(const std::vector<Vec<T>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    DenseMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("ragged row list");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<T>& data() const { return data_; }

  Vec<T> column(std::size_t c) const {
    Vec<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const T& x = a(i, l);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(l, j);
      }
    return c;
  }

  friend Vec<T> operator*(const DenseMatrix& a, std::span<const T> v) {
    if (a.cols_ != v.size()) throw DimensionError("matrix-vector shape mismatch");
    Vec<T> out(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) {
        const T& x = a(i, j);
        if (x != 0) out[i] += x * v[j];
      }
    return out;
  }
  friend Vec<T> operator*(const DenseMatrix& a, const Vec<T>& v) { return a * std::span<const T>(v); }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(const T& s, DenseMatrix a) { return a *= s; }

  template <class U>
  DenseMatrix<U> cast() const {
    DenseMatrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<T, Scalar> && std::is_same_v<U, double>) {
          out(i, j) = (*this)(i, j).get_d();
        } else {
          out(i, j) = U((*this)(i, j));
        }
      }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = DenseMatrix<Scalar>;

template <class T>
bool is_zero(std::span<const T> v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x == 0; });
}
template <class T>
bool is_zero(const Vec<T>& v) {
  return is_zero(std::span<const T>(v));
}

/// Horizontal concatenation [a | b].
template <class T>
DenseMatrix<T> hstack(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack row mismatch");
  DenseMatrix<T> m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

/// Reduced row echelon form and its pivot columns.
struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination; the pivot in each column is the first nonzero
/// entry at or below the current row.
inline RowEchelon row_reduce(Matrix m) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = col; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    const Scalar inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Scalar f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

/// A linearly independent list of coordinate vectors in a space of dimension
/// ambient_dim.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

  /// Trusts the caller that `basis` is independent; lengths are checked.
  Subspace(std::size_t ambient_dim, std::vector<Vector> basis) : ambient_(ambient_dim), basis_(std::move(basis)) {
    for (const auto& v : basis_)
      if (v.size() != ambient_) throw DimensionError("basis vector length differs from ambient dimension");
  }

  /// Span of arbitrary vectors, reduced to the canonical (row reduced) basis.
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
    Matrix m(vectors.size(), ambient_dim);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != ambient_dim) throw DimensionError("vector length differs from ambient dimension");
      for (std::size_t j = 0; j < ambient_dim; ++j) m(i, j) = vectors[i][j];
    }
    const RowEchelon e = row_reduce(std::move(m));
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < e.rank(); ++i) {
      auto r = e.reduced.row(i);
      basis.emplace_back(r.begin(), r.end());
    }
    return Subspace(ambient_dim, std::move(basis));
  }

  static Subspace full(std::size_t n) {
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < n; ++i) {
      Vector v(n, 0);
      v[i] = 1;
      basis.push_back(std::move(v));
    }
    return Subspace(n, std::move(basis));
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }

  /// ambient_dim x dim matrix with the basis vectors as columns.
  Matrix basis_matrix() const { return Matrix::from_columns(ambient_, basis_); }

  bool contains(const Vector& v) const;

 private:
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
};

inline std::size_t rank(const Matrix& m) { return row_reduce(m).rank(); }

inline Subspace kernel_basis(const Matrix& m) {
  const RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return Subspace(m.cols(), std::move(basis));
}

/// Basis of the column space made of the original pivot columns.
inline Subspace image_basis(const Matrix& m) {
  const RowEchelon e = row_reduce(m);
  std::vector<Vector> basis;
  for (auto p : e.pivots) basis.push_back(m.column(p));
  return Subspace(m.rows(), std::move(basis));
}

/// Some x with m x = b, or nullopt when b is not in the column space.
inline std::optional<Vector> solve_particular(const Matrix& m, std::span<const Scalar> b) {
  if (b.size() != m.rows()) throw DimensionError("right-hand side length differs from row count");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const RowEchelon e = row_reduce(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), 0);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}
inline std::optional<Vector> solve_particular(const Matrix& m, const Vector& b) {
  return solve_particular(m, std::span<const Scalar>(b));
}

inline bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) throw DimensionError("vector length differs from ambient dimension");
  if (is_zero(v)) return true;
  if (basis_.empty()) return false;
  return solve_particular(basis_matrix(), v).has_value();
}

/// Exact inverse; throws std::domain_error when singular.
inline Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const RowEchelon e = row_reduce(hstack(m, Matrix::identity(n)));
  if (e.rank() < n || (n > 0 && e.pivots[n - 1] != n - 1)) throw std::domain_error("singular matrix");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

inline Scalar determinant(Matrix m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Scalar f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Coordinate model of ambient/sub.
///
/// The complement of `sub` is spanned by the standard basis vectors at the
/// non-pivot positions of the row reduced basis of `sub`. `projection` has
/// kernel exactly `sub`, and `section` is the inclusion of the complement, so
/// projection * section = identity.
struct QuotientMap {
  std::size_t ambient_dim = 0;
  Subspace reduced;                    // canonical basis of sub
  std::vector<std::size_t> pivots;     // pivot position of each reduced basis vector
  std::vector<std::size_t> complement; // standard axes spanning the complement
  Matrix projection;                   // (ambient - k) x ambient
  Matrix section;                      // ambient x (ambient - k)

  std::size_t quotient_dim() const { return complement.size(); }

  /// Coordinates of a vector of `sub` in the reduced basis.
  Vector sub_coordinates(std::span<const Scalar> v) const {
    Vector c(pivots.size());
    for (std::size_t i = 0; i < pivots.size(); ++i) c[i] = v[pivots[i]];
    return c;
  }
};

inline QuotientMap quotient_coords(const Subspace& sub, std::size_t ambient_dim) {
  if (sub.ambient_dim() != ambient_dim) throw DimensionError("subspace lives in a different ambient space");
  QuotientMap q;
  q.ambient_dim = ambient_dim;
  q.reduced = Subspace::span(ambient_dim, sub.basis());
  if (q.reduced.dim() != sub.dim()) throw std::invalid_argument("subspace basis is not linearly independent");
  std::vector<bool> is_pivot(ambient_dim, false);
  for (const auto& v : q.reduced.basis()) {
    std::size_t p = 0;
    while (v[p] == 0) ++p;
    q.pivots.push_back(p);
    is_pivot[p] = true;
  }
  for (std::size_t i = 0; i < ambient_dim; ++i)
    if (!is_pivot[i]) q.complement.push_back(i);

  // x = sum_i x[p_i] b_i + sum_j q_j e_{c_j}  =>  q_j = x[c_j] - sum_i x[p_i] b_i[c_j]
  q.projection = Matrix(q.complement.size(), ambient_dim);
  q.section = Matrix(ambient_dim, q.complement.size());
  for (std::size_t j = 0; j < q.complement.size(); ++j) {
    q.projection(j, q.complement[j]) = 1;
    q.section(q.complement[j], j) = 1;
    for (std::size_t i = 0; i < q.pivots.size(); ++i)
      q.projection(j, q.pivots[i]) -= q.reduced.basis()[i][q.complement[j]];
  }
  return q;
}

}  // namespace liedeform
