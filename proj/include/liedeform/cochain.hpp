#pragma once

// Coordinates for alternating k-linear maps h^k -> V.
//
// A k-cochain is stored as a flat vector indexed by (S, a) -> pos(S) * m + a,
// where S runs over the k-subsets of {0..n-1} in lexicographic order and a
// over the m carrier coordinates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "liedeform/exactlin.hpp"

namespace liedeform {

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class CochainIndex {
 public:
  CochainIndex(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (n > 63) throw std::invalid_argument("cochain index supports dimension < 64");
    std::vector<std::size_t> current;
    enumerate(0, current);
    for (std::size_t p = 0; p < subsets_.size(); ++p) position_.emplace(mask(subsets_[p]), p);
  }

  std::size_t n() const { return n_; }
  std::size_t degree() const { return k_; }
  std::size_t size() const { return subsets_.size(); }

  const std::vector<std::vector<std::size_t>>& subsets() const { return subsets_; }
  const std::vector<std::size_t>& subset(std::size_t pos) const { return subsets_[pos]; }

  /// Position of a strictly increasing index list.
  std::size_t position(std::span<const std::size_t> sorted) const { return position_.at(mask(sorted)); }

 private:
  static std::uint64_t mask(std::span<const std::size_t> s) {
    std::uint64_t m = 0;
    for (auto i : s) m |= std::uint64_t{1} << i;
    return m;
  }

  void enumerate(std::size_t start, std::vector<std::size_t>& current) {
    if (current.size() == k_) {
      subsets_.push_back(current);
      return;
    }
    for (std::size_t i = start; i < n_; ++i) {
      current.push_back(i);
      enumerate(i + 1, current);
      current.pop_back();
    }
  }

  std::size_t n_;
  std::size_t k_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::unordered_map<std::uint64_t, std::size_t> position_;
};

/// Sorts a list of distinct indices in place and returns the permutation sign,
/// or 0 when an index repeats.
inline int sort_with_sign(std::vector<std::size_t>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

/// Alternating k-linear map from an n-dimensional space to an m-dimensional one.
template <class T>
struct AltMap {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<T> values;

  AltMap() = default;
  AltMap(std::size_t n_, std::size_t k_, std::size_t m_) : n(n_), k(k_), m(m_), values(binomial(n_, k_) * m_, T(0)) {}
  AltMap(std::size_t n_, std::size_t k_, std::size_t m_, std::vector<T> v) : n(n_), k(k_), m(m_), values(std::move(v)) {
    if (values.size() != binomial(n, k) * m) throw DimensionError("cochain vector has the wrong length");
  }

  std::size_t size() const { return values.size(); }

  /// Value on the pos-th basis k-subset.
  std::span<T> at(std::size_t pos) { return {values.data() + pos * m, m}; }
  std::span<const T> at(std::size_t pos) const { return {values.data() + pos * m, m}; }

  bool is_zero() const { return liedeform::is_zero(std::span<const T>(values)); }

  friend bool operator==(const AltMap& a, const AltMap& b) {
    return a.n == b.n && a.k == b.k && a.m == b.m && a.values == b.values;
  }

  AltMap& operator+=(const AltMap& o) {
    check_same(o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  AltMap& operator-=(const AltMap& o) {
    check_same(o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  AltMap& operator*=(const T& s) {
    for (auto& x : values) x *= s;
    return *this;
  }
  friend AltMap operator+(AltMap a, const AltMap& b) { return a += b; }
  friend AltMap operator-(AltMap a, const AltMap& b) { return a -= b; }
  friend AltMap operator*(const T& s, AltMap a) { return a *= s; }

 private:
  void check_same(const AltMap& o) const {
    if (n != o.n || k != o.k || m != o.m) throw DimensionError("cochain shapes differ");
  }
};

/// Degree-1 cochain h -> V viewed as an m x n matrix (column j = value on e_j).
template <class T>
DenseMatrix<T> as_matrix(const AltMap<T>& one_cochain) {
  if (one_cochain.k != 1) throw DimensionError("only degree-1 cochains are linear maps");
  DenseMatrix<T> out(one_cochain.m, one_cochain.n);
  for (std::size_t j = 0; j < one_cochain.n; ++j)
    for (std::size_t a = 0; a < one_cochain.m; ++a) out(a, j) = one_cochain.values[j * one_cochain.m + a];
  return out;
}

template <class T>
AltMap<T> from_matrix(const DenseMatrix<T>& map) {
  AltMap<T> out(map.cols(), 1, map.rows());
  for (std::size_t j = 0; j < map.cols(); ++j)
    for (std::size_t a = 0; a < map.rows(); ++a) out.values[j * map.rows() + a] = map(a, j);
  return out;
}

/// Applies a linear map V -> W to every value of a cochain.
template <class T>
AltMap<T> push_forward(const DenseMatrix<T>& map, const AltMap<T>& c) {
  if (map.cols() != c.m) throw DimensionError("value map does not match cochain carrier");
  AltMap<T> out(c.n, c.k, map.rows());
  const std::size_t count = binomial(c.n, c.k);
  for (std::size_t p = 0; p < count; ++p) {
    auto v = map * c.at(p);
    std::copy(v.begin(), v.end(), out.at(p).begin());
  }
  return out;
}

/// Matrix of push_forward(map, .) on C^k(n-dim, V) in the flattened bases.
template <class T>
DenseMatrix<T> push_forward_matrix(const DenseMatrix<T>& map, std::size_t n, std::size_t k) {
  const std::size_t count = binomial(n, k);
  DenseMatrix<T> out(count * map.rows(), count * map.cols());
  for (std::size_t p = 0; p < count; ++p)
    for (std::size_t a = 0; a < map.rows(); ++a)
      for (std::size_t b = 0; b < map.cols(); ++b) out(p * map.rows() + a, p * map.cols() + b) = map(a, b);
  return out;
}

template <class T>
T sup_norm(std::span<const T> v) {
  T best(0);
  for (const auto& x : v) {
    T a = x < 0 ? T(-x) : T(x);
    if (a > best) best = a;
  }
  return best;
}

}  // namespace liedeform
