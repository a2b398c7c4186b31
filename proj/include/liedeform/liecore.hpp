#pragma once

// Lie algebras given by structure constants, homomorphisms, subalgebras and
// the three coefficient systems used throughout: adjoint, pullback along a
// homomorphism, and the quotient g/h of a subalgebra.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "liedeform/cochain.hpp"
#include "liedeform/exactlin.hpp"

namespace liedeform {

/// Input that fails a defining identity (Jacobi, closure, homomorphism).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its contract (e.g. a non-cocycle where a
/// cocycle is required, or a criterion that does not hold).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structure constants c(i, j, k): mu(e_i, e_j) = sum_k c(i, j, k) e_k.
/// Both (i, j) and (j, i) are stored; antisymmetry is checked, not implied.
template <class T>
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(std::size_t n) : n_(n), c_(n * n * n, T(0)) {}
  StructureConstants(std::size_t n, std::vector<T> c) : n_(n), c_(std::move(c)) {
    if (c_.size() != n * n * n) throw DimensionError("structure constant array must have n^3 entries");
  }

  std::size_t dim() const { return n_; }
  const std::vector<T>& data() const { return c_; }

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * n_ + j) * n_ + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }

  /// Sets mu(e_i, e_j) = v and mu(e_j, e_i) = -v.
  void set_bracket(std::size_t i, std::size_t j, std::span<const T> v) {
    if (v.size() != n_) throw DimensionError("bracket value has the wrong length");
    for (std::size_t k = 0; k < n_; ++k) {
      (*this)(i, j, k) = v[k];
      (*this)(j, i, k) = -v[k];
    }
  }

  Vec<T> bracket(std::span<const T> u, std::span<const T> v) const {
    if (u.size() != n_ || v.size() != n_) throw DimensionError("bracket arguments have the wrong length");
    Vec<T> out(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (v[j] == 0) continue;
        T w = u[i] * v[j];
        for (std::size_t k = 0; k < n_; ++k) {
          const T& c = (*this)(i, j, k);
          if (c != 0) out[k] += w * c;
        }
      }
    }
    return out;
  }
  Vec<T> bracket(const Vec<T>& u, const Vec<T>& v) const {
    return bracket(std::span<const T>(u), std::span<const T>(v));
  }

  /// Matrix of mu(e_i, .).
  DenseMatrix<T> ad(std::size_t i) const {
    DenseMatrix<T> m(n_, n_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k) m(k, j) = (*this)(i, j, k);
    return m;
  }

  /// Matrix of mu(u, .).
  DenseMatrix<T> ad(std::span<const T> u) const {
    DenseMatrix<T> m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) m(k, j) += u[i] * (*this)(i, j, k);
    }
    return m;
  }

  bool is_antisymmetric() const { return !first_asymmetry().has_value(); }

  /// First (i, j) with c(i, j, .) != -c(j, i, .), scanning i <= j.
  std::optional<std::pair<std::size_t, std::size_t>> first_asymmetry() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if ((*this)(i, j, k) != -(*this)(j, i, k)) return std::pair{i, j};
    return std::nullopt;
  }

  template <class U>
  StructureConstants<U> cast() const {
    std::vector<U> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if constexpr (std::is_same_v<T, Scalar> && std::is_same_v<U, double>) {
        out[i] = c_[i].get_d();
      } else {
        out[i] = U(c_[i]);
      }
    }
    return StructureConstants<U>(n_, std::move(out));
  }

  /// Values on the basis pairs i < j as a 2-cochain with values in the algebra.
  AltMap<T> as_cochain() const {
    AltMap<T> out(n_, 2, n_);
    CochainIndex idx(n_, 2);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const auto& s = idx.subset(p);
      for (std::size_t k = 0; k < n_; ++k) out.at(p)[k] = (*this)(s[0], s[1], k);
    }
    return out;
  }

  /// Antisymmetric constants from a 2-cochain with values in the algebra.
  static StructureConstants from_cochain(const AltMap<T>& c) {
    if (c.k != 2 || c.m != c.n) throw DimensionError("bracket cochain must be in C^2(g, g)");
    StructureConstants out(c.n);
    CochainIndex idx(c.n, 2);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const auto& s = idx.subset(p);
      out.set_bracket(s[0], s[1], c.at(p));
    }
    return out;
  }

  friend bool operator==(const StructureConstants& a, const StructureConstants& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }
  StructureConstants& operator+=(const StructureConstants& o) {
    if (n_ != o.n_) throw DimensionError("bracket dimensions differ");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  StructureConstants& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend StructureConstants operator+(StructureConstants a, const StructureConstants& b) { return a += b; }
  friend StructureConstants operator*(const T& s, StructureConstants a) { return a *= s; }

 private:
  std::size_t n_ = 0;
  std::vector<T> c_;
};

using BracketCandidate = StructureConstants<Scalar>;

/// J(eta)(u, v, w) = eta(eta(u, v), w) + cyclic permutations, on basis triples i < j < k.
template <class T>
AltMap<T> jacobiator(const StructureConstants<T>& eta) {
  const std::size_t n = eta.dim();
  AltMap<T> out(n, 3, n);
  CochainIndex idx(n, 3);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const std::size_t t[3] = {s[0], s[1], s[2]};
    auto value = out.at(p);
    for (int c = 0; c < 3; ++c) {
      const std::size_t a = t[c], b = t[(c + 1) % 3], d = t[(c + 2) % 3];
      // eta(eta(e_a, e_b), e_d) = sum_l c(a,b,l) c(l,d,.)
      for (std::size_t l = 0; l < n; ++l) {
        const T& x = eta(a, b, l);
        if (x == 0) continue;
        for (std::size_t q = 0; q < n; ++q) {
          const T& y = eta(l, d, q);
          if (y != 0) value[q] += x * y;
        }
      }
    }
  }
  return out;
}

class LieAlgebra;

/// Why a bracket candidate is not a Lie bracket.
struct BracketViolation {
  enum class Kind { antisymmetry, jacobi };
  Kind kind;
  std::vector<std::size_t> indices;  // (i, j) or (i, j, k), 0-based
  Vector defect;                     // c(i,j,.) + c(j,i,.) or J(e_i, e_j, e_k)
  std::string message() const;
};

class LieAlgebra {
 public:
  LieAlgebra() = default;

  std::size_t dim() const { return bracket_.dim(); }
  const BracketCandidate& bracket() const { return bracket_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& basis_names() const { return basis_names_; }

  Vector bracket(const Vector& u, const Vector& v) const { return bracket_.bracket(u, v); }

  friend std::variant<LieAlgebra, BracketViolation> validate_bracket(BracketCandidate b, std::string name,
                                                                     std::vector<std::string> basis_names);

 private:
  LieAlgebra(BracketCandidate b, std::string name, std::vector<std::string> names)
      : bracket_(std::move(b)), name_(std::move(name)), basis_names_(std::move(names)) {}

  BracketCandidate bracket_;
  std::string name_;
  std::vector<std::string> basis_names_;
};

inline std::string BracketViolation::message() const {
  std::string s = kind == Kind::antisymmetry ? "antisymmetry fails at (" : "Jacobi identity fails at (";
  for (std::size_t i = 0; i < indices.size(); ++i) s += (i ? "," : "") + std::to_string(indices[i]);
  s += "), defect [";
  for (std::size_t i = 0; i < defect.size(); ++i) s += (i ? "," : "") + to_string(defect[i]);
  return s + "]";
}

/// Accepts b iff it is antisymmetric and its Jacobiator vanishes; otherwise
/// reports the first violating pair or triple.
inline std::variant<LieAlgebra, BracketViolation> validate_bracket(BracketCandidate b, std::string name = {},
                                                                   std::vector<std::string> basis_names = {}) {
  const std::size_t n = b.dim();
  if (!basis_names.empty() && basis_names.size() != n)
    throw DimensionError("basis name count differs from the dimension");
  if (auto bad = b.first_asymmetry()) {
    Vector defect(n);
    for (std::size_t k = 0; k < n; ++k) defect[k] = b(bad->first, bad->second, k) + b(bad->second, bad->first, k);
    return BracketViolation{BracketViolation::Kind::antisymmetry, {bad->first, bad->second}, defect};
  }
  const AltMap<Scalar> jac = jacobiator(b);
  CochainIndex idx(n, 3);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    auto v = jac.at(p);
    if (!is_zero(v)) return BracketViolation{BracketViolation::Kind::jacobi, idx.subset(p), Vector(v.begin(), v.end())};
  }
  if (basis_names.empty())
    for (std::size_t i = 0; i < n; ++i) basis_names.push_back("e" + std::to_string(i + 1));
  return LieAlgebra(std::move(b), std::move(name), std::move(basis_names));
}

/// Throwing convenience wrapper around validate_bracket.
inline LieAlgebra make_lie_algebra(BracketCandidate b, std::string name = {}, std::vector<std::string> names = {}) {
  auto r = validate_bracket(std::move(b), std::move(name), std::move(names));
  if (auto* v = std::get_if<BracketViolation>(&r)) throw ValidationError(v->message());
  return std::get<LieAlgebra>(std::move(r));
}

/// K(phi)(u, v) = [phi(u), phi(v)]_target - phi([u, v]_source) on basis pairs.
template <class T>
AltMap<T> curvature(const StructureConstants<T>& source, const StructureConstants<T>& target,
                    const DenseMatrix<T>& map) {
  if (map.rows() != target.dim() || map.cols() != source.dim())
    throw DimensionError("linear map shape does not match source/target dimensions");
  const std::size_t k = source.dim();
  AltMap<T> out(k, 2, target.dim());
  CochainIndex idx(k, 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const Vec<T> pu = map.column(s[0]), pv = map.column(s[1]);
    Vec<T> value = target.bracket(pu, pv);
    Vec<T> uv(k);
    for (std::size_t l = 0; l < k; ++l) uv[l] = source(s[0], s[1], l);
    const Vec<T> image = map * uv;
    for (std::size_t a = 0; a < value.size(); ++a) out.at(p)[a] = value[a] - image[a];
  }
  return out;
}

/// Linear map source -> target, optionally certified to preserve brackets.
class Homomorphism {
 public:
  Homomorphism() = default;

  /// Any linear map; is_validated() is false.
  static Homomorphism linear(LieAlgebra source, LieAlgebra target, Matrix map) {
    if (map.rows() != target.dim() || map.cols() != source.dim())
      throw DimensionError("homomorphism matrix must be dim(target) x dim(source)");
    Homomorphism h;
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    h.map_ = std::move(map);
    return h;
  }

  /// Throws ValidationError unless the curvature vanishes.
  static Homomorphism make(LieAlgebra source, LieAlgebra target, Matrix map) {
    Homomorphism h = linear(std::move(source), std::move(target), std::move(map));
    if (!h.curvature().is_zero()) throw ValidationError("linear map does not preserve brackets (nonzero curvature)");
    h.validated_ = true;
    return h;
  }

  const LieAlgebra& source() const { return source_; }
  const LieAlgebra& target() const { return target_; }
  const Matrix& matrix() const { return map_; }
  bool is_validated() const { return validated_; }

  AltMap<Scalar> curvature() const {
    return liedeform::curvature(source_.bracket(), target_.bracket(), map_);
  }

 private:
  LieAlgebra source_;
  LieAlgebra target_;
  Matrix map_;
  bool validated_ = false;
};

/// pi([u, v]) in the quotient coordinates of ambient/V, on pairs of V's basis.
inline AltMap<Scalar> subalgebra_defect(const LieAlgebra& g, const Subspace& V) {
  const QuotientMap q = quotient_coords(V, g.dim());
  const std::size_t k = V.dim();
  AltMap<Scalar> out(k, 2, q.quotient_dim());
  CochainIndex idx(k, 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const Vector w = q.projection * g.bracket(V.basis()[s[0]], V.basis()[s[1]]);
    std::copy(w.begin(), w.end(), out.at(p).begin());
  }
  return out;
}

/// A subspace of a Lie algebra certified closed under the bracket. The basis
/// is kept in row reduced form, which also fixes the quotient coordinates.
class SubalgebraWitness {
 public:
  SubalgebraWitness() = default;

  static SubalgebraWitness make(LieAlgebra ambient, const std::vector<Vector>& vectors) {
    SubalgebraWitness w;
    const Subspace span = Subspace::span(ambient.dim(), vectors);
    if (span.dim() != vectors.size()) throw ValidationError("subalgebra basis vectors are linearly dependent");
    const AltMap<Scalar> defect = subalgebra_defect(ambient, span);
    if (!defect.is_zero()) throw ValidationError("subspace is not closed under the bracket");
    w.quotient_ = quotient_coords(span, ambient.dim());
    w.ambient_ = std::move(ambient);
    return w;
  }

  const LieAlgebra& ambient() const { return ambient_; }
  const Subspace& subspace() const { return quotient_.reduced; }
  const QuotientMap& quotient() const { return quotient_; }
  std::size_t dim() const { return quotient_.reduced.dim(); }
  std::size_t codim() const { return quotient_.quotient_dim(); }

  /// The subalgebra with its own bracket in the reduced basis coordinates.
  LieAlgebra subalgebra() const {
    const std::size_t k = dim();
    BracketCandidate b(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const Vector w = ambient_.bracket(subspace().basis()[i], subspace().basis()[j]);
        const Vector c = quotient_.sub_coordinates(w);
        for (std::size_t l = 0; l < k; ++l) b(i, j, l) = c[l];
      }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("b" + std::to_string(i + 1));
    return make_lie_algebra(std::move(b), ambient_.name() + "-sub", std::move(names));
  }

  Homomorphism inclusion() const { return Homomorphism::make(subalgebra(), ambient_, subspace().basis_matrix()); }

 private:
  LieAlgebra ambient_;
  QuotientMap quotient_;
};

/// Linear action of an algebra (the "acting" bracket) on a carrier space.
struct RepSpec {
  enum class Kind { adjoint, pullback, quotient, raw };
  Kind kind = Kind::raw;
  BracketCandidate acting;
  std::vector<Matrix> action;  // r(e_i), carrier_dim x carrier_dim
  std::size_t carrier_dim = 0;

  std::size_t algebra_dim() const { return acting.dim(); }

  /// r([e_i, e_j]) == r(e_i) r(e_j) - r(e_j) r(e_i) for all i < j.
  bool satisfies_rep_identity() const {
    const std::size_t n = acting.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Matrix lhs(carrier_dim, carrier_dim);
        for (std::size_t k = 0; k < n; ++k)
          if (acting(i, j, k) != 0) lhs += acting(i, j, k) * action[k];
        if (!(lhs == action[i] * action[j] - action[j] * action[i])) return false;
      }
    return true;
  }
};

inline const char* to_string(RepSpec::Kind k) {
  switch (k) {
    case RepSpec::Kind::adjoint: return "adjoint";
    case RepSpec::Kind::pullback: return "pullback";
    case RepSpec::Kind::quotient: return "quotient";
    case RepSpec::Kind::raw: return "raw";
  }
  return "raw";
}

inline RepSpec adjoint_rep(const LieAlgebra& g) {
  RepSpec r;
  r.kind = RepSpec::Kind::adjoint;
  r.acting = g.bracket();
  r.carrier_dim = g.dim();
  for (std::size_t i = 0; i < g.dim(); ++i) r.action.push_back(g.bracket().ad(i));
  return r;
}

/// h acting on g by u -> ad(rho(u)).
inline RepSpec pullback_rep(const Homomorphism& rho) {
  if (!rho.is_validated()) throw PreconditionError("pullback representation needs a validated homomorphism");
  RepSpec r;
  r.kind = RepSpec::Kind::pullback;
  r.acting = rho.source().bracket();
  r.carrier_dim = rho.target().dim();
  for (std::size_t j = 0; j < rho.source().dim(); ++j) {
    const Vector image = rho.matrix().column(j);
    r.action.push_back(rho.target().bracket().ad(std::span<const Scalar>(image)));
  }
  return r;
}

/// h acting on g/h in the witness's quotient coordinates.
inline RepSpec quotient_rep(const SubalgebraWitness& w) {
  RepSpec r;
  r.kind = RepSpec::Kind::quotient;
  r.acting = w.subalgebra().bracket();
  r.carrier_dim = w.codim();
  const QuotientMap& q = w.quotient();
  for (const auto& u : w.subspace().basis()) {
    const Matrix ad_u = w.ambient().bracket().ad(std::span<const Scalar>(u));
    r.action.push_back(q.projection * ad_u * q.section);
  }
  return r;
}

}  // namespace liedeform
