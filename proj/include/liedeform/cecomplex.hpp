#pragma once

// Chevalley-Eilenberg complexes as explicit matrices.
//
//   (d w)(u_0..u_k) = sum_i (-1)^i r(u_i) w(u_0..^u_i..u_k)
//                   + sum_{i<j} (-1)^{i+j} w([u_i,u_j], u_0..^u_i..^u_j..u_k)
//
// Cochains use the flattening of cochain.hpp. differential_matrix() accepts
// any antisymmetric bracket and any list of action matrices; cohomology()
// insists on a genuine complex.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liedeform/cochain.hpp"
#include "liedeform/exactlin.hpp"
#include "liedeform/liecore.hpp"

namespace liedeform {

template <class T>
DenseMatrix<T> differential_matrix(std::size_t k, const StructureConstants<T>& mu,
                                   std::span<const DenseMatrix<T>> action, std::size_t carrier_dim) {
  const std::size_t n = mu.dim();
  const std::size_t m = carrier_dim;
  if (action.size() != n) throw DimensionError("need one action matrix per basis element");
  for (const auto& a : action)
    if (a.rows() != m || a.cols() != m) throw DimensionError("action matrix does not match carrier dimension");

  const CochainIndex src(n, k), dst(n, k + 1);
  DenseMatrix<T> d(dst.size() * m, src.size() * m);
  std::vector<std::size_t> face;
  for (std::size_t q = 0; q < dst.size(); ++q) {
    const auto& u = dst.subset(q);
    for (std::size_t i = 0; i <= k; ++i) {
      face.assign(u.begin(), u.end());
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      const std::size_t p = src.position(face);
      const T sign = (i % 2) ? T(-1) : T(1);
      const auto& r = action[u[i]];
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          if (r(a, b) != 0) d(q * m + a, p * m + b) += sign * r(a, b);
    }
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = i + 1; j <= k; ++j) {
        for (std::size_t c = 0; c < n; ++c) {
          const T& coeff = mu(u[i], u[j], c);
          if (coeff == 0) continue;
          face.clear();
          face.push_back(c);
          for (std::size_t l = 0; l <= k; ++l)
            if (l != i && l != j) face.push_back(u[l]);
          const int perm = sort_with_sign(face);
          if (perm == 0) continue;
          const std::size_t p = src.position(face);
          T w = coeff;
          if (((i + j) % 2 == 1) != (perm < 0)) w = -w;
          for (std::size_t a = 0; a < m; ++a) d(q * m + a, p * m + a) += w;
        }
      }
  }
  return d;
}

template <class T>
DenseMatrix<T> differential_matrix(std::size_t k, const StructureConstants<T>& mu,
                                   const std::vector<DenseMatrix<T>>& action, std::size_t carrier_dim) {
  return differential_matrix(k, mu, std::span<const DenseMatrix<T>>(action), carrier_dim);
}

inline Matrix differential_matrix(std::size_t k, const RepSpec& r) {
  return differential_matrix(k, r.acting, std::span<const Matrix>(r.action), r.carrier_dim);
}

/// Applies the differential of r to a cochain.
inline AltMap<Scalar> apply_differential(const RepSpec& r, const AltMap<Scalar>& c) {
  if (c.n != r.algebra_dim() || c.m != r.carrier_dim) throw DimensionError("cochain does not belong to this complex");
  return AltMap<Scalar>(c.n, c.k + 1, c.m, differential_matrix(c.k, r) * c.values);
}

struct CohomologyDegree {
  std::size_t k = 0;
  std::size_t dim_c = 0;
  std::size_t dim_z = 0;
  std::size_t dim_b = 0;
  std::size_t dim_h = 0;
  Subspace cocycles;
  Subspace coboundaries;
  /// Cocycles completing the coboundary basis to a basis of Z^k.
  std::vector<Vector> representatives;
};

/// Per-degree C/Z/B/H data of one complex, with the differentials kept for
/// membership questions.
class CohomologyReport {
 public:
  std::size_t algebra_dim = 0;
  std::size_t carrier_dim = 0;
  std::vector<CohomologyDegree> degrees;  // degrees 0..max_degree
  std::vector<Matrix> differentials;      // d_k : C^k -> C^{k+1}, k = 0..max_degree

  std::size_t max_degree() const { return degrees.empty() ? 0 : degrees.size() - 1; }
  const CohomologyDegree& degree(std::size_t k) const { return degrees.at(k); }
  std::size_t dim_h(std::size_t k) const { return degree(k).dim_h; }

  bool is_cocycle(std::size_t k, const Vector& v) const { return is_zero(differentials.at(k) * v); }

  /// x with d_{k-1} x = v, or nullopt when v is not a coboundary.
  std::optional<Vector> primitive(std::size_t k, const Vector& v) const {
    if (k == 0) return is_zero(v) ? std::optional<Vector>(Vector{}) : std::nullopt;
    const Matrix& d = differentials.at(k - 1);
    if (d.cols() == 0) return is_zero(v) ? std::optional<Vector>(Vector{}) : std::nullopt;
    return solve_particular(d, v);
  }

  /// Coordinates of the class of a cocycle in the representative basis.
  std::optional<Vector> class_coordinates(std::size_t k, const Vector& v) const {
    const CohomologyDegree& deg = degree(k);
    if (v.size() != deg.dim_c) throw DimensionError("cochain length differs from dim C^k");
    if (!is_cocycle(k, v)) return std::nullopt;
    if (deg.dim_h == 0) return Vector{};
    std::vector<Vector> cols = deg.coboundaries.basis();
    cols.insert(cols.end(), deg.representatives.begin(), deg.representatives.end());
    const auto x = solve_particular(Matrix::from_columns(deg.dim_c, cols), v);
    if (!x) throw std::logic_error("cocycle outside Z^k basis span");
    return Vector(x->end() - static_cast<std::ptrdiff_t>(deg.dim_h), x->end());
  }
};

/// Exact cohomology of the complex of r in degrees 0..max_degree (default:
/// the algebra dimension). Throws PreconditionError if d o d != 0.
inline CohomologyReport cohomology(const RepSpec& r, std::optional<std::size_t> max_degree = std::nullopt) {
  const std::size_t n = r.algebra_dim();
  const std::size_t top = max_degree.value_or(n);
  CohomologyReport rep;
  rep.algebra_dim = n;
  rep.carrier_dim = r.carrier_dim;
  for (std::size_t k = 0; k <= std::max(top, n); ++k) rep.differentials.push_back(differential_matrix(k, r));
  for (std::size_t k = 0; k + 1 < rep.differentials.size(); ++k)
    if (!(rep.differentials[k + 1] * rep.differentials[k]).is_zero())
      throw PreconditionError("composition of consecutive differentials is nonzero in degree " + std::to_string(k) +
                              "; cohomology is undefined");
  rep.differentials.resize(top + 1);

  for (std::size_t k = 0; k <= top; ++k) {
    CohomologyDegree deg;
    deg.k = k;
    deg.dim_c = binomial(n, k) * r.carrier_dim;
    deg.cocycles = kernel_basis(rep.differentials[k]);
    deg.coboundaries = k == 0 ? Subspace(deg.dim_c) : image_basis(rep.differentials[k - 1]);
    deg.dim_z = deg.cocycles.dim();
    deg.dim_b = deg.coboundaries.dim();
    deg.dim_h = deg.dim_z - deg.dim_b;
    std::vector<Vector> span = deg.coboundaries.basis();
    for (const auto& z : deg.cocycles.basis()) {
      if (deg.representatives.size() == deg.dim_h) break;
      if (!span.empty() && solve_particular(Matrix::from_columns(deg.dim_c, span), z)) continue;
      span.push_back(z);
      deg.representatives.push_back(z);
    }
    rep.degrees.push_back(std::move(deg));
  }
  return rep;
}

/// sum_k (-1)^k dim H^k over degrees 0..n; the report must cover them.
inline std::int64_t euler_characteristic(const CohomologyReport& report) {
  if (report.max_degree() < report.algebra_dim) throw std::invalid_argument("report does not cover all degrees");
  std::int64_t chi = 0;
  for (std::size_t k = 0; k <= report.algebra_dim; ++k) {
    const auto h = static_cast<std::int64_t>(report.dim_h(k));
    chi += (k % 2) ? -h : h;
  }
  return chi;
}

/// Matrix of rho^*: C^k(g, g) -> C^k(h, g), (rho^* w)(v_1..v_k) = w(rho v_1..rho v_k).
inline Matrix pullback_cochain_map(const Homomorphism& rho, std::size_t k) {
  const Matrix& map = rho.matrix();
  const std::size_t m = rho.target().dim();
  const CochainIndex src(rho.target().dim(), k), dst(rho.source().dim(), k);
  Matrix out(dst.size() * m, src.size() * m);
  for (std::size_t s = 0; s < dst.size(); ++s)
    for (std::size_t t = 0; t < src.size(); ++t) {
      Matrix minor(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) minor(a, b) = map(src.subset(t)[a], dst.subset(s)[b]);
      const Scalar det = determinant(minor);
      if (det == 0) continue;
      for (std::size_t a = 0; a < m; ++a) out(s * m + a, t * m + a) = det;
    }
  return out;
}

/// Induced map on H^k in the representative bases.
struct InducedMap {
  std::size_t k = 0;
  Matrix matrix;  // dim H^k(target) x dim H^k(source)
  std::size_t rank = 0;

  std::size_t source_dim() const { return matrix.cols(); }
  std::size_t target_dim() const { return matrix.rows(); }
  bool surjective() const { return rank == target_dim(); }
  bool injective() const { return rank == source_dim(); }
  bool zero() const { return rank == 0; }
};

/// chain_map[j] : C^j(source) -> C^j(target). Commutation with the
/// differentials is verified exactly around degree k before anything is
/// computed.
inline InducedMap induced_map_on_H(std::span<const Matrix> chain_map, const CohomologyReport& source,
                                   const CohomologyReport& target, std::size_t k) {
  if (k >= chain_map.size()) throw std::invalid_argument("chain map does not reach degree " + std::to_string(k));
  const std::size_t lo = k == 0 ? 0 : k - 1;
  for (std::size_t j = lo; j <= k && j + 1 < chain_map.size(); ++j) {
    if (j >= source.differentials.size() || j >= target.differentials.size()) break;
    if (!(chain_map[j + 1] * source.differentials[j] == target.differentials[j] * chain_map[j]))
      throw PreconditionError("map does not commute with the differentials in degree " + std::to_string(j));
  }
  const CohomologyDegree& src = source.degree(k);
  InducedMap out;
  out.k = k;
  out.matrix = Matrix(target.degree(k).dim_h, src.dim_h);
  for (std::size_t c = 0; c < src.dim_h; ++c) {
    const Vector image = chain_map[k] * src.representatives[c];
    const auto coords = target.class_coordinates(k, image);
    if (!coords) throw std::logic_error("chain map sends a cocycle to a non-cocycle");
    for (std::size_t r = 0; r < coords->size(); ++r) out.matrix(r, c) = (*coords)[r];
  }
  out.rank = rank(out.matrix);
  return out;
}

inline InducedMap induced_map_on_H(const std::vector<Matrix>& chain_map, const CohomologyReport& source,
                                   const CohomologyReport& target, std::size_t k) {
  return induced_map_on_H(std::span<const Matrix>(chain_map), source, target, k);
}

/// One H^k(h, V) in the long exact sequence of h -> g -> g/h.
struct LesNode {
  enum class Coefficients { sub, ambient, quotient };
  Coefficients coefficients;
  std::size_t k = 0;
  std::size_t dim = 0;
};

struct LesExactness {
  std::size_t node = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  bool composition_zero = false;
  bool kernel_in_image = false;
  bool exact = false;
};

struct LongExactSequence {
  std::vector<LesNode> nodes;
  std::vector<Matrix> maps;  // maps[i] : nodes[i] -> nodes[i + 1]
  std::vector<LesExactness> checks;
  CohomologyReport sub, ambient, quotient;

  bool exact() const {
    return std::all_of(checks.begin(), checks.end(), [](const LesExactness& c) { return c.exact; });
  }
};

inline const char* to_string(LesNode::Coefficients c) {
  switch (c) {
    case LesNode::Coefficients::sub: return "h";
    case LesNode::Coefficients::ambient: return "g";
    case LesNode::Coefficients::quotient: return "g/h";
  }
  return "?";
}

/// H^k(h,h) -> H^k(h,g) -> H^k(h,g/h) -> H^{k+1}(h,h) for k = 0..max_degree,
/// with exactness certified at every node except the last. The sequence is
/// preceded by 0, so the first certificate is injectivity on H^0(h,h).
/// The connecting map lifts a cocycle through the standard section, applies
/// the differential with values in g and reads the result back in h.
inline LongExactSequence les_subalgebra(const SubalgebraWitness& w, std::size_t max_degree) {
  const LieAlgebra h = w.subalgebra();
  const std::size_t kdim = h.dim();
  const QuotientMap& q = w.quotient();
  const RepSpec r_sub = adjoint_rep(h);
  const RepSpec r_amb = pullback_rep(w.inclusion());
  const RepSpec r_quo = quotient_rep(w);

  LongExactSequence les;
  les.sub = cohomology(r_sub, max_degree + 1);
  les.ambient = cohomology(r_amb, max_degree + 1);
  les.quotient = cohomology(r_quo, max_degree + 1);

  const Matrix basis = w.subspace().basis_matrix();
  std::vector<Matrix> inc, proj, sect;
  for (std::size_t k = 0; k <= max_degree + 1; ++k) {
    inc.push_back(push_forward_matrix(basis, kdim, k));
    proj.push_back(push_forward_matrix(q.projection, kdim, k));
    sect.push_back(push_forward_matrix(q.section, kdim, k));
  }

  for (std::size_t k = 0; k <= max_degree; ++k) {
    les.nodes.push_back({LesNode::Coefficients::sub, k, les.sub.dim_h(k)});
    les.nodes.push_back({LesNode::Coefficients::ambient, k, les.ambient.dim_h(k)});
    les.nodes.push_back({LesNode::Coefficients::quotient, k, les.quotient.dim_h(k)});
    les.maps.push_back(induced_map_on_H(inc, les.sub, les.ambient, k).matrix);
    les.maps.push_back(induced_map_on_H(proj, les.ambient, les.quotient, k).matrix);

    const CohomologyDegree& qd = les.quotient.degree(k);
    Matrix connecting(les.sub.dim_h(k + 1), qd.dim_h);
    for (std::size_t c = 0; c < qd.dim_h; ++c) {
      const Vector lifted = les.ambient.differentials[k] * (sect[k] * qd.representatives[c]);
      const auto in_h = solve_particular(inc[k + 1], lifted);
      if (!in_h) throw std::logic_error("connecting map: lifted coboundary leaves the subalgebra");
      const auto coords = les.sub.class_coordinates(k + 1, *in_h);
      if (!coords) throw std::logic_error("connecting map: image is not a cocycle");
      for (std::size_t r = 0; r < coords->size(); ++r) connecting(r, c) = (*coords)[r];
    }
    les.maps.push_back(std::move(connecting));
  }
  les.nodes.push_back({LesNode::Coefficients::sub, max_degree + 1, les.sub.dim_h(max_degree + 1)});

  for (std::size_t i = 0; i + 1 < les.nodes.size(); ++i) {
    const std::size_t dim = les.nodes[i].dim;
    const Matrix in = i == 0 ? Matrix(dim, 0) : les.maps[i - 1];
    const Matrix& out = les.maps[i];
    LesExactness c;
    c.node = i;
    c.rank_in = rank(in);
    c.rank_out = rank(out);
    c.composition_zero = (out * in).is_zero();
    c.kernel_in_image = true;
    const Subspace kernel = kernel_basis(out);
    for (const auto& v : kernel.basis())
      if (in.cols() == 0 || !solve_particular(in, v)) {
        c.kernel_in_image = false;
        break;
      }
    c.exact = c.composition_zero && c.kernel_in_image && c.rank_in + c.rank_out == dim;
    les.checks.push_back(c);
  }
  return les;
}

}  // namespace liedeform
