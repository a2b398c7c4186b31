#pragma once

// Quadratic obstruction maps for the three deformation problems and the
// exact polynomial identities that tie them to the differentials.
//
// Sign conventions follow cecomplex.hpp. With that differential the
// t-linear term of J(mu + t xi) is -d_mu xi, while for the curvature
// K(rho + t xi) and the graph defect it is +d xi.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "liedeform/cecomplex.hpp"
#include "liedeform/cochain.hpp"
#include "liedeform/exactlin.hpp"
#include "liedeform/liecore.hpp"

namespace liedeform {

/// A cocycle together with the verdict "is it a coboundary".
struct ObstructionClass {
  std::size_t degree = 0;
  AltMap<Scalar> representative;
  bool is_zero_in_h = false;
  std::optional<AltMap<Scalar>> primitive;  // d(primitive) = representative
};

namespace detail {

inline ObstructionClass classify(const CohomologyReport& report, AltMap<Scalar> rep) {
  const std::size_t k = rep.k;
  if (!report.is_cocycle(k, rep.values)) throw std::logic_error("obstruction representative is not closed");
  ObstructionClass out;
  out.degree = k;
  if (auto x = report.primitive(k, rep.values)) {
    out.is_zero_in_h = true;
    out.primitive = AltMap<Scalar>(rep.n, k - 1, rep.m, std::move(*x));
  }
  out.representative = std::move(rep);
  return out;
}

/// Coefficients c_0..c_d of a vector polynomial from its values at t = 0..d.
inline std::vector<Vector> interpolate(const std::vector<Vector>& samples) {
  const std::size_t d = samples.size();
  Matrix vandermonde(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    Scalar p = 1;
    for (std::size_t j = 0; j < d; ++j) {
      vandermonde(i, j) = p;
      p *= static_cast<long>(i);
    }
  }
  const Matrix inv = inverse(vandermonde);
  const std::size_t len = samples.empty() ? 0 : samples.front().size();
  std::vector<Vector> coeffs(d, Vector(len, 0));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) {
      if (inv(j, i) == 0) continue;
      for (std::size_t l = 0; l < len; ++l) coeffs[j][l] += inv(j, i) * samples[i][l];
    }
  return coeffs;
}

inline std::vector<Matrix> adjoint_matrices(const BracketCandidate& b) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < b.dim(); ++i) out.push_back(b.ad(i));
  return out;
}

}  // namespace detail

/// Outcome of an exact polynomial identity check in t.
struct PolynomialCheck {
  std::vector<Vector> observed;  // interpolated coefficients, t^0 first
  std::vector<Vector> expected;
  Scalar defect = 0;  // sup norm of observed - expected over all coefficients

  bool pass() const { return defect == 0; }
};

namespace detail {
inline PolynomialCheck compare(std::vector<Vector> observed, std::vector<Vector> expected) {
  PolynomialCheck c;
  for (std::size_t j = 0; j < observed.size(); ++j)
    for (std::size_t l = 0; l < observed[j].size(); ++l) {
      Scalar diff = abs(observed[j][l] - expected.at(j).at(l));
      if (diff > c.defect) c.defect = diff;
    }
  c.observed = std::move(observed);
  c.expected = std::move(expected);
  return c;
}
}  // namespace detail

/// J(mu + t xi + t^2/2 eta) against
///   J(mu) - t d_mu xi + t^2 (J(xi) - d_mu eta / 2) + t^3 X(xi, eta) / 2 + t^4 J(eta) / 4,
/// where X(a, b) = J(a + b) - J(a) - J(b) is the polarization. The left side
/// has degree 4 in t and is interpolated exactly from t = 0..4.
inline PolynomialCheck jacobiator_expansion_check(const BracketCandidate& mu, const AltMap<Scalar>& xi,
                                                  const AltMap<Scalar>& eta) {
  const std::size_t n = mu.dim();
  if (xi.n != n || xi.k != 2 || xi.m != n || eta.n != n || eta.k != 2 || eta.m != n)
    throw DimensionError("directions must be 2-cochains with values in the algebra");
  const BracketCandidate bxi = BracketCandidate::from_cochain(xi);
  const BracketCandidate beta = BracketCandidate::from_cochain(eta);
  std::vector<Vector> samples;
  for (long t = 0; t <= 4; ++t) {
    BracketCandidate b = mu;
    b += Scalar(t) * bxi;
    b += Scalar(t * t, 2) * beta;
    samples.push_back(jacobiator(b).values);
  }
  const Matrix d = differential_matrix(2, mu, detail::adjoint_matrices(mu), n);
  const Vector dxi = d * xi.values, deta = d * eta.values;
  const AltMap<Scalar> jxi = jacobiator(bxi), jeta = jacobiator(beta);
  const AltMap<Scalar> polar = jacobiator(bxi + beta) - jxi - jeta;
  std::vector<Vector> expected(5, Vector(samples.front().size(), 0));
  const AltMap<Scalar> jmu = jacobiator(mu);
  for (std::size_t l = 0; l < expected[0].size(); ++l) {
    expected[0][l] = jmu.values[l];
    expected[1][l] = -dxi[l];
    expected[2][l] = jxi.values[l] - deta[l] / 2;
    expected[3][l] = polar.values[l] / 2;
    expected[4][l] = jeta.values[l] / 4;
  }
  return detail::compare(detail::interpolate(samples), std::move(expected));
}

/// [xi(u), xi(v)] on basis pairs of the source.
template <class T>
AltMap<T> half_bracket(const StructureConstants<T>& target, const DenseMatrix<T>& xi, std::size_t source_dim) {
  AltMap<T> out(source_dim, 2, target.dim());
  CochainIndex idx(source_dim, 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const Vec<T> v = target.bracket(xi.column(s[0]), xi.column(s[1]));
    std::copy(v.begin(), v.end(), out.at(p).begin());
  }
  return out;
}

/// Matrix of d_rho on C^1(h, g) for an arbitrary linear map rho, using the
/// action u -> ad(rho(u)) (a representation only when rho is a homomorphism).
template <class T>
DenseMatrix<T> pullback_differential(std::size_t k, const StructureConstants<T>& source,
                                     const StructureConstants<T>& target, const DenseMatrix<T>& rho) {
  std::vector<DenseMatrix<T>> action;
  for (std::size_t j = 0; j < source.dim(); ++j) {
    const Vec<T> image = rho.column(j);
    action.push_back(target.ad(std::span<const T>(image)));
  }
  return differential_matrix(k, source, action, target.dim());
}

/// K(rho + t xi) = K(rho) + t d_rho xi + t^2 [xi, xi]/2, checked from t = 0, 1, 2.
inline PolynomialCheck curvature_expansion_check(const BracketCandidate& source, const BracketCandidate& target,
                                                 const Matrix& rho, const Matrix& xi) {
  std::vector<Vector> samples;
  for (long t = 0; t <= 2; ++t) {
    Matrix m = rho;
    m += Scalar(t) * xi;
    samples.push_back(curvature(source, target, m).values);
  }
  const Vector dxi = pullback_differential(1, source, target, rho) * from_matrix(xi).values;
  std::vector<Vector> expected = {curvature(source, target, rho).values, dxi,
                                  half_bracket(target, xi, source.dim()).values};
  return detail::compare(detail::interpolate(samples), std::move(expected));
}

/// Obstruction to extending xi in Z^2(g, g): the class of J(xi) in H^3(g, g).
inline ObstructionClass kuranishi_bracket(const LieAlgebra& g, const AltMap<Scalar>& xi) {
  const std::size_t n = g.dim();
  if (xi.n != n || xi.k != 2 || xi.m != n) throw DimensionError("xi must lie in C^2(g, g)");
  const CohomologyReport report = cohomology(adjoint_rep(g), std::max<std::size_t>(3, n));
  if (!report.is_cocycle(2, xi.values)) throw PreconditionError("xi is not a cocycle in C^2(g, g)");
  return detail::classify(report, jacobiator(BracketCandidate::from_cochain(xi)));
}

/// Obstruction to extending xi in Z^1(h, g): the class of [xi, xi]/2 in H^2(h, g).
inline ObstructionClass kuranishi_hom(const Homomorphism& rho, const AltMap<Scalar>& xi) {
  const std::size_t k = rho.source().dim(), m = rho.target().dim();
  if (xi.n != k || xi.k != 1 || xi.m != m) throw DimensionError("xi must lie in C^1(h, g)");
  const CohomologyReport report = cohomology(pullback_rep(rho), std::max<std::size_t>(2, k));
  if (!report.is_cocycle(1, xi.values)) throw PreconditionError("xi is not a cocycle in C^1(h, g)");
  return detail::classify(report, half_bracket(rho.target().bracket(), as_matrix(xi), k));
}

/// A right inverse of the quotient projection and the induced projection
/// omega = id - section * projection of g onto h.
struct Splitting {
  SubalgebraWitness witness;
  Matrix section;  // dim g x codim
  Matrix omega;    // dim g x dim g

  const Matrix& projection() const { return witness.quotient().projection; }

  /// h-coordinates of omega(x).
  Vector sub_coordinates(const Vector& x) const { return witness.quotient().sub_coordinates(omega * x); }

  /// dim h x dim g matrix of x -> h-coordinates of omega(x).
  Matrix sub_coordinate_map() const {
    Matrix out(witness.dim(), omega.cols());
    const auto& piv = witness.quotient().pivots;
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (std::size_t j = 0; j < omega.cols(); ++j) out(i, j) = omega(piv[i], j);
    return out;
  }
};

/// Builds a splitting from any right inverse of the projection.
inline Splitting make_splitting(const SubalgebraWitness& w, Matrix section) {
  const QuotientMap& q = w.quotient();
  if (section.rows() != q.ambient_dim || section.cols() != q.quotient_dim())
    throw DimensionError("section must be dim g x codim h");
  if (!(q.projection * section == Matrix::identity(q.quotient_dim())))
    throw std::invalid_argument("section is not a right inverse of the projection");
  Splitting sp;
  sp.witness = w;
  sp.omega = Matrix::identity(q.ambient_dim) - section * q.projection;
  sp.section = std::move(section);
  return sp;
}

/// The splitting onto the standard complement axes.
inline Splitting standard_splitting(const SubalgebraWitness& w) { return make_splitting(w, w.quotient().section); }

/// standard section + (inclusion of h) * shift, for a dim h x codim matrix shift.
inline Splitting shifted_splitting(const SubalgebraWitness& w, const Matrix& shift) {
  return make_splitting(w, w.quotient().section + w.subspace().basis_matrix() * shift);
}

namespace detail {
inline void require_quotient_cocycle(const SubalgebraWitness& w, const AltMap<Scalar>& eta) {
  if (eta.n != w.dim() || eta.k != 1 || eta.m != w.codim()) throw DimensionError("eta must lie in C^1(h, g/h)");
  if (!apply_differential(quotient_rep(w), eta).is_zero())
    throw PreconditionError("eta is not a cocycle in C^1(h, g/h)");
}
}  // namespace detail

/// d(s o eta) for a cocycle eta, certified to take values in h and returned in
/// h-coordinates as an element of Z^2(h, h).
inline AltMap<Scalar> omega_sigma(const Splitting& sp, const AltMap<Scalar>& eta) {
  const SubalgebraWitness& w = sp.witness;
  detail::require_quotient_cocycle(w, eta);
  const RepSpec amb = pullback_rep(w.inclusion());
  const AltMap<Scalar> in_g = apply_differential(amb, push_forward(sp.section, eta));
  if (!push_forward(sp.projection(), in_g).is_zero())
    throw std::logic_error("d(s o eta) does not take values in the subalgebra");
  AltMap<Scalar> out(w.dim(), 2, w.dim());
  for (std::size_t p = 0; p < binomial(w.dim(), 2); ++p) {
    const Vector c = w.quotient().sub_coordinates(in_g.at(p));
    std::copy(c.begin(), c.end(), out.at(p).begin());
  }
  if (!apply_differential(adjoint_rep(w.subalgebra()), out).is_zero())
    throw std::logic_error("omega_sigma image is not closed");
  return out;
}

/// Phi_s(eta)(u, v) = pi[s eta u, s eta v] - eta(Omega_s(eta)(u, v)), for a cocycle eta.
inline AltMap<Scalar> phi_sigma(const Splitting& sp, const AltMap<Scalar>& eta) {
  const SubalgebraWitness& w = sp.witness;
  const AltMap<Scalar> omega = omega_sigma(sp, eta);
  const Matrix eta_m = as_matrix(eta);
  const Matrix lift = sp.section * eta_m;  // s o eta in h-coordinates
  AltMap<Scalar> out(w.dim(), 2, w.codim());
  CochainIndex idx(w.dim(), 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const Vector a = sp.projection() * w.ambient().bracket(lift.column(s[0]), lift.column(s[1]));
    const Vector b = eta_m * omega.at(p);
    for (std::size_t l = 0; l < w.codim(); ++l) out.at(p)[l] = a[l] - b[l];
  }
  return out;
}

/// Class of Phi_s(eta) in H^2(h, g/h).
inline ObstructionClass kuranishi_sub(const Splitting& sp, const AltMap<Scalar>& eta) {
  const CohomologyReport report = cohomology(quotient_rep(sp.witness), std::max<std::size_t>(2, sp.witness.dim()));
  return detail::classify(report, phi_sigma(sp, eta));
}

struct SplittingIndependence {
  AltMap<Scalar> difference;  // Phi_{s2}(eta) - Phi_{s1}(eta)
  AltMap<Scalar> predicted;   // -d(eta o (s2 - s1) o eta)
  AltMap<Scalar> composite;   // eta o (s2 - s1) o eta : h -> g/h

  bool pass() const { return difference == predicted; }
};

/// Compares Phi for two splittings of the same subalgebra.
///
/// s2 - s1 maps g/h into h, so eta o (s2 - s1) o eta reads
/// h -eta-> g/h -(s2-s1)-> h -eta-> g/h and is a 1-cochain of the quotient
/// complex. Its coboundary accounts for the difference with a minus sign in
/// the differential convention used here.
inline SplittingIndependence splitting_independence_check(const Splitting& s1, const Splitting& s2,
                                                          const AltMap<Scalar>& eta) {
  const auto& q1 = s1.witness.quotient();
  const auto& q2 = s2.witness.quotient();
  if (!(s1.witness.ambient().bracket() == s2.witness.ambient().bracket()) || q1.pivots != q2.pivots ||
      !(q1.projection == q2.projection))
    throw std::invalid_argument("splittings belong to different subalgebras");
  SplittingIndependence out;
  out.difference = phi_sigma(s2, eta) - phi_sigma(s1, eta);
  const Matrix delta_s = s2.section - s1.section;  // values in h
  Matrix shift(s1.witness.dim(), delta_s.cols());
  for (std::size_t i = 0; i < q1.pivots.size(); ++i)
    for (std::size_t j = 0; j < delta_s.cols(); ++j) shift(i, j) = delta_s(q1.pivots[i], j);
  const Matrix eta_m = as_matrix(eta);
  out.composite = from_matrix(eta_m * shift * eta_m);
  out.predicted = Scalar(-1) * apply_differential(quotient_rep(s1.witness), out.composite);
  return out;
}

/// Plain matrices describing the graph chart around h for a fixed splitting.
template <class T>
struct ChartFrame {
  DenseMatrix<T> basis;        // dim g x k, basis of h
  DenseMatrix<T> section;      // dim g x codim
  DenseMatrix<T> projection;   // codim x dim g
  DenseMatrix<T> sub_coords;   // k x dim g, x -> h-coordinates of omega(x)

  std::size_t dim() const { return basis.cols(); }
  std::size_t codim() const { return section.cols(); }
  std::size_t ambient_dim() const { return basis.rows(); }

  template <class U>
  ChartFrame<U> cast() const {
    return {basis.template cast<U>(), section.template cast<U>(), projection.template cast<U>(),
            sub_coords.template cast<U>()};
  }
};

inline ChartFrame<Scalar> chart_frame(const Splitting& sp) {
  return {sp.witness.subspace().basis_matrix(), sp.section, sp.projection(), sp.sub_coordinate_map()};
}

/// Failure of graph(s o eta) to be closed under mu, in g/h coordinates:
/// for x = u + s eta u and y = v + s eta v, pi mu(x, y) - eta(omega mu(x, y)).
/// Zero exactly when the graph is a subalgebra for mu.
template <class T>
AltMap<T> chart_defect(const ChartFrame<T>& f, const StructureConstants<T>& mu, const DenseMatrix<T>& eta) {
  const std::size_t k = f.dim();
  const DenseMatrix<T> graph = f.basis + f.section * eta;
  AltMap<T> out(k, 2, f.codim());
  CochainIndex idx(k, 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const Vec<T> w = mu.bracket(graph.column(s[0]), graph.column(s[1]));
    const Vec<T> a = f.projection * w;
    const Vec<T> b = eta * (f.sub_coords * w);
    for (std::size_t l = 0; l < f.codim(); ++l) out.at(p)[l] = a[l] - b[l];
  }
  return out;
}

/// chart_defect(t eta) = t d_h eta + t^2 Phi_s(eta) + t^3 (-eta omega[s eta u, s eta v]),
/// checked from t = 0..3. The t^2 term uses the form
/// pi[s eta u, s eta v] - eta omega([s eta u, v] + [u, s eta v]), valid for any eta.
inline PolynomialCheck graph_defect_expansion_check(const Splitting& sp, const AltMap<Scalar>& eta) {
  const SubalgebraWitness& w = sp.witness;
  if (eta.n != w.dim() || eta.k != 1 || eta.m != w.codim()) throw DimensionError("eta must lie in C^1(h, g/h)");
  const ChartFrame<Scalar> f = chart_frame(sp);
  const Matrix eta_m = as_matrix(eta);
  const BracketCandidate& mu = w.ambient().bracket();
  std::vector<Vector> samples;
  for (long t = 0; t <= 3; ++t) samples.push_back(chart_defect(f, mu, Scalar(t) * eta_m).values);

  const std::size_t k = w.dim();
  std::vector<Vector> expected(4, Vector(binomial(k, 2) * w.codim(), 0));
  expected[1] = apply_differential(quotient_rep(w), eta).values;
  const Matrix lift = sp.section * eta_m;
  CochainIndex idx(k, 2);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto& s = idx.subset(p);
    const Vector u = f.basis.column(s[0]), v = f.basis.column(s[1]);
    const Vector lu = lift.column(s[0]), lv = lift.column(s[1]);
    const Vector top = mu.bracket(lu, lv);
    Vector mixed = mu.bracket(lu, v);
    const Vector m2 = mu.bracket(u, lv);
    for (std::size_t l = 0; l < mixed.size(); ++l) mixed[l] += m2[l];
    const Vector a = f.projection * top;
    const Vector b = eta_m * (f.sub_coords * mixed);
    const Vector c = eta_m * (f.sub_coords * top);
    for (std::size_t l = 0; l < w.codim(); ++l) {
      expected[2][p * w.codim() + l] = a[l] - b[l];
      expected[3][p * w.codim() + l] = -c[l];
    }
  }
  return detail::compare(detail::interpolate(samples), std::move(expected));
}

}  // namespace liedeform
