#pragma once

// Floating-point experiments around an exact base point: Newton recovery of
// group elements relating nearby objects, continuation of homomorphisms and
// subalgebras to perturbed brackets, and finite-difference checks of the
// vertical derivatives.
//
// Group elements are exponentials: A = exp(a) on gl(g), Ad_exp(x) = exp(ad_x).
// Newton steps use a minimum-norm right inverse of the exact linearization at
// the base point, truncated at its exact rank, refreshed only on stall.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "liedeform/cecomplex.hpp"
#include "liedeform/kuranishi.hpp"
#include "liedeform/liecore.hpp"
#include "liedeform/verdicts.hpp"

namespace liedeform {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd to_eigen(const DenseMatrix<double>& m) {
  MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline MatrixXd to_eigen(const Matrix& m) { return to_eigen(m.cast<double>()); }

inline DenseMatrix<double> from_eigen(const MatrixXd& m) {
  DenseMatrix<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline VectorXd to_eigen(const Vec<double>& v) { return Eigen::Map<const VectorXd>(v.data(), v.size()); }

inline Vec<double> to_vec(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Column-major flattening; matches the C^1 layout index(j, a) = j * rows + a.
inline VectorXd flatten(const MatrixXd& m) { return Eigen::Map<const VectorXd>(m.data(), m.size()); }

inline MatrixXd unflatten(const VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

inline double sup_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double sup_norm(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Double-precision structure constants with a note on where they came from.
struct FloatBracket {
  StructureConstants<double> constants;
  std::string provenance;

  std::size_t dim() const { return constants.dim(); }

  static FloatBracket from_exact(const BracketCandidate& mu, std::string provenance = "exact") {
    return {mu.cast<double>(), std::move(provenance)};
  }

  double antisymmetry_defect() const {
    double worst = 0;
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(constants(i, j, k) + constants(j, i, k)));
    return worst;
  }

  double jacobi_defect() const {
    const auto j = jacobiator(constants);
    return j.values.empty() ? 0.0 : liedeform::sup_norm<double>(j.values);
  }

  /// Values on basis pairs i < j, in C^2(g, g) layout.
  VectorXd cochain() const { return to_eigen(constants.as_cochain().values); }
};

struct NewtonConfig {
  double tolerance = 1e-10;        // sup-norm residual target
  int max_iterations = 50;
  double damping = 1.0;            // step multiplier in (0, 1]
  std::uint64_t seed = 0;          // echoed into experiment records
  double input_tolerance = 1e-8;   // contract checks on float inputs

  void validate() const {
    if (!(tolerance > 0)) throw std::invalid_argument("newton tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("newton max_iterations must be at least 1");
    if (!(damping > 0 && damping <= 1)) throw std::invalid_argument("newton damping must lie in (0, 1]");
  }
};

// ---------------------------------------------------------------------------
// action of GL(g) on brackets

template <class T>
StructureConstants<T> transform_bracket(const DenseMatrix<T>& A, const DenseMatrix<T>& A_inv,
                                        const StructureConstants<T>& mu) {
  const std::size_t n = mu.dim();
  if (A.rows() != n || A.cols() != n) throw DimensionError("transform must be dim g x dim g");
  StructureConstants<T> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec<T> w = A * mu.bracket(A_inv.column(i), A_inv.column(j));
      out.set_bracket(i, j, w);
    }
  return out;
}

/// (A . mu)(u, v) = A mu(A^-1 u, A^-1 v).
inline FloatBracket act_on_bracket(const MatrixXd& A, const FloatBracket& mu) {
  Eigen::FullPivLU<MatrixXd> lu(A);
  if (A.rows() != A.cols() || !lu.isInvertible()) throw PreconditionError("act_on_bracket needs an invertible matrix");
  const MatrixXd inv = lu.inverse();
  return {transform_bracket(from_eigen(A), from_eigen(inv), mu.constants), mu.provenance + " | transformed"};
}

/// Exact twin of act_on_bracket for rational A.
inline BracketCandidate act_on_bracket(const Matrix& A, const BracketCandidate& mu) {
  if (A.rows() != A.cols() || determinant(A) == 0)
    throw PreconditionError("act_on_bracket needs an invertible matrix");
  return transform_bracket(A, inverse(A), mu);
}

/// exp(a) . mu with exp(-a) used as the inverse.
inline FloatBracket exp_act(const MatrixXd& a, const FloatBracket& mu) {
  return {transform_bracket(from_eigen(a.exp()), from_eigen(MatrixXd((-a).exp())), mu.constants), mu.provenance};
}

inline MatrixXd ad_matrix(const StructureConstants<double>& mu, const VectorXd& x) {
  const Vec<double> v = to_vec(x);
  return to_eigen(mu.ad(std::span<const double>(v)));
}

// ---------------------------------------------------------------------------
// linear algebra helpers

/// Minimum-norm right inverse keeping the `rank` largest singular directions.
inline MatrixXd truncated_pinv(const MatrixXd& J, std::size_t rank) {
  if (J.rows() == 0 || J.cols() == 0 || rank == 0) return MatrixXd::Zero(J.cols(), J.rows());
  Eigen::JacobiSVD<MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const Eigen::Index r = std::min<Eigen::Index>(static_cast<Eigen::Index>(rank), s.size());
  MatrixXd out = MatrixXd::Zero(J.cols(), J.rows());
  for (Eigen::Index i = 0; i < r; ++i) {
    if (s(i) == 0) break;
    out += svd.matrixV().col(i) * (svd.matrixU().col(i).transpose() / s(i));
  }
  return out;
}

inline MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& F, const VectorXd& x, double h = 1e-6) {
  const VectorXd f0 = F(x);
  MatrixXd J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    J.col(i) = (F(xp) - F(xm)) / (2 * h);
  }
  return J;
}

inline MatrixXd orthonormal_basis(const MatrixXd& V) {
  Eigen::HouseholderQR<MatrixXd> qr(V);
  return qr.householderQ() * MatrixXd::Identity(V.rows(), V.cols());
}

/// Principal angles between the column spans of A and B, ascending. Cosines
/// and sines come from separate SVDs so that small angles keep full precision.
inline std::vector<double> principal_angles(const MatrixXd& A, const MatrixXd& B) {
  if (A.rows() != B.rows()) throw DimensionError("subspaces live in different ambient spaces");
  MatrixXd qa = orthonormal_basis(A), qb = orthonormal_basis(B);
  if (qb.cols() > qa.cols()) std::swap(qa, qb);
  const VectorXd cos = Eigen::JacobiSVD<MatrixXd>(qa.transpose() * qb).singularValues();  // descending
  VectorXd sin = Eigen::JacobiSVD<MatrixXd>(MatrixXd(qb - qa * (qa.transpose() * qb))).singularValues();
  std::sort(sin.data(), sin.data() + sin.size());
  std::vector<double> out;
  for (Eigen::Index i = 0; i < cos.size(); ++i) out.push_back(std::atan2(std::max(sin(i), 0.0), std::max(cos(i), 0.0)));
  std::sort(out.begin(), out.end());
  return out;
}

/// Largest component of a bracket of basis vectors of V lying outside V.
inline double closure_defect(const StructureConstants<double>& mu, const MatrixXd& V) {
  const MatrixXd q = orthonormal_basis(V);
  const DenseMatrix<double> basis = from_eigen(V);
  double worst = 0;
  for (Eigen::Index i = 0; i < V.cols(); ++i)
    for (Eigen::Index j = i + 1; j < V.cols(); ++j) {
      const VectorXd w = to_eigen(mu.bracket(basis.column(i), basis.column(j)));
      worst = std::max(worst, sup_norm(VectorXd(w - q * (q.transpose() * w))));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// chord Newton

struct NewtonTrace {
  VectorXd x;
  double residual = 0;
  int iterations = 0;
  int refreshes = 0;
  bool converged = false;
};

using ResidualFn = std::function<VectorXd(const VectorXd&)>;
using JacobianFn = std::function<MatrixXd(const VectorXd&)>;

/// x <- x - damping * P F(x) with P a truncated right inverse of J0. When the
/// residual fails to halve, P is rebuilt from `refresh` at the current point.
inline NewtonTrace chord_newton(VectorXd x, const ResidualFn& F, const MatrixXd& J0, std::size_t rank,
                                const JacobianFn& refresh, const NewtonConfig& cfg) {
  cfg.validate();
  NewtonTrace t;
  MatrixXd P = truncated_pinv(J0, rank);
  VectorXd r = F(x);
  double res = sup_norm(r);
  bool fresh = false;
  while (!(res <= cfg.tolerance) && t.iterations < cfg.max_iterations) {
    ++t.iterations;
    const VectorXd xn = x - cfg.damping * (P * r);
    const VectorXd rn = F(xn);
    const double resn = sup_norm(rn);
    if (!(resn < res)) {
      if (fresh) break;
      P = truncated_pinv(refresh(x), rank);
      ++t.refreshes;
      fresh = true;
      continue;
    }
    const bool stalled = resn > 0.5 * res;
    x = xn;
    r = rn;
    res = resn;
    if (stalled && !fresh && res > cfg.tolerance) {
      P = truncated_pinv(refresh(x), rank);
      ++t.refreshes;
      fresh = true;
    } else {
      fresh = false;
    }
  }
  t.x = std::move(x);
  t.residual = res;
  t.converged = res <= cfg.tolerance;
  return t;
}

// ---------------------------------------------------------------------------
// orbit recovery

struct RecoveryResult {
  MatrixXd solution;   // A = exp(a) for brackets, exp(ad_x) for homomorphisms and subalgebras
  VectorXd log;        // a flattened column-major, or x
  double residual = 0;
  int iterations = 0;
  int refreshes = 0;
  bool converged = false;
  double determinant = 1;
  std::optional<double> max_principal_angle;  // subalgebra recovery only
};

namespace detail {
inline RecoveryResult finish_recovery(const NewtonTrace& t, MatrixXd solution) {
  RecoveryResult out;
  out.determinant = solution.determinant();
  out.solution = std::move(solution);
  out.log = t.x;
  out.residual = t.residual;
  out.iterations = t.iterations;
  out.refreshes = t.refreshes;
  out.converged = t.converged;
  return out;
}

inline std::size_t exact_rank(const Matrix& m) { return m.rows() == 0 || m.cols() == 0 ? 0 : rank(m); }
}  // namespace detail

/// Finds A = exp(a) with A . mu = mu'. Needs H^2(g, g) = 0.
class BracketRecovery {
 public:
  explicit BracketRecovery(const LieAlgebra& g) : mu_(FloatBracket::from_exact(g.bracket(), g.name())) {
    if (!bracket_rigidity(g).holds())
      throw PreconditionError("bracket recovery needs H^2(g,g) = 0 (bracket-rigidity fails)");
    const Matrix d1 = differential_matrix(1, adjoint_rep(g));
    rank_ = detail::exact_rank(d1);
    j0_ = -to_eigen(d1);
  }

  RecoveryResult run(const FloatBracket& mu_prime, const NewtonConfig& cfg = {}) const {
    const std::size_t n = mu_.dim();
    if (mu_prime.dim() != n) throw DimensionError("perturbed bracket has the wrong dimension");
    const VectorXd target = mu_prime.cochain();
    const ResidualFn F = [&](const VectorXd& a) -> VectorXd {
      return exp_act(unflatten(a, n, n), mu_).cochain() - target;
    };
    const JacobianFn refresh = [&](const VectorXd& a) { return fd_jacobian(F, a); };
    const NewtonTrace t = chord_newton(VectorXd::Zero(n * n), F, j0_, rank_, refresh, cfg);
    return detail::finish_recovery(t, unflatten(t.x, n, n).exp());
  }

  const FloatBracket& base() const { return mu_; }

 private:
  FloatBracket mu_;
  MatrixXd j0_;
  std::size_t rank_ = 0;
};

inline RecoveryResult recover_bracket_orbit(const LieAlgebra& g, const FloatBracket& mu_prime,
                                            const NewtonConfig& cfg = {}) {
  return BracketRecovery(g).run(mu_prime, cfg);
}

/// Finds x with exp(ad_x) o rho = rho'. Needs H^1(h, g) = 0.
class HomRecovery {
 public:
  explicit HomRecovery(const Homomorphism& rho)
      : source_(rho.source().bracket().cast<double>()),
        target_(rho.target().bracket().cast<double>()),
        rho_(to_eigen(rho.matrix())) {
    if (!hom_rigidity(rho).holds()) throw PreconditionError("hom recovery needs H^1(h,g) = 0 (hom-rigidity fails)");
    const Matrix d0 = differential_matrix(0, pullback_rep(rho));
    rank_ = detail::exact_rank(d0);
    j0_ = -to_eigen(d0);
  }

  RecoveryResult run(const MatrixXd& rho_prime, const NewtonConfig& cfg = {}) const {
    if (rho_prime.rows() != rho_.rows() || rho_prime.cols() != rho_.cols())
      throw DimensionError("perturbed homomorphism has the wrong shape");
    const double k = sup_norm(to_eigen(curvature(source_, target_, from_eigen(rho_prime)).values));
    if (k > cfg.input_tolerance)
      throw PreconditionError("perturbed map is not a homomorphism: curvature " + std::to_string(k));
    const VectorXd target = flatten(rho_prime);
    const ResidualFn F = [&](const VectorXd& x) -> VectorXd {
      return flatten(MatrixXd(ad_matrix(target_, x).exp() * rho_)) - target;
    };
    const JacobianFn refresh = [&](const VectorXd& x) { return fd_jacobian(F, x); };
    const NewtonTrace t = chord_newton(VectorXd::Zero(rho_.rows()), F, j0_, rank_, refresh, cfg);
    return detail::finish_recovery(t, ad_matrix(target_, t.x).exp());
  }

 private:
  StructureConstants<double> source_, target_;
  MatrixXd rho_;
  MatrixXd j0_;
  std::size_t rank_ = 0;
};

inline RecoveryResult recover_hom_orbit(const Homomorphism& rho, const MatrixXd& rho_prime,
                                        const NewtonConfig& cfg = {}) {
  return HomRecovery(rho).run(rho_prime, cfg);
}

/// Graph-chart coordinates of a k-plane: V = graph(s o eta) with
/// eta = (pi V)(omega-coordinates of V)^-1.
inline MatrixXd chart_coordinates(const ChartFrame<double>& f, const MatrixXd& V) {
  if (V.rows() != static_cast<Eigen::Index>(f.ambient_dim()) || V.cols() != static_cast<Eigen::Index>(f.dim()))
    throw DimensionError("k-plane basis has the wrong shape");
  const MatrixXd sv = to_eigen(f.sub_coords) * V;
  Eigen::JacobiSVD<MatrixXd> svd(sv);
  const auto& s = svd.singularValues();
  if (s.size() > 0 && s(s.size() - 1) < 1e-8 * std::max(1.0, s(0)))
    throw PreconditionError("k-plane lies outside the graph chart around h");
  return to_eigen(f.projection) * V * sv.inverse();
}

inline MatrixXd chart_plane(const ChartFrame<double>& f, const MatrixXd& eta) {
  return to_eigen(f.basis) + to_eigen(f.section) * eta;
}

/// Finds x with exp(ad_x)(h) = V'. Needs H^1(h, g/h) = 0 and V' a subalgebra
/// inside the graph chart.
class SubRecovery {
 public:
  explicit SubRecovery(const SubalgebraWitness& w)
      : mu_(w.ambient().bracket().cast<double>()), frame_(chart_frame(standard_splitting(w)).cast<double>()) {
    if (!sub_rigidity(w).holds()) throw PreconditionError("sub recovery needs H^1(h,g/h) = 0 (sub-rigidity fails)");
    const Matrix j = differential_matrix(0, quotient_rep(w)) * w.quotient().projection;
    rank_ = detail::exact_rank(j);
    j0_ = -to_eigen(j);
  }

  RecoveryResult run(const MatrixXd& v_prime, const NewtonConfig& cfg = {}) const {
    const double defect = closure_defect(mu_, v_prime);
    if (defect > cfg.input_tolerance)
      throw PreconditionError("target plane is not a subalgebra: closure defect " + std::to_string(defect));
    const VectorXd target = flatten(chart_coordinates(frame_, v_prime));
    const MatrixXd h = to_eigen(frame_.basis);
    const ResidualFn F = [&](const VectorXd& x) -> VectorXd {
      return flatten(chart_coordinates(frame_, ad_matrix(mu_, x).exp() * h)) - target;
    };
    const JacobianFn refresh = [&](const VectorXd& x) { return fd_jacobian(F, x); };
    const NewtonTrace t = chord_newton(VectorXd::Zero(h.rows()), F, j0_, rank_, refresh, cfg);
    RecoveryResult out = detail::finish_recovery(t, ad_matrix(mu_, t.x).exp());
    const auto angles = principal_angles(out.solution * h, v_prime);
    out.max_principal_angle = angles.empty() ? 0.0 : angles.back();
    return out;
  }

  const ChartFrame<double>& frame() const { return frame_; }

 private:
  StructureConstants<double> mu_;
  ChartFrame<double> frame_;
  MatrixXd j0_;
  std::size_t rank_ = 0;
};

inline RecoveryResult recover_sub_orbit(const SubalgebraWitness& w, const MatrixXd& v_prime,
                                        const NewtonConfig& cfg = {}) {
  return SubRecovery(w).run(v_prime, cfg);
}

// ---------------------------------------------------------------------------
// continuation to a perturbed bracket

struct ContinuationResult {
  MatrixXd solution;     // rho' (dim g x dim h), or a basis of V' (dim g x dim h)
  MatrixXd coordinates;  // rho' - rho, or chart coordinates eta of V'
  double residual = 0;   // sup |K_mu'(rho')| or sup |chart defect|
  double distance = 0;   // sup |rho' - rho| or sup |eta|
  int iterations = 0;
  int refreshes = 0;
  bool converged = false;
};

namespace detail {
inline void require_jacobi(const FloatBracket& mu_prime, std::size_t n, const NewtonConfig& cfg) {
  if (mu_prime.dim() != n) throw DimensionError("perturbed bracket has the wrong dimension");
  const double j = mu_prime.jacobi_defect();
  if (j > cfg.input_tolerance) throw PreconditionError("perturbed bracket fails Jacobi: defect " + std::to_string(j));
}
}  // namespace detail

/// Newton on phi -> K_mu'(phi) from rho. Needs H^2(h, g) = 0.
class HomContinuation {
 public:
  explicit HomContinuation(const Homomorphism& rho)
      : source_(rho.source().bracket().cast<double>()), rho_(to_eigen(rho.matrix())) {
    if (!hom_stability(rho).holds())
      throw PreconditionError("hom continuation needs H^2(h,g) = 0 (hom-stability fails)");
    const Matrix d1 = differential_matrix(1, pullback_rep(rho));
    rank_ = detail::exact_rank(d1);
    j0_ = to_eigen(d1);
  }

  ContinuationResult run(const FloatBracket& mu_prime, const NewtonConfig& cfg = {}) const {
    detail::require_jacobi(mu_prime, rho_.rows(), cfg);
    const Eigen::Index n = rho_.rows(), k = rho_.cols();
    const ResidualFn F = [&](const VectorXd& phi) -> VectorXd {
      return to_eigen(curvature(source_, mu_prime.constants, from_eigen(unflatten(phi, n, k))).values);
    };
    const JacobianFn refresh = [&](const VectorXd& phi) {
      return to_eigen(pullback_differential(1, source_, mu_prime.constants, from_eigen(unflatten(phi, n, k))));
    };
    const NewtonTrace t = chord_newton(flatten(rho_), F, j0_, rank_, refresh, cfg);
    ContinuationResult out;
    out.solution = unflatten(t.x, n, k);
    out.coordinates = out.solution - rho_;
    out.distance = sup_norm(out.coordinates);
    out.residual = t.residual;
    out.iterations = t.iterations;
    out.refreshes = t.refreshes;
    out.converged = t.converged;
    return out;
  }

 private:
  StructureConstants<double> source_;
  MatrixXd rho_;
  MatrixXd j0_;
  std::size_t rank_ = 0;
};

inline ContinuationResult continue_hom(const Homomorphism& rho, const FloatBracket& mu_prime,
                                       const NewtonConfig& cfg = {}) {
  return HomContinuation(rho).run(mu_prime, cfg);
}

/// Newton in the graph chart on eta -> chart defect under mu'. Needs
/// H^2(h, g/h) = 0.
class SubContinuation {
 public:
  explicit SubContinuation(const SubalgebraWitness& w) : frame_(chart_frame(standard_splitting(w)).cast<double>()) {
    if (!sub_stability(w).holds())
      throw PreconditionError("sub continuation needs H^2(h,g/h) = 0 (sub-stability fails)");
    const Matrix d1 = differential_matrix(1, quotient_rep(w));
    rank_ = detail::exact_rank(d1);
    j0_ = to_eigen(d1);
    n_ = w.ambient().dim();
  }

  ContinuationResult run(const FloatBracket& mu_prime, const NewtonConfig& cfg = {}) const {
    detail::require_jacobi(mu_prime, n_, cfg);
    const Eigen::Index c = frame_.codim(), k = frame_.dim();
    const ResidualFn F = [&](const VectorXd& eta) -> VectorXd {
      return to_eigen(chart_defect(frame_, mu_prime.constants, from_eigen(unflatten(eta, c, k))).values);
    };
    const JacobianFn refresh = [&](const VectorXd& eta) { return fd_jacobian(F, eta); };
    const NewtonTrace t = chord_newton(VectorXd::Zero(c * k), F, j0_, rank_, refresh, cfg);
    ContinuationResult out;
    out.coordinates = unflatten(t.x, c, k);
    out.solution = chart_plane(frame_, out.coordinates);
    out.distance = sup_norm(out.coordinates);
    out.residual = t.residual;
    out.iterations = t.iterations;
    out.refreshes = t.refreshes;
    out.converged = t.converged;
    return out;
  }

 private:
  ChartFrame<double> frame_;
  MatrixXd j0_;
  std::size_t rank_ = 0;
  std::size_t n_ = 0;
};

inline ContinuationResult continue_sub(const SubalgebraWitness& w, const FloatBracket& mu_prime,
                                       const NewtonConfig& cfg = {}) {
  return SubContinuation(w).run(mu_prime, cfg);
}

// ---------------------------------------------------------------------------
// finite-difference checks

struct CurveCheckReport {
  std::size_t degree = 0;                 // cochain degree of the derivative
  VectorXd derivative;                    // central difference at the smallest step
  std::vector<double> steps;              // ascending
  std::vector<double> cocycle_defects;    // sup |delta D_h| per step
  std::optional<double> ratio;            // defect(2nd step) / defect(1st step)
  double coboundary_residual = 0;         // sup distance of the derivative from B^degree
};

namespace detail {
inline CurveCheckReport curve_check(std::vector<std::pair<double, VectorXd>> samples, std::size_t degree,
                                    const MatrixXd& delta_next, const MatrixXd& delta_prev,
                                    std::size_t rank_prev) {
  if (samples.size() < 3) throw std::invalid_argument("curve check needs at least three samples");
  const Eigen::Index len = samples.front().second.size();
  for (const auto& s : samples)
    if (s.second.size() != len) throw DimensionError("curve samples have inconsistent dimensions");
  if (len != delta_next.cols()) throw DimensionError("curve samples do not match the cochain space");
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  CurveCheckReport out;
  out.degree = degree;
  std::vector<VectorXd> derivs;
  for (const auto& [t, x] : samples) {
    if (!(t > 0)) continue;
    auto twin = std::find_if(samples.begin(), samples.end(), [t = t](const auto& s) {
      return std::abs(s.first + t) <= 1e-12 * std::abs(t);
    });
    if (twin == samples.end()) continue;
    out.steps.push_back(t);
    derivs.push_back((x - twin->second) / (2 * t));
  }
  if (derivs.empty()) throw std::invalid_argument("curve samples must bracket t = 0 symmetrically");
  for (const auto& d : derivs) out.cocycle_defects.push_back(sup_norm(VectorXd(delta_next * d)));
  if (out.cocycle_defects.size() >= 2 && out.cocycle_defects[0] > 0)
    out.ratio = out.cocycle_defects[1] / out.cocycle_defects[0];
  out.derivative = derivs.front();
  const VectorXd y = truncated_pinv(delta_prev, rank_prev) * out.derivative;
  out.coboundary_residual = sup_norm(VectorXd(delta_prev * y - out.derivative));
  return out;
}
}  // namespace detail

/// Central differences of a curve of brackets through g at t = 0; the
/// derivative should be a cocycle in C^2(g, g).
inline CurveCheckReport curve_cocycle_check(const LieAlgebra& g,
                                            const std::vector<std::pair<double, FloatBracket>>& samples) {
  std::vector<std::pair<double, VectorXd>> pts;
  for (const auto& [t, mu] : samples) {
    if (mu.dim() != g.dim()) throw DimensionError("curve samples have inconsistent dimensions");
    pts.emplace_back(t, mu.cochain());
  }
  const RepSpec r = adjoint_rep(g);
  const Matrix d1 = differential_matrix(1, r);
  return detail::curve_check(std::move(pts), 2, to_eigen(differential_matrix(2, r)), to_eigen(d1),
                             detail::exact_rank(d1));
}

/// Curve of homomorphisms through rho; the derivative should lie in Z^1(h, g).
inline CurveCheckReport curve_cocycle_check(const Homomorphism& rho,
                                            const std::vector<std::pair<double, MatrixXd>>& samples) {
  std::vector<std::pair<double, VectorXd>> pts;
  for (const auto& [t, m] : samples) pts.emplace_back(t, flatten(m));
  const RepSpec r = pullback_rep(rho);
  const Matrix d0 = differential_matrix(0, r);
  return detail::curve_check(std::move(pts), 1, to_eigen(differential_matrix(1, r)), to_eigen(d0),
                             detail::exact_rank(d0));
}

/// Curve of k-planes through h, read in the graph chart of the splitting; the
/// derivative should lie in Z^1(h, g/h).
inline CurveCheckReport curve_cocycle_check(const Splitting& sp,
                                            const std::vector<std::pair<double, MatrixXd>>& planes) {
  const ChartFrame<double> f = chart_frame(sp).cast<double>();
  std::vector<std::pair<double, VectorXd>> pts;
  for (const auto& [t, v] : planes) pts.emplace_back(t, flatten(chart_coordinates(f, v)));
  const RepSpec r = quotient_rep(sp.witness);
  const Matrix d0 = differential_matrix(0, r);
  return detail::curve_check(std::move(pts), 1, to_eigen(differential_matrix(1, r)), to_eigen(d0),
                             detail::exact_rank(d0));
}

struct FiniteDifferenceCheck {
  double step = 0;
  double defect = 0;       // sup |central difference - vertical derivative| at step
  double defect_half = 0;  // same at step / 2
  std::optional<double> ratio;  // defect / defect_half
  double derivative_norm = 0;   // sup |vertical derivative(d)|
};

namespace detail {
inline FiniteDifferenceCheck fd_check(const ResidualFn& F, const VectorXd& d, const VectorXd& expected, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  auto defect = [&](double s) {
    const VectorXd cd = (F(s * d) - F(-s * d)) / (2 * s);
    return sup_norm(VectorXd(cd - expected));
  };
  FiniteDifferenceCheck out;
  out.step = h;
  out.defect = defect(h);
  out.defect_half = defect(h / 2);
  if (out.defect_half > 0) out.ratio = out.defect / out.defect_half;
  out.derivative_norm = sup_norm(expected);
  return out;
}
}  // namespace detail

/// Jacobiator along mu + t d against its vertical derivative -delta_mu d.
inline FiniteDifferenceCheck vertical_derivative_fd_check(const LieAlgebra& g, const VectorXd& direction, double h) {
  const std::size_t n = g.dim();
  const StructureConstants<double> mu = g.bracket().cast<double>();
  const MatrixXd d2 = to_eigen(differential_matrix(2, adjoint_rep(g)));
  if (direction.size() != d2.cols()) throw DimensionError("direction must lie in C^2(g, g)");
  const ResidualFn F = [&](const VectorXd& td) -> VectorXd {
    AltMap<double> c(n, 2, n);
    c.values = to_vec(td);
    StructureConstants<double> b = mu;
    b += StructureConstants<double>::from_cochain(c);
    return to_eigen(jacobiator(b).values);
  };
  return detail::fd_check(F, direction, -d2 * direction, h);
}

/// Curvature along rho + t d against delta_rho d.
inline FiniteDifferenceCheck vertical_derivative_fd_check(const Homomorphism& rho, const MatrixXd& direction,
                                                          double h) {
  const StructureConstants<double> src = rho.source().bracket().cast<double>();
  const StructureConstants<double> tgt = rho.target().bracket().cast<double>();
  const MatrixXd base = to_eigen(rho.matrix());
  if (direction.rows() != base.rows() || direction.cols() != base.cols())
    throw DimensionError("direction must lie in C^1(h, g)");
  const MatrixXd d1 = to_eigen(differential_matrix(1, pullback_rep(rho)));
  const ResidualFn F = [&](const VectorXd& td) -> VectorXd {
    const MatrixXd m = base + unflatten(td, base.rows(), base.cols());
    return to_eigen(curvature(src, tgt, from_eigen(m)).values);
  };
  const VectorXd d = flatten(direction);
  return detail::fd_check(F, d, d1 * d, h);
}

/// Chart defect along t d against delta_h d.
inline FiniteDifferenceCheck vertical_derivative_fd_check(const Splitting& sp, const MatrixXd& direction, double h) {
  const ChartFrame<double> f = chart_frame(sp).cast<double>();
  const StructureConstants<double> mu = sp.witness.ambient().bracket().cast<double>();
  if (direction.rows() != static_cast<Eigen::Index>(f.codim()) ||
      direction.cols() != static_cast<Eigen::Index>(f.dim()))
    throw DimensionError("direction must lie in C^1(h, g/h)");
  const MatrixXd d1 = to_eigen(differential_matrix(1, quotient_rep(sp.witness)));
  const ResidualFn F = [&](const VectorXd& td) -> VectorXd {
    return to_eigen(chart_defect(f, mu, from_eigen(unflatten(td, direction.rows(), direction.cols()))).values);
  };
  const VectorXd d = flatten(direction);
  return detail::fd_check(F, d, d1 * d, h);
}

// ---------------------------------------------------------------------------
// seeded experiments

inline MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  return m;
}

enum class ExperimentKind { bracket_recovery, hom_recovery, sub_recovery, hom_continuation, sub_continuation };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::bracket_recovery: return "bracket-recovery";
    case ExperimentKind::hom_recovery: return "hom-recovery";
    case ExperimentKind::sub_recovery: return "sub-recovery";
    case ExperimentKind::hom_continuation: return "hom-continuation";
    case ExperimentKind::sub_continuation: return "sub-continuation";
  }
  return "bracket-recovery";
}

inline std::optional<ExperimentKind> parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::bracket_recovery, ExperimentKind::hom_recovery, ExperimentKind::sub_recovery,
                 ExperimentKind::hom_continuation, ExperimentKind::sub_continuation})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::bracket_recovery;
  DeformationProblem subject;  // algebra, homomorphism or subalgebra matching the kind
  double scale = 0.05;
  std::vector<std::uint64_t> seeds;
  NewtonConfig newton;
};

struct ExperimentRecord {
  std::uint64_t seed = 0;
  ExperimentKind kind = ExperimentKind::bracket_recovery;
  double perturbation_norm = 0;  // sup norm of the random group-side element
  bool converged = false;
  int iterations = 0;
  double residual = 0;
  double distance = 0;           // sup |log| for recoveries, sup |solution - base| for continuations
  MatrixXd solution;
};

/// Runs one kind of experiment over many seeds; solvers are built once.
class ExperimentRunner {
 public:
  explicit ExperimentRunner(ExperimentSpec spec) : spec_(std::move(spec)) {
    spec_.newton.validate();
    if (!(spec_.scale >= 0)) throw std::invalid_argument("perturbation scale must be nonnegative");
    switch (spec_.kind) {
      case ExperimentKind::bracket_recovery: bracket_.emplace(subject<LieAlgebra>()); break;
      case ExperimentKind::hom_recovery: hom_.emplace(subject<Homomorphism>()); break;
      case ExperimentKind::sub_recovery: sub_.emplace(subject<SubalgebraWitness>()); break;
      case ExperimentKind::hom_continuation: hom_cont_.emplace(subject<Homomorphism>()); break;
      case ExperimentKind::sub_continuation: sub_cont_.emplace(subject<SubalgebraWitness>()); break;
    }
  }

  ExperimentRecord run_seed(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    ExperimentRecord rec;
    rec.seed = seed;
    rec.kind = spec_.kind;
    auto take = [&rec](const auto& r) {
      rec.converged = r.converged;
      rec.iterations = r.iterations;
      rec.residual = r.residual;
      rec.solution = r.solution;
    };
    switch (spec_.kind) {
      case ExperimentKind::bracket_recovery: {
        const auto& g = std::get<LieAlgebra>(spec_.subject);
        const MatrixXd a0 = random_matrix(g.dim(), g.dim(), spec_.scale, rng);
        const RecoveryResult r = bracket_->run(exp_act(a0, bracket_->base()), spec_.newton);
        take(r);
        rec.perturbation_norm = sup_norm(a0);
        rec.distance = sup_norm(r.log);
        break;
      }
      case ExperimentKind::hom_recovery: {
        const auto& rho = std::get<Homomorphism>(spec_.subject);
        const StructureConstants<double> mu = rho.target().bracket().cast<double>();
        const MatrixXd x0 = random_matrix(rho.target().dim(), 1, spec_.scale, rng);
        const MatrixXd rho_prime = ad_matrix(mu, x0.col(0)).exp() * to_eigen(rho.matrix());
        const RecoveryResult r = hom_->run(rho_prime, spec_.newton);
        take(r);
        rec.perturbation_norm = sup_norm(x0);
        rec.distance = sup_norm(r.log);
        break;
      }
      case ExperimentKind::sub_recovery: {
        const auto& w = std::get<SubalgebraWitness>(spec_.subject);
        const StructureConstants<double> mu = w.ambient().bracket().cast<double>();
        const MatrixXd x0 = random_matrix(w.ambient().dim(), 1, spec_.scale, rng);
        const MatrixXd v_prime = ad_matrix(mu, x0.col(0)).exp() * to_eigen(sub_->frame().basis);
        const RecoveryResult r = sub_->run(v_prime, spec_.newton);
        take(r);
        rec.perturbation_norm = sup_norm(x0);
        rec.distance = sup_norm(r.log);
        break;
      }
      case ExperimentKind::hom_continuation: {
        const auto& rho = std::get<Homomorphism>(spec_.subject);
        const std::size_t n = rho.target().dim();
        const MatrixXd a0 = random_matrix(n, n, spec_.scale, rng);
        const ContinuationResult r =
            hom_cont_->run(exp_act(a0, FloatBracket::from_exact(rho.target().bracket())), spec_.newton);
        take(r);
        rec.perturbation_norm = sup_norm(a0);
        rec.distance = r.distance;
        break;
      }
      case ExperimentKind::sub_continuation: {
        const auto& w = std::get<SubalgebraWitness>(spec_.subject);
        const std::size_t n = w.ambient().dim();
        const MatrixXd a0 = random_matrix(n, n, spec_.scale, rng);
        const ContinuationResult r =
            sub_cont_->run(exp_act(a0, FloatBracket::from_exact(w.ambient().bracket())), spec_.newton);
        take(r);
        rec.perturbation_norm = sup_norm(a0);
        rec.distance = r.distance;
        break;
      }
    }
    return rec;
  }

  /// Records in seed-list order regardless of how many workers run.
  std::vector<ExperimentRecord> run(unsigned jobs = 1) const {
    std::vector<ExperimentRecord> out(spec_.seeds.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(spec_.seeds.size())));
    if (jobs == 1) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = run_seed(spec_.seeds[i]);
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < out.size(); i = next++) out[i] = run_seed(spec_.seeds[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return out;
  }

  const ExperimentSpec& spec() const { return spec_; }

 private:
  template <class T>
  const T& subject() const {
    if (const auto* p = std::get_if<T>(&spec_.subject)) return *p;
    throw std::invalid_argument(std::string("experiment ") + to_string(spec_.kind) + " needs a different subject");
  }

  ExperimentSpec spec_;
  std::optional<BracketRecovery> bracket_;
  std::optional<HomRecovery> hom_;
  std::optional<SubRecovery> sub_;
  std::optional<HomContinuation> hom_cont_;
  std::optional<SubContinuation> sub_cont_;
};

}  // namespace liedeform
