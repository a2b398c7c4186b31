#pragma once

// Rigidity and stability verdicts from exact cohomology.
//
// Every criterion is a sufficient condition. A nonzero cohomology group only
// means the criterion fails; it is never reported as non-rigidity.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "liedeform/cecomplex.hpp"
#include "liedeform/liecore.hpp"

namespace liedeform {

enum class Conclusion { holds, fails_criterion, inconclusive };

inline const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::holds: return "holds";
    case Conclusion::fails_criterion: return "fails-criterion";
    case Conclusion::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct Verdict {
  std::string criterion;
  std::string citation;
  Conclusion conclusion = Conclusion::inconclusive;
  std::string condition;  // e.g. "H^2 = 0"
  std::vector<std::pair<std::string, std::int64_t>> evidence;
  std::optional<std::string> settled_by;
  std::optional<CohomologyReport> report;

  bool holds() const { return conclusion == Conclusion::holds; }

  std::optional<std::int64_t> evidence_value(const std::string& key) const {
    for (const auto& [k, v] : evidence)
      if (k == key) return v;
    return std::nullopt;
  }

  /// One-line human summary, e.g. "holds (H^2(g,g) = 0)".
  std::string summary() const {
    std::string s = to_string(conclusion);
    if (conclusion == Conclusion::holds) return s + " (" + condition + ")";
    if (conclusion == Conclusion::fails_criterion) return s + " (needs " + condition + ")";
    return s;
  }
};

namespace detail {
inline Verdict zero_dim_verdict(std::string criterion, std::string citation, std::string condition,
                                std::string key, std::size_t dim) {
  Verdict v;
  v.criterion = std::move(criterion);
  v.citation = std::move(citation);
  v.condition = std::move(condition);
  v.conclusion = dim == 0 ? Conclusion::holds : Conclusion::fails_criterion;
  v.evidence.emplace_back(std::move(key), static_cast<std::int64_t>(dim));
  return v;
}

inline std::size_t report_top(std::size_t n, std::size_t need) { return std::max(n, need); }
}  // namespace detail

/// H^2(g,g) = 0 implies every nearby bracket is GL(g)-equivalent to g's.
inline Verdict bracket_rigidity(const LieAlgebra& g) {
  CohomologyReport r = cohomology(adjoint_rep(g), detail::report_top(g.dim(), 2));
  Verdict v = detail::zero_dim_verdict("bracket-rigidity", "thm:rigidity-of-lie-brackets", "H^2 = 0", "dimH2",
                                       r.dim_h(2));
  v.evidence.emplace_back("dimZ2", r.degree(2).dim_z);
  v.evidence.emplace_back("dimB2", r.degree(2).dim_b);
  v.report = std::move(r);
  return v;
}

/// H^3(g,g) = 0 implies brackets near g form a manifold of dimension dim Z^2(g,g).
inline Verdict bracket_smoothness(const LieAlgebra& g) {
  CohomologyReport r = cohomology(adjoint_rep(g), detail::report_top(g.dim(), 3));
  Verdict v = detail::zero_dim_verdict("bracket-smoothness", "thm:smoothness-of-bracket-space", "H^3 = 0",
                                       "dimH3", r.dim_h(3));
  v.evidence.emplace_back("local_manifold_dim", r.degree(2).dim_z);
  v.report = std::move(r);
  return v;
}

/// H^1(h,g) = 0 implies nearby homomorphisms are Ad-conjugate to rho.
inline Verdict hom_rigidity(const Homomorphism& rho) {
  CohomologyReport r = cohomology(pullback_rep(rho), detail::report_top(rho.source().dim(), 2));
  Verdict v = detail::zero_dim_verdict("hom-rigidity", "thm:rigidity-of-homomorphisms", "H^1 = 0", "dimH1",
                                       r.dim_h(1));
  v.evidence.emplace_back("dimZ1", r.degree(1).dim_z);
  v.report = std::move(r);
  return v;
}

/// H^2(h,g) = 0 implies rho survives perturbations of the bracket on g; nearby
/// homomorphisms form a manifold of dimension dim Z^1(h,g).
inline Verdict hom_stability(const Homomorphism& rho) {
  CohomologyReport r = cohomology(pullback_rep(rho), detail::report_top(rho.source().dim(), 2));
  Verdict v = detail::zero_dim_verdict("hom-stability", "thm:stability-of-homomorphisms", "H^2 = 0", "dimH2",
                                       r.dim_h(2));
  v.evidence.emplace_back("local_manifold_dim", r.degree(1).dim_z);
  v.report = std::move(r);
  return v;
}

/// The map H^k(rho^*) : H^k(g,g) -> H^k(h,g) with its two reports.
struct PullbackOnCohomology {
  CohomologyReport source;  // (g, g)
  CohomologyReport target;  // (h, g)
  InducedMap map;
};

inline PullbackOnCohomology pullback_on_cohomology(const Homomorphism& rho, std::size_t k) {
  if (!rho.is_validated()) throw PreconditionError("induced map needs a validated homomorphism");
  PullbackOnCohomology out;
  out.source = cohomology(adjoint_rep(rho.target()), detail::report_top(rho.target().dim(), k + 1));
  out.target = cohomology(pullback_rep(rho), detail::report_top(rho.source().dim(), k + 1));
  std::vector<Matrix> chain;
  for (std::size_t j = 0; j <= k + 1; ++j) chain.push_back(pullback_cochain_map(rho, j));
  out.map = induced_map_on_H(chain, out.source, out.target, k);
  return out;
}

/// Surjectivity of H^1(rho^*) implies rigidity under Aut(g). Also reports
/// dim Z^1(g,g), the dimension of the derivation algebra.
inline Verdict hom_aut_rigidity(const Homomorphism& rho) {
  PullbackOnCohomology p = pullback_on_cohomology(rho, 1);
  Verdict v;
  v.criterion = "hom-aut-rigidity";
  v.citation = "thm:aut-rigidity-of-homomorphisms";
  v.condition = "H^1(rho^*) : H^1(g,g) -> H^1(h,g) is surjective";
  v.conclusion = p.map.surjective() ? Conclusion::holds : Conclusion::fails_criterion;
  v.evidence.emplace_back("dimH1_gg", p.source.dim_h(1));
  v.evidence.emplace_back("dimH1_hg", p.target.dim_h(1));
  v.evidence.emplace_back("rank_H1_pullback", p.map.rank);
  v.evidence.emplace_back("derivation_algebra_dim", p.source.degree(1).dim_z);
  v.report = std::move(p.target);
  return v;
}

/// Whether H^2(rho^*) vanishes. Vanishing is not known to imply stability, so
/// the result is inconclusive unless H^2(h,g) = 0 or H^2(g,g) = 0 settles it.
inline Verdict hom_infinitesimal_stability_indicator(const Homomorphism& rho) {
  PullbackOnCohomology p = pullback_on_cohomology(rho, 2);
  Verdict v;
  v.criterion = "hom-infinitesimal-stability-indicator";
  v.citation = "remark:infinitesimal-stability-of-homomorphisms";
  v.condition = "H^2(rho^*) = 0";
  v.evidence.emplace_back("indicator_zero", p.map.zero() ? 1 : 0);
  v.evidence.emplace_back("rank_H2_pullback", p.map.rank);
  v.evidence.emplace_back("dimH2_gg", p.source.dim_h(2));
  v.evidence.emplace_back("dimH2_hg", p.target.dim_h(2));
  if (p.target.dim_h(2) == 0) {
    v.conclusion = Conclusion::holds;
    v.condition = "H^2(h,g) = 0";
    v.settled_by = "hom-stability";
  } else if (p.source.dim_h(2) == 0) {
    v.conclusion = Conclusion::holds;
    v.condition = "H^2(g,g) = 0";
    v.settled_by = "bracket-rigidity";
  } else {
    v.conclusion = Conclusion::inconclusive;
  }
  v.report = std::move(p.target);
  return v;
}

/// H^1(h,g/h) = 0 implies nearby subalgebras are Ad-conjugate to h.
inline Verdict sub_rigidity(const SubalgebraWitness& w) {
  CohomologyReport r = cohomology(quotient_rep(w), detail::report_top(w.dim(), 2));
  Verdict v = detail::zero_dim_verdict("sub-rigidity", "thm:rigidity-of-subalgebras", "H^1 = 0", "dimH1",
                                       r.dim_h(1));
  v.evidence.emplace_back("dimZ1", r.degree(1).dim_z);
  v.report = std::move(r);
  return v;
}

/// H^2(h,g/h) = 0 implies h survives perturbations of the bracket; nearby
/// subalgebras form a manifold of dimension dim Z^1(h,g/h).
inline Verdict sub_stability(const SubalgebraWitness& w) {
  CohomologyReport r = cohomology(quotient_rep(w), detail::report_top(w.dim(), 2));
  Verdict v = detail::zero_dim_verdict("sub-stability", "thm:stability-of-subalgebras", "H^2 = 0", "dimH2",
                                       r.dim_h(2));
  v.evidence.emplace_back("local_manifold_dim", r.degree(1).dim_z);
  v.report = std::move(r);
  return v;
}

using DeformationProblem = std::variant<LieAlgebra, Homomorphism, SubalgebraWitness>;

/// Dimensions of the local Kuranishi model: the model is the zero set of a map
/// from a neighbourhood of 0 in H^tangent to H^obstruction, whose second jet is
/// the quadratic Kuranishi map.
struct KuranishiModelDims {
  std::string problem;              // "bracket" | "hom" | "sub"
  std::size_t tangent_degree = 0;
  std::size_t tangent_dim = 0;      // dim H^tangent_degree
  std::size_t obstruction_dim = 0;  // dim H^(tangent_degree + 1)
  std::size_t orbit_dim = 0;        // dim B^tangent_degree, image of the infinitesimal action
  std::size_t cocycle_dim = 0;      // dim Z^tangent_degree, kernel of the vertical derivative
  std::optional<std::size_t> aut_model_dim;  // hom only: dim H^1(h,g) / im H^1(rho^*)
};

inline KuranishiModelDims kuranishi_model_dims(const DeformationProblem& problem) {
  KuranishiModelDims d;
  auto fill = [&d](const CohomologyReport& r, std::size_t k) {
    d.tangent_degree = k;
    d.tangent_dim = r.dim_h(k);
    d.obstruction_dim = r.dim_h(k + 1);
    d.orbit_dim = r.degree(k).dim_b;
    d.cocycle_dim = r.degree(k).dim_z;
  };
  if (const auto* g = std::get_if<LieAlgebra>(&problem)) {
    d.problem = "bracket";
    fill(cohomology(adjoint_rep(*g), detail::report_top(g->dim(), 3)), 2);
  } else if (const auto* rho = std::get_if<Homomorphism>(&problem)) {
    d.problem = "hom";
    PullbackOnCohomology p = pullback_on_cohomology(*rho, 1);
    fill(p.target, 1);
    d.aut_model_dim = p.target.dim_h(1) - p.map.rank;
  } else {
    const auto& w = std::get<SubalgebraWitness>(problem);
    d.problem = "sub";
    fill(cohomology(quotient_rep(w), detail::report_top(w.dim(), 2)), 1);
  }
  return d;
}

}  // namespace liedeform
