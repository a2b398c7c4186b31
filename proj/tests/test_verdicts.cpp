#include <gtest/gtest.h>

#include "liedeform/catalog.hpp"
#include "liedeform/verdicts.hpp"

using namespace liedeform;

namespace {

std::int64_t ev(const Verdict& v, const std::string& key) {
  const auto x = v.evidence_value(key);
  EXPECT_TRUE(x.has_value()) << key;
  return x.value_or(-1);
}

Homomorphism identity_on(const LieAlgebra& g) { return Homomorphism::make(g, g, Matrix::identity(g.dim())); }

}  // namespace

TEST(BracketRigidity, CatalogExamples) {
  const Verdict sl2 = bracket_rigidity(catalog::sl2());
  EXPECT_EQ(sl2.conclusion, Conclusion::holds);
  EXPECT_EQ(ev(sl2, "dimH2"), 0);
  EXPECT_EQ(sl2.summary(), "holds (H^2 = 0)");
  ASSERT_TRUE(sl2.report.has_value());
  EXPECT_EQ(sl2.report->dim_h(2), 0u);

  const Verdict ab2 = bracket_rigidity(catalog::abelian(2));
  EXPECT_EQ(ab2.conclusion, Conclusion::fails_criterion);
  EXPECT_EQ(ev(ab2, "dimH2"), 2);
  EXPECT_EQ(ab2.summary(), "fails-criterion (needs H^2 = 0)");

  EXPECT_TRUE(bracket_rigidity(catalog::aff1()).holds());
  EXPECT_TRUE(bracket_rigidity(catalog::so3()).holds());
  EXPECT_FALSE(bracket_rigidity(catalog::heis3()).holds());
}

TEST(BracketSmoothness, CatalogExamples) {
  const Verdict sl2 = bracket_smoothness(catalog::sl2());
  EXPECT_TRUE(sl2.holds());
  EXPECT_EQ(ev(sl2, "local_manifold_dim"), 6);
  for (const auto& g : {catalog::aff1(), catalog::abelian(2), catalog::abelian(1)}) {
    const Verdict v = bracket_smoothness(g);
    EXPECT_TRUE(v.holds()) << g.name();
    EXPECT_EQ(ev(v, "dimH3"), 0);
  }
  const Verdict ab3 = bracket_smoothness(catalog::abelian(3));
  EXPECT_EQ(ab3.conclusion, Conclusion::fails_criterion);
  EXPECT_EQ(ev(ab3, "dimH3"), 3);
}

TEST(HomRigidity, CatalogExamples) {
  EXPECT_TRUE(hom_rigidity(catalog::id_sl2()).holds());
  const Verdict zero = hom_rigidity(catalog::zero_to_sl2());
  EXPECT_EQ(zero.conclusion, Conclusion::fails_criterion);
  EXPECT_EQ(ev(zero, "dimH1"), 3);
  EXPECT_EQ(ev(zero, "dimZ1"), 3);
  const Verdict borel = hom_rigidity(catalog::borel_inclusion());
  EXPECT_EQ(borel.holds(), borel.report->dim_h(1) == 0);
}

TEST(HomAutRigidity, CatalogExamples) {
  const Verdict id = hom_aut_rigidity(catalog::id_sl2());
  EXPECT_TRUE(id.holds());
  EXPECT_EQ(ev(id, "derivation_algebra_dim"), 3);

  const Verdict id_ab = hom_aut_rigidity(identity_on(catalog::abelian(2)));
  EXPECT_TRUE(id_ab.holds());
  EXPECT_EQ(ev(id_ab, "rank_H1_pullback"), 4);
  EXPECT_EQ(ev(id_ab, "derivation_algebra_dim"), 4);

  const Verdict zero = hom_aut_rigidity(catalog::zero_to_sl2());
  EXPECT_EQ(zero.conclusion, Conclusion::fails_criterion);
  EXPECT_EQ(ev(zero, "dimH1_gg"), 0);
  EXPECT_EQ(ev(zero, "dimH1_hg"), 3);
  EXPECT_EQ(ev(zero, "rank_H1_pullback"), 0);
}

TEST(HomAutRigidity, VacuousWhenTargetIsZero) {
  const Verdict borel = hom_aut_rigidity(catalog::borel_inclusion());
  ASSERT_EQ(ev(borel, "dimH1_hg"), 0);
  EXPECT_EQ(ev(borel, "rank_H1_pullback"), 0);
  EXPECT_TRUE(borel.holds());
}

TEST(HomStability, CatalogExamples) {
  const Verdict zero = hom_stability(catalog::zero_to_sl2());
  EXPECT_TRUE(zero.holds());
  EXPECT_EQ(ev(zero, "local_manifold_dim"), 3);
  EXPECT_TRUE(hom_stability(catalog::id_sl2()).holds());
  const Verdict borel = hom_stability(catalog::borel_inclusion());
  EXPECT_EQ(borel.holds(), borel.report->dim_h(2) == 0);
}

TEST(StabilityIndicator, SettledPaths) {
  const Verdict one = hom_infinitesimal_stability_indicator(catalog::zero_to_sl2());
  EXPECT_TRUE(one.holds());
  EXPECT_EQ(one.settled_by, "hom-stability");
  EXPECT_EQ(ev(one, "indicator_zero"), 1);

  Matrix he(3, 2);
  he(0, 0) = 1;
  const Homomorphism into_sl2 = Homomorphism::make(catalog::abelian(2), catalog::sl2(), he);
  const Verdict v = hom_infinitesimal_stability_indicator(into_sl2);
  EXPECT_EQ(ev(v, "dimH2_gg"), 0);
  EXPECT_EQ(ev(v, "indicator_zero"), 1);
  EXPECT_TRUE(v.holds());
  ASSERT_TRUE(v.settled_by.has_value());
  if (ev(v, "dimH2_hg") > 0) EXPECT_EQ(v.settled_by, "bracket-rigidity");
}

TEST(StabilityIndicator, InconclusiveWhenBothSecondGroupsAreNonzero) {
  const Verdict v = hom_infinitesimal_stability_indicator(identity_on(catalog::abelian(2)));
  EXPECT_EQ(v.conclusion, Conclusion::inconclusive);
  EXPECT_FALSE(v.settled_by.has_value());
  EXPECT_EQ(ev(v, "indicator_zero"), 0);
  EXPECT_EQ(ev(v, "rank_H2_pullback"), 2);
  EXPECT_EQ(v.summary(), "inconclusive");
}

TEST(SubRigidity, CatalogExamples) {
  const SubalgebraWitness whole = SubalgebraWitness::make(catalog::sl2(), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_TRUE(sub_rigidity(whole).holds());
  EXPECT_TRUE(sub_rigidity(catalog::borel_in_sl2()).holds());
  const Verdict center = sub_rigidity(catalog::center_in_heis3());
  EXPECT_EQ(center.conclusion, Conclusion::fails_criterion);
  EXPECT_EQ(ev(center, "dimH1"), 2);
}

TEST(SubStability, CatalogExamples) {
  EXPECT_TRUE(sub_stability(catalog::borel_in_sl2()).holds());
  const Verdict center = sub_stability(catalog::center_in_heis3());
  EXPECT_TRUE(center.holds());
  EXPECT_EQ(ev(center, "local_manifold_dim"), 2);
  EXPECT_TRUE(sub_stability(SubalgebraWitness::make(catalog::sl2(), {{1, 0, 0}})).holds());
}

TEST(KuranishiModel, SpecExamples) {
  const KuranishiModelDims sl2 = kuranishi_model_dims(catalog::sl2());
  EXPECT_EQ(sl2.problem, "bracket");
  EXPECT_EQ(sl2.tangent_degree, 2u);
  EXPECT_EQ(sl2.tangent_dim, 0u);
  EXPECT_EQ(sl2.obstruction_dim, 0u);
  EXPECT_EQ(sl2.orbit_dim, 6u);

  const KuranishiModelDims ab3 = kuranishi_model_dims(catalog::abelian(3));
  EXPECT_EQ(ab3.tangent_dim, 9u);
  EXPECT_EQ(ab3.obstruction_dim, 3u);
  EXPECT_EQ(ab3.orbit_dim, 0u);

  const KuranishiModelDims borel = kuranishi_model_dims(catalog::borel_in_sl2());
  EXPECT_EQ(borel.problem, "sub");
  EXPECT_EQ(borel.tangent_dim, 0u);
  EXPECT_EQ(borel.obstruction_dim, 0u);
  EXPECT_EQ(borel.orbit_dim, 1u);
  EXPECT_FALSE(borel.aut_model_dim.has_value());

  const KuranishiModelDims zero = kuranishi_model_dims(catalog::zero_to_sl2());
  EXPECT_EQ(zero.problem, "hom");
  EXPECT_EQ(zero.tangent_dim, 3u);
  EXPECT_EQ(zero.obstruction_dim, 0u);
  EXPECT_EQ(zero.aut_model_dim, 3u);
}

// ---------------------------------------------------------------------------
// properties over the catalog

TEST(VerdictsProperty, HoldsOnlyWithAZeroCertificate) {
  for (const auto& name : catalog::algebra_names()) {
    const LieAlgebra g = *catalog::algebra(name);
    const Verdict r = bracket_rigidity(g), s = bracket_smoothness(g);
    EXPECT_EQ(r.holds(), ev(r, "dimH2") == 0) << name;
    EXPECT_EQ(s.holds(), ev(s, "dimH3") == 0) << name;
    EXPECT_NE(r.conclusion, Conclusion::inconclusive);
  }
  for (const auto& name : catalog::homomorphism_names()) {
    const Homomorphism rho = *catalog::homomorphism(name);
    const Verdict a = hom_aut_rigidity(rho);
    EXPECT_EQ(a.holds(), ev(a, "rank_H1_pullback") == ev(a, "dimH1_hg")) << name;
    // rigidity implies the weaker Aut-rigidity criterion
    if (hom_rigidity(rho).holds()) EXPECT_TRUE(a.holds()) << name;
  }
}

TEST(VerdictsProperty, RigidTargetSettlesEveryIndicator) {
  for (const auto& name : catalog::homomorphism_names()) {
    const Homomorphism rho = *catalog::homomorphism(name);
    if (!bracket_rigidity(rho.target()).holds()) continue;
    const Verdict v = hom_infinitesimal_stability_indicator(rho);
    EXPECT_TRUE(v.holds()) << name;
    EXPECT_TRUE(v.settled_by.has_value()) << name;
    EXPECT_EQ(ev(v, "indicator_zero"), 1) << name;
  }
}

TEST(VerdictsProperty, ModelDimsMatchTheReports) {
  for (const auto& name : catalog::algebra_names()) {
    const LieAlgebra g = *catalog::algebra(name);
    const KuranishiModelDims d = kuranishi_model_dims(g);
    const CohomologyReport r = cohomology(adjoint_rep(g), std::max<std::size_t>(3, g.dim()));
    EXPECT_EQ(d.tangent_dim, r.dim_h(2)) << name;
    EXPECT_EQ(d.obstruction_dim, r.dim_h(3)) << name;
    EXPECT_EQ(d.cocycle_dim, d.tangent_dim + d.orbit_dim) << name;
    EXPECT_EQ(static_cast<std::int64_t>(d.cocycle_dim), ev(bracket_smoothness(g), "local_manifold_dim")) << name;
  }
  for (const auto& name : catalog::subalgebra_names()) {
    const SubalgebraWitness w = *catalog::subalgebra(name);
    const KuranishiModelDims d = kuranishi_model_dims(w);
    EXPECT_EQ(static_cast<std::int64_t>(d.tangent_dim), ev(sub_rigidity(w), "dimH1")) << name;
    EXPECT_EQ(static_cast<std::int64_t>(d.obstruction_dim), ev(sub_stability(w), "dimH2")) << name;
  }
  for (const auto& name : catalog::homomorphism_names()) {
    const Homomorphism rho = *catalog::homomorphism(name);
    const KuranishiModelDims d = kuranishi_model_dims(rho);
    EXPECT_EQ(static_cast<std::int64_t>(d.tangent_dim), ev(hom_rigidity(rho), "dimH1")) << name;
    EXPECT_EQ(static_cast<std::int64_t>(d.obstruction_dim), ev(hom_stability(rho), "dimH2")) << name;
    ASSERT_TRUE(d.aut_model_dim.has_value());
    EXPECT_LE(*d.aut_model_dim, d.tangent_dim);
  }
}
