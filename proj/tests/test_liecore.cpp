#include <gtest/gtest.h>

#include "liedeform/catalog.hpp"
#include "liedeform/liecore.hpp"
#include "support/generators.hpp"

using namespace liedeform;

namespace {

BracketCandidate bracket_from(std::size_t n, std::vector<std::tuple<int, int, Vector>> entries) {
  BracketCandidate b(n);
  for (auto& [i, j, v] : entries) b.set_bracket(i, j, v);
  return b;
}

// [e1,e2] = e1, [e1,e3] = e3, [e2,e3] = 0
BracketCandidate non_jacobi() { return bracket_from(3, {{0, 1, {1, 0, 0}}, {0, 2, {0, 0, 1}}}); }

std::vector<LieAlgebra> catalog_algebras() {
  std::vector<LieAlgebra> out;
  for (const auto& name : catalog::algebra_names()) out.push_back(*catalog::algebra(name));
  out.push_back(catalog::abelian(1));
  out.push_back(catalog::abelian(4));
  return out;
}

}  // namespace

TEST(CochainIndex, LexicographicSubsetsAndPositions) {
  CochainIndex idx(4, 2);
  ASSERT_EQ(idx.size(), 6u);
  EXPECT_EQ(idx.subset(0), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(idx.subset(2), (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(idx.subset(5), (std::vector<std::size_t>{2, 3}));
  for (std::size_t p = 0; p < idx.size(); ++p) EXPECT_EQ(idx.position(idx.subset(p)), p);
  EXPECT_EQ(CochainIndex(3, 0).size(), 1u);
  EXPECT_EQ(CochainIndex(2, 3).size(), 0u);
}

TEST(CochainIndex, SortWithSign) {
  std::vector<std::size_t> a{2, 0, 1};
  EXPECT_EQ(sort_with_sign(a), 1);
  EXPECT_EQ(a, (std::vector<std::size_t>{0, 1, 2}));
  std::vector<std::size_t> b{1, 0};
  EXPECT_EQ(sort_with_sign(b), -1);
  std::vector<std::size_t> c{1, 1};
  EXPECT_EQ(sort_with_sign(c), 0);
}

TEST(ValidateBracket, AbelianAndSl2AreLie) {
  EXPECT_TRUE(std::holds_alternative<LieAlgebra>(validate_bracket(BracketCandidate(4))));
  const auto r = validate_bracket(catalog::sl2().bracket());
  ASSERT_TRUE(std::holds_alternative<LieAlgebra>(r));
  EXPECT_EQ(std::get<LieAlgebra>(r).basis_names(), (std::vector<std::string>{"e1", "e2", "e3"}));
}

TEST(ValidateBracket, ReportsFirstJacobiTripleWithDefect) {
  const auto r = validate_bracket(non_jacobi());
  ASSERT_TRUE(std::holds_alternative<BracketViolation>(r));
  const auto& v = std::get<BracketViolation>(r);
  EXPECT_EQ(v.kind, BracketViolation::Kind::jacobi);
  EXPECT_EQ(v.indices, (std::vector<std::size_t>{0, 1, 2}));
  // [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = e3 + 0 + 0
  EXPECT_EQ(v.defect, (Vector{0, 0, 1}));
  EXPECT_THROW(make_lie_algebra(non_jacobi()), ValidationError);
}

TEST(ValidateBracket, ReportsAntisymmetryFailure) {
  BracketCandidate b(2);
  b(0, 1, 0) = 1;
  const auto r = validate_bracket(b);
  ASSERT_TRUE(std::holds_alternative<BracketViolation>(r));
  EXPECT_EQ(std::get<BracketViolation>(r).kind, BracketViolation::Kind::antisymmetry);
  EXPECT_EQ(std::get<BracketViolation>(r).indices, (std::vector<std::size_t>{0, 1}));

  BracketCandidate diag(2);
  diag(1, 1, 0) = 3;
  EXPECT_TRUE(std::holds_alternative<BracketViolation>(validate_bracket(diag)));
}

TEST(ValidateBracket, DimensionZeroAndNameMismatch) {
  EXPECT_TRUE(std::holds_alternative<LieAlgebra>(validate_bracket(BracketCandidate(0))));
  EXPECT_THROW(validate_bracket(BracketCandidate(2), "x", {"a"}), DimensionError);
}

TEST(Jacobiator, ZeroOnAbelianAndCatalog) {
  EXPECT_TRUE(jacobiator(BracketCandidate(3)).is_zero());
  for (const auto& g : catalog_algebras()) EXPECT_TRUE(jacobiator(g.bracket()).is_zero()) << g.name();
}

TEST(Catalog, ConstantsMatchTheirDefinitions) {
  const LieAlgebra sl2 = catalog::sl2();
  EXPECT_EQ(sl2.bracket(Vector{1, 0, 0}, Vector{0, 1, 0}), (Vector{0, 2, 0}));
  EXPECT_EQ(sl2.bracket(Vector{1, 0, 0}, Vector{0, 0, 1}), (Vector{0, 0, -2}));
  EXPECT_EQ(sl2.bracket(Vector{0, 1, 0}, Vector{0, 0, 1}), (Vector{1, 0, 0}));
  const LieAlgebra so3 = catalog::so3();
  EXPECT_EQ(so3.bracket(Vector{0, 0, 1}, Vector{1, 0, 0}), (Vector{0, 1, 0}));
  EXPECT_EQ(catalog::aff1().bracket(Vector{1, 0}, Vector{0, 1}), (Vector{0, 1}));
  EXPECT_EQ(catalog::heis3().bracket(Vector{1, 0, 0}, Vector{0, 1, 0}), (Vector{0, 0, 1}));
  EXPECT_TRUE(catalog::algebra("abelian7").has_value());
  EXPECT_FALSE(catalog::algebra("abelianx").has_value());
  EXPECT_FALSE(catalog::algebra("gl3").has_value());
}

TEST(AdjointRep, AbelianSl2AndHeisenberg) {
  for (const auto& a : adjoint_rep(catalog::abelian(3)).action) EXPECT_TRUE(a.is_zero());
  const RepSpec sl2 = adjoint_rep(catalog::sl2());
  Matrix rh(3, 3);
  rh(1, 1) = 2;
  rh(2, 2) = -2;
  EXPECT_EQ(sl2.action[0], rh);
  const RepSpec h3 = adjoint_rep(catalog::heis3());
  Matrix rp(3, 3);
  rp(2, 1) = 1;  // q -> z
  EXPECT_EQ(h3.action[0], rp);
  EXPECT_EQ(h3.carrier_dim, 3u);
}

TEST(PullbackRep, ZeroIdentityAndCartan) {
  for (const auto& a : pullback_rep(catalog::zero_to_sl2()).action) EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(pullback_rep(catalog::id_sl2()).action, adjoint_rep(catalog::sl2()).action);
  const SubalgebraWitness cartan = SubalgebraWitness::make(catalog::sl2(), {{1, 0, 0}});
  const RepSpec r = pullback_rep(cartan.inclusion());
  ASSERT_EQ(r.action.size(), 1u);
  EXPECT_EQ(r.action[0], adjoint_rep(catalog::sl2()).action[0]);
}

TEST(PullbackRep, RejectsUnvalidatedMaps) {
  const Homomorphism lin = Homomorphism::linear(catalog::aff1(), catalog::aff1(), Matrix::identity(2));
  EXPECT_THROW(pullback_rep(lin), PreconditionError);
}

TEST(QuotientRep, WholeZeroAndBorel) {
  const SubalgebraWitness whole = SubalgebraWitness::make(catalog::sl2(), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(quotient_rep(whole).carrier_dim, 0u);
  const SubalgebraWitness zero = SubalgebraWitness::make(catalog::sl2(), {});
  const RepSpec z = quotient_rep(zero);
  EXPECT_EQ(z.carrier_dim, 3u);
  EXPECT_EQ(z.algebra_dim(), 0u);

  const RepSpec b = quotient_rep(catalog::borel_in_sl2());
  ASSERT_EQ(b.carrier_dim, 1u);
  EXPECT_EQ(b.action[0](0, 0), Scalar(-2));  // h . fbar = -2 fbar
  EXPECT_EQ(b.action[1](0, 0), Scalar(0));   // [e, f] = h lies in b
}

TEST(Curvature, ZeroIdentityAndSwap) {
  const LieAlgebra aff = catalog::aff1();
  EXPECT_TRUE(curvature(aff.bracket(), aff.bracket(), Matrix(2, 2)).is_zero());
  EXPECT_TRUE(catalog::id_sl2().curvature().is_zero());
  Matrix swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  const AltMap<Scalar> k = curvature(aff.bracket(), aff.bracket(), swap);
  // K(x, y) = [y, x] - rho(y) = -y - x
  EXPECT_EQ(Vector(k.at(0).begin(), k.at(0).end()), (Vector{-1, -1}));
  EXPECT_THROW(Homomorphism::make(aff, aff, swap), ValidationError);
}

TEST(Curvature, ShapeMismatchIsRejected) {
  EXPECT_THROW(Homomorphism::linear(catalog::aff1(), catalog::sl2(), Matrix(2, 3)), DimensionError);
}

TEST(SubalgebraDefect, WholeSpaceNonClosedAndBorel) {
  const LieAlgebra sl2 = catalog::sl2();
  EXPECT_TRUE(subalgebra_defect(sl2, Subspace::full(3)).is_zero());
  const AltMap<Scalar> ef = subalgebra_defect(sl2, Subspace::span(3, {{0, 1, 0}, {0, 0, 1}}));
  EXPECT_FALSE(ef.is_zero());
  // quotient by span{e, f} keeps the h axis; [e, f] = h
  EXPECT_EQ(Vector(ef.at(0).begin(), ef.at(0).end()), Vector{1});
  EXPECT_TRUE(subalgebra_defect(sl2, Subspace::span(3, {{1, 0, 0}, {0, 1, 0}})).is_zero());
}

TEST(SubalgebraWitness, RejectsDependentAndOpenSubspaces) {
  EXPECT_THROW(SubalgebraWitness::make(catalog::sl2(), {{1, 0, 0}, {2, 0, 0}}), ValidationError);
  EXPECT_THROW(SubalgebraWitness::make(catalog::sl2(), {{0, 1, 0}, {0, 0, 1}}), ValidationError);
}

TEST(SubalgebraWitness, InclusionIsAHomomorphism) {
  const SubalgebraWitness b = catalog::borel_in_sl2();
  EXPECT_EQ(b.dim(), 2u);
  EXPECT_EQ(b.codim(), 1u);
  EXPECT_TRUE(b.inclusion().is_validated());
  const LieAlgebra sub = b.subalgebra();
  EXPECT_EQ(sub.bracket(Vector{1, 0}, Vector{0, 1}), (Vector{0, 2}));  // [h, e] = 2e
}

// ---------------------------------------------------------------------------
// properties

TEST(LiecoreProperty, RepresentationIdentityForAllCatalogSystems) {
  for (const auto& g : catalog_algebras()) EXPECT_TRUE(adjoint_rep(g).satisfies_rep_identity()) << g.name();
  for (const auto& name : catalog::homomorphism_names())
    EXPECT_TRUE(pullback_rep(*catalog::homomorphism(name)).satisfies_rep_identity()) << name;
  for (const auto& name : catalog::subalgebra_names()) {
    const SubalgebraWitness w = *catalog::subalgebra(name);
    EXPECT_TRUE(quotient_rep(w).satisfies_rep_identity()) << name;
    EXPECT_TRUE(pullback_rep(w.inclusion()).satisfies_rep_identity()) << name;
  }
}

TEST(LiecoreProperty, RandomAntisymmetricCandidatesAgreeWithJacobiator) {
  gen::Rng rng(21);
  int lie = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.integer(1, 4);
    BracketCandidate b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Vector v(n);
        for (auto& x : v) x = rng.coin(0.7) ? Scalar(0) : rng.rational();
        b.set_bracket(i, j, v);
      }
    const bool accepted = std::holds_alternative<LieAlgebra>(validate_bracket(b));
    EXPECT_EQ(accepted, jacobiator(b).is_zero());
    lie += accepted;
  }
  EXPECT_GT(lie, 0);
  EXPECT_LT(lie, 200);
}

TEST(LiecoreProperty, CurvatureVanishesExactlyOnHomomorphisms) {
  gen::Rng rng(22);
  const LieAlgebra sl2 = catalog::sl2();
  for (int trial = 0; trial < 60; ++trial) {
    // a random inner-like automorphism: conjugation by an invertible rational matrix preserving nothing
    Matrix m = rng.matrix(3, 3, 0.2);
    const bool hom = curvature(sl2.bracket(), sl2.bracket(), m).is_zero();
    bool threw = false;
    try {
      Homomorphism::make(sl2, sl2, m);
    } catch (const ValidationError&) {
      threw = true;
    }
    EXPECT_EQ(hom, !threw);
  }
  // scaled identity on an abelian algebra is always a homomorphism
  for (int trial = 0; trial < 20; ++trial) {
    const LieAlgebra a = catalog::abelian(3);
    EXPECT_NO_THROW(Homomorphism::make(a, a, rng.matrix(3, 3)));
  }
}

TEST(LiecoreProperty, ClosureMatchesDefectOnRandomSpans) {
  gen::Rng rng(23);
  const LieAlgebra g = catalog::heis3();
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<Vector> vs;
    for (int i = rng.integer(1, 2); i > 0; --i) vs.push_back(rng.vector(3));
    const Subspace s = Subspace::span(3, vs);
    bool closed = true;
    for (const auto& u : s.basis())
      for (const auto& v : s.basis()) closed = closed && s.contains(g.bracket(u, v));
    EXPECT_EQ(closed, subalgebra_defect(g, s).is_zero());
  }
}
