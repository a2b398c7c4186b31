#include <gtest/gtest.h>

#include "liedeform/catalog.hpp"
#include "liedeform/json_io.hpp"

using namespace liedeform;
using io::json;

namespace {

template <class F>
std::string document_error_pointer(F&& f) {
  try {
    f();
  } catch (const io::DocumentError& e) {
    return e.pointer();
  }
  return "<no error>";
}

template <class F>
json invalid_object_defect(F&& f) {
  try {
    f();
  } catch (const io::InvalidObject& e) {
    return e.defect();
  }
  return nullptr;
}

}  // namespace

TEST(JsonScalars, IntegersAndFractions) {
  EXPECT_EQ(io::read_scalar(json(3), ""), Scalar(3));
  EXPECT_EQ(io::read_scalar(json("-2/4"), ""), Scalar(-1, 2));
  EXPECT_EQ(document_error_pointer([] { io::read_scalar(json(1.5), "/x"); }), "/x");
  EXPECT_EQ(document_error_pointer([] { io::read_scalar(json("1/0"), "/y"); }), "/y");
  EXPECT_EQ(io::scalar_json(Scalar(-3, 6)), json("-1/2"));
  EXPECT_EQ(io::vector_json({1, Scalar(2, 3)}), json::parse(R"(["1","2/3"])"));
}

TEST(JsonAlgebra, CatalogRoundTrips) {
  for (const auto& name : catalog::algebra_names()) {
    const LieAlgebra g = *catalog::algebra(name);
    const LieAlgebra back = io::read_algebra(io::algebra_json(g));
    EXPECT_EQ(back.bracket(), g.bracket()) << name;
    EXPECT_EQ(back.basis_names(), g.basis_names()) << name;
    EXPECT_EQ(back.name(), g.name()) << name;
    EXPECT_EQ(io::algebra_json(back).dump(), io::algebra_json(g).dump()) << name;
  }
}

TEST(JsonAlgebra, NamesAndAntisymmetricCompletion) {
  EXPECT_EQ(io::read_algebra(json("sl2")).bracket(), catalog::sl2().bracket());
  const LieAlgebra g = io::read_algebra(json::parse(R"({"dim": 2, "brackets": [{"i": 1, "j": 0, "coeffs": [0, -1]}]})"));
  EXPECT_EQ(g.bracket(), catalog::aff1().bracket());
  EXPECT_EQ(io::read_algebra(json::parse(R"({"dim": 0})")).dim(), 0u);
}

TEST(JsonAlgebra, MalformedDocumentsPointAtTheProblem) {
  EXPECT_EQ(document_error_pointer([] { io::read_algebra(json("gl9")); }), "");
  EXPECT_EQ(document_error_pointer([] { io::read_algebra(json::parse(R"({"brackets": []})")); }), "");
  EXPECT_EQ(document_error_pointer([] { io::read_algebra(json::parse(R"({"dim": 17})")); }), "/dim");
  EXPECT_EQ(document_error_pointer([] {
              io::read_algebra(json::parse(R"({"dim": 2, "brackets": [{"i": 0, "j": 2, "coeffs": [0, 1]}]})"));
            }),
            "/brackets/0/j");
  EXPECT_EQ(document_error_pointer([] {
              io::read_algebra(json::parse(R"({"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": [0]}]})"));
            }),
            "/brackets/0/coeffs");
  EXPECT_EQ(document_error_pointer([] {
              io::read_algebra(json::parse(R"({"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": [0, "x"]}]})"));
            }),
            "/brackets/0/coeffs/1");
  EXPECT_EQ(document_error_pointer([] {
              io::read_algebra(json::parse(
                  R"({"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": [0, 1]}, {"i": 0, "j": 1, "coeffs": [0, 1]}]})"));
            }),
            "/brackets/1");
  EXPECT_EQ(document_error_pointer([] { io::read_algebra(json::parse(R"({"dim": 2, "basis": ["x"]})")); }), "/basis");
}

TEST(JsonAlgebra, JacobiAndAntisymmetryFailuresCarryDefects) {
  const json jac = invalid_object_defect([] {
    io::read_algebra(json::parse(
        R"({"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": [1, 0, 0]}, {"i": 0, "j": 2, "coeffs": [0, 0, 1]}]})"));
  });
  EXPECT_EQ(jac["kind"], "jacobi");
  EXPECT_EQ(jac["indices"], json::parse("[0, 1, 2]"));
  EXPECT_EQ(jac["defect"], json::parse(R"(["0", "0", "1"])"));

  const json anti = invalid_object_defect([] {
    io::read_algebra(json::parse(
        R"({"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": [0, 1]}, {"i": 1, "j": 0, "coeffs": [0, 1]}]})"));
  });
  EXPECT_EQ(anti["kind"], "antisymmetry");
}

TEST(JsonHomomorphism, RoundTripAndCurvatureDefect) {
  for (const auto& name : catalog::homomorphism_names()) {
    const Homomorphism rho = *catalog::homomorphism(name);
    const Homomorphism back = io::read_homomorphism(io::homomorphism_json(rho));
    EXPECT_EQ(back.matrix(), rho.matrix()) << name;
    EXPECT_TRUE(back.is_validated());
  }
  const json swap = json::parse(R"({"source": "aff1", "target": "aff1", "matrix": [[0, 1], [1, 0]]})");
  const json defect = invalid_object_defect([&] { io::read_homomorphism(swap); });
  EXPECT_EQ(defect["kind"], "curvature");
  EXPECT_EQ(defect["first"]["value"], json::parse(R"(["-1", "-1"])"));
  EXPECT_EQ(document_error_pointer([] {
              io::read_homomorphism(json::parse(R"({"source": "aff1", "target": "sl2", "matrix": [[1, 0]]})"));
            }),
            "/matrix");
  EXPECT_EQ(document_error_pointer([] { io::read_homomorphism(json::parse(R"({"source": "aff1", "target": "sl2"})")); }),
            "");
}

TEST(JsonSubalgebra, RoundTripAndDefects) {
  for (const auto& name : catalog::subalgebra_names()) {
    const SubalgebraWitness w = *catalog::subalgebra(name);
    const SubalgebraWitness back = io::read_subalgebra(io::subalgebra_json(w));
    EXPECT_EQ(back.subspace().basis(), w.subspace().basis()) << name;
  }
  const json closure = invalid_object_defect([] {
    io::read_subalgebra(json::parse(R"({"ambient": "sl2", "basis_vectors": [[0, 1, 0], [0, 0, 1]]})"));
  });
  EXPECT_EQ(closure["kind"], "closure");
  EXPECT_EQ(closure["first"]["value"], json::parse(R"(["1"])"));
  const json dependent = invalid_object_defect([] {
    io::read_subalgebra(json::parse(R"({"ambient": "sl2", "basis_vectors": [[1, 0, 0], [2, 0, 0]]})"));
  });
  EXPECT_EQ(dependent["kind"], "dependent");
  EXPECT_EQ(document_error_pointer([] {
              io::read_subalgebra(json::parse(R"({"ambient": "sl2", "basis_vectors": [[1, 0]]})"));
            }),
            "/basis_vectors/0");
}

TEST(JsonProblem, KindDetectionAndLookup) {
  EXPECT_TRUE(std::holds_alternative<LieAlgebra>(io::read_problem(json("heis3"))));
  EXPECT_TRUE(std::holds_alternative<Homomorphism>(io::read_problem(json("borel-incl"))));
  EXPECT_TRUE(std::holds_alternative<SubalgebraWitness>(io::read_problem(json("borel-in-sl2"))));
  EXPECT_FALSE(io::lookup("nothing").has_value());
  EXPECT_EQ(document_error_pointer([] { io::read_problem(json::parse(R"({"x": 1})")); }), "");
  const DeformationProblem p = io::read_problem(io::problem_json(catalog::center_in_heis3()));
  EXPECT_TRUE(std::holds_alternative<SubalgebraWitness>(p));
}

TEST(JsonReports, CohomologyAndVerdictShape) {
  const json c = io::cohomology_json(cohomology(adjoint_rep(catalog::abelian(3))));
  EXPECT_EQ(c["degrees"].size(), 4u);
  EXPECT_EQ(c["degrees"][1]["dimH"], 9);
  EXPECT_EQ(c["euler"], 0);

  const json v = io::verdict_json(bracket_rigidity(catalog::sl2()));
  EXPECT_EQ(v["criterion"], "bracket-rigidity");
  EXPECT_EQ(v["conclusion"], "holds");
  EXPECT_EQ(v["evidence"]["dimH2"], 0);
  EXPECT_TRUE(v["settled_by"].is_null());
  EXPECT_TRUE(v.contains("report"));
  EXPECT_FALSE(io::verdict_json(bracket_rigidity(catalog::sl2()), false).contains("report"));

  const json d = io::model_dims_json(kuranishi_model_dims(catalog::abelian(3)));
  EXPECT_EQ(d["tangent_dim"], 9);
  EXPECT_EQ(d["obstruction_dim"], 3);
  EXPECT_TRUE(d["aut_model_dim"].is_null());

  const json les = io::les_json(les_subalgebra(catalog::borel_in_sl2(), 2));
  EXPECT_EQ(les["exact"], true);
  EXPECT_EQ(les["nodes"].size(), 10u);
}

TEST(JsonExperiment, ReadsSpecsAndRejectsBadFields) {
  const json doc = json::parse(R"({"kind": "bracket-recovery", "algebra": "sl2",
      "perturbation": {"scale": 0.01, "seeds": [4, 5]}, "newton": {"tolerance": 1e-11, "max_iterations": 20}})");
  const ExperimentSpec s = io::read_experiment(doc);
  EXPECT_EQ(s.kind, ExperimentKind::bracket_recovery);
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_DOUBLE_EQ(s.scale, 0.01);
  EXPECT_DOUBLE_EQ(s.newton.tolerance, 1e-11);
  EXPECT_EQ(s.newton.max_iterations, 20);

  json bad = doc;
  bad["kind"] = "guess";
  EXPECT_EQ(document_error_pointer([&] { io::read_experiment(bad); }), "/kind");
  bad = doc;
  bad["perturbation"]["seeds"][1] = -1;
  EXPECT_EQ(document_error_pointer([&] { io::read_experiment(bad); }), "/perturbation/seeds/1");
  bad = doc;
  bad["newton"]["max_iterations"] = 0;
  EXPECT_EQ(document_error_pointer([&] { io::read_experiment(bad); }), "/newton");
  bad = doc;
  bad["newton"]["speed"] = 1;
  EXPECT_EQ(document_error_pointer([&] { io::read_experiment(bad); }), "/newton/speed");
}

TEST(JsonText, SyntaxErrorsReportTheOffset) {
  try {
    io::parse_text("{\"dim\": 2,, }");
    FAIL() << "expected a syntax error";
  } catch (const io::DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("byte 11"), std::string::npos) << e.what();
  }
}
