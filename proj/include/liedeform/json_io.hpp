#pragma once

// JSON documents for algebras, homomorphisms, subalgebras and experiment
// specs, plus report serializers. Scalars are written as "p/q" strings.

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "liedeform/catalog.hpp"
#include "liedeform/cecomplex.hpp"
#include "liedeform/deformlab.hpp"
#include "liedeform/kuranishi.hpp"
#include "liedeform/liecore.hpp"
#include "liedeform/verdicts.hpp"

namespace liedeform::io {

using json = nlohmann::ordered_json;

/// Malformed input; `pointer` is a JSON pointer to the offending value.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Well-formed input describing an object that fails its defining identity.
class InvalidObject : public ValidationError {
 public:
  InvalidObject(std::string pointer, const std::string& message, json defect)
      : ValidationError(message), pointer_(std::move(pointer)), defect_(std::move(defect)) {}
  const std::string& pointer() const { return pointer_; }
  const json& defect() const { return defect_; }

 private:
  std::string pointer_;
  json defect_;
};

inline std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

// ---------------------------------------------------------------------------
// scalars and small containers

inline json scalar_json(const Scalar& s) { return to_string(s); }

inline json vector_json(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

inline json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json matrix_json(const MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

inline Scalar read_scalar(const json& v, const std::string& ptr) {
  if (v.is_number_integer()) return Scalar(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    try {
      return parse_scalar(v.get<std::string>());
    } catch (const std::exception& e) {
      throw DocumentError(ptr, e.what());
    }
  }
  throw DocumentError(ptr, "expected an exact scalar: an integer or a \"p/q\" string");
}

inline Vector read_vector(const json& v, const std::string& ptr, std::optional<std::size_t> length = std::nullopt) {
  if (!v.is_array()) throw DocumentError(ptr, "expected an array of scalars");
  if (length && v.size() != *length)
    throw DocumentError(ptr, "expected " + std::to_string(*length) + " entries, found " + std::to_string(v.size()));
  Vector out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_scalar(v[i], child(ptr, i)));
  return out;
}

inline const json& require(const json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw DocumentError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(ptr, "missing field \"" + key + "\"");
  return *it;
}

inline std::size_t read_index(const json& v, const std::string& ptr, std::size_t bound) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw DocumentError(ptr, "expected a nonnegative integer index");
  const auto i = v.get<std::size_t>();
  if (i >= bound) throw DocumentError(ptr, "index " + std::to_string(i) + " out of range for dimension " +
                                               std::to_string(bound));
  return i;
}

// ---------------------------------------------------------------------------
// defect reports

inline json violation_json(const BracketViolation& v) {
  json out;
  out["kind"] = v.kind == BracketViolation::Kind::jacobi ? "jacobi" : "antisymmetry";
  out["indices"] = v.indices;
  out["defect"] = vector_json(v.defect);
  return out;
}

/// First nonzero value of a cochain as {"indices", "value"}.
inline json first_nonzero_json(const AltMap<Scalar>& c) {
  CochainIndex idx(c.n, c.k);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    auto v = c.at(p);
    if (!is_zero(v)) {
      json out;
      out["indices"] = idx.subset(p);
      out["value"] = vector_json(Vector(v.begin(), v.end()));
      return out;
    }
  }
  return nullptr;
}

/// Nonzero entries of a cochain, in index order.
inline json cochain_json(const AltMap<Scalar>& c) {
  json out = json::array();
  CochainIndex idx(c.n, c.k);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    auto v = c.at(p);
    for (std::size_t a = 0; a < c.m; ++a) {
      if (v[a] == 0) continue;
      json e;
      e["indices"] = idx.subset(p);
      e["component"] = a;
      e["value"] = scalar_json(v[a]);
      out.push_back(std::move(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// object documents

inline LieAlgebra read_algebra(const json& doc, const std::string& ptr = "");

inline LieAlgebra algebra_by_name(const std::string& name, const std::string& ptr) {
  if (auto g = catalog::algebra(name)) return *g;
  throw DocumentError(ptr, "unknown algebra \"" + name + "\"");
}

/// {"name", "dim", "basis"?, "brackets": [{"i", "j", "coeffs"}]}; entries with
/// i < j suffice, the opposite entries are filled in by antisymmetry.
inline LieAlgebra read_algebra(const json& doc, const std::string& ptr) {
  if (doc.is_string()) return algebra_by_name(doc.get<std::string>(), ptr);
  const json& dim_v = require(doc, "dim", ptr);
  if (!dim_v.is_number_integer() || dim_v.get<long long>() < 0 || dim_v.get<long long>() > 16)
    throw DocumentError(child(ptr, "dim"), "expected an integer dimension between 0 and 16");
  const auto n = dim_v.get<std::size_t>();
  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw DocumentError(child(ptr, "name"), "expected a string");
    name = it->get<std::string>();
  }
  std::vector<std::string> names;
  if (auto it = doc.find("basis"); it != doc.end()) {
    const std::string bp = child(ptr, "basis");
    if (!it->is_array() || it->size() != n) throw DocumentError(bp, "expected " + std::to_string(n) + " basis names");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(*it)[i].is_string()) throw DocumentError(child(bp, i), "expected a string");
      names.push_back((*it)[i].get<std::string>());
    }
  }
  BracketCandidate b(n);
  std::set<std::pair<std::size_t, std::size_t>> given;
  const json& brackets = doc.contains("brackets") ? doc["brackets"] : json::array();
  const std::string bp = child(ptr, "brackets");
  if (!brackets.is_array()) throw DocumentError(bp, "expected an array");
  for (std::size_t e = 0; e < brackets.size(); ++e) {
    const std::string ep = child(bp, e);
    const std::size_t i = read_index(require(brackets[e], "i", ep), child(ep, "i"), n);
    const std::size_t j = read_index(require(brackets[e], "j", ep), child(ep, "j"), n);
    const Vector c = read_vector(require(brackets[e], "coeffs", ep), child(ep, "coeffs"), n);
    if (!given.insert({i, j}).second) throw DocumentError(ep, "duplicate bracket entry");
    for (std::size_t k = 0; k < n; ++k) b(i, j, k) = c[k];
  }
  for (const auto& [i, j] : given)
    if (!given.count({j, i}))
      for (std::size_t k = 0; k < n; ++k) b(j, i, k) = -b(i, j, k);
  auto r = validate_bracket(std::move(b), name, names);
  if (auto* bad = std::get_if<BracketViolation>(&r)) throw InvalidObject(ptr, bad->message(), violation_json(*bad));
  return std::get<LieAlgebra>(std::move(r));
}

inline json algebra_json(const LieAlgebra& g) {
  json out;
  out["name"] = g.name();
  out["dim"] = g.dim();
  out["basis"] = g.basis_names();
  json br = json::array();
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = i + 1; j < g.dim(); ++j) {
      Vector c(g.dim());
      for (std::size_t k = 0; k < g.dim(); ++k) c[k] = g.bracket()(i, j, k);
      if (is_zero(c)) continue;
      json e;
      e["i"] = i;
      e["j"] = j;
      e["coeffs"] = vector_json(c);
      br.push_back(std::move(e));
    }
  out["brackets"] = std::move(br);
  return out;
}

/// {"source", "target", "matrix"} with matrix dim(target) x dim(source).
inline Homomorphism read_homomorphism(const json& doc, const std::string& ptr = "") {
  if (doc.is_string()) {
    if (auto h = catalog::homomorphism(doc.get<std::string>())) return *h;
    throw DocumentError(ptr, "unknown homomorphism \"" + doc.get<std::string>() + "\"");
  }
  LieAlgebra src = read_algebra(require(doc, "source", ptr), child(ptr, "source"));
  LieAlgebra tgt = read_algebra(require(doc, "target", ptr), child(ptr, "target"));
  const json& rows = require(doc, "matrix", ptr);
  const std::string mp = child(ptr, "matrix");
  if (!rows.is_array() || rows.size() != tgt.dim())
    throw DocumentError(mp, "expected " + std::to_string(tgt.dim()) + " rows (the target dimension)");
  std::vector<Vector> r;
  for (std::size_t i = 0; i < rows.size(); ++i) r.push_back(read_vector(rows[i], child(mp, i), src.dim()));
  Matrix m = tgt.dim() == 0 ? Matrix(0, src.dim()) : Matrix::from_rows(r);
  const Homomorphism lin = Homomorphism::linear(src, tgt, m);
  const AltMap<Scalar> k = lin.curvature();
  if (!k.is_zero()) {
    json defect;
    defect["kind"] = "curvature";
    defect["first"] = first_nonzero_json(k);
    throw InvalidObject(ptr, "linear map does not preserve brackets (nonzero curvature)", defect);
  }
  return Homomorphism::make(std::move(src), std::move(tgt), std::move(m));
}

inline json homomorphism_json(const Homomorphism& rho) {
  json out;
  out["source"] = algebra_json(rho.source());
  out["target"] = algebra_json(rho.target());
  out["matrix"] = matrix_json(rho.matrix());
  return out;
}

/// {"ambient", "basis_vectors": [[...], ...]}.
inline SubalgebraWitness read_subalgebra(const json& doc, const std::string& ptr = "") {
  if (doc.is_string()) {
    if (auto w = catalog::subalgebra(doc.get<std::string>())) return *w;
    throw DocumentError(ptr, "unknown subalgebra \"" + doc.get<std::string>() + "\"");
  }
  LieAlgebra g = read_algebra(require(doc, "ambient", ptr), child(ptr, "ambient"));
  const json& vs = require(doc, "basis_vectors", ptr);
  const std::string vp = child(ptr, "basis_vectors");
  if (!vs.is_array()) throw DocumentError(vp, "expected an array of vectors");
  std::vector<Vector> vectors;
  for (std::size_t i = 0; i < vs.size(); ++i) vectors.push_back(read_vector(vs[i], child(vp, i), g.dim()));
  if (!vectors.empty()) {
    const Matrix v = Matrix::from_columns(g.dim(), vectors);
    if (rank(v) != vectors.size()) {
      json defect;
      defect["kind"] = "dependent";
      defect["rank"] = rank(v);
      throw InvalidObject(vp, "subalgebra basis vectors are linearly dependent", defect);
    }
    const AltMap<Scalar> d = subalgebra_defect(g, Subspace::span(g.dim(), vectors));
    if (!d.is_zero()) {
      json defect;
      defect["kind"] = "closure";
      defect["first"] = first_nonzero_json(d);
      throw InvalidObject(vp, "subspace is not closed under the bracket", defect);
    }
  }
  return SubalgebraWitness::make(std::move(g), vectors);
}

inline json subalgebra_json(const SubalgebraWitness& w) {
  json out;
  out["ambient"] = algebra_json(w.ambient());
  json vs = json::array();
  const Matrix b = w.subspace().basis_matrix();
  for (std::size_t j = 0; j < b.cols(); ++j) vs.push_back(vector_json(b.column(j)));
  out["basis_vectors"] = std::move(vs);
  return out;
}

/// Catalog entries share one namespace: algebras, then homomorphisms, then
/// subalgebras.
inline std::optional<DeformationProblem> lookup(const std::string& name) {
  if (auto g = catalog::algebra(name)) return DeformationProblem(*g);
  if (auto h = catalog::homomorphism(name)) return DeformationProblem(*h);
  if (auto w = catalog::subalgebra(name)) return DeformationProblem(*w);
  return std::nullopt;
}

/// A name from the catalog or an inline document of any of the three kinds,
/// told apart by their keys.
inline DeformationProblem read_problem(const json& doc, const std::string& ptr = "") {
  if (doc.is_string()) {
    if (auto p = lookup(doc.get<std::string>())) return *p;
    throw DocumentError(ptr, "unknown catalog name \"" + doc.get<std::string>() + "\"");
  }
  if (!doc.is_object()) throw DocumentError(ptr, "expected a catalog name or an object");
  if (doc.contains("matrix")) return read_homomorphism(doc, ptr);
  if (doc.contains("basis_vectors")) return read_subalgebra(doc, ptr);
  if (doc.contains("dim")) return read_algebra(doc, ptr);
  throw DocumentError(ptr, "cannot tell the document kind: expected \"dim\", \"matrix\" or \"basis_vectors\"");
}

inline json problem_json(const DeformationProblem& p) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LieAlgebra>) return algebra_json(x);
        else if constexpr (std::is_same_v<T, Homomorphism>) return homomorphism_json(x);
        else return subalgebra_json(x);
      },
      p);
}

// ---------------------------------------------------------------------------
// reports

inline json cohomology_json(const CohomologyReport& r) {
  json out;
  json degrees = json::array();
  for (const auto& d : r.degrees) {
    json e;
    e["k"] = d.k;
    e["dimC"] = d.dim_c;
    e["dimZ"] = d.dim_z;
    e["dimB"] = d.dim_b;
    e["dimH"] = d.dim_h;
    degrees.push_back(std::move(e));
  }
  out["degrees"] = std::move(degrees);
  out["euler"] = euler_characteristic(r);
  return out;
}

inline json verdict_json(const Verdict& v, bool with_report = true) {
  json out;
  out["criterion"] = v.criterion;
  out["citation"] = v.citation;
  out["conclusion"] = to_string(v.conclusion);
  out["condition"] = v.condition;
  json ev = json::object();
  for (const auto& [k, x] : v.evidence) ev[k] = x;
  out["evidence"] = std::move(ev);
  out["settled_by"] = v.settled_by ? json(*v.settled_by) : json(nullptr);
  if (with_report && v.report) out["report"] = cohomology_json(*v.report);
  return out;
}

inline json obstruction_json(const ObstructionClass& o) {
  json out;
  out["degree"] = o.degree;
  out["representative"] = cochain_json(o.representative);
  out["zero_in_cohomology"] = o.is_zero_in_h;
  out["primitive"] = o.primitive ? cochain_json(*o.primitive) : json(nullptr);
  return out;
}

inline json model_dims_json(const KuranishiModelDims& d) {
  json out;
  out["problem"] = d.problem;
  out["tangent_degree"] = d.tangent_degree;
  out["tangent_dim"] = d.tangent_dim;
  out["obstruction_dim"] = d.obstruction_dim;
  out["orbit_dim"] = d.orbit_dim;
  out["cocycle_dim"] = d.cocycle_dim;
  out["aut_model_dim"] = d.aut_model_dim ? json(*d.aut_model_dim) : json(nullptr);
  return out;
}

inline json les_json(const LongExactSequence& les) {
  json out;
  json nodes = json::array();
  for (const auto& n : les.nodes) {
    json e;
    e["coefficients"] = to_string(n.coefficients);
    e["k"] = n.k;
    e["dim"] = n.dim;
    nodes.push_back(std::move(e));
  }
  out["nodes"] = std::move(nodes);
  json maps = json::array();
  for (std::size_t i = 0; i < les.maps.size(); ++i) {
    json e;
    e["from"] = i;
    e["to"] = i + 1;
    e["rank"] = les.maps[i].rows() == 0 || les.maps[i].cols() == 0 ? 0 : rank(les.maps[i]);
    e["matrix"] = matrix_json(les.maps[i]);
    maps.push_back(std::move(e));
  }
  out["maps"] = std::move(maps);
  json checks = json::array();
  for (const auto& c : les.checks) {
    json e;
    e["node"] = c.node;
    e["rank_in"] = c.rank_in;
    e["rank_out"] = c.rank_out;
    e["composition_zero"] = c.composition_zero;
    e["kernel_in_image"] = c.kernel_in_image;
    e["exact"] = c.exact;
    checks.push_back(std::move(e));
  }
  out["exactness"] = std::move(checks);
  out["exact"] = les.exact();
  return out;
}

inline json record_json(const ExperimentRecord& r) {
  json out;
  out["seed"] = r.seed;
  out["kind"] = to_string(r.kind);
  out["converged"] = r.converged;
  out["iterations"] = r.iterations;
  out["residual"] = r.residual;
  out["perturbation_norm"] = r.perturbation_norm;
  out["distance"] = r.distance;
  out["solution"] = matrix_json(r.solution);
  return out;
}

// ---------------------------------------------------------------------------
// experiment specs

inline double read_double(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw DocumentError(ptr, "expected a number");
  return v.get<double>();
}

inline NewtonConfig read_newton(const json& doc, const std::string& ptr) {
  NewtonConfig cfg;
  if (!doc.is_object()) throw DocumentError(ptr, "expected an object");
  for (const auto& [key, v] : doc.items()) {
    const std::string p = child(ptr, key);
    if (key == "tolerance") cfg.tolerance = read_double(v, p);
    else if (key == "max_iterations") {
      if (!v.is_number_integer()) throw DocumentError(p, "expected an integer");
      cfg.max_iterations = v.get<int>();
    } else if (key == "damping") cfg.damping = read_double(v, p);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw DocumentError(p, "expected a nonnegative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "input_tolerance") cfg.input_tolerance = read_double(v, p);
    else throw DocumentError(p, "unknown newton setting");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw DocumentError(ptr, e.what());
  }
  return cfg;
}

/// {"kind", "algebra": name-or-inline, "perturbation": {"scale", "seeds"},
///  "newton": {...}}
inline ExperimentSpec read_experiment(const json& doc, const std::string& ptr = "") {
  ExperimentSpec spec;
  const json& kind = require(doc, "kind", ptr);
  if (!kind.is_string()) throw DocumentError(child(ptr, "kind"), "expected a string");
  auto k = parse_experiment_kind(kind.get<std::string>());
  if (!k) throw DocumentError(child(ptr, "kind"), "unknown experiment kind \"" + kind.get<std::string>() + "\"");
  spec.kind = *k;
  spec.subject = read_problem(require(doc, "algebra", ptr), child(ptr, "algebra"));
  const std::string pp = child(ptr, "perturbation");
  const json& pert = require(doc, "perturbation", ptr);
  spec.scale = read_double(require(pert, "scale", pp), child(pp, "scale"));
  if (!(spec.scale >= 0)) throw DocumentError(child(pp, "scale"), "scale must be nonnegative");
  const json& seeds = require(pert, "seeds", pp);
  if (!seeds.is_array()) throw DocumentError(child(pp, "seeds"), "expected an array of integers");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds[i].is_number_unsigned())
      throw DocumentError(child(child(pp, "seeds"), i), "expected a nonnegative integer");
    spec.seeds.push_back(seeds[i].get<std::uint64_t>());
  }
  if (doc.contains("newton")) spec.newton = read_newton(doc["newton"], child(ptr, "newton"));
  return spec;
}

/// Parses text, reporting syntax errors with the byte offset.
inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError("", "JSON syntax error at byte " + std::to_string(e.byte));
  }
}

}  // namespace liedeform::io
