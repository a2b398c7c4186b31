#pragma once

// The liedeform command line: verify, cohomology, verdict, kuranishi, les,
// deform. Exit codes: 0 success, 1 validation or precondition failure,
// 2 malformed input.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "liedeform/json_io.hpp"

namespace liedeform::cli {

using io::json;

enum ExitCode : int { ok = 0, invalid = 1, malformed = 2 };

struct Options {
  std::string verb;
  std::string algebra, hom, sub, file;
  bool as_json = false;
  std::string rep;
  std::string question = "all";
  int max_degree = -1;
  std::string kind;
  double scale = 0.05;
  std::string seeds = "0:9";
  unsigned jobs = 1;
  double tolerance = 1e-10;
  int max_iterations = 50;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::DocumentError("", "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

inline std::string problem_kind(const DeformationProblem& p) {
  if (std::holds_alternative<LieAlgebra>(p)) return "algebra";
  if (std::holds_alternative<Homomorphism>(p)) return "homomorphism";
  return "subalgebra";
}

inline std::string problem_name(const DeformationProblem& p) {
  if (const auto* g = std::get_if<LieAlgebra>(&p)) return g->name().empty() ? "(unnamed)" : g->name();
  if (const auto* h = std::get_if<Homomorphism>(&p))
    return h->source().name() + " -> " + h->target().name();
  const auto& w = std::get<SubalgebraWitness>(p);
  return "subalgebra of " + w.ambient().name();
}

/// Exactly one of --algebra, --hom, --sub, --file names the subject.
inline DeformationProblem load_subject(const Options& o) {
  const int given = !o.algebra.empty() + !o.hom.empty() + !o.sub.empty() + !o.file.empty();
  if (given != 1) throw UsageError("give exactly one of --algebra, --hom, --sub, --file");
  if (!o.algebra.empty()) return io::read_problem(json(o.algebra), "");
  if (!o.hom.empty()) return io::read_homomorphism(json(o.hom), "");
  if (!o.sub.empty()) return io::read_subalgebra(json(o.sub), "");
  return io::read_problem(io::parse_text(read_file(o.file)), "");
}

inline std::string join_dims(const CohomologyReport& r) {
  std::string s = "(";
  for (std::size_t k = 0; k < r.degrees.size(); ++k) s += (k ? ", " : "") + std::to_string(r.degrees[k].dim_h);
  return s + ")";
}

// ---------------------------------------------------------------------------
// verbs

inline int verify(const DeformationProblem& p, const Options& o, std::ostream& out) {
  // reaching here means the document validated
  if (o.as_json) {
    json j;
    j["kind"] = problem_kind(p);
    j["name"] = problem_name(p);
    j["valid"] = true;
    out << j.dump(2) << "\n";
    return ok;
  }
  out << problem_kind(p) << " " << problem_name(p) << "\n";
  if (std::holds_alternative<LieAlgebra>(p)) {
    out << "Antisymmetry: OK\nJacobi: OK\n";
  } else if (std::holds_alternative<Homomorphism>(p)) {
    out << "Curvature: OK\n";
  } else {
    out << "Independence: OK\nClosure: OK\n";
  }
  return ok;
}

inline RepSpec choose_rep(const DeformationProblem& p, const std::string& rep) {
  if (const auto* g = std::get_if<LieAlgebra>(&p)) {
    if (rep.empty() || rep == "adjoint") return adjoint_rep(*g);
  } else if (const auto* h = std::get_if<Homomorphism>(&p)) {
    if (rep.empty() || rep == "pullback") return pullback_rep(*h);
  } else {
    const auto& w = std::get<SubalgebraWitness>(p);
    if (rep.empty() || rep == "quotient") return quotient_rep(w);
    if (rep == "pullback") return pullback_rep(w.inclusion());
    if (rep == "adjoint") return adjoint_rep(w.subalgebra());
  }
  throw UsageError("representation \"" + rep + "\" is not available for a " + problem_kind(p));
}

inline int cohomology_verb(const DeformationProblem& p, const Options& o, std::ostream& out) {
  const RepSpec r = choose_rep(p, o.rep);
  std::optional<std::size_t> top;
  if (o.max_degree >= 0) top = static_cast<std::size_t>(o.max_degree);
  const CohomologyReport rep = cohomology(r, top);
  if (o.as_json) {
    json j;
    j["subject"] = problem_name(p);
    j["rep"] = to_string(r.kind);
    j["report"] = io::cohomology_json(rep);
    out << j.dump(2) << "\n";
    return ok;
  }
  out << "cohomology of " << problem_name(p) << " with " << to_string(r.kind) << " coefficients\n";
  out << "k  dimC  dimZ  dimB  dimH\n";
  for (const auto& d : rep.degrees)
    out << d.k << "  " << d.dim_c << "  " << d.dim_z << "  " << d.dim_b << "  " << d.dim_h << "\n";
  out << "dim H: " << join_dims(rep) << "\n";
  out << "euler characteristic: " << euler_characteristic(rep) << "\n";
  return ok;
}

inline std::vector<std::string> questions_for(const DeformationProblem& p) {
  if (std::holds_alternative<LieAlgebra>(p)) return {"bracket-rigidity", "bracket-smoothness"};
  if (std::holds_alternative<Homomorphism>(p))
    return {"hom-rigidity", "hom-aut-rigidity", "hom-stability", "hom-infinitesimal-stability-indicator"};
  return {"sub-rigidity", "sub-stability"};
}

inline Verdict answer(const DeformationProblem& p, const std::string& q) {
  if (const auto* g = std::get_if<LieAlgebra>(&p)) {
    if (q == "bracket-rigidity") return bracket_rigidity(*g);
    if (q == "bracket-smoothness") return bracket_smoothness(*g);
  } else if (const auto* h = std::get_if<Homomorphism>(&p)) {
    if (q == "hom-rigidity") return hom_rigidity(*h);
    if (q == "hom-aut-rigidity") return hom_aut_rigidity(*h);
    if (q == "hom-stability") return hom_stability(*h);
    if (q == "hom-infinitesimal-stability-indicator") return hom_infinitesimal_stability_indicator(*h);
  } else {
    const auto& w = std::get<SubalgebraWitness>(p);
    if (q == "sub-rigidity") return sub_rigidity(w);
    if (q == "sub-stability") return sub_stability(w);
  }
  throw UsageError("question \"" + q + "\" does not apply to a " + problem_kind(p));
}

inline int verdict_verb(const DeformationProblem& p, const Options& o, std::ostream& out) {
  const std::vector<std::string> qs = o.question == "all" ? questions_for(p) : std::vector<std::string>{o.question};
  std::vector<Verdict> vs;
  for (const auto& q : qs) vs.push_back(answer(p, q));
  if (o.as_json) {
    json j;
    j["subject"] = problem_name(p);
    json arr = json::array();
    for (const auto& v : vs) arr.push_back(io::verdict_json(v));
    j["verdicts"] = std::move(arr);
    out << j.dump(2) << "\n";
    return ok;
  }
  for (const auto& v : vs) {
    out << v.criterion << ": " << v.summary() << "\n";
    out << "  citation: " << v.citation << "\n";
    out << "  evidence:";
    for (const auto& [k, x] : v.evidence) out << " " << k << "=" << x;
    out << "\n";
    if (v.settled_by) out << "  settled by: " << *v.settled_by << "\n";
  }
  return ok;
}

inline int kuranishi_verb(const DeformationProblem& p, const Options& o, std::ostream& out) {
  const KuranishiModelDims dims = kuranishi_model_dims(p);
  std::vector<ObstructionClass> classes;
  if (const auto* g = std::get_if<LieAlgebra>(&p)) {
    const CohomologyReport r = cohomology(adjoint_rep(*g), std::max<std::size_t>(g->dim(), 2));
    for (const auto& v : r.degree(2).representatives)
      classes.push_back(kuranishi_bracket(*g, AltMap<Scalar>(g->dim(), 2, g->dim(), v)));
  } else if (const auto* h = std::get_if<Homomorphism>(&p)) {
    const CohomologyReport r = cohomology(pullback_rep(*h), std::max<std::size_t>(h->source().dim(), 1));
    for (const auto& v : r.degree(1).representatives)
      classes.push_back(kuranishi_hom(*h, AltMap<Scalar>(h->source().dim(), 1, h->target().dim(), v)));
  } else {
    const auto& w = std::get<SubalgebraWitness>(p);
    const Splitting sp = standard_splitting(w);
    const CohomologyReport r = cohomology(quotient_rep(w), std::max<std::size_t>(w.dim(), 1));
    for (const auto& v : r.degree(1).representatives)
      classes.push_back(kuranishi_sub(sp, AltMap<Scalar>(w.dim(), 1, w.codim(), v)));
  }
  if (o.as_json) {
    json j;
    j["subject"] = problem_name(p);
    j["model"] = io::model_dims_json(dims);
    json arr = json::array();
    for (const auto& c : classes) arr.push_back(io::obstruction_json(c));
    j["obstructions"] = std::move(arr);
    out << j.dump(2) << "\n";
    return ok;
  }
  const std::size_t t = dims.tangent_degree;
  out << "kuranishi model for " << dims.problem << " " << problem_name(p) << "\n";
  out << "tangent: H^" << t << ", dim " << dims.tangent_dim << "\n";
  out << "obstruction: H^" << t + 1 << ", dim " << dims.obstruction_dim << "\n";
  out << "orbit dim (B^" << t << "): " << dims.orbit_dim << "\n";
  out << "cocycle dim (Z^" << t << "): " << dims.cocycle_dim << "\n";
  if (dims.aut_model_dim) out << "model dim under Aut(g): " << *dims.aut_model_dim << "\n";
  out << "obstructions of the tangent representatives:";
  if (classes.empty()) out << " none";
  out << "\n";
  for (std::size_t i = 0; i < classes.size(); ++i)
    out << "  [" << i << "] H^" << classes[i].degree << " class "
        << (classes[i].is_zero_in_h ? "zero (coboundary)" : "nonzero") << "\n";
  return ok;
}

inline int les_verb(const DeformationProblem& p, const Options& o, std::ostream& out) {
  const auto* w = std::get_if<SubalgebraWitness>(&p);
  if (!w) throw UsageError("les needs a subalgebra (--sub or a subalgebra document)");
  const std::size_t top = o.max_degree >= 0 ? static_cast<std::size_t>(o.max_degree) : 2;
  const LongExactSequence les = les_subalgebra(*w, top);
  if (o.as_json) {
    json j;
    j["subject"] = problem_name(p);
    j["max_degree"] = top;
    j["sequence"] = io::les_json(les);
    out << j.dump(2) << "\n";
    return ok;
  }
  out << "long exact sequence of h -> g -> g/h for the " << problem_name(p) << ", degrees 0.." << top << "\n";
  for (std::size_t i = 0; i < les.nodes.size(); ++i) {
    const auto& n = les.nodes[i];
    out << "H^" << n.k << "(h," << to_string(n.coefficients) << ") dim " << n.dim;
    if (i < les.checks.size()) out << "  " << (les.checks[i].exact ? "exact" : "NOT exact");
    if (i < les.maps.size()) out << "  -> rank " << (les.maps[i].cols() == 0 || les.maps[i].rows() == 0 ? 0 : rank(les.maps[i]));
    out << "\n";
  }
  out << "exact: " << (les.exact() ? "yes" : "no") << "\n";
  return ok;
}

inline std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  try {
    if (auto colon = s.find(':'); colon != std::string::npos) {
      const auto a = std::stoull(s.substr(0, colon)), b = std::stoull(s.substr(colon + 1));
      if (b < a || b - a > 1000000) throw UsageError("bad seed range " + s);
      for (auto x = a; x <= b; ++x) out.push_back(x);
      return out;
    }
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stoull(item));
  } catch (const std::logic_error&) {
    throw UsageError("seeds must look like 0:99 or 1,2,3");
  }
  if (out.empty()) throw UsageError("no seeds given");
  return out;
}

inline int deform_verb(const Options& o, std::ostream& out) {
  ExperimentSpec spec;
  if (!o.file.empty()) {
    if (!o.algebra.empty() || !o.hom.empty() || !o.sub.empty())
      throw UsageError("give either --file or a catalog subject, not both");
    spec = io::read_experiment(io::parse_text(read_file(o.file)));
  } else {
    auto k = parse_experiment_kind(o.kind);
    if (!k) throw UsageError("--kind must be one of bracket-recovery, hom-recovery, sub-recovery, "
                             "hom-continuation, sub-continuation");
    spec.kind = *k;
    spec.subject = load_subject(o);
    spec.scale = o.scale;
    spec.seeds = parse_seeds(o.seeds);
    spec.newton.tolerance = o.tolerance;
    spec.newton.max_iterations = o.max_iterations;
    try {
      spec.newton.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  ExperimentRunner runner(spec);
  const std::vector<ExperimentRecord> recs = runner.run(o.jobs);
  std::size_t converged = 0;
  for (const auto& r : recs) {
    converged += r.converged;
    if (o.as_json) {
      out << io::record_json(r).dump() << "\n";
    } else {
      out << "seed " << r.seed << ": " << (r.converged ? "converged" : "NOT converged") << " in " << r.iterations
          << " iterations, residual " << fmt(r.residual) << ", perturbation " << fmt(r.perturbation_norm)
          << ", distance " << fmt(r.distance) << "\n";
    }
  }
  if (!o.as_json)
    out << to_string(spec.kind) << ": " << converged << "/" << recs.size() << " converged\n";
  return ok;
}

// ---------------------------------------------------------------------------

inline void report_error(const Options& o, std::ostream& out, std::ostream& err, const std::string& kind,
                         const std::string& pointer, const std::string& message, const json& defect = nullptr) {
  if (o.as_json) {
    json j;
    j["error"]["kind"] = kind;
    j["error"]["pointer"] = pointer;
    j["error"]["message"] = message;
    if (!defect.is_null()) j["error"]["defect"] = defect;
    out << j.dump(2) << "\n";
    return;
  }
  if (o.verb == "verify" && kind == "validation" && !defect.is_null()) {
    const std::string label = defect.value("kind", "");
    if (label == "jacobi") out << "Antisymmetry: OK\nJacobi: FAIL\n";
    else if (label == "antisymmetry") out << "Antisymmetry: FAIL\n";
    else if (label == "curvature") out << "Curvature: FAIL\n";
    else if (label == "dependent") out << "Independence: FAIL\n";
    else if (label == "closure") out << "Independence: OK\nClosure: FAIL\n";
    out << "  " << message << "\n";
    if (!pointer.empty()) out << "  at " << pointer << "\n";
    return;
  }
  err << kind << " error";
  if (!pointer.empty()) err << " at " << pointer;
  err << ": " << message << "\n";
  if (!defect.is_null()) err << "defect: " << defect.dump() << "\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact Lie algebra cohomology, deformation verdicts and Newton experiments"};
  app.name("liedeform");
  app.require_subcommand(1);

  auto subject = [&o](CLI::App* sub) {
    sub->add_option("--algebra", o.algebra, "catalog name (algebras, homomorphisms and subalgebras share one namespace)");
    sub->add_option("--hom", o.hom, "homomorphism catalog name: id-sl2, borel-incl, zero-to-sl2");
    sub->add_option("--sub", o.sub, "subalgebra catalog name: borel-in-sl2, center-in-heis3");
    sub->add_option("--file", o.file, "JSON document (algebra, homomorphism, subalgebra or experiment)");
    sub->add_flag("--json", o.as_json, "JSON output");
  };

  auto* v = app.add_subcommand("verify", "validate an algebra, homomorphism or subalgebra");
  subject(v);
  auto* c = app.add_subcommand("cohomology", "Chevalley-Eilenberg cohomology dimensions");
  subject(c);
  c->add_option("--rep", o.rep, "adjoint | pullback | quotient (default follows the subject)");
  c->add_option("--max-degree", o.max_degree, "highest degree (default: dimension of the acting algebra)");
  auto* d = app.add_subcommand("verdict", "rigidity and stability criteria");
  subject(d);
  d->add_option("--question", o.question,
                "all | bracket-rigidity | bracket-smoothness | hom-rigidity | hom-aut-rigidity | hom-stability | "
                "hom-infinitesimal-stability-indicator | sub-rigidity | sub-stability");
  auto* k = app.add_subcommand("kuranishi", "model dimensions and obstruction classes");
  subject(k);
  auto* l = app.add_subcommand("les", "long exact sequence of a subalgebra");
  subject(l);
  l->add_option("--max-degree", o.max_degree, "highest degree (default 2)");
  auto* e = app.add_subcommand("deform", "seeded Newton experiments, one line per seed");
  subject(e);
  e->add_option("--kind", o.kind,
                "bracket-recovery | hom-recovery | sub-recovery | hom-continuation | sub-continuation");
  e->add_option("--scale", o.scale, "perturbation sup-norm bound")->check(CLI::NonNegativeNumber);
  e->add_option("--seeds", o.seeds, "seed range a:b or list a,b,c");
  e->add_option("--jobs", o.jobs, "worker threads; output order follows the seeds")->check(CLI::PositiveNumber);
  e->add_option("--tolerance", o.tolerance, "Newton residual tolerance");
  e->add_option("--max-iterations", o.max_iterations, "Newton iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? ok : malformed;
  }
  for (auto* s : {v, c, d, k, l, e})
    if (s->parsed()) o.verb = s->get_name();

  try {
    if (o.verb == "deform") return deform_verb(o, out);
    const DeformationProblem p = load_subject(o);
    if (o.verb == "verify") return verify(p, o, out);
    if (o.verb == "cohomology") return cohomology_verb(p, o, out);
    if (o.verb == "verdict") return verdict_verb(p, o, out);
    if (o.verb == "kuranishi") return kuranishi_verb(p, o, out);
    return les_verb(p, o, out);
  } catch (const io::DocumentError& ex) {
    report_error(o, out, err, "document", ex.pointer(), ex.what());
    return malformed;
  } catch (const UsageError& ex) {
    report_error(o, out, err, "usage", "", ex.what());
    return malformed;
  } catch (const io::InvalidObject& ex) {
    report_error(o, out, err, "validation", ex.pointer(), ex.what(), ex.defect());
    return invalid;
  } catch (const ValidationError& ex) {
    report_error(o, out, err, "validation", "", ex.what());
    return invalid;
  } catch (const PreconditionError& ex) {
    report_error(o, out, err, "precondition", "", ex.what());
    return invalid;
  } catch (const DimensionError& ex) {
    report_error(o, out, err, "document", "", ex.what());
    return malformed;
  } catch (const std::invalid_argument& ex) {
    report_error(o, out, err, "usage", "", ex.what());
    return malformed;
  }
}

}  // namespace liedeform::cli
