#pragma once

// Builtin algebras, homomorphisms and subalgebras with exact constants.

#include <optional>
#include <string>
#include <vector>

#include "liedeform/liecore.hpp"

namespace liedeform::catalog {

namespace detail {
inline void set(BracketCandidate& b, std::size_t i, std::size_t j, std::vector<int> coeffs) {
  Vector v(coeffs.begin(), coeffs.end());
  b.set_bracket(i, j, v);
}
}  // namespace detail

inline LieAlgebra abelian(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  return make_lie_algebra(BracketCandidate(n), "abelian" + std::to_string(n), names);
}

/// [x, y] = y
inline LieAlgebra aff1() {
  BracketCandidate b(2);
  detail::set(b, 0, 1, {0, 1});
  return make_lie_algebra(b, "aff1", {"x", "y"});
}

/// [p, q] = z
inline LieAlgebra heis3() {
  BracketCandidate b(3);
  detail::set(b, 0, 1, {0, 0, 1});
  return make_lie_algebra(b, "heis3", {"p", "q", "z"});
}

/// [h, e] = 2e, [h, f] = -2f, [e, f] = h
inline LieAlgebra sl2() {
  BracketCandidate b(3);
  detail::set(b, 0, 1, {0, 2, 0});
  detail::set(b, 0, 2, {0, 0, -2});
  detail::set(b, 1, 2, {1, 0, 0});
  return make_lie_algebra(b, "sl2", {"h", "e", "f"});
}

/// [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2
inline LieAlgebra so3() {
  BracketCandidate b(3);
  detail::set(b, 0, 1, {0, 0, 1});
  detail::set(b, 1, 2, {1, 0, 0});
  detail::set(b, 2, 0, {0, 1, 0});
  return make_lie_algebra(b, "so3", {"e1", "e2", "e3"});
}

/// span{h, e} in sl2
inline SubalgebraWitness borel_in_sl2() { return SubalgebraWitness::make(sl2(), {{1, 0, 0}, {0, 1, 0}}); }

/// span{z} in heis3
inline SubalgebraWitness center_in_heis3() { return SubalgebraWitness::make(heis3(), {{0, 0, 1}}); }

inline Homomorphism id_sl2() { return Homomorphism::make(sl2(), sl2(), Matrix::identity(3)); }

inline Homomorphism borel_inclusion() { return borel_in_sl2().inclusion(); }

/// The zero map from the one-dimensional algebra into sl2.
inline Homomorphism zero_to_sl2() { return Homomorphism::make(abelian(1), sl2(), Matrix(3, 1)); }

/// "abelianN" for any N, plus the named algebras.
inline std::optional<LieAlgebra> algebra(const std::string& name) {
  if (name == "aff1") return aff1();
  if (name == "heis3" || name == "h3") return heis3();
  if (name == "sl2") return sl2();
  if (name == "so3") return so3();
  const std::string prefix = "abelian";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() && name.size() <= prefix.size() + 2) {
    const std::string digits = name.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") == std::string::npos) return abelian(std::stoul(digits));
  }
  return std::nullopt;
}

inline std::optional<SubalgebraWitness> subalgebra(const std::string& name) {
  if (name == "borel-in-sl2") return borel_in_sl2();
  if (name == "center-in-heis3") return center_in_heis3();
  return std::nullopt;
}

inline std::optional<Homomorphism> homomorphism(const std::string& name) {
  if (name == "id-sl2") return id_sl2();
  if (name == "borel-incl") return borel_inclusion();
  if (name == "zero-to-sl2") return zero_to_sl2();
  return std::nullopt;
}

inline std::vector<std::string> algebra_names() { return {"abelian2", "abelian3", "aff1", "heis3", "sl2", "so3"}; }
inline std::vector<std::string> subalgebra_names() { return {"borel-in-sl2", "center-in-heis3"}; }
inline std::vector<std::string> homomorphism_names() { return {"id-sl2", "borel-incl", "zero-to-sl2"}; }

}  // namespace liedeform::catalog
