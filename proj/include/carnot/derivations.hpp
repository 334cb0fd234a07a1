#pragma once

#include <string>
#include <vector>

#include "carnot/graded_lie.hpp"
#include "carnot/linalg.hpp"

namespace carnot {

/// Layer-preserving linear map on g, one square block per layer
/// (blocks[0] acts on the weight -1 layer). Entry (r, c) of a block is the
/// coefficient of the r-th layer element in the image of the c-th.
struct DegreeZeroMap {
  std::vector<Matrix> blocks;

  static DegreeZeroMap zero(const GradedLieAlgebra& g);
  /// Inverse of flat(): for each basis element in basis order, the column of
  /// its block.
  static DegreeZeroMap from_flat(const GradedLieAlgebra& g, std::span<const Rational> v);
  /// Throws std::invalid_argument if m mixes layers.
  static DegreeZeroMap from_matrix(const GradedLieAlgebra& g, const Matrix& m);

  Vector flat(const GradedLieAlgebra& g) const;
  Matrix to_matrix(const GradedLieAlgebra& g) const;
  AlgebraElement apply(const GradedLieAlgebra& g, const AlgebraElement& x) const;

  friend bool operator==(const DegreeZeroMap&, const DegreeZeroMap&) = default;
};

/// Length of DegreeZeroMap::flat, i.e. the sum of squared layer dimensions.
std::size_t degree_zero_dim(const GradedLieAlgebra& g);

/// True iff D[S,T] = [DS,T] + [S,DT] on every basis pair.
bool is_derivation(const GradedLieAlgebra& g, const DegreeZeroMap& d);

struct GZeroConstraint {
  enum class Kind { conformal, full_derivations, explicit_conditions };
  Kind kind = Kind::conformal;
  /// For explicit_conditions: each matrix C encodes sum_{r,c} C(r,c) * B(r,c) = 0
  /// on the first-layer block B.
  std::vector<Matrix> conditions;

  static GZeroConstraint conformal() { return {Kind::conformal, {}}; }
  static GZeroConstraint full() { return {Kind::full_derivations, {}}; }
  static GZeroConstraint explicit_conditions(std::vector<Matrix> c) {
    return {Kind::explicit_conditions, std::move(c)};
  }
};

std::string to_string(GZeroConstraint::Kind kind);

/// Linear functionals (over the row-major entries of an m x m block) whose
/// common kernel is the constrained set. For conformal: B + B^t = k I.
std::vector<Vector> first_layer_conditions(std::size_t m, const GZeroConstraint& c);

/// Der_0(g): all strata-preserving derivations, as a subspace of flat
/// DegreeZeroMap coordinates. All block entries are unknowns.
Subspace strata_derivations(const GradedLieAlgebra& g);

/// g_0 = { D in ders : D restricted to g_{-1} satisfies c }.
Subspace constrain_g0(const GradedLieAlgebra& g, const Subspace& ders, const GZeroConstraint& c);

}  // namespace carnot
