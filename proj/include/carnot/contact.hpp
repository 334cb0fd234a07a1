#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/derivations.hpp"
#include "carnot/graded_lie.hpp"
#include "carnot/group.hpp"
#include "carnot/prolongation.hpp"
#include "carnot/vector_field.hpp"

namespace carnot {

class NotContact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Residual polynomials of a PDE system, one per equation.
struct DefectReport {
  std::vector<std::string> labels;
  std::vector<Polynomial> residuals;
  bool all_zero = true;

  /// Labels of the equations with a nonzero residual.
  std::vector<std::string> failing() const;
};

/// Contact condition for V in frame components: for each horizontal frame
/// field X, the components of [V, X] along non-horizontal fields.
DefectReport contact_defect(const PolyVectorField& v, const Frame& frame);

/// co(m) condition on M(b, a) = X_a f_b, the horizontal block of -ad(V):
/// M(a,b) + M(b,a) = 0 for a < b and M(a,a) - M(0,0) = 0. Throws NotContact.
DefectReport conformal_defect(const PolyVectorField& v, const Frame& frame);

/// The g_0 condition c applied to M(b, a) = X_a f_b, without the contact precondition.
DefectReport constraint_defect(const PolyVectorField& v, const Frame& frame, const GZeroConstraint& c);

/// First-order data of A^1_V(p): for X in g_{-1} a layer-preserving map, for
/// deeper X a vector in the layer one step up.
struct FirstOrderJet {
  /// Indexed by position in the weight -1 layer.
  std::vector<DegreeZeroMap> horizontal;
  /// Indexed by basis element; empty for weight -1 elements.
  std::vector<AlgebraElement> deeper;
  bool is_zero() const;
};

/// Pointwise jets A^j_V(p) of a contact field.
struct ContactJet {
  GroupPoint point;
  /// A^{-d}_V(p) for d = 1..s, each an element of g supported on layer -d.
  std::vector<AlgebraElement> minus_parts;
  /// A^0_V(p): block (r, c) of layer L is X_c(f_r)(p) over that layer.
  DegreeZeroMap zero_part;
  std::optional<FirstOrderJet> one_part;
};

/// order 0 fills zero_part, order 1 additionally fills one_part. Throws NotContact.
ContactJet jet(const PolyVectorField& v, const GroupPoint& p, int order, const GradedLieAlgebra& g,
               const Frame& frame);

/// [A0, [S,T]] = [A0(S), T] - [A0(T), S] on every basis pair.
bool jet_jacobi_check(const ContactJet& j, const GradedLieAlgebra& g);

/// A^1_V(p) as a degree-1 graded map over the prolongation, or nullopt if a
/// horizontal value falls outside g_0.
std::optional<GradedMap> one_part_as_graded_map(const ContactJet& j, const ProlongationAlgebra& s);

/// Polynomial solutions h of X1^3 h = X2 h = Y^2 h = Z^2 h = 0 on the Engel frame.
struct HSystemSolution {
  std::vector<Monomial> monomials;
  Subspace space;
  Polynomial polynomial(std::span<const Rational> coeffs) const;
  std::vector<Polynomial> basis_polynomials() const;
};

/// Frame must be ordered X1, X2, Y, Z with weights 1, 1, 2, 3.
HSystemSolution solve_h_system(const Frame& frame, int max_weighted_degree = 6);
/// The h for which field_from_h(h) also satisfies the conformal equations.
/// The four equations above are necessary but not sufficient: over polynomials
/// they admit x1*y - x1^2*x2 and x1*z - x1^2*y/2 as well, which this excludes.
HSystemSolution solve_conformal_h(const Frame& frame, int max_weighted_degree = 6);
/// The field determined by h through the contact equations:
/// (f1, f2, g, h) = (Y h, X1^2 h, -X1 h, h).
PolyVectorField field_from_h(const Frame& frame, const Polynomial& h);

inline constexpr int default_oracle_degree = 6;

/// Polynomial ansatz solution space of the contact + g_0-condition system.
/// Frame component i ranges over polynomials of weighted degree at most
/// max_weighted_degree + weight_i.
struct ConformalSolution {
  std::size_t nvars = 0;
  /// (frame component, exponent) of each unknown coefficient.
  std::vector<std::pair<std::size_t, Monomial>> unknowns;
  Subspace space;

  std::size_t dim() const { return space.dim(); }
  PolyVectorField field(std::span<const Rational> coords) const;
  std::vector<PolyVectorField> basis_fields() const;
  /// Coordinates of v in the unknown layout; nullopt if v is outside the ansatz.
  std::optional<Vector> encode(const PolyVectorField& v) const;
};

ConformalSolution solve_polynomial_conformal(const GradedLieAlgebra& g, const Frame& frame,
                                             int max_weighted_degree = default_oracle_degree,
                                             const GZeroConstraint& constraint = GZeroConstraint::conformal());

}  // namespace carnot
