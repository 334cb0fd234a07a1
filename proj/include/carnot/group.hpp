#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/graded_lie.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/prolongation.hpp"
#include "carnot/vector_field.hpp"

namespace carnot {

enum class RealizationErrorKind { UnsupportedStep, InvalidRecipe, NotTerminated, NonpositiveScale, NotInvertible, TauSolveFailure };

class RealizationError : public std::runtime_error {
 public:
  RealizationError(RealizationErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  RealizationErrorKind kind() const { return kind_; }

 private:
  RealizationErrorKind kind_;
};

/// Exact log(exp(a) exp(b)) for nilpotent algebras of step <= 3:
/// a + b + 1/2 [a,b] + 1/12 [a,[a,b]] + 1/12 [b,[b,a]].
AlgebraElement bch(const GradedLieAlgebra& g, const AlgebraElement& a, const AlgebraElement& b, int step);
AlgebraElement bch(const GradedLieAlgebra& g, const AlgebraElement& a, const AlgebraElement& b);

template <class T>
std::vector<T> bch_with(const GradedLieAlgebra& g, const std::vector<T>& a, const std::vector<T>& b,
                        const T& zero) {
  if (g.step() > 3)
    throw RealizationError(RealizationErrorKind::UnsupportedStep,
                           "BCH is implemented up to step 3, algebra has step " + std::to_string(g.step()));
  const auto ab = bracket_with(g, a, b, zero);
  const auto ba = bracket_with(g, b, a, zero);
  const auto aab = bracket_with(g, a, ab, zero);
  const auto bba = bracket_with(g, b, ba, zero);
  std::vector<T> out(a.size(), zero);
  const Rational half(1, 2), twelfth(1, 12);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += a[i];
    out[i] += b[i];
    if (!(ab[i] == zero)) out[i] += half * ab[i];
    if (!(aab[i] == zero)) out[i] += twelfth * aab[i];
    if (!(bba[i] == zero)) out[i] += twelfth * bba[i];
  }
  return out;
}

/// Coordinates on G: a point with coordinates x is the ordered product over
/// factors of exp(sum_{i in factor} x_i e_i).
struct CoordinateRecipe {
  std::vector<std::vector<std::size_t>> factors;
  /// Coordinate name per basis element.
  std::vector<std::string> coordinate_names;

  /// Single-factor exponential coordinates of the first kind.
  static CoordinateRecipe first_kind(const GradedLieAlgebra& g);
  /// exp(x2 X2 + y Y + z Z) exp(x1 X1) with coordinates (x1, x2, y, z).
  static CoordinateRecipe engel(const GradedLieAlgebra& g);
  void validate(const GradedLieAlgebra& g) const;
};

using GroupPoint = Vector;

/// Simply connected nilpotent group in recipe coordinates, with the product
/// computed symbolically once.
class Group {
 public:
  Group(GradedLieAlgebra g, CoordinateRecipe recipe);

  const GradedLieAlgebra& algebra() const { return g_; }
  const CoordinateRecipe& recipe() const { return recipe_; }
  const CoordinateSystem& coordinates() const { return coords_; }
  std::size_t dim() const { return g_.dim(); }

  /// log of the point with the given (polynomial) coordinates, via BCH over the factors.
  std::vector<Polynomial> log(const std::vector<Polynomial>& coords) const;
  /// log of an explicit product of exponentials exp(elements[0]) exp(elements[1]) ...
  std::vector<Polynomial> log_of_product(const std::vector<std::vector<Polynomial>>& elements) const;
  /// Recipe coordinates of exp(element), solved layer by layer.
  std::vector<Polynomial> coordinates_of(const std::vector<Polynomial>& element) const;

  /// Product coordinates as polynomials in 2n variables (p first, then q).
  const PolyMap& product_polynomials() const { return product_; }
  GroupPoint product(const GroupPoint& p, const GroupPoint& q) const;
  GroupPoint inverse(const GroupPoint& p) const;
  GroupPoint exp(const AlgebraElement& x) const;

  /// q -> p.q
  PolyMap left_translation(const GroupPoint& p) const;
  /// Group automorphism induced by a Lie algebra automorphism alpha (n x n).
  PolyMap automorphism(const Matrix& alpha) const;

 private:
  GradedLieAlgebra g_;
  CoordinateRecipe recipe_;
  CoordinateSystem coords_;
  PolyMap product_;
};

/// Left-invariant frame: field i is p -> d/dt (p . exp(t e_i)) at t = 0.
Frame left_invariant_frame(const Group& group);
/// Right-invariant fields p -> d/dt (exp(t e_i) . p) at t = 0, coordinate form.
std::vector<PolyVectorField> right_invariant_fields(const Group& group);
/// Generator of the automorphism flow exp(tD) for a layer-preserving derivation D (n x n), coordinate form.
PolyVectorField automorphism_flow_field(const Group& group, const Matrix& derivation);

/// One vector field per basis element of s, in frame components.
struct TauRealization {
  std::vector<PolyVectorField> fields;
  /// Sign with [tau(A), tau(B)] = sign * tau([A,B]) on g_- + g_0, used to
  /// integrate the positive levels.
  int sign = -1;
};

/// tau(X) for X in g_- generates left multiplication by exp(tX), for D in g_0
/// the automorphism flow. Positive levels are solved from
/// [tau(X), tau(u)] = sign * tau([X,u]) over X in g_{-1}, normalized to vanish at e.
TauRealization realize_tau(const ProlongationAlgebra& s, const Group& group);

/// x_i -> scale^{weight_i} x_i.
PolyMap dilation(const GradedLieAlgebra& g, const Rational& scale);

struct SimilarityResult {
  /// Pushforward keeps the horizontal bundle.
  bool contact = false;
  /// Horizontal block A satisfies A A^t = k I identically.
  bool similar = false;
  Polynomial k;
  /// Horizontal block of the pushforward in frame components at the image point.
  std::vector<std::vector<Polynomial>> horizontal_block;
};

/// The horizontal frame is declared orthonormal.
SimilarityResult similarity_check(const PolyMap& map, const Frame& frame);

/// Extends a first-layer block to a graded automorphism of g; nullopt if no
/// extension exists. Throws if the block is singular.
std::optional<Matrix> extend_graded_automorphism(const GradedLieAlgebra& g, const Matrix& first_layer);

}  // namespace carnot
