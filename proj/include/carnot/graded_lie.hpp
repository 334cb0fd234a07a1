#pragma once

#include <cstddef>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "carnot/linalg.hpp"

namespace carnot {

/// Coordinates of an element of g in the declared basis.
using AlgebraElement = Vector;

/// One `[A,B] = c1 E1 + c2 E2 + ...` relation as written in a spec.
struct BracketRelation {
  std::string left;
  std::string right;
  std::vector<std::pair<Rational, std::string>> terms;
  std::size_t line = 0;
};

/// Declarative description of a stratified algebra. layers[0] is the
/// weight -1 layer, layers[1] weight -2, and so on.
struct AlgebraSpec {
  std::string name;
  std::vector<std::vector<std::string>> layers;
  std::vector<BracketRelation> brackets;
};

enum class AlgebraErrorKind {
  MalformedSpec,
  DuplicateBracket,
  AntisymmetryViolation,
  GradingViolation,
  JacobiViolation,
  GenerationFailure,
};

std::string to_string(AlgebraErrorKind kind);

class AlgebraError : public std::runtime_error {
 public:
  AlgebraError(AlgebraErrorKind kind, std::vector<std::string> offenders, const std::string& what)
      : std::runtime_error(what), kind_(kind), offenders_(std::move(offenders)) {}
  AlgebraErrorKind kind() const { return kind_; }
  /// Names of the basis elements in the offending pair or triple.
  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  AlgebraErrorKind kind_;
  std::vector<std::string> offenders_;
};

/// Stratified nilpotent Lie algebra g = g_{-1} + ... + g_{-s} over Q given by
/// structure constants in a fixed basis. Immutable once built.
class GradedLieAlgebra {
 public:
  GradedLieAlgebra() = default;
  /// Raw constructor; performs only shape checks. Use build_algebra for validation.
  GradedLieAlgebra(std::string name, std::vector<std::string> basis, std::vector<int> weights,
                   std::vector<std::vector<Vector>> structure);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  /// Depth s of the deepest layer.
  int step() const { return step_; }
  const std::vector<std::string>& basis() const { return basis_; }
  const std::string& basis_name(std::size_t i) const { return basis_[i]; }
  /// Negative weight of basis element i (-1 for the generating layer).
  int weight(std::size_t i) const { return weights_[i]; }
  const std::vector<int>& weights() const { return weights_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  /// Basis indices of the layer of the given negative weight, in basis order.
  const std::vector<std::size_t>& layer(int weight) const;
  std::size_t layer_dim(int weight) const;
  std::vector<std::size_t> layer_dims() const;
  /// Position of basis element i within its own layer.
  std::size_t position_in_layer(std::size_t i) const { return position_[i]; }

  /// Coordinate vector of [e_i, e_j].
  const Vector& structure(std::size_t i, std::size_t j) const { return structure_[i][j]; }

  AlgebraElement unit(std::size_t i) const;
  AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) const;

  friend bool operator==(const GradedLieAlgebra&, const GradedLieAlgebra&) = default;

 private:
  std::string name_;
  std::vector<std::string> basis_;
  std::vector<int> weights_;
  std::vector<std::vector<Vector>> structure_;
  int step_ = 0;
  std::vector<std::vector<std::size_t>> layers_;
  std::vector<std::size_t> position_;
};

/// Bilinear bracket with coefficients in any ring T supporting T+T, T*T and Rational*T.
template <class T>
std::vector<T> bracket_with(const GradedLieAlgebra& g, const std::vector<T>& a,
                            const std::vector<T>& b, const T& zero) {
  const std::size_t n = g.dim();
  std::vector<T> out(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == zero) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || b[j] == zero) continue;
      const Vector& c = g.structure(i, j);
      bool any = false;
      for (const auto& x : c) any = any || !x.is_zero();
      if (!any) continue;
      const T ab = a[i] * b[j];
      for (std::size_t k = 0; k < n; ++k)
        if (!c[k].is_zero()) out[k] += c[k] * ab;
    }
  }
  return out;
}

/// Validates and builds the algebra. With require_generation = false the
/// generation check is skipped so that non-generated examples can still be
/// inspected by check_generation.
GradedLieAlgebra build_algebra(const AlgebraSpec& spec, bool require_generation = true);

/// True iff [g_{-1}, g_{-(k-1)}] spans g_{-k} for every k >= 2.
bool check_generation(const GradedLieAlgebra& g);

/// First basis triple (i, j, k) violating the Jacobi identity, if any.
std::optional<std::array<std::size_t, 3>> find_jacobi_violation(const GradedLieAlgebra& g);

namespace presets {
AlgebraSpec engel();
AlgebraSpec heisenberg();
/// R^n with every generator in weight -1 and no brackets.
AlgebraSpec abelian(std::size_t n);
/// R (weight -1) + R (weight -2) with no brackets; not generated.
AlgebraSpec split_abelian();
}  // namespace presets

}  // namespace carnot
