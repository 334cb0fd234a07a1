#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "carnot/derivations.hpp"
#include "carnot/graded_lie.hpp"
#include "carnot/linalg.hpp"

namespace carnot {

/// Degree-k element u of the prolongation, stored by its values on the
/// negative basis: values[i] holds the coordinates of u(e_i) in the level of
/// degree k + weight(e_i) (a layer of g when negative, otherwise a computed g_j).
struct GradedMap {
  int degree = 0;
  std::vector<Vector> values;
  friend bool operator==(const GradedMap&, const GradedMap&) = default;
};

enum class ProlongationErrorKind { PriorLevelsMissing, JacobiAssemblyFailure, NotTerminated };

class ProlongationError : public std::runtime_error {
 public:
  ProlongationError(ProlongationErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ProlongationErrorKind kind() const { return kind_; }

 private:
  ProlongationErrorKind kind_;
};

/// The negative part together with already computed levels g_0..g_{m}; knows
/// how each level acts on g_- and how graded maps are laid out as flat vectors.
class LevelStack {
 public:
  LevelStack(GradedLieAlgebra g, std::vector<Subspace> levels);

  const GradedLieAlgebra& negative() const { return g_; }
  const std::vector<Subspace>& levels() const { return levels_; }
  /// Highest degree with a stored level; -1 when only g_- is known.
  int top_degree() const { return static_cast<int>(levels_.size()) - 1; }

  /// Dimension of the level of the given degree; zero below -step.
  /// Throws PriorLevelsMissing above top_degree().
  std::size_t level_dim(int degree) const;
  /// Length of the flat encoding of a degree-k graded map.
  std::size_t map_dim(int degree) const;

  GradedMap decode(int degree, std::span<const Rational> flat) const;
  Vector encode(const GradedMap& u) const;
  const GradedMap& basis_map(int degree, std::size_t b) const;

  /// [w, e_x] for w given in local coordinates of the level of `degree`;
  /// result in local coordinates of level degree + weight(x).
  Vector act(int degree, std::span<const Rational> w, std::size_t x) const;

  /// True iff u[S,T] = [u(S),T] - [u(T),S] on every pair of negative basis elements.
  bool satisfies_leibniz(const GradedMap& u) const;

 private:
  Vector leibniz_residual(const GradedMap& u) const;

  GradedLieAlgebra g_;
  std::vector<Subspace> levels_;
  std::vector<std::vector<GradedMap>> maps_;
};

/// g_k: all degree-k graded maps satisfying the Leibniz law, given g_0..g_{k-1}
/// in prior_levels. Extra trailing levels are ignored.
Subspace prolong_step(const GradedLieAlgebra& g, const std::vector<Subspace>& prior_levels, int k);

/// s = g_- + g_0 + g_1 + ... with the full bracket table. Basis order: g_- in
/// declaration order, then each level's echelon basis by increasing degree.
class ProlongationAlgebra {
 public:
  /// truncated = true means higher levels may be nonzero; brackets that would
  /// land above the top level are then unknown and stored as zero.
  ProlongationAlgebra(const GradedLieAlgebra& g, std::vector<Subspace> levels, bool truncated);

  const GradedLieAlgebra& negative() const { return stack_.negative(); }
  const LevelStack& stack() const { return stack_; }
  const std::vector<Subspace>& levels() const { return stack_.levels(); }
  bool truncated() const { return truncated_; }
  int top_degree() const { return stack_.top_degree(); }

  std::size_t dim() const { return degrees_.size(); }
  int degree(std::size_t i) const { return degrees_[i]; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  /// Index of the first basis element of the level of the given degree (>= 0).
  std::size_t offset(int degree) const { return offsets_.at(static_cast<std::size_t>(degree)); }
  /// Action of a non-negative basis element on g_-.
  const GradedMap& action(std::size_t i) const;

  Vector unit(std::size_t i) const;
  const Vector& structure(std::size_t i, std::size_t j) const { return table_[i][j]; }
  Vector bracket(const Vector& a, const Vector& b) const;

  /// Embeds local coordinates of the level of `degree` into s.
  Vector embed(int degree, std::span<const Rational> local) const;

  /// Checks antisymmetry, grading, Jacobi on all basis triples whose brackets
  /// are all determined, and [u, X] = u(X). Throws JacobiAssemblyFailure.
  void verify() const;
  /// Basis triples on which the Jacobi identity is determined (all of them
  /// unless truncated).
  std::vector<std::array<std::size_t, 3>> checkable_triples() const;
  bool bracket_determined(std::size_t i, std::size_t j) const;

 private:
  void assemble();

  LevelStack stack_;
  bool truncated_;
  std::vector<int> degrees_;
  std::vector<std::string> names_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<Vector>> table_;
};

struct TerminationReport {
  enum class Status { terminated, cutoff_reached };
  Status status = Status::cutoff_reached;
  /// Degree of the first zero level when status == terminated.
  int terminated_at = -1;
  /// Dimensions of g_0, g_1, ... as computed (including the final zero level).
  std::vector<std::size_t> level_dims;
  std::size_t total_dim = 0;
};

inline constexpr int default_max_k = 10;

/// Iterates prolong_step from k = 1 until a level vanishes or max_k is reached,
/// then assembles and verifies the bracket table.
std::pair<ProlongationAlgebra, TerminationReport> full_prolongation(const GradedLieAlgebra& g,
                                                                     const Subspace& g0,
                                                                     int max_k = default_max_k);

/// Whether g_k = 0 implies vanishing of all higher levels, i.e. g_{-1} generates g.
bool termination_valid(const GradedLieAlgebra& g);

}  // namespace carnot
