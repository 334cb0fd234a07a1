#include "carnot/graded_lie.hpp"

#include <algorithm>
#include <map>

namespace carnot {

std::string to_string(AlgebraErrorKind kind) {
  switch (kind) {
    case AlgebraErrorKind::MalformedSpec: return "MalformedSpec";
    case AlgebraErrorKind::DuplicateBracket: return "DuplicateBracket";
    case AlgebraErrorKind::AntisymmetryViolation: return "AntisymmetryViolation";
    case AlgebraErrorKind::GradingViolation: return "GradingViolation";
    case AlgebraErrorKind::JacobiViolation: return "JacobiViolation";
    case AlgebraErrorKind::GenerationFailure: return "GenerationFailure";
  }
  return "Unknown";
}

GradedLieAlgebra::GradedLieAlgebra(std::string name, std::vector<std::string> basis,
                                   std::vector<int> weights,
                                   std::vector<std::vector<Vector>> structure)
    : name_(std::move(name)),
      basis_(std::move(basis)),
      weights_(std::move(weights)),
      structure_(std::move(structure)) {
  const std::size_t n = basis_.size();
  if (weights_.size() != n || structure_.size() != n)
    throw DimensionMismatch("algebra: basis, weights and structure sizes differ");
  for (const auto& row : structure_) {
    if (row.size() != n) throw DimensionMismatch("algebra: structure tensor is not square");
    for (const auto& v : row)
      if (v.size() != n) throw DimensionMismatch("algebra: structure vector length != dim");
  }
  for (int w : weights_) {
    if (w >= 0) throw std::invalid_argument("algebra: weights must be negative");
    step_ = std::max(step_, -w);
  }
  layers_.assign(static_cast<std::size_t>(step_), {});
  position_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& layer = layers_[static_cast<std::size_t>(-weights_[i] - 1)];
    position_[i] = layer.size();
    layer.push_back(i);
  }
}

std::optional<std::size_t> GradedLieAlgebra::index_of(const std::string& name) const {
  auto it = std::find(basis_.begin(), basis_.end(), name);
  if (it == basis_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - basis_.begin());
}

const std::vector<std::size_t>& GradedLieAlgebra::layer(int weight) const {
  static const std::vector<std::size_t> empty;
  if (weight >= 0 || -weight > step_) return empty;
  return layers_[static_cast<std::size_t>(-weight - 1)];
}

std::size_t GradedLieAlgebra::layer_dim(int weight) const { return layer(weight).size(); }

std::vector<std::size_t> GradedLieAlgebra::layer_dims() const {
  std::vector<std::size_t> dims;
  for (const auto& l : layers_) dims.push_back(l.size());
  return dims;
}

AlgebraElement GradedLieAlgebra::unit(std::size_t i) const {
  AlgebraElement e(dim());
  e.at(i) = 1;
  return e;
}

AlgebraElement GradedLieAlgebra::bracket(const AlgebraElement& a, const AlgebraElement& b) const {
  if (a.size() != dim() || b.size() != dim()) throw DimensionMismatch("bracket: element length != dim");
  return bracket_with<Rational>(*this, a, b, Rational(0));
}

std::optional<std::array<std::size_t, 3>> find_jacobi_violation(const GradedLieAlgebra& g) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto ei = g.unit(i), ej = g.unit(j), ek = g.unit(k);
        auto sum = g.bracket(ei, g.bracket(ej, ek));
        sum = add(sum, g.bracket(ej, g.bracket(ek, ei)));
        sum = add(sum, g.bracket(ek, g.bracket(ei, ej)));
        if (!is_zero(sum)) return std::array<std::size_t, 3>{i, j, k};
      }
  return std::nullopt;
}

bool check_generation(const GradedLieAlgebra& g) {
  if (g.dim() == 0) return true;
  for (int depth = 1; depth <= g.step(); ++depth)
    if (g.layer_dim(-depth) == 0) return false;
  for (int depth = 2; depth <= g.step(); ++depth) {
    std::vector<Vector> images;
    for (auto a : g.layer(-1))
      for (auto b : g.layer(-(depth - 1))) images.push_back(g.structure(a, b));
    if (Subspace::span(g.dim(), images).dim() != g.layer_dim(-depth)) return false;
  }
  return true;
}

GradedLieAlgebra build_algebra(const AlgebraSpec& spec, bool require_generation) {
  using K = AlgebraErrorKind;
  std::vector<std::string> basis;
  std::vector<int> weights;
  std::map<std::string, std::size_t> index;
  if (spec.layers.empty()) throw AlgebraError(K::MalformedSpec, {}, "algebra declares no layers");
  for (std::size_t depth = 0; depth < spec.layers.size(); ++depth) {
    if (spec.layers[depth].empty())
      throw AlgebraError(K::MalformedSpec, {}, "layer " + std::to_string(depth + 1) + " is empty");
    for (const auto& name : spec.layers[depth]) {
      if (!index.emplace(name, basis.size()).second)
        throw AlgebraError(K::MalformedSpec, {name}, "generator '" + name + "' declared twice");
      basis.push_back(name);
      weights.push_back(-static_cast<int>(depth) - 1);
    }
  }
  const std::size_t n = basis.size();
  auto lookup = [&](const std::string& name, std::size_t line) {
    auto it = index.find(name);
    if (it == index.end())
      throw AlgebraError(K::MalformedSpec, {name},
                         "unknown generator '" + name + "'" +
                             (line ? " on line " + std::to_string(line) : std::string()));
    return it->second;
  };

  std::vector<std::vector<Vector>> structure(n, std::vector<Vector>(n, Vector(n)));
  // orientation as written, so [A,B] after [B,A] can be told apart from a repeat
  std::vector<std::vector<bool>> written(n, std::vector<bool>(n, false));
  for (const auto& rel : spec.brackets) {
    const std::size_t i = lookup(rel.left, rel.line), j = lookup(rel.right, rel.line);
    Vector value(n);
    for (const auto& [coef, target] : rel.terms) value[lookup(target, rel.line)] += coef;
    const std::vector<std::string> pair{rel.left, rel.right};
    if (i == j) {
      if (!is_zero(value))
        throw AlgebraError(K::AntisymmetryViolation, pair,
                           "[" + rel.left + "," + rel.left + "] must vanish");
      continue;
    }
    if (written[i][j]) {
      throw AlgebraError(K::DuplicateBracket, pair,
                         "bracket [" + rel.left + "," + rel.right + "] listed twice");
    }
    if (written[j][i]) {
      if (structure[j][i] != scale(Rational(-1), value))
        throw AlgebraError(K::AntisymmetryViolation, pair,
                           "[" + rel.left + "," + rel.right + "] conflicts with [" + rel.right +
                               "," + rel.left + "]");
      throw AlgebraError(K::DuplicateBracket, pair,
                         "bracket [" + rel.left + "," + rel.right + "] listed in both orientations");
    }
    const int target_weight = weights[i] + weights[j];
    for (std::size_t k = 0; k < n; ++k) {
      if (value[k].is_zero() || weights[k] == target_weight) continue;
      throw AlgebraError(K::GradingViolation, pair,
                         "[" + rel.left + "," + rel.right + "] has a component along " + basis[k] +
                             " (weight " + std::to_string(weights[k]) + "), expected weight " +
                             std::to_string(target_weight));
    }
    structure[i][j] = value;
    structure[j][i] = scale(Rational(-1), value);
    written[i][j] = true;
  }

  GradedLieAlgebra g(spec.name, basis, weights, std::move(structure));
  if (auto bad = find_jacobi_violation(g)) {
    const auto& [i, j, k] = *bad;
    throw AlgebraError(K::JacobiViolation, {basis[i], basis[j], basis[k]},
                       "Jacobi identity fails on (" + basis[i] + "," + basis[j] + "," + basis[k] + ")");
  }
  if (require_generation && !check_generation(g)) {
    // Name the first layer that is not reached.
    std::vector<std::string> offenders;
    for (int depth = 2; depth <= g.step(); ++depth) {
      std::vector<Vector> images;
      for (auto a : g.layer(-1))
        for (auto b : g.layer(-(depth - 1))) images.push_back(g.structure(a, b));
      if (Subspace::span(n, images).dim() != g.layer_dim(-depth)) {
        for (auto idx : g.layer(-depth)) offenders.push_back(basis[idx]);
        break;
      }
    }
    throw AlgebraError(K::GenerationFailure, offenders, "layer -1 does not generate the algebra");
  }
  return g;
}

namespace presets {

AlgebraSpec engel() {
  return {"engel",
          {{"X1", "X2"}, {"Y"}, {"Z"}},
          {{"X1", "X2", {{Rational(1), "Y"}}, 0}, {"X1", "Y", {{Rational(1), "Z"}}, 0}}};
}

AlgebraSpec heisenberg() {
  return {"heisenberg", {{"X1", "X2"}, {"Y"}}, {{"X1", "X2", {{Rational(1), "Y"}}, 0}}};
}

AlgebraSpec abelian(std::size_t n) {
  AlgebraSpec spec;
  spec.name = "r" + std::to_string(n);
  spec.layers.emplace_back();
  for (std::size_t i = 1; i <= n; ++i) spec.layers[0].push_back("X" + std::to_string(i));
  return spec;
}

AlgebraSpec split_abelian() { return {"split", {{"X"}, {"Y"}}, {}}; }

}  // namespace presets

}  // namespace carnot
