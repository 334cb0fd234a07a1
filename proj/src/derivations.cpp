#include "carnot/derivations.hpp"

#include <stdexcept>

namespace carnot {

DegreeZeroMap DegreeZeroMap::zero(const GradedLieAlgebra& g) {
  DegreeZeroMap d;
  for (auto dim : g.layer_dims()) d.blocks.emplace_back(dim, dim);
  return d;
}

DegreeZeroMap DegreeZeroMap::from_flat(const GradedLieAlgebra& g, std::span<const Rational> v) {
  if (v.size() != degree_zero_dim(g)) throw DimensionMismatch("DegreeZeroMap: flat length mismatch");
  DegreeZeroMap d = zero(g);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    Matrix& block = d.blocks[static_cast<std::size_t>(-g.weight(i) - 1)];
    const std::size_t col = g.position_in_layer(i);
    for (std::size_t r = 0; r < block.rows(); ++r) block(r, col) = v[offset++];
  }
  return d;
}

DegreeZeroMap DegreeZeroMap::from_matrix(const GradedLieAlgebra& g, const Matrix& m) {
  if (m.rows() != g.dim() || m.cols() != g.dim()) throw DimensionMismatch("DegreeZeroMap: matrix shape");
  DegreeZeroMap d = zero(g);
  for (std::size_t r = 0; r < g.dim(); ++r)
    for (std::size_t c = 0; c < g.dim(); ++c) {
      if (m(r, c).is_zero()) continue;
      if (g.weight(r) != g.weight(c))
        throw std::invalid_argument("DegreeZeroMap: matrix does not preserve layers");
      d.blocks[static_cast<std::size_t>(-g.weight(r) - 1)](g.position_in_layer(r),
                                                          g.position_in_layer(c)) = m(r, c);
    }
  return d;
}

Vector DegreeZeroMap::flat(const GradedLieAlgebra& g) const {
  Vector v;
  v.reserve(degree_zero_dim(g));
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const Matrix& block = blocks.at(static_cast<std::size_t>(-g.weight(i) - 1));
    const std::size_t col = g.position_in_layer(i);
    for (std::size_t r = 0; r < block.rows(); ++r) v.push_back(block(r, col));
  }
  return v;
}

Matrix DegreeZeroMap::to_matrix(const GradedLieAlgebra& g) const {
  Matrix m(g.dim(), g.dim());
  for (int depth = 1; depth <= g.step(); ++depth) {
    const auto& layer = g.layer(-depth);
    const Matrix& block = blocks.at(static_cast<std::size_t>(depth - 1));
    for (std::size_t r = 0; r < layer.size(); ++r)
      for (std::size_t c = 0; c < layer.size(); ++c) m(layer[r], layer[c]) = block(r, c);
  }
  return m;
}

AlgebraElement DegreeZeroMap::apply(const GradedLieAlgebra& g, const AlgebraElement& x) const {
  return to_matrix(g).apply(x);
}

std::size_t degree_zero_dim(const GradedLieAlgebra& g) {
  std::size_t total = 0;
  for (auto d : g.layer_dims()) total += d * d;
  return total;
}

namespace {

// Stacked residuals D[e_i,e_j] - [De_i,e_j] - [e_i,De_j] over all pairs i < j.
Vector derivation_residual(const GradedLieAlgebra& g, const Matrix& d) {
  const std::size_t n = g.dim();
  Vector out;
  out.reserve(n * n * (n - 1) / 2);
  std::vector<AlgebraElement> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = d.apply(g.unit(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto lhs = d.apply(g.structure(i, j));
      auto r1 = g.bracket(images[i], g.unit(j));
      auto r2 = g.bracket(g.unit(i), images[j]);
      for (std::size_t k = 0; k < n; ++k) out.push_back(lhs[k] - r1[k] - r2[k]);
    }
  return out;
}

}  // namespace

bool is_derivation(const GradedLieAlgebra& g, const DegreeZeroMap& d) {
  return is_zero(derivation_residual(g, d.to_matrix(g)));
}

std::string to_string(GZeroConstraint::Kind kind) {
  switch (kind) {
    case GZeroConstraint::Kind::conformal: return "conformal";
    case GZeroConstraint::Kind::full_derivations: return "full_derivations";
    case GZeroConstraint::Kind::explicit_conditions: return "explicit";
  }
  return "unknown";
}

std::vector<Vector> first_layer_conditions(std::size_t m, const GZeroConstraint& c) {
  std::vector<Vector> rows;
  switch (c.kind) {
    case GZeroConstraint::Kind::full_derivations:
      break;
    case GZeroConstraint::Kind::conformal:
      // off-diagonal: B(r,c) + B(c,r) = 0; diagonal: B(r,r) = B(0,0)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t col = r + 1; col < m; ++col) {
          Vector row(m * m);
          row[r * m + col] = 1;
          row[col * m + r] = 1;
          rows.push_back(std::move(row));
        }
      for (std::size_t r = 1; r < m; ++r) {
        Vector row(m * m);
        row[r * m + r] = 1;
        row[0] = -1;
        rows.push_back(std::move(row));
      }
      break;
    case GZeroConstraint::Kind::explicit_conditions:
      for (const auto& cond : c.conditions) {
        if (cond.rows() != m || cond.cols() != m)
          throw DimensionMismatch("explicit g0 condition has wrong shape");
        Vector row(m * m);
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t col = 0; col < m; ++col) row[r * m + col] = cond(r, col);
        rows.push_back(std::move(row));
      }
      break;
  }
  return rows;
}

Subspace strata_derivations(const GradedLieAlgebra& g) {
  const std::size_t unknowns = degree_zero_dim(g);
  std::vector<Vector> columns;
  columns.reserve(unknowns);
  for (std::size_t u = 0; u < unknowns; ++u) {
    Vector e(unknowns);
    e[u] = 1;
    columns.push_back(derivation_residual(g, DegreeZeroMap::from_flat(g, e).to_matrix(g)));
  }
  const std::size_t equations = columns.empty() ? 0 : columns.front().size();
  Matrix system(equations, unknowns);
  for (std::size_t u = 0; u < unknowns; ++u)
    for (std::size_t r = 0; r < equations; ++r) system(r, u) = columns[u][r];
  return nullspace(system);
}

Subspace constrain_g0(const GradedLieAlgebra& g, const Subspace& ders, const GZeroConstraint& c) {
  if (ders.ambient_dim() != degree_zero_dim(g))
    throw DimensionMismatch("constrain_g0: derivation space does not match algebra");
  const std::size_t m = g.layer_dim(-1);
  const auto conditions = first_layer_conditions(m, c);
  if (conditions.empty()) return ders;
  // Conditions evaluated on each basis element give a system in the basis coefficients.
  Matrix system(conditions.size(), ders.dim());
  for (std::size_t b = 0; b < ders.dim(); ++b) {
    const Matrix block = DegreeZeroMap::from_flat(g, ders.basis()[b]).blocks.front();
    for (std::size_t k = 0; k < conditions.size(); ++k) {
      Rational value;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t col = 0; col < m; ++col)
          if (!conditions[k][r * m + col].is_zero()) value += conditions[k][r * m + col] * block(r, col);
      system(k, b) = value;
    }
  }
  std::vector<Vector> members;
  const Subspace kernel = nullspace(system);
  for (const auto& coeffs : kernel.basis()) members.push_back(ders.combine(coeffs));
  return Subspace::span(ders.ambient_dim(), members);
}

}  // namespace carnot
