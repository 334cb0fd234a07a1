#include "carnot/contact.hpp"

#include <algorithm>
#include <map>

#include "poly_system.hpp"

namespace carnot {

namespace {

std::string field_name(const Frame& frame, std::size_t i) {
  return i < frame.names.size() ? frame.names[i] : "e" + std::to_string(i + 1);
}

void push(DefectReport& report, std::string label, Polynomial residual) {
  if (!residual.is_zero()) report.all_zero = false;
  report.labels.push_back(std::move(label));
  report.residuals.push_back(std::move(residual));
}

// M(b, a) = X_a f_b over the horizontal fields.
std::vector<std::vector<Polynomial>> horizontal_jacobian(const PolyVectorField& v, const Frame& frame) {
  const auto h = frame.horizontal();
  std::vector<std::vector<Polynomial>> m(h.size());
  for (std::size_t b = 0; b < h.size(); ++b)
    for (std::size_t a = 0; a < h.size(); ++a) m[b].push_back(apply(frame, h[a], v.components[h[b]]));
  return m;
}

}  // namespace

std::vector<std::string> DefectReport::failing() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < residuals.size(); ++i)
    if (!residuals[i].is_zero()) out.push_back(labels[i]);
  return out;
}

DefectReport contact_defect(const PolyVectorField& v, const Frame& frame) {
  if (v.components.size() != frame.size()) throw DimensionMismatch("contact_defect: field/frame size mismatch");
  const PolyVectorField v_coord = to_coordinates(frame, v);
  DefectReport report;
  for (auto a : frame.horizontal()) {
    const PolyVectorField b = to_frame(frame, lie_bracket(v_coord, frame.fields[a]));
    for (std::size_t j = 0; j < frame.size(); ++j)
      if (frame.weights[j] != 1)
        push(report, "[V," + field_name(frame, a) + "]." + field_name(frame, j), b.components[j]);
  }
  return report;
}

DefectReport constraint_defect(const PolyVectorField& v, const Frame& frame, const GZeroConstraint& c) {
  const auto m = horizontal_jacobian(v, frame);
  const std::size_t dim = m.size();
  const auto h = frame.horizontal();
  DefectReport report;
  const auto rows = first_layer_conditions(dim, c);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Polynomial r(frame.nvars());
    std::string label;
    for (std::size_t row = 0; row < dim; ++row)
      for (std::size_t col = 0; col < dim; ++col) {
        const Rational& coef = rows[k][row * dim + col];
        if (coef.is_zero()) continue;
        r += coef * m[row][col];
        if (!label.empty()) label += coef.sign() < 0 ? " - " : " + ";
        else if (coef.sign() < 0) label += "-";
        const Rational mag = coef.sign() < 0 ? -coef : coef;
        if (mag != Rational(1)) label += mag.str() + "*";
        label += field_name(frame, h[col]) + "(f_" + field_name(frame, h[row]) + ")";
      }
    push(report, label, std::move(r));
  }
  return report;
}

DefectReport conformal_defect(const PolyVectorField& v, const Frame& frame) {
  const auto contact = contact_defect(v, frame);
  if (!contact.all_zero) throw NotContact("conformal_defect: field is not contact");
  return constraint_defect(v, frame, GZeroConstraint::conformal());
}

bool FirstOrderJet::is_zero() const {
  for (const auto& d : horizontal)
    for (const auto& b : d.blocks)
      if (!b.is_zero()) return false;
  for (const auto& v : deeper)
    if (!carnot::is_zero(v)) return false;
  return true;
}

ContactJet jet(const PolyVectorField& v, const GroupPoint& p, int order, const GradedLieAlgebra& g,
               const Frame& frame) {
  if (order != 0 && order != 1) throw std::invalid_argument("jet: order must be 0 or 1");
  if (frame.size() != g.dim() || v.components.size() != g.dim()) throw DimensionMismatch("jet: size mismatch");
  if (!contact_defect(v, frame).all_zero) throw NotContact("jet: field is not contact");
  ContactJet j;
  j.point = p;
  for (int depth = 1; depth <= g.step(); ++depth) {
    AlgebraElement part(g.dim());
    for (auto i : g.layer(-depth)) part[i] = v.components[i].evaluate(p);
    j.minus_parts.push_back(std::move(part));
  }
  // derivative polynomials X_c(f_r) for r, c in the same layer
  auto zero_fn = [&](std::size_t r, std::size_t c) { return apply(frame, c, v.components[r]); };
  j.zero_part = DegreeZeroMap::zero(g);
  for (int depth = 1; depth <= g.step(); ++depth) {
    const auto& layer = g.layer(-depth);
    auto& block = j.zero_part.blocks[static_cast<std::size_t>(depth - 1)];
    for (std::size_t r = 0; r < layer.size(); ++r)
      for (std::size_t c = 0; c < layer.size(); ++c) block(r, c) = zero_fn(layer[r], layer[c]).evaluate(p);
  }
  if (order == 1) {
    FirstOrderJet one;
    for (auto x : g.layer(-1)) {
      DegreeZeroMap d = DegreeZeroMap::zero(g);
      for (int depth = 1; depth <= g.step(); ++depth) {
        const auto& layer = g.layer(-depth);
        auto& block = d.blocks[static_cast<std::size_t>(depth - 1)];
        for (std::size_t r = 0; r < layer.size(); ++r)
          for (std::size_t c = 0; c < layer.size(); ++c)
            block(r, c) = apply(frame, x, zero_fn(layer[r], layer[c])).evaluate(p);
      }
      one.horizontal.push_back(std::move(d));
    }
    one.deeper.resize(g.dim());
    for (std::size_t x = 0; x < g.dim(); ++x) {
      if (g.weight(x) == -1) continue;
      AlgebraElement value(g.dim());
      for (auto b : g.layer(g.weight(x) + 1)) value[b] = apply(frame, x, v.components[b]).evaluate(p);
      one.deeper[x] = std::move(value);
    }
    j.one_part = std::move(one);
  }
  return j;
}

bool jet_jacobi_check(const ContactJet& j, const GradedLieAlgebra& g) {
  const Matrix a0 = j.zero_part.to_matrix(g);
  for (std::size_t s = 0; s < g.dim(); ++s)
    for (std::size_t t = s + 1; t < g.dim(); ++t) {
      const auto lhs = a0.apply(g.structure(s, t));
      auto rhs = g.bracket(a0.apply(g.unit(s)), g.unit(t));
      axpy(Rational(-1), g.bracket(a0.apply(g.unit(t)), g.unit(s)), rhs);
      if (lhs != rhs) return false;
    }
  return true;
}

std::optional<GradedMap> one_part_as_graded_map(const ContactJet& j, const ProlongationAlgebra& s) {
  if (!j.one_part) throw std::invalid_argument("one_part_as_graded_map: jet has order 0");
  const GradedLieAlgebra& g = s.negative();
  GradedMap u{1, {}};
  for (std::size_t x = 0; x < g.dim(); ++x) {
    if (g.weight(x) == -1) {
      const Vector flat = j.one_part->horizontal[g.position_in_layer(x)].flat(g);
      try {
        u.values.push_back(s.levels().front().coordinates(flat));
      } catch (const std::domain_error&) {
        return std::nullopt;
      }
    } else {
      Vector local;
      for (auto b : g.layer(g.weight(x) + 1)) local.push_back(j.one_part->deeper[x][b]);
      u.values.push_back(std::move(local));
    }
  }
  return u;
}

Polynomial HSystemSolution::polynomial(std::span<const Rational> coeffs) const {
  const Vector flat = space.combine(coeffs);
  Polynomial h(monomials.empty() ? 0 : monomials.front().size());
  for (std::size_t i = 0; i < monomials.size(); ++i) h.add_term(monomials[i], flat[i]);
  return h;
}

std::vector<Polynomial> HSystemSolution::basis_polynomials() const {
  std::vector<Polynomial> out;
  for (std::size_t b = 0; b < space.dim(); ++b) {
    Vector e(space.dim());
    e[b] = 1;
    out.push_back(polynomial(e));
  }
  return out;
}

namespace {

void require_engel_frame(const Frame& frame) {
  if (frame.size() != 4 || frame.weights != std::vector<int>{1, 1, 2, 3})
    throw std::invalid_argument("h-system requires the Engel frame (X1, X2, Y, Z)");
}

HSystemSolution solve_h(const Frame& frame, int max_weighted_degree, bool conformal) {
  require_engel_frame(frame);
  HSystemSolution sol;
  for (int d = 0; d <= max_weighted_degree; ++d)
    for (auto& m : monomials_of_weighted_degree(frame.coordinates.weights, d)) sol.monomials.push_back(m);
  detail::PolySystem system;
  for (const auto& m : sol.monomials) {
    const Polynomial h = Polynomial::term(frame.nvars(), m, Rational(1));
    const Polynomial x1h = apply(frame, 0, h);
    std::vector<Polynomial> residuals{apply(frame, 0, apply(frame, 0, x1h)), apply(frame, 1, h),
                                      apply(frame, 2, apply(frame, 2, h)), apply(frame, 3, apply(frame, 3, h))};
    if (conformal) {
      const PolyVectorField v = field_from_h(frame, h);
      for (auto& r : contact_defect(v, frame).residuals) residuals.push_back(std::move(r));
      for (auto& r : constraint_defect(v, frame, GZeroConstraint::conformal()).residuals)
        residuals.push_back(std::move(r));
    }
    system.add_column(residuals);
  }
  sol.space = nullspace(system.matrix());
  return sol;
}

}  // namespace

HSystemSolution solve_h_system(const Frame& frame, int max_weighted_degree) {
  return solve_h(frame, max_weighted_degree, false);
}

HSystemSolution solve_conformal_h(const Frame& frame, int max_weighted_degree) {
  return solve_h(frame, max_weighted_degree, true);
}

PolyVectorField field_from_h(const Frame& frame, const Polynomial& h) {
  require_engel_frame(frame);
  const Polynomial x1h = apply(frame, 0, h);
  return {{apply(frame, 2, h), apply(frame, 0, x1h), -x1h, h}};
}

PolyVectorField ConformalSolution::field(std::span<const Rational> coords) const {
  const Vector flat = space.combine(coords);
  std::size_t comps = 0;
  for (const auto& u : unknowns) comps = std::max(comps, u.first + 1);
  PolyVectorField v = PolyVectorField::zero(comps, nvars);
  for (std::size_t i = 0; i < unknowns.size(); ++i) v.components[unknowns[i].first].add_term(unknowns[i].second, flat[i]);
  return v;
}

std::vector<PolyVectorField> ConformalSolution::basis_fields() const {
  std::vector<PolyVectorField> out;
  for (std::size_t b = 0; b < space.dim(); ++b) {
    Vector e(space.dim());
    e[b] = 1;
    out.push_back(field(e));
  }
  return out;
}

std::optional<Vector> ConformalSolution::encode(const PolyVectorField& v) const {
  std::map<std::pair<std::size_t, Monomial>, std::size_t> index;
  for (std::size_t i = 0; i < unknowns.size(); ++i) index.emplace(unknowns[i], i);
  Vector out(unknowns.size());
  for (std::size_t comp = 0; comp < v.components.size(); ++comp)
    for (const auto& [m, c] : v.components[comp].terms()) {
      auto it = index.find({comp, m});
      if (it == index.end()) return std::nullopt;
      out[it->second] = c;
    }
  return out;
}

ConformalSolution solve_polynomial_conformal(const GradedLieAlgebra& g, const Frame& frame, int max_weighted_degree,
                                             const GZeroConstraint& constraint) {
  if (frame.size() != g.dim()) throw DimensionMismatch("solve_polynomial_conformal: frame does not match algebra");
  const std::size_t n = frame.size();
  ConformalSolution sol;
  sol.nvars = frame.nvars();
  std::vector<Vector> basis;
  // The system preserves the dilation grading: component i of weighted degree
  // d + w_i only couples to other components of the same shift d.
  const int min_shift = -*std::max_element(frame.weights.begin(), frame.weights.end());
  std::vector<std::vector<std::size_t>> blocks;
  for (int d = min_shift; d <= max_weighted_degree; ++d) {
    std::vector<std::size_t> block;
    for (std::size_t comp = 0; comp < n; ++comp)
      for (const auto& m : monomials_of_weighted_degree(frame.coordinates.weights, d + frame.weights[comp])) {
        block.push_back(sol.unknowns.size());
        sol.unknowns.emplace_back(comp, m);
      }
    blocks.push_back(std::move(block));
  }
  const std::size_t total = sol.unknowns.size();
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    detail::PolySystem system;
    for (auto idx : block) {
      PolyVectorField v = PolyVectorField::zero(n, frame.nvars());
      v.components[sol.unknowns[idx].first] = Polynomial::term(frame.nvars(), sol.unknowns[idx].second, Rational(1));
      auto residuals = contact_defect(v, frame).residuals;
      for (auto& r : constraint_defect(v, frame, constraint).residuals) residuals.push_back(std::move(r));
      system.add_column(residuals);
    }
    const Subspace kernel = nullspace(system.matrix());
    for (const auto& k : kernel.basis()) {
      Vector full(total);
      for (std::size_t i = 0; i < block.size(); ++i) full[block[i]] = k[i];
      basis.push_back(std::move(full));
    }
  }
  sol.space = Subspace::span(total, basis);
  return sol;
}

}  // namespace carnot
