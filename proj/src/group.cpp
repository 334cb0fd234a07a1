#include "carnot/group.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "carnot/derivations.hpp"
#include "poly_system.hpp"

namespace carnot {

namespace {

using PolyElement = std::vector<Polynomial>;

PolyElement constant_element(const AlgebraElement& x, std::size_t nvars) {
  PolyElement out;
  for (const auto& c : x) out.push_back(Polynomial::constant(nvars, c));
  return out;
}

PolyElement apply_matrix(const Matrix& m, const PolyElement& x) {
  const std::size_t nvars = x.empty() ? 0 : x.front().nvars();
  PolyElement out(m.rows(), Polynomial(nvars));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero() && !x[c].is_zero()) out[r] += m(r, c) * x[c];
  return out;
}

std::vector<Polynomial> variables(std::size_t nvars, std::size_t first, std::size_t count) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(Polynomial::variable(nvars, first + i));
  return out;
}

Vector evaluate(const PolyMap& map, std::span<const Rational> point) {
  Vector out;
  for (const auto& p : map) out.push_back(p.evaluate(point));
  return out;
}

}  // namespace

AlgebraElement bch(const GradedLieAlgebra& g, const AlgebraElement& a, const AlgebraElement& b, int step) {
  if (step > 3)
    throw RealizationError(RealizationErrorKind::UnsupportedStep,
                           "BCH is implemented up to step 3, requested step " + std::to_string(step));
  if (g.step() > step)
    throw RealizationError(RealizationErrorKind::UnsupportedStep, "algebra step exceeds the requested BCH step");
  return bch_with<Rational>(g, a, b, Rational(0));
}

AlgebraElement bch(const GradedLieAlgebra& g, const AlgebraElement& a, const AlgebraElement& b) {
  return bch(g, a, b, g.step());
}

CoordinateRecipe CoordinateRecipe::first_kind(const GradedLieAlgebra& g) {
  CoordinateRecipe r;
  r.factors.emplace_back();
  std::set<std::string> used;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    r.factors[0].push_back(i);
    std::string name = g.basis_name(i);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (!used.insert(name).second) name += "_" + std::to_string(i);
    used.insert(name);
    r.coordinate_names.push_back(name);
  }
  return r;
}

CoordinateRecipe CoordinateRecipe::engel(const GradedLieAlgebra& g) {
  auto idx = [&](const char* name) {
    auto i = g.index_of(name);
    if (!i) throw RealizationError(RealizationErrorKind::InvalidRecipe, std::string("engel recipe needs ") + name);
    return *i;
  };
  CoordinateRecipe r;
  r.factors = {{idx("X2"), idx("Y"), idx("Z")}, {idx("X1")}};
  r.coordinate_names.resize(g.dim());
  r.coordinate_names[idx("X1")] = "x1";
  r.coordinate_names[idx("X2")] = "x2";
  r.coordinate_names[idx("Y")] = "y";
  r.coordinate_names[idx("Z")] = "z";
  r.validate(g);
  return r;
}

void CoordinateRecipe::validate(const GradedLieAlgebra& g) const {
  if (coordinate_names.size() != g.dim())
    throw RealizationError(RealizationErrorKind::InvalidRecipe, "recipe must name one coordinate per basis element");
  std::vector<int> seen(g.dim(), 0);
  for (const auto& f : factors) {
    if (f.empty()) throw RealizationError(RealizationErrorKind::InvalidRecipe, "recipe has an empty factor");
    for (auto i : f) {
      if (i >= g.dim()) throw RealizationError(RealizationErrorKind::InvalidRecipe, "recipe index out of range");
      ++seen[i];
    }
  }
  for (std::size_t i = 0; i < g.dim(); ++i)
    if (seen[i] != 1)
      throw RealizationError(RealizationErrorKind::InvalidRecipe,
                             g.basis_name(i) + " must appear in exactly one recipe factor");
  std::set<std::string> names(coordinate_names.begin(), coordinate_names.end());
  if (names.size() != coordinate_names.size())
    throw RealizationError(RealizationErrorKind::InvalidRecipe, "coordinate names must be distinct");
}

Group::Group(GradedLieAlgebra g, CoordinateRecipe recipe) : g_(std::move(g)), recipe_(std::move(recipe)) {
  recipe_.validate(g_);
  if (g_.step() > 3)
    throw RealizationError(RealizationErrorKind::UnsupportedStep, "group realization supports step <= 3");
  coords_.names = recipe_.coordinate_names;
  for (std::size_t i = 0; i < g_.dim(); ++i) coords_.weights.push_back(-g_.weight(i));
  const std::size_t n = g_.dim();
  const auto logp = log(variables(2 * n, 0, n));
  const auto logq = log(variables(2 * n, n, n));
  product_ = coordinates_of(bch_with(g_, logp, logq, Polynomial(2 * n)));
}

std::vector<Polynomial> Group::log_of_product(const std::vector<std::vector<Polynomial>>& elements) const {
  if (elements.empty()) throw std::invalid_argument("log_of_product: no factors");
  const Polynomial zero(elements.front().front().nvars());
  PolyElement acc = elements.front();
  for (std::size_t f = 1; f < elements.size(); ++f) acc = bch_with(g_, acc, elements[f], zero);
  return acc;
}

std::vector<Polynomial> Group::log(const std::vector<Polynomial>& coords) const {
  if (coords.size() != dim()) throw DimensionMismatch("log: coordinate count != dim");
  const std::size_t nvars = coords.front().nvars();
  std::vector<PolyElement> elements;
  for (const auto& f : recipe_.factors) {
    PolyElement e(dim(), Polynomial(nvars));
    for (auto i : f) e[i] = coords[i];
    elements.push_back(std::move(e));
  }
  return log_of_product(elements);
}

std::vector<Polynomial> Group::coordinates_of(const std::vector<Polynomial>& element) const {
  if (element.size() != dim()) throw DimensionMismatch("coordinates_of: element length != dim");
  const std::size_t nvars = element.front().nvars();
  std::vector<Polynomial> r(dim(), Polynomial(nvars));
  // Layer w of log(point(r)) is r_w plus brackets of lighter coordinates only.
  for (int depth = 1; depth <= g_.step(); ++depth) {
    const auto phi = log(r);
    for (auto i : g_.layer(-depth)) r[i] = element[i] - phi[i];
  }
  return r;
}

GroupPoint Group::product(const GroupPoint& p, const GroupPoint& q) const {
  if (p.size() != dim() || q.size() != dim()) throw DimensionMismatch("product: point length != dim");
  Vector pq(p);
  pq.insert(pq.end(), q.begin(), q.end());
  return evaluate(product_, pq);
}

GroupPoint Group::inverse(const GroupPoint& p) const {
  const auto l = log(constant_element(p, 0));
  PolyElement neg;
  for (const auto& x : l) neg.push_back(-x);
  return evaluate(coordinates_of(neg), {});
}

GroupPoint Group::exp(const AlgebraElement& x) const {
  return evaluate(coordinates_of(constant_element(x, 0)), {});
}

PolyMap Group::left_translation(const GroupPoint& p) const {
  const std::size_t n = dim();
  std::vector<Polynomial> subs;
  for (std::size_t i = 0; i < n; ++i) subs.push_back(Polynomial::constant(n, p.at(i)));
  for (std::size_t i = 0; i < n; ++i) subs.push_back(Polynomial::variable(n, i));
  PolyMap out;
  for (const auto& c : product_) out.push_back(c.compose(subs));
  return out;
}

PolyMap Group::automorphism(const Matrix& alpha) const {
  const std::size_t n = dim();
  const auto x = variables(n, 0, n);
  std::vector<PolyElement> elements;
  for (const auto& f : recipe_.factors) {
    PolyElement e(n, Polynomial(n));
    for (auto i : f) e[i] = x[i];
    elements.push_back(apply_matrix(alpha, e));
  }
  return coordinates_of(log_of_product(elements));
}

Frame left_invariant_frame(const Group& group) {
  const std::size_t n = group.dim();
  std::vector<Polynomial> subs = variables(n, 0, n);
  for (std::size_t i = 0; i < n; ++i) subs.push_back(Polynomial(n));
  Frame frame{group.coordinates(), {}, group.coordinates().weights, group.algebra().basis()};
  for (std::size_t x = 0; x < n; ++x) {
    PolyVectorField field;
    for (const auto& c : group.product_polynomials()) field.components.push_back(c.derivative(n + x).compose(subs));
    frame.fields.push_back(std::move(field));
  }
  return frame;
}

std::vector<PolyVectorField> right_invariant_fields(const Group& group) {
  const std::size_t n = group.dim();
  std::vector<Polynomial> subs(n, Polynomial(n));
  for (auto& v : variables(n, 0, n)) subs.push_back(v);
  std::vector<PolyVectorField> out;
  for (std::size_t x = 0; x < n; ++x) {
    PolyVectorField field;
    for (const auto& c : group.product_polynomials()) field.components.push_back(c.derivative(x).compose(subs));
    out.push_back(std::move(field));
  }
  return out;
}

PolyVectorField automorphism_flow_field(const Group& group, const Matrix& derivation) {
  const std::size_t n = group.dim();
  const std::size_t t = n;  // extra variable for the flow parameter
  const auto x = variables(n + 1, 0, n);
  const Polynomial tvar = Polynomial::variable(n + 1, t);
  std::vector<PolyElement> elements;
  for (const auto& f : group.recipe().factors) {
    PolyElement e(n, Polynomial(n + 1));
    for (auto i : f) e[i] = x[i];
    // exp(tD) agrees with I + tD to first order in t
    PolyElement de = apply_matrix(derivation, e);
    for (std::size_t i = 0; i < n; ++i) e[i] += tvar * de[i];
    elements.push_back(std::move(e));
  }
  const auto coords = group.coordinates_of(group.log_of_product(elements));
  std::vector<Polynomial> subs = variables(n, 0, n);
  subs.push_back(Polynomial(n));
  PolyVectorField v;
  for (const auto& c : coords) v.components.push_back(c.derivative(t).compose(subs));
  return v;
}

TauRealization realize_tau(const ProlongationAlgebra& s, const Group& group) {
  if (s.truncated())
    throw RealizationError(RealizationErrorKind::NotTerminated, "tau needs a terminated (finite) prolongation");
  const GradedLieAlgebra& g = s.negative();
  if (g.basis() != group.algebra().basis() || g.weights() != group.algebra().weights())
    throw RealizationError(RealizationErrorKind::InvalidRecipe, "group and prolongation use different algebras");
  const std::size_t n = g.dim(), total = s.dim();
  const Frame frame = left_invariant_frame(group);
  const auto right = right_invariant_fields(group);

  TauRealization out;
  std::vector<PolyVectorField> coord(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (s.degree(i) < 0) {
      coord[i] = right[i];
    } else if (s.degree(i) == 0) {
      const auto d = DegreeZeroMap::from_flat(g, s.stack().encode(s.action(i))).to_matrix(g);
      coord[i] = automorphism_flow_field(group, d);
    }
  }

  auto tau_of = [&](const Vector& element) {
    PolyVectorField v = PolyVectorField::zero(n, n);
    for (std::size_t i = 0; i < total; ++i)
      if (!element[i].is_zero()) v += element[i] * coord[i];
    return v;
  };

  // sign from the first pair in g_- + g_0 with a nonzero bracket
  bool found = false;
  for (std::size_t i = 0; i < total && !found; ++i)
    for (std::size_t j = i + 1; j < total && !found; ++j) {
      if (s.degree(i) > 0 || s.degree(j) > 0) continue;
      const PolyVectorField expected = tau_of(s.structure(i, j));
      if (expected.is_zero()) continue;
      const PolyVectorField actual = lie_bracket(coord[i], coord[j]);
      if (actual == expected) {
        out.sign = 1;
        found = true;
      } else if (actual == Rational(-1) * expected) {
        out.sign = -1;
        found = true;
      }
    }

  for (int k = 1; k <= s.top_degree(); ++k) {
    for (std::size_t u = 0; u < total; ++u) {
      if (s.degree(u) != k) continue;
      detail::PolySystem system;
      std::vector<std::pair<std::size_t, Monomial>> unknowns;
      auto residuals = [&](const PolyVectorField& v_coord) {
        std::vector<Polynomial> res;
        for (auto x : g.layer(-1)) {
          const auto b = lie_bracket(coord[x], v_coord);
          res.insert(res.end(), b.components.begin(), b.components.end());
        }
        return res;
      };
      for (std::size_t comp = 0; comp < n; ++comp)
        for (const auto& m : monomials_of_weighted_degree(frame.weights, k + frame.weights[comp])) {
          PolyVectorField v = PolyVectorField::zero(n, n);
          v.components[comp] = Polynomial::term(n, m, Rational(1));
          system.add_column(residuals(to_coordinates(frame, v)));
          unknowns.emplace_back(comp, m);
        }
      std::vector<Polynomial> rhs;
      for (auto x : g.layer(-1)) {
        const auto target = Rational(out.sign) * tau_of(s.bracket(s.unit(x), s.unit(u)));
        rhs.insert(rhs.end(), target.components.begin(), target.components.end());
      }
      const auto rhs_entries = system.encode(rhs);
      const Matrix a = system.matrix();
      const auto solution = solve(a, system.dense(rhs_entries));
      if (!solution || rref(a).rank != unknowns.size())
        throw RealizationError(RealizationErrorKind::TauSolveFailure,
                               "no unique polynomial field realizes " + s.name(u));
      PolyVectorField v = PolyVectorField::zero(n, n);
      for (std::size_t c = 0; c < unknowns.size(); ++c)
        v.components[unknowns[c].first].add_term(unknowns[c].second, (*solution)[c]);
      coord[u] = to_coordinates(frame, v);
    }
  }

  for (std::size_t i = 0; i < total; ++i) out.fields.push_back(to_frame(frame, coord[i]));
  return out;
}

PolyMap dilation(const GradedLieAlgebra& g, const Rational& scale) {
  if (scale.sign() <= 0)
    throw RealizationError(RealizationErrorKind::NonpositiveScale, "dilation scale must be positive");
  const std::size_t n = g.dim();
  PolyMap out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(scale.pow(static_cast<unsigned>(-g.weight(i))) * Polynomial::variable(n, i));
  return out;
}

SimilarityResult similarity_check(const PolyMap& map, const Frame& frame) {
  const std::size_t n = frame.nvars();
  if (map.size() != n) throw DimensionMismatch("similarity_check: map and frame dimensions differ");
  const auto jac = jacobian(map);
  Matrix at_origin(n, n);
  const Vector origin(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) at_origin(i, j) = jac[i][j].evaluate(origin);
  if (rref(at_origin).rank < n)
    throw RealizationError(RealizationErrorKind::NotInvertible, "map is not invertible at the identity");

  const Frame image = compose(frame, map);
  const auto horizontal = frame.horizontal();
  SimilarityResult result;
  result.contact = true;
  result.horizontal_block.assign(horizontal.size(), std::vector<Polynomial>(horizontal.size(), Polynomial(n)));
  for (std::size_t a = 0; a < horizontal.size(); ++a) {
    PolyVectorField pushed = PolyVectorField::zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!jac[i][j].is_zero() && !frame.fields[horizontal[a]].components[j].is_zero())
          pushed.components[i] += jac[i][j] * frame.fields[horizontal[a]].components[j];
    const auto c = to_frame(image, pushed);
    for (std::size_t j = 0; j < n; ++j)
      if (frame.weights[j] != 1 && !c.components[j].is_zero()) result.contact = false;
    for (std::size_t b = 0; b < horizontal.size(); ++b) result.horizontal_block[b][a] = c.components[horizontal[b]];
  }
  const auto& blk = result.horizontal_block;
  const std::size_t m = horizontal.size();
  std::vector<std::vector<Polynomial>> gram(m, std::vector<Polynomial>(m, Polynomial(n)));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t t = 0; t < m; ++t) gram[r][c] += blk[r][t] * blk[c][t];
  result.k = m ? gram[0][0] : Polynomial(n);
  bool conformal = m > 0 && !result.k.is_zero();
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      if (gram[r][c] != (r == c ? result.k : Polynomial(n))) conformal = false;
  result.similar = result.contact && conformal;
  return result;
}

std::optional<Matrix> extend_graded_automorphism(const GradedLieAlgebra& g, const Matrix& first_layer) {
  const auto& l1 = g.layer(-1);
  if (first_layer.rows() != l1.size() || first_layer.cols() != l1.size())
    throw DimensionMismatch("first-layer block has the wrong shape");
  if (rref(first_layer).rank < l1.size()) throw std::invalid_argument("first-layer block is singular");
  const std::size_t n = g.dim();
  Matrix alpha(n, n);
  for (std::size_t r = 0; r < l1.size(); ++r)
    for (std::size_t c = 0; c < l1.size(); ++c) alpha(l1[r], l1[c]) = first_layer(r, c);
  for (int depth = 2; depth <= g.step(); ++depth) {
    const auto& layer = g.layer(-depth);
    const std::size_t d = layer.size();
    // unknown block entries B(r, c) at index r * d + c; alpha([a,b]) = [alpha a, alpha b]
    Matrix system(0, d * d);
    Vector rhs;
    for (auto a : l1)
      for (auto b : g.layer(-(depth - 1))) {
        const Vector& ab = g.structure(a, b);
        const Vector image = g.bracket(alpha.apply(g.unit(a)), alpha.apply(g.unit(b)));
        for (std::size_t r = 0; r < d; ++r) {
          Vector row(d * d);
          for (std::size_t c = 0; c < d; ++c) row[r * d + c] = ab[layer[c]];
          system.append_row(row);
          rhs.push_back(image[layer[r]]);
        }
      }
    const auto block = solve(system, rhs);
    if (!block) return std::nullopt;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) alpha(layer[r], layer[c]) = (*block)[r * d + c];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (alpha.apply(g.structure(i, j)) != g.bracket(alpha.apply(g.unit(i)), alpha.apply(g.unit(j))))
        return std::nullopt;
  return alpha;
}

}  // namespace carnot
