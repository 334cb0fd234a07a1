#include "carnot/prolongation.hpp"

#include <algorithm>

namespace carnot {

namespace {

Vector layer_to_global(const GradedLieAlgebra& g, int weight, std::span<const Rational> local) {
  Vector out(g.dim());
  const auto& layer = g.layer(weight);
  for (std::size_t p = 0; p < layer.size(); ++p) out[layer[p]] = local[p];
  return out;
}

Vector global_to_layer(const GradedLieAlgebra& g, int weight, std::span<const Rational> global) {
  const auto& layer = g.layer(weight);
  Vector out(layer.size());
  for (std::size_t p = 0; p < layer.size(); ++p) out[p] = global[layer[p]];
  return out;
}

ProlongationError assembly_failure(const std::string& what) {
  return {ProlongationErrorKind::JacobiAssemblyFailure, what};
}

}  // namespace

LevelStack::LevelStack(GradedLieAlgebra g, std::vector<Subspace> levels)
    : g_(std::move(g)), levels_(std::move(levels)) {
  for (int d = 0; d <= top_degree(); ++d) {
    if (levels_[static_cast<std::size_t>(d)].ambient_dim() != map_dim(d))
      throw DimensionMismatch("level g_" + std::to_string(d) + " has the wrong ambient dimension");
    std::vector<GradedMap> decoded;
    for (const auto& b : levels_[static_cast<std::size_t>(d)].basis()) decoded.push_back(decode(d, b));
    maps_.push_back(std::move(decoded));
  }
}

std::size_t LevelStack::level_dim(int degree) const {
  if (degree < 0) return g_.layer_dim(degree);
  if (degree > top_degree())
    throw ProlongationError(ProlongationErrorKind::PriorLevelsMissing,
                            "level g_" + std::to_string(degree) + " has not been computed");
  return levels_[static_cast<std::size_t>(degree)].dim();
}

std::size_t LevelStack::map_dim(int degree) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < g_.dim(); ++i) total += level_dim(degree + g_.weight(i));
  return total;
}

GradedMap LevelStack::decode(int degree, std::span<const Rational> flat) const {
  if (flat.size() != map_dim(degree)) throw DimensionMismatch("graded map: flat length mismatch");
  GradedMap u{degree, {}};
  std::size_t offset = 0;
  for (std::size_t i = 0; i < g_.dim(); ++i) {
    const std::size_t len = level_dim(degree + g_.weight(i));
    u.values.emplace_back(flat.begin() + static_cast<long>(offset),
                          flat.begin() + static_cast<long>(offset + len));
    offset += len;
  }
  return u;
}

Vector LevelStack::encode(const GradedMap& u) const {
  Vector flat;
  for (std::size_t i = 0; i < g_.dim(); ++i) {
    if (u.values.at(i).size() != level_dim(u.degree + g_.weight(i)))
      throw DimensionMismatch("graded map: value has the wrong length");
    flat.insert(flat.end(), u.values[i].begin(), u.values[i].end());
  }
  return flat;
}

const GradedMap& LevelStack::basis_map(int degree, std::size_t b) const {
  return maps_.at(static_cast<std::size_t>(degree)).at(b);
}

Vector LevelStack::act(int degree, std::span<const Rational> w, std::size_t x) const {
  const int target = degree + g_.weight(x);
  Vector out(level_dim(target));
  if (out.empty()) return out;
  if (degree < 0) {
    return global_to_layer(g_, target, g_.bracket(layer_to_global(g_, degree, w), g_.unit(x)));
  }
  const auto& maps = maps_.at(static_cast<std::size_t>(degree));
  for (std::size_t b = 0; b < maps.size(); ++b)
    if (!w[b].is_zero()) axpy(w[b], maps[b].values[x], out);
  return out;
}

Vector LevelStack::leibniz_residual(const GradedMap& u) const {
  const int k = u.degree;
  Vector out;
  for (std::size_t s = 0; s < g_.dim(); ++s)
    for (std::size_t t = s + 1; t < g_.dim(); ++t) {
      const int target = g_.weight(s) + g_.weight(t) + k;
      const std::size_t len = level_dim(target);
      if (len == 0) continue;
      // u[S,T] - [u(S),T] + [u(T),S]
      Vector residual(len);
      const Vector& st = g_.structure(s, t);
      for (std::size_t r = 0; r < g_.dim(); ++r)
        if (!st[r].is_zero()) axpy(st[r], u.values[r], residual);
      axpy(Rational(-1), act(g_.weight(s) + k, u.values[s], t), residual);
      axpy(Rational(1), act(g_.weight(t) + k, u.values[t], s), residual);
      out.insert(out.end(), residual.begin(), residual.end());
    }
  return out;
}

bool LevelStack::satisfies_leibniz(const GradedMap& u) const { return is_zero(leibniz_residual(u)); }

Subspace prolong_step(const GradedLieAlgebra& g, const std::vector<Subspace>& prior_levels, int k) {
  if (k < 1) throw std::invalid_argument("prolong_step: degree must be positive");
  if (prior_levels.size() < static_cast<std::size_t>(k))
    throw ProlongationError(ProlongationErrorKind::PriorLevelsMissing,
                            "prolong_step(k=" + std::to_string(k) + ") needs g_0..g_" +
                                std::to_string(k - 1) + ", got " +
                                std::to_string(prior_levels.size()) + " levels");
  const LevelStack stack(g, {prior_levels.begin(), prior_levels.begin() + k});
  const std::size_t unknowns = stack.map_dim(k);
  std::vector<Vector> columns;
  for (std::size_t c = 0; c < unknowns; ++c) {
    Vector e(unknowns);
    e[c] = 1;
    GradedMap u = stack.decode(k, e);
    // residual of an elementary map = one column of the Leibniz system
    Vector residual;
    for (std::size_t s = 0; s < g.dim(); ++s)
      for (std::size_t t = s + 1; t < g.dim(); ++t) {
        const int target = g.weight(s) + g.weight(t) + k;
        const std::size_t len = stack.level_dim(target);
        if (len == 0) continue;
        Vector r(len);
        const Vector& st = g.structure(s, t);
        for (std::size_t idx = 0; idx < g.dim(); ++idx)
          if (!st[idx].is_zero()) axpy(st[idx], u.values[idx], r);
        axpy(Rational(-1), stack.act(g.weight(s) + k, u.values[s], t), r);
        axpy(Rational(1), stack.act(g.weight(t) + k, u.values[t], s), r);
        residual.insert(residual.end(), r.begin(), r.end());
      }
    columns.push_back(std::move(residual));
  }
  const std::size_t equations = columns.empty() ? 0 : columns.front().size();
  Matrix system(equations, unknowns);
  for (std::size_t c = 0; c < unknowns; ++c)
    for (std::size_t r = 0; r < equations; ++r) system(r, c) = columns[c][r];
  return nullspace(system);
}

ProlongationAlgebra::ProlongationAlgebra(const GradedLieAlgebra& g, std::vector<Subspace> levels,
                                         bool truncated)
    : stack_(g, std::move(levels)), truncated_(truncated) {
  for (std::size_t i = 0; i < g.dim(); ++i) {
    degrees_.push_back(g.weight(i));
    names_.push_back(g.basis_name(i));
  }
  for (int d = 0; d <= top_degree(); ++d) {
    offsets_.push_back(degrees_.size());
    for (std::size_t b = 0; b < stack_.level_dim(d); ++b) {
      degrees_.push_back(d);
      names_.push_back("g" + std::to_string(d) + "_" + std::to_string(b + 1));
    }
  }
  assemble();
}

const GradedMap& ProlongationAlgebra::action(std::size_t i) const {
  if (degrees_.at(i) < 0) throw std::invalid_argument("action: basis element is in g_-");
  return stack_.basis_map(degrees_[i], i - offset(degrees_[i]));
}

Vector ProlongationAlgebra::unit(std::size_t i) const {
  Vector e(dim());
  e.at(i) = 1;
  return e;
}

Vector ProlongationAlgebra::embed(int degree, std::span<const Rational> local) const {
  Vector out(dim());
  if (degree < 0) {
    const auto& layer = negative().layer(degree);
    for (std::size_t p = 0; p < layer.size(); ++p) out[layer[p]] = local[p];
  } else {
    const std::size_t off = offset(degree);
    for (std::size_t b = 0; b < local.size(); ++b) out[off + b] = local[b];
  }
  return out;
}

Vector ProlongationAlgebra::bracket(const Vector& a, const Vector& b) const {
  if (a.size() != dim() || b.size() != dim()) throw DimensionMismatch("bracket: element length != dim(s)");
  Vector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j)
      if (!b[j].is_zero()) axpy(a[i] * b[j], table_[i][j], out);
  }
  return out;
}

bool ProlongationAlgebra::bracket_determined(std::size_t i, std::size_t j) const {
  return !truncated_ || degrees_[i] + degrees_[j] <= top_degree();
}

void ProlongationAlgebra::assemble() {
  const GradedLieAlgebra& g = negative();
  const std::size_t n = g.dim(), total = dim();
  table_.assign(total, std::vector<Vector>(total, Vector(total)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) std::copy(g.structure(i, j).begin(), g.structure(i, j).end(), table_[i][j].begin());

  // [u, X] = u(X)
  for (std::size_t i = n; i < total; ++i) {
    const GradedMap& u = action(i);
    for (std::size_t x = 0; x < n; ++x) {
      table_[i][x] = embed(u.degree + g.weight(x), u.values[x]);
      table_[x][i] = scale(Rational(-1), table_[i][x]);
    }
  }

  // ([u,v])(X) = [u,[v,X]] - [v,[u,X]], filled by increasing degree sum so
  // that every bracket on the right is already known.
  const int top = top_degree();
  for (int c = 0; c <= 2 * top; ++c) {
    for (std::size_t i = n; i < total; ++i)
      for (std::size_t j = i + 1; j < total; ++j) {
        if (degrees_[i] + degrees_[j] != c) continue;
        if (c > top) continue;  // zero (terminated) or undetermined (truncated)
        const std::size_t len = stack_.map_dim(c);
        GradedMap w{c, {}};
        for (std::size_t x = 0; x < n; ++x) {
          const Vector ux = table_[i][x], vx = table_[j][x];
          Vector value = bracket(unit(i), vx);
          axpy(Rational(-1), bracket(unit(j), ux), value);
          const int target = c + g.weight(x);
          // value must live entirely in the level of degree `target`
          Vector local(stack_.level_dim(target));
          Vector rebuilt(total);
          if (!local.empty()) {
            if (target < 0) {
              const auto& layer = g.layer(target);
              for (std::size_t p = 0; p < layer.size(); ++p) local[p] = value[layer[p]];
            } else {
              for (std::size_t b = 0; b < local.size(); ++b) local[b] = value[offset(target) + b];
            }
            rebuilt = embed(target, local);
          }
          if (rebuilt != value)
            throw assembly_failure("[" + names_[i] + "," + names_[j] + "] applied to " + g.basis_name(x) +
                                   " leaves degree " + std::to_string(target));
          w.values.push_back(std::move(local));
        }
        const Vector flat = stack_.encode(w);
        if (flat.size() != len) throw assembly_failure("graded map length mismatch");
        Vector coords;
        try {
          coords = levels()[static_cast<std::size_t>(c)].coordinates(flat);
        } catch (const std::domain_error&) {
          throw assembly_failure("[" + names_[i] + "," + names_[j] + "] does not lie in g_" + std::to_string(c));
        }
        table_[i][j] = embed(c, coords);
        table_[j][i] = scale(Rational(-1), table_[i][j]);
      }
  }
}

std::vector<std::array<std::size_t, 3>> ProlongationAlgebra::checkable_triples() const {
  std::vector<std::array<std::size_t, 3>> out;
  const int top = top_degree();
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i + 1; j < dim(); ++j)
      for (std::size_t k = j + 1; k < dim(); ++k) {
        if (truncated_) {
          const int a = degrees_[i], b = degrees_[j], c = degrees_[k];
          if (a + b > top || b + c > top || a + c > top || a + b + c > top) continue;
        }
        out.push_back({i, j, k});
      }
  return out;
}

void ProlongationAlgebra::verify() const {
  const std::size_t total = dim();
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) {
      if (add(table_[i][j], table_[j][i]) != Vector(total))
        throw assembly_failure("bracket not antisymmetric on (" + names_[i] + "," + names_[j] + ")");
      for (std::size_t k = 0; k < total; ++k)
        if (!table_[i][j][k].is_zero() && degrees_[k] != degrees_[i] + degrees_[j])
          throw assembly_failure("bracket [" + names_[i] + "," + names_[j] + "] breaks the grading");
    }
  for (const auto& [i, j, k] : checkable_triples()) {
    const Vector ei = unit(i), ej = unit(j), ek = unit(k);
    Vector sum = bracket(ei, bracket(ej, ek));
    sum = add(sum, bracket(ej, bracket(ek, ei)));
    sum = add(sum, bracket(ek, bracket(ei, ej)));
    if (!is_zero(sum))
      throw assembly_failure("Jacobi identity fails on (" + names_[i] + "," + names_[j] + "," + names_[k] + ")");
  }
  for (std::size_t i = negative().dim(); i < total; ++i) {
    const GradedMap& u = action(i);
    for (std::size_t x = 0; x < negative().dim(); ++x)
      if (table_[i][x] != embed(u.degree + negative().weight(x), u.values[x]))
        throw assembly_failure("[" + names_[i] + "," + negative().basis_name(x) + "] != u(X)");
  }
}

std::pair<ProlongationAlgebra, TerminationReport> full_prolongation(const GradedLieAlgebra& g,
                                                                     const Subspace& g0, int max_k) {
  if (g0.ambient_dim() != degree_zero_dim(g))
    throw DimensionMismatch("full_prolongation: g0 does not match the algebra");
  TerminationReport report;
  std::vector<Subspace> levels{g0};
  report.level_dims.push_back(g0.dim());
  if (g0.dim() == 0) {
    report.status = TerminationReport::Status::terminated;
    report.terminated_at = 0;
  }
  for (int k = 1; k <= max_k && report.status != TerminationReport::Status::terminated; ++k) {
    levels.push_back(prolong_step(g, levels, k));
    report.level_dims.push_back(levels.back().dim());
    if (levels.back().dim() == 0) {
      report.status = TerminationReport::Status::terminated;
      report.terminated_at = k;
    }
  }
  report.total_dim = g.dim();
  for (auto d : report.level_dims) report.total_dim += d;
  ProlongationAlgebra s(g, std::move(levels), report.status != TerminationReport::Status::terminated);
  s.verify();
  return {std::move(s), report};
}

bool termination_valid(const GradedLieAlgebra& g) { return check_generation(g); }

}  // namespace carnot
