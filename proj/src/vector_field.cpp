#include "carnot/vector_field.hpp"

#include <algorithm>
#include <sstream>

#include "carnot/linalg.hpp"

namespace carnot {

PolyVectorField PolyVectorField::zero(std::size_t count, std::size_t nvars) {
  return {std::vector<Polynomial>(count, Polynomial(nvars))};
}

bool PolyVectorField::is_zero() const {
  for (const auto& c : components)
    if (!c.is_zero()) return false;
  return true;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& o) {
  if (o.components.size() != components.size()) throw DimensionMismatch("vector field sizes differ");
  for (std::size_t i = 0; i < components.size(); ++i) components[i] += o.components[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& o) {
  if (o.components.size() != components.size()) throw DimensionMismatch("vector field sizes differ");
  for (std::size_t i = 0; i < components.size(); ++i) components[i] -= o.components[i];
  return *this;
}

PolyVectorField operator*(const Rational& c, PolyVectorField v) {
  for (auto& p : v.components) p *= c;
  return v;
}

std::size_t Frame::horizontal_dim() const { return horizontal().size(); }

std::vector<std::size_t> Frame::horizontal() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] == 1) out.push_back(i);
  return out;
}

Polynomial apply(const PolyVectorField& v, const Polynomial& f) {
  if (v.components.size() != f.nvars()) throw DimensionMismatch("field and function live on different spaces");
  Polynomial out(f.nvars());
  for (std::size_t j = 0; j < v.components.size(); ++j) {
    if (v.components[j].is_zero()) continue;
    const Polynomial d = f.derivative(j);
    if (!d.is_zero()) out += v.components[j] * d;
  }
  return out;
}

Polynomial apply(const Frame& frame, std::size_t i, const Polynomial& f) { return apply(frame.fields.at(i), f); }

PolyVectorField lie_bracket(const PolyVectorField& v, const PolyVectorField& w) {
  PolyVectorField out = PolyVectorField::zero(v.components.size(),
                                              v.components.empty() ? 0 : v.components.front().nvars());
  for (std::size_t i = 0; i < out.components.size(); ++i)
    out.components[i] = apply(v, w.components[i]) - apply(w, v.components[i]);
  return out;
}

PolyVectorField to_coordinates(const Frame& frame, const PolyVectorField& v_frame) {
  if (v_frame.components.size() != frame.size()) throw DimensionMismatch("frame component count mismatch");
  PolyVectorField out = PolyVectorField::zero(frame.nvars(), frame.nvars());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (v_frame.components[i].is_zero()) continue;
    for (std::size_t j = 0; j < frame.nvars(); ++j)
      if (!frame.fields[i].components[j].is_zero())
        out.components[j] += v_frame.components[i] * frame.fields[i].components[j];
  }
  return out;
}

namespace {

// Inverse of a constant square block given as polynomials.
Matrix constant_inverse(const std::vector<std::vector<Polynomial>>& block) {
  const std::size_t n = block.size();
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (!block[r][c].is_constant()) throw FrameError("frame is not unipotent: non-constant diagonal block");
      aug(r, c) = block[r][c].constant_term();
    }
    aug(r, n + r) = 1;
  }
  auto red = rref(aug);
  if (red.rank < n || red.pivots[n - 1] != n - 1) throw FrameError("frame is singular");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = red.reduced(r, n + c);
  return inv;
}

}  // namespace

PolyVectorField to_frame(const Frame& frame, const PolyVectorField& v_coord) {
  const std::size_t n = frame.nvars();
  if (frame.size() != n || v_coord.components.size() != n)
    throw DimensionMismatch("to_frame: frame must be square");
  const auto& cw = frame.coordinates.weights;
  std::vector<int> classes(cw.begin(), cw.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  PolyVectorField out = PolyVectorField::zero(n, n);
  for (int w : classes) {
    std::vector<std::size_t> coords, fields;
    for (std::size_t j = 0; j < n; ++j)
      if (cw[j] == w) coords.push_back(j);
    for (std::size_t i = 0; i < n; ++i)
      if (frame.weights[i] == w) fields.push_back(i);
    if (coords.size() != fields.size()) throw FrameError("frame and coordinate weights disagree");
    // residual of v after removing already solved lighter fields
    std::vector<Polynomial> rhs;
    for (auto j : coords) {
      Polynomial r = v_coord.components[j];
      for (std::size_t i = 0; i < n; ++i)
        if (frame.weights[i] < w && !out.components[i].is_zero() && !frame.fields[i].components[j].is_zero())
          r -= out.components[i] * frame.fields[i].components[j];
      rhs.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < n; ++i)
      if (frame.weights[i] > w)
        for (auto j : coords)
          if (!frame.fields[i].components[j].is_zero())
            throw FrameError("frame field of weight " + std::to_string(frame.weights[i]) +
                             " has a component along a lighter coordinate");
    std::vector<std::vector<Polynomial>> block(coords.size(), std::vector<Polynomial>(fields.size()));
    for (std::size_t r = 0; r < coords.size(); ++r)
      for (std::size_t c = 0; c < fields.size(); ++c) block[r][c] = frame.fields[fields[c]].components[coords[r]];
    const Matrix inv = constant_inverse(block);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      Polynomial value(n);
      for (std::size_t r = 0; r < coords.size(); ++r)
        if (!inv(c, r).is_zero()) value += inv(c, r) * rhs[r];
      out.components[fields[c]] = std::move(value);
    }
  }
  return out;
}

Frame compose(const Frame& frame, const PolyMap& map) {
  Frame out = frame;
  for (auto& f : out.fields)
    for (auto& c : f.components) c = c.compose(map);
  return out;
}

std::vector<std::vector<Polynomial>> jacobian(const PolyMap& map) {
  std::vector<std::vector<Polynomial>> j(map.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    for (std::size_t k = 0; k < map[i].nvars(); ++k) j[i].push_back(map[i].derivative(k));
  return j;
}

std::string render(const PolyVectorField& v, const std::vector<std::string>& coefficient_names,
                   const std::vector<std::string>& direction_names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = v.components.size(); i-- > 0;) {
    if (v.components[i].is_zero()) continue;
    os << (first ? "" : " + ") << '(' << v.components[i].str(coefficient_names) << ")*" << direction_names[i];
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace carnot
