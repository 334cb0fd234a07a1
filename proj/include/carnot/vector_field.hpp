#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/polynomial.hpp"

namespace carnot {

/// Vector field with polynomial coefficients. Whether the components refer
/// to coordinate derivations or to a frame is fixed by the producing call.
struct PolyVectorField {
  std::vector<Polynomial> components;

  static PolyVectorField zero(std::size_t count, std::size_t nvars);
  bool is_zero() const;
  PolyVectorField& operator+=(const PolyVectorField& o);
  PolyVectorField& operator-=(const PolyVectorField& o);
  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
  friend PolyVectorField operator*(const Rational& c, PolyVectorField v);
  friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;
};

/// Polynomial self-map of coordinate space: the i-th entry is the image coordinate i.
using PolyMap = std::vector<Polynomial>;

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial frame of the tangent bundle, one field per algebra basis
/// element, given in coordinate form. Field i has weight weights[i]; a field
/// of weight w only has components along coordinates of weight >= w.
struct Frame {
  CoordinateSystem coordinates;
  std::vector<PolyVectorField> fields;
  std::vector<int> weights;
  /// Display name of each field, e.g. the algebra basis name.
  std::vector<std::string> names;

  std::size_t size() const { return fields.size(); }
  std::size_t nvars() const { return coordinates.size(); }
  /// Number of weight-1 (horizontal) fields; they come first in basis order.
  std::size_t horizontal_dim() const;
  /// Indices of fields with weight 1.
  std::vector<std::size_t> horizontal() const;
};

/// Directional derivative V f of a polynomial along a coordinate-form field.
Polynomial apply(const PolyVectorField& v, const Polynomial& f);
/// Applies frame field i to f.
Polynomial apply(const Frame& frame, std::size_t i, const Polynomial& f);

/// [V, W] = V(W) - W(V) for coordinate-form fields.
PolyVectorField lie_bracket(const PolyVectorField& v, const PolyVectorField& w);

PolyVectorField to_coordinates(const Frame& frame, const PolyVectorField& v_frame);
/// Solves v_coord = sum c_i X_i for the frame components c. The frame matrix
/// must be block unipotent with respect to weights (constant invertible
/// blocks on equal weights); FrameError otherwise.
PolyVectorField to_frame(const Frame& frame, const PolyVectorField& v_coord);

/// The frame evaluated along a map: field coefficients composed with `map`.
Frame compose(const Frame& frame, const PolyMap& map);

/// Jacobian J(i, j) = d map_i / d x_j.
std::vector<std::vector<Polynomial>> jacobian(const PolyMap& map);

std::string render(const PolyVectorField& v, const std::vector<std::string>& coefficient_names,
                   const std::vector<std::string>& direction_names);

}  // namespace carnot
