#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Exponent vector of a monomial.
using Monomial = std::vector<int>;

/// Named coordinates with positive weights (x1, x2 weight 1, y weight 2, ...).
struct CoordinateSystem {
  std::vector<std::string> names;
  std::vector<int> weights;

  std::size_t size() const { return names.size(); }
  friend bool operator==(const CoordinateSystem&, const CoordinateSystem&) = default;
};

/// Sparse multivariate polynomial over Q in a fixed number of variables.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  static Polynomial term(std::size_t nvars, Monomial exponents, const Rational& c);
  /// Parses sums of terms like "3*z - 2*x1*y + 1/2*x1^2*x2" over the given names.
  static Polynomial parse(std::string_view text, const std::vector<std::string>& names);

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }
  friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
  Polynomial operator-() const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial pow(unsigned e) const;
  Polynomial derivative(std::size_t var) const;
  Rational evaluate(std::span<const Rational> point) const;
  /// Substitutes subs[i] for variable i; every substitute must share one ring.
  Polynomial compose(const std::vector<Polynomial>& subs) const;

  /// Largest weighted degree of a term; -1 for the zero polynomial.
  int weighted_degree(std::span<const int> weights) const;
  bool is_homogeneous(std::span<const int> weights, int degree) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  std::size_t nvars_;
  std::map<Monomial, Rational> terms_;
};

/// All exponent vectors of the given weighted degree, in lexicographic order.
std::vector<Monomial> monomials_of_weighted_degree(std::span<const int> weights, int degree);

}  // namespace carnot
