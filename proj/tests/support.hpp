#pragma once

#include <random>
#include <vector>

#include "carnot/linalg.hpp"

namespace carnot::testing {

// Small rationals p/q with |p| <= span, 1 <= q <= 4.
inline Rational random_rational(std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 4);
  return Rational(num(rng), den(rng));
}

inline Vector random_vector(std::mt19937& rng, std::size_t n, int span = 5) {
  Vector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_rational(rng, span));
  return v;
}

// Sparse-ish random matrix; `density` in percent.
inline Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int density = 60) {
  std::uniform_int_distribution<int> pct(0, 99);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (pct(rng) < density) m(i, j) = random_rational(rng);
  return m;
}

// Rank by plain mpq elimination, picking the last nonzero pivot in each
// column; shares nothing with the library's RREF.
inline std::size_t oracle_rank(const Matrix& m) {
  std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j).raw();
  std::size_t rank = 0;
  for (std::size_t col = m.cols(); col-- > 0 && rank < a.size();) {
    std::size_t piv = a.size();
    for (std::size_t i = a.size(); i-- > rank;)
      if (sgn(a[i][col]) != 0) {
        piv = i;
        break;
      }
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (sgn(a[i][col]) == 0) continue;
      const mpq_class f = a[i][col] / a[rank][col];
      for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}


}  // namespace carnot::testing
