#pragma once

#include <map>
#include <utility>
#include <vector>

#include "carnot/linalg.hpp"
#include "carnot/polynomial.hpp"

namespace carnot::detail {

/// Collects a linear system whose columns are lists of polynomial residuals;
/// each (residual index, monomial) pair becomes one scalar equation.
class PolySystem {
 public:
  std::size_t add_column(const std::vector<Polynomial>& residuals) {
    columns_.push_back(encode(residuals));
    return columns_.size() - 1;
  }

  std::vector<std::pair<std::size_t, Rational>> encode(const std::vector<Polynomial>& residuals) {
    std::vector<std::pair<std::size_t, Rational>> entries;
    for (std::size_t r = 0; r < residuals.size(); ++r)
      for (const auto& [m, c] : residuals[r].terms()) {
        auto [it, inserted] = rows_.emplace(std::make_pair(r, m), rows_.size());
        entries.emplace_back(it->second, c);
      }
    return entries;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return columns_.size(); }

  Matrix matrix() const {
    Matrix m(rows_.size(), columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c)
      for (const auto& [r, v] : columns_[c]) m(r, c) = v;
    return m;
  }

  Vector dense(const std::vector<std::pair<std::size_t, Rational>>& entries) const {
    Vector v(rows_.size());
    for (const auto& [r, x] : entries) v.at(r) = x;
    return v;
  }

 private:
  std::map<std::pair<std::size_t, Monomial>, std::size_t> rows_;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns_;
};

}  // namespace carnot::detail
