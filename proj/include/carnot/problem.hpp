#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/derivations.hpp"
#include "carnot/graded_lie.hpp"
#include "carnot/contact.hpp"
#include "carnot/group.hpp"

namespace carnot {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// One explicit g0 condition: sum of coef * d(row, col) over first-layer names.
struct ConditionTerm {
  Rational coef;
  std::string row;
  std::string col;
};

/// Recipe as written: per factor, the (generator, coordinate) pairs.
using RecipeText = std::vector<std::vector<std::pair<std::string, std::string>>>;

/// Contents of an algebra spec file:
///
///   [algebra]            name, layer (repeated, weight -1 first), brackets
///   [g0]                 kind = conformal | full_derivations | explicit
///                        condition = d(X1,X1) - d(X2,X2)   (explicit only)
///   [recipe]             factor = X2:x2 Y:y Z:z            (repeated, left to right)
///   [options]            max_k, oracle_degree
struct ProblemSpec {
  AlgebraSpec algebra;
  GZeroConstraint::Kind g0_kind = GZeroConstraint::Kind::conformal;
  std::vector<std::pair<std::size_t, std::vector<ConditionTerm>>> conditions;  // (line, terms)
  std::optional<RecipeText> recipe;
  std::size_t recipe_line = 0;
  int max_k = default_max_k;
  int oracle_degree = default_oracle_degree;
};

ProblemSpec parse_problem(std::string_view text);
/// Throws ParseError at line 0 if the file cannot be read.
ProblemSpec load_problem(const std::filesystem::path& path);

/// Resolves explicit conditions against the built algebra. Throws ParseError on unknown names.
GZeroConstraint resolve_constraint(const ProblemSpec& p, const GradedLieAlgebra& g);
/// The declared recipe, or first-kind coordinates when none is given.
CoordinateRecipe resolve_recipe(const ProblemSpec& p, const GradedLieAlgebra& g);

}  // namespace carnot
