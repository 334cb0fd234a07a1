#include "carnot/problem.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace carnot {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Scanner over one line; columns are 1-based.
struct Cursor {
  std::string_view text;
  std::size_t line;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line, pos + 1, message); }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string identifier() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) fail("expected a name");
    const std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }
  std::optional<Rational> number() {
    skip_ws();
    if (pos >= text.size() || !digit(text[pos])) return std::nullopt;
    const std::size_t start = pos;
    while (pos < text.size() && digit(text[pos])) ++pos;
    if (pos < text.size() && text[pos] == '/') {
      ++pos;
      if (pos >= text.size() || !digit(text[pos])) fail("expected a denominator");
      while (pos < text.size() && digit(text[pos])) ++pos;
    }
    const auto token = text.substr(start, pos - start);
    try {
      return Rational::parse(token);
    } catch (const std::exception&) {
      pos = start;
      fail("invalid rational '" + std::string(token) + "'");
    }
  }
  void end() {
    if (!done()) fail("unexpected '" + std::string(1, text[pos]) + "'");
  }
};

// sum of [+|-] [rational [*]] atom; atom parsed by the callback. A lone "0" is the empty sum.
template <class Atom>
void linear_combination(Cursor& c, Atom&& atom) {
  bool first = true;
  if (c.peek() == '0') {
    const std::size_t save = c.pos;
    c.number();
    if (c.done()) return;
    c.pos = save;
  }
  while (true) {
    Rational sign(1);
    if (c.accept('-')) sign = Rational(-1);
    else if (!first && !c.accept('+')) c.fail("expected '+' or '-'");
    else if (first) c.accept('+');
    Rational coef(1);
    if (auto n = c.number()) {
      coef = *n;
      c.accept('*');
    }
    atom(sign * coef);
    first = false;
    if (c.done()) return;
  }
}

int parse_int(Cursor& c, int lo, int hi) {
  c.skip_ws();
  const std::size_t start = c.pos;
  auto n = c.number();
  if (!n || !n->is_integer()) {
    c.pos = start;
    c.fail("expected an integer");
  }
  c.end();
  if (*n < Rational(lo) || *n > Rational(hi)) {
    c.pos = start;
    c.fail("value out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(n->numerator().get_si());
}

enum class Section { none, algebra, g0, recipe, options };

}  // namespace

ProblemSpec parse_problem(std::string_view text) {
  ProblemSpec p;
  Section section = Section::none;
  std::map<std::string, std::size_t> seen_keys;
  bool have_name = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Cursor c{raw, lineno};
    if (c.done()) continue;

    const bool bracket_line = c.peek() == '[' && raw.find(',') != std::string::npos;
    if (c.peek() == '[' && !bracket_line) {
      c.expect('[');
      const std::size_t at = c.pos;
      const std::string name = c.identifier();
      c.expect(']');
      c.end();
      if (name == "algebra") section = Section::algebra;
      else if (name == "g0") section = Section::g0;
      else if (name == "recipe") section = Section::recipe;
      else if (name == "options") section = Section::options;
      else {
        c.pos = at;
        c.fail("unknown section '" + name + "'");
      }
      continue;
    }
    if (bracket_line) {
      if (section != Section::algebra) c.fail("bracket relation outside [algebra]");
      BracketRelation rel;
      rel.line = lineno;
      c.expect('[');
      rel.left = c.identifier();
      c.expect(',');
      rel.right = c.identifier();
      c.expect(']');
      c.expect('=');
      if (c.done()) c.fail("expected a right-hand side");
      linear_combination(c, [&](const Rational& coef) { rel.terms.emplace_back(coef, c.identifier()); });
      p.algebra.brackets.push_back(std::move(rel));
      continue;
    }

    const std::size_t key_at = (c.skip_ws(), c.pos);
    const std::string key = c.identifier();
    c.expect('=');
    auto misplaced = [&](const char* where) {
      c.pos = key_at;
      c.fail("key '" + key + "' is not valid in " + where);
    };
    auto once = [&] {
      const std::string full = std::to_string(static_cast<int>(section)) + key;
      if (seen_keys.count(full)) {
        c.pos = key_at;
        c.fail("duplicate key '" + key + "'");
      }
      seen_keys[full] = lineno;
    };
    switch (section) {
      case Section::none:
        c.pos = key_at;
        c.fail("expected a section header such as [algebra]");
      case Section::algebra:
        if (key == "name") {
          once();
          p.algebra.name = c.identifier();
          c.end();
          have_name = true;
        } else if (key == "layer") {
          std::vector<std::string> layer;
          while (!c.done()) layer.push_back(c.identifier());
          if (layer.empty()) c.fail("layer lists no generators");
          p.algebra.layers.push_back(std::move(layer));
        } else {
          misplaced("[algebra]");
        }
        break;
      case Section::g0:
        if (key == "kind") {
          once();
          const std::size_t at = (c.skip_ws(), c.pos);
          const std::string kind = c.identifier();
          c.end();
          if (kind == "conformal") p.g0_kind = GZeroConstraint::Kind::conformal;
          else if (kind == "full_derivations") p.g0_kind = GZeroConstraint::Kind::full_derivations;
          else if (kind == "explicit") p.g0_kind = GZeroConstraint::Kind::explicit_conditions;
          else {
            c.pos = at;
            c.fail("unknown g0 kind '" + kind + "'");
          }
        } else if (key == "condition") {
          std::vector<ConditionTerm> terms;
          linear_combination(c, [&](const Rational& coef) {
            const std::size_t at = (c.skip_ws(), c.pos);
            if (c.identifier() != "d") {
              c.pos = at;
              c.fail("expected d(row,col)");
            }
            c.expect('(');
            ConditionTerm t{coef, c.identifier(), ""};
            c.expect(',');
            t.col = c.identifier();
            c.expect(')');
            terms.push_back(std::move(t));
          });
          p.conditions.emplace_back(lineno, std::move(terms));
        } else {
          misplaced("[g0]");
        }
        break;
      case Section::recipe:
        if (key == "factor") {
          if (!p.recipe) {
            p.recipe.emplace();
            p.recipe_line = lineno;
          }
          std::vector<std::pair<std::string, std::string>> factor;
          while (!c.done()) {
            std::string gen = c.identifier();
            c.expect(':');
            factor.emplace_back(std::move(gen), c.identifier());
          }
          if (factor.empty()) c.fail("factor lists no generators");
          p.recipe->push_back(std::move(factor));
        } else {
          misplaced("[recipe]");
        }
        break;
      case Section::options:
        if (key == "max_k") {
          once();
          p.max_k = parse_int(c, 1, 64);
        } else if (key == "oracle_degree") {
          once();
          p.oracle_degree = parse_int(c, 0, 32);
        } else {
          misplaced("[options]");
        }
        break;
    }
  }
  if (!have_name) throw ParseError(lineno + 1, 1, "missing 'name' in [algebra]");
  if (p.algebra.layers.empty()) throw ParseError(lineno + 1, 1, "missing 'layer' in [algebra]");
  if (!p.conditions.empty() && p.g0_kind != GZeroConstraint::Kind::explicit_conditions)
    throw ParseError(p.conditions.front().first, 1, "'condition' requires kind = explicit");
  return p;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

GZeroConstraint resolve_constraint(const ProblemSpec& p, const GradedLieAlgebra& g) {
  switch (p.g0_kind) {
    case GZeroConstraint::Kind::conformal: return GZeroConstraint::conformal();
    case GZeroConstraint::Kind::full_derivations: return GZeroConstraint::full();
    case GZeroConstraint::Kind::explicit_conditions: break;
  }
  const std::size_t m = g.layer_dim(-1);
  std::vector<Matrix> conditions;
  for (const auto& [line, terms] : p.conditions) {
    Matrix c(m, m);
    for (const auto& t : terms) {
      auto position = [&](const std::string& name) {
        auto i = g.index_of(name);
        if (!i || g.weight(*i) != -1) throw ParseError(line, 1, "'" + name + "' is not a first-layer generator");
        return g.position_in_layer(*i);
      };
      c(position(t.row), position(t.col)) += t.coef;
    }
    conditions.push_back(std::move(c));
  }
  return GZeroConstraint::explicit_conditions(std::move(conditions));
}

CoordinateRecipe resolve_recipe(const ProblemSpec& p, const GradedLieAlgebra& g) {
  if (!p.recipe) return CoordinateRecipe::first_kind(g);
  CoordinateRecipe r;
  r.coordinate_names.assign(g.dim(), "");
  for (const auto& factor : *p.recipe) {
    std::vector<std::size_t> indices;
    for (const auto& [gen, coord] : factor) {
      auto i = g.index_of(gen);
      if (!i) throw ParseError(p.recipe_line, 1, "recipe names unknown generator '" + gen + "'");
      indices.push_back(*i);
      r.coordinate_names[*i] = coord;
    }
    r.factors.push_back(std::move(indices));
  }
  return r;
}

}  // namespace carnot
