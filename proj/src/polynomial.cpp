#include "carnot/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "carnot/linalg.hpp"

namespace carnot {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Monomial m(nvars, 0);
  m.at(i) = 1;
  return term(nvars, std::move(m), Rational(1));
}

Polynomial Polynomial::term(std::size_t nvars, Monomial exponents, const Rational& c) {
  if (exponents.size() != nvars) throw DimensionMismatch("monomial length != variable count");
  Polynomial p(nvars);
  p.add_term(exponents, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(),
                                                                terms_.begin()->first.end(),
                                                                [](int e) { return e == 0; }));
}

Rational Polynomial::constant_term() const { return coefficient(Monomial(nvars_, 0)); }

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != nvars_) throw DimensionMismatch("monomial length != variable count");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial rings differ");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial rings differ");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionMismatch("polynomial rings differ");
  Polynomial out(a.nvars_);
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  return out *= Rational(-1);
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial out = constant(nvars_, Rational(1));
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.at(var) == 0) continue;
    Monomial d = m;
    --d[var];
    out.add_term(d, c * Rational(m[var]));
  }
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw DimensionMismatch("evaluation point has the wrong length");
  Rational total;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i]) t *= point[i].pow(static_cast<unsigned>(m[i]));
    total += t;
  }
  return total;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  if (subs.size() != nvars_) throw DimensionMismatch("compose: substitution count != variable count");
  const std::size_t target = subs.empty() ? 0 : subs.front().nvars();
  for (const auto& s : subs)
    if (s.nvars() != target) throw DimensionMismatch("compose: substitutes live in different rings");
  std::vector<std::vector<Polynomial>> powers(nvars_);
  Polynomial out(target);
  for (const auto& [m, c] : terms_) {
    Polynomial t = constant(target, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(target, Rational(1)));
      while (cache.size() <= static_cast<std::size_t>(m[i])) cache.push_back(cache.back() * subs[i]);
      t = t * cache[static_cast<std::size_t>(m[i])];
    }
    out += t;
  }
  return out;
}

int Polynomial::weighted_degree(std::span<const int> weights) const {
  if (weights.size() != nvars_) throw DimensionMismatch("weights length != variable count");
  int best = -1;
  for (const auto& [m, c] : terms_) {
    int d = 0;
    for (std::size_t i = 0; i < nvars_; ++i) d += m[i] * weights[i];
    best = std::max(best, d);
  }
  return best;
}

bool Polynomial::is_homogeneous(std::span<const int> weights, int degree) const {
  for (const auto& [m, c] : terms_) {
    int d = 0;
    for (std::size_t i = 0; i < nvars_; ++i) d += m[i] * weights[i];
    if (d != degree) return false;
  }
  return true;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  // highest total degree first, lexicographically larger exponents first within a degree
  std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
  auto total = [](const Monomial& m) {
    int s = 0;
    for (int e : m) s += e;
    return s;
  };
  std::stable_sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
    const int da = total(a.first), db = total(b.first);
    return da != db ? da > db : a.first > b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : ordered) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (first)
      os << (c.sign() < 0 ? "-" : "");
    else
      os << (c.sign() < 0 ? " - " : " + ");
    first = false;
    bool wrote = false;
    const bool unit = mag == Rational(1);
    if (!unit || total(m) == 0) {
      os << mag;
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      os << (wrote ? "*" : "") << (i < names.size() ? names[i] : "v" + std::to_string(i));
      if (m[i] > 1) os << '^' << m[i];
      wrote = true;
    }
  }
  return os.str();
}

Polynomial Polynomial::parse(std::string_view text, const std::vector<std::string>& names) {
  const std::size_t n = names.size();
  Polynomial out(n);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(pos) + ": " + what);
  };
  skip();
  if (pos == text.size()) fail("empty polynomial");
  bool first = true;
  while (true) {
    skip();
    if (pos == text.size()) break;
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    Rational coef(sign);
    Monomial m(n, 0);
    bool any_factor = false;
    while (true) {
      skip();
      if (pos == text.size()) break;
      if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
        std::size_t end = pos;
        while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '/')) ++end;
        coef *= Rational::parse(text.substr(pos, end - pos));
        pos = end;
      } else if (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_') {
        std::size_t end = pos;
        while (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_')) ++end;
        const std::string name(text.substr(pos, end - pos));
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) fail("unknown variable '" + name + "'");
        pos = end;
        int e = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip();
          std::size_t d = pos;
          while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d]))) ++d;
          if (d == pos) fail("expected exponent");
          e = std::stoi(std::string(text.substr(pos, d - pos)));
          pos = d;
        }
        m[static_cast<std::size_t>(it - names.begin())] += e;
      } else {
        fail("unexpected character");
      }
      any_factor = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any_factor) fail("empty term");
    out.add_term(m, coef);
  }
  return out;
}

std::vector<Monomial> monomials_of_weighted_degree(std::span<const int> weights, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial m(weights.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (i == weights.size()) {
      if (remaining == 0) out.push_back(m);
      return;
    }
    for (int e = 0; e * weights[i] <= remaining; ++e) {
      m[i] = e;
      self(self, i + 1, remaining - e * weights[i]);
    }
    m[i] = 0;
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace carnot
