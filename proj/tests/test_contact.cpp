#include <gtest/gtest.h>

#include "carnot/contact.hpp"
#include "support.hpp"

using namespace carnot;
using carnot::testing::random_vector;

namespace {

const std::vector<std::string> xyz{"x1", "x2", "y", "z"};
Polynomial P(const std::string& s) { return Polynomial::parse(s, xyz); }

struct Engel {
  GradedLieAlgebra g = build_algebra(presets::engel());
  Group G{g, CoordinateRecipe::engel(g)};
  Frame frame = left_invariant_frame(G);
  std::pair<ProlongationAlgebra, TerminationReport> pro =
      full_prolongation(g, constrain_g0(g, strata_derivations(g), GZeroConstraint::conformal()));
  TauRealization tau = realize_tau(pro.first, G);
  const ProlongationAlgebra& s() const { return pro.first; }
};

const Engel& engel() {
  static const Engel e;
  return e;
}

// The Engel contact and conformal systems written out directly for V = f1 X1 + f2 X2 + g Y + h Z.
std::vector<Polynomial> written_contact(const Frame& fr, const PolyVectorField& v) {
  const auto& [f1, f2, g, h] = std::tie(v.components[0], v.components[1], v.components[2], v.components[3]);
  return {apply(fr, 0, g) + f2, apply(fr, 0, h) + g, apply(fr, 1, g) - f1, apply(fr, 1, h), apply(fr, 2, h) - f1};
}
std::vector<Polynomial> written_conformal(const Frame& fr, const PolyVectorField& v) {
  const auto& f1 = v.components[0];
  const auto& f2 = v.components[1];
  return {apply(fr, 0, f1) - apply(fr, 1, f2), apply(fr, 1, f1) + apply(fr, 0, f2)};
}
bool all_zero(const std::vector<Polynomial>& ps) {
  for (const auto& p : ps)
    if (!p.is_zero()) return false;
  return true;
}

PolyVectorField family(const Frame& fr, const Polynomial& f, int y_sign) {
  const Polynomial x1f = apply(fr, 0, f);
  return {{Polynomial(4), apply(fr, 0, x1f), Rational(y_sign) * x1f, f}};
}

}  // namespace

TEST(Defects, TauFieldsAreConformal) {
  const auto& e = engel();
  for (const auto& v : e.tau.fields) {
    EXPECT_TRUE(contact_defect(v, e.frame).all_zero);
    EXPECT_TRUE(conformal_defect(v, e.frame).all_zero);
    EXPECT_TRUE(all_zero(written_contact(e.frame, v)));
    EXPECT_TRUE(all_zero(written_conformal(e.frame, v)));
  }
}

TEST(Defects, AgreeWithWrittenOutSystem) {
  // the general horizontality test and the written-out system have the same solutions
  std::mt19937 rng(61);
  const auto& e = engel();
  const auto sol = solve_polynomial_conformal(e.g, e.frame, 3);
  for (int trial = 0; trial < 20; ++trial) {
    PolyVectorField v = sol.field(random_vector(rng, sol.dim()));
    EXPECT_TRUE(all_zero(written_contact(e.frame, v)));
    EXPECT_TRUE(all_zero(written_conformal(e.frame, v)));
    v.components[static_cast<std::size_t>(rng() % 4)] += P("x2*y");
    EXPECT_EQ(contact_defect(v, e.frame).all_zero, all_zero(written_contact(e.frame, v)));
  }
}

TEST(Defects, LeftInvariantYIsNotContact) {
  const auto& e = engel();
  const PolyVectorField v{{P("0"), P("0"), P("1"), P("0")}};
  const auto d = contact_defect(v, e.frame);
  EXPECT_FALSE(d.all_zero);
  EXPECT_EQ(d.failing(), (std::vector<std::string>{"[V,X1].Z"}));
  EXPECT_THROW(conformal_defect(v, e.frame), NotContact);
}

TEST(ContactFamily, SignConsistentWithContactEquations) {
  const auto& e = engel();
  for (unsigned k = 0; k <= 6; ++k) {
    const Polynomial f = Polynomial::variable(4, 0).pow(k);
    const auto v = family(e.frame, f, -1);
    EXPECT_EQ(v, field_from_h(e.frame, f));
    EXPECT_TRUE(contact_defect(v, e.frame).all_zero) << k;
    EXPECT_EQ(conformal_defect(v, e.frame).all_zero, k <= 2) << k;
  }
}

TEST(ContactFamily, PlusSignOnYIsNotContact) {
  // fZ + (X1 f)Y + (X1^2 f)X2 violates X1 h = -g as soon as X1 f != 0
  const auto& e = engel();
  EXPECT_TRUE(contact_defect(family(e.frame, P("1"), 1), e.frame).all_zero);
  for (unsigned k = 1; k <= 6; ++k)
    EXPECT_FALSE(contact_defect(family(e.frame, Polynomial::variable(4, 0).pow(k), 1), e.frame).all_zero) << k;
}

TEST(Jets, TauDHasA0EqualD) {
  std::mt19937 rng(62);
  const auto& e = engel();
  Matrix d(4, 4);
  d(0, 0) = 1, d(1, 1) = 1, d(2, 2) = 2, d(3, 3) = 3;
  for (int trial = 0; trial < 5; ++trial) {
    const auto j = jet(e.tau.fields[4], random_vector(rng, 4), 1, e.g, e.frame);
    EXPECT_EQ(j.zero_part.to_matrix(e.g), d);
    EXPECT_TRUE(jet_jacobi_check(j, e.g));
    EXPECT_TRUE(j.one_part->is_zero());
  }
}

TEST(Jets, A0InG0AndA1VanishForAllTau) {
  std::mt19937 rng(63);
  const auto& e = engel();
  const Subspace& g0 = e.s().levels().front();
  for (const auto& v : e.tau.fields)
    for (int trial = 0; trial < 5; ++trial) {
      const GroupPoint p = random_vector(rng, 4);
      const auto j = jet(v, p, 1, e.g, e.frame);
      EXPECT_TRUE(g0.contains(j.zero_part.flat(e.g)));
      EXPECT_TRUE(jet_jacobi_check(j, e.g));
      EXPECT_TRUE(j.one_part->is_zero());
      const auto u = one_part_as_graded_map(j, e.s());
      ASSERT_TRUE(u.has_value());
      EXPECT_TRUE(e.s().stack().satisfies_leibniz(*u));
      // the (g0) and (g1) identities as polynomials
      const auto& [f1, f2, g, h] = std::tie(v.components[0], v.components[1], v.components[2], v.components[3]);
      const Polynomial x1f1 = apply(e.frame, 0, f1);
      EXPECT_EQ(apply(e.frame, 2, g), Rational(2) * x1f1);
      EXPECT_EQ(apply(e.frame, 3, h), Rational(3) * x1f1);
      EXPECT_TRUE(apply(e.frame, 0, x1f1).is_zero());
      EXPECT_TRUE(apply(e.frame, 1, apply(e.frame, 1, f2)).is_zero());
    }
}

TEST(Jets, ConstantAndOriginCases) {
  const auto& e = engel();
  const auto jz = jet(e.tau.fields[3], GroupPoint{Rational(3), Rational(-1), Rational(1, 2), Rational(7)}, 1, e.g, e.frame);
  EXPECT_EQ(jz.zero_part, DegreeZeroMap::zero(e.g));
  EXPECT_TRUE(jz.one_part->is_zero());
  EXPECT_EQ(jz.minus_parts.size(), 3u);
  const auto jx2 = jet(e.tau.fields[1], GroupPoint(4), 0, e.g, e.frame);
  EXPECT_EQ(jx2.zero_part, DegreeZeroMap::zero(e.g));
  EXPECT_FALSE(jx2.one_part.has_value());
  EXPECT_EQ(jx2.minus_parts[0], e.g.unit(1));
}

TEST(Jets, CorruptedA0FailsJacobi) {
  const auto& e = engel();
  auto j = jet(e.tau.fields[4], GroupPoint(4), 0, e.g, e.frame);
  j.zero_part.blocks[0](0, 1) = 1;
  EXPECT_FALSE(jet_jacobi_check(j, e.g));
}

TEST(Jets, NonContactThrows) {
  const auto& e = engel();
  EXPECT_THROW(jet(PolyVectorField{{P("0"), P("0"), P("1"), P("0")}}, GroupPoint(4), 0, e.g, e.frame), NotContact);
}

TEST(HSystem, LiteralSystemIsLargerThanConformalSpace) {
  const auto& e = engel();
  const auto literal = solve_h_system(e.frame);
  EXPECT_EQ(literal.space.dim(), 7u);
  // the two extra solutions, checked by hand
  for (const char* extra : {"x1*y - x1^2*x2", "x1*z - 1/2*x1^2*y"}) {
    const Polynomial h = P(extra);
    EXPECT_TRUE(apply(e.frame, 0, apply(e.frame, 0, apply(e.frame, 0, h))).is_zero());
    EXPECT_TRUE(apply(e.frame, 1, h).is_zero());
    EXPECT_TRUE(apply(e.frame, 2, apply(e.frame, 2, h)).is_zero());
    EXPECT_TRUE(apply(e.frame, 3, apply(e.frame, 3, h)).is_zero());
    EXPECT_FALSE(conformal_defect(field_from_h(e.frame, h), e.frame).all_zero);
  }
}

TEST(HSystem, ConformalSpaceIsTauHComponents) {
  const auto& e = engel();
  const auto conf = solve_conformal_h(e.frame);
  ASSERT_EQ(conf.space.dim(), 5u);
  std::vector<Vector> tau_h;
  for (const auto& v : e.tau.fields) {
    Vector coeffs(conf.monomials.size());
    for (std::size_t i = 0; i < conf.monomials.size(); ++i) coeffs[i] = v.components[3].coefficient(conf.monomials[i]);
    tau_h.push_back(coeffs);
  }
  EXPECT_EQ(Subspace::span(conf.monomials.size(), tau_h), conf.space);
  for (const auto& h : conf.basis_polynomials()) EXPECT_TRUE(conformal_defect(field_from_h(e.frame, h), e.frame).all_zero);
  EXPECT_EQ(field_from_h(e.frame, P("1")), e.tau.fields[3]);
  EXPECT_EQ(field_from_h(e.frame, P("-x1")), e.tau.fields[2]);
}

TEST(Oracle, EngelStableAndEqualToTau) {
  const auto& e = engel();
  for (int d = 3; d <= 6; ++d) {
    const auto sol = solve_polynomial_conformal(e.g, e.frame, d);
    EXPECT_EQ(sol.dim(), 5u) << d;
    std::vector<Vector> enc;
    for (const auto& v : e.tau.fields) enc.push_back(sol.encode(v).value());
    EXPECT_EQ(Subspace::span(sol.unknowns.size(), enc), sol.space);
  }
}

TEST(Oracle, BasisFieldsSolveTheSystem) {
  const auto& e = engel();
  const auto sol = solve_polynomial_conformal(e.g, e.frame, 4);
  for (const auto& v : sol.basis_fields()) {
    EXPECT_TRUE(contact_defect(v, e.frame).all_zero);
    EXPECT_TRUE(conformal_defect(v, e.frame).all_zero);
  }
  PolyVectorField outside = PolyVectorField::zero(4, 4);
  outside.components[0] = P("x1^9");
  EXPECT_FALSE(sol.encode(outside).has_value());
}

TEST(Oracle, AgreesWithProlongationElsewhere) {
  struct Case {
    AlgebraSpec spec;
    int degree;
    std::size_t expected;
  };
  for (const auto& c : {Case{presets::heisenberg(), 4, 8}, Case{presets::abelian(3), 3, 10}}) {
    const auto g = build_algebra(c.spec);
    const Group G(g, CoordinateRecipe::first_kind(g));
    const Frame frame = left_invariant_frame(G);
    const auto [s, report] = full_prolongation(g, constrain_g0(g, strata_derivations(g), GZeroConstraint::conformal()));
    const auto sol = solve_polynomial_conformal(g, frame, c.degree);
    EXPECT_EQ(sol.dim(), c.expected);
    EXPECT_EQ(sol.dim(), report.total_dim);
    const auto tau = realize_tau(s, G);
    std::vector<Vector> enc;
    for (const auto& v : tau.fields) enc.push_back(sol.encode(v).value());
    EXPECT_EQ(Subspace::span(sol.unknowns.size(), enc), sol.space);
  }
}

TEST(Oracle, LowDegreeUnderestimates) {
  const auto g = build_algebra(presets::heisenberg());
  const Group G(g, CoordinateRecipe::first_kind(g));
  EXPECT_EQ(solve_polynomial_conformal(g, left_invariant_frame(G), 1).dim(), 7u);
}

TEST(Oracle, R2IsInfinite) {
  // holomorphic polynomial fields: dimension grows with the cutoff
  const auto g = build_algebra(presets::abelian(2));
  const Group G(g, CoordinateRecipe::first_kind(g));
  const Frame frame = left_invariant_frame(G);
  EXPECT_EQ(solve_polynomial_conformal(g, frame, 2).dim(), 8u);
  EXPECT_EQ(solve_polynomial_conformal(g, frame, 3).dim(), 10u);
}
