#include <gtest/gtest.h>

#include "carnot/group.hpp"
#include "support.hpp"

using namespace carnot;
using carnot::testing::random_vector;

namespace {

const std::vector<std::string> xyz{"x1", "x2", "y", "z"};

Matrix unit_matrix(std::size_t n, std::size_t r, std::size_t c) {
  Matrix m(n, n);
  m(r - 1, c - 1) = 1;
  return m;
}

// Faithful upper-triangular representations, basis order as in the presets.
std::vector<Matrix> engel_rep() {
  return {unit_matrix(4, 1, 2) + unit_matrix(4, 2, 3) + unit_matrix(4, 3, 4), unit_matrix(4, 3, 4),
          unit_matrix(4, 2, 4), unit_matrix(4, 1, 4)};
}
std::vector<Matrix> heisenberg_rep() { return {unit_matrix(3, 1, 2), unit_matrix(3, 2, 3), unit_matrix(3, 1, 3)}; }

Matrix rep(const std::vector<Matrix>& basis, const Vector& x) {
  Matrix m(basis[0].rows(), basis[0].cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Matrix t = basis[i];
    for (std::size_t r = 0; r < t.rows(); ++r)
      for (std::size_t c = 0; c < t.cols(); ++c) t(r, c) *= x[i];
    m = m + t;
  }
  return m;
}

Matrix scaled(Matrix m, const Rational& s) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) *= s;
  return m;
}

// Nilpotent of order <= 4.
Matrix mexp(const Matrix& n) {
  const Matrix n2 = n * n, n3 = n2 * n;
  return Matrix::identity(n.rows()) + n + scaled(n2, Rational(1, 2)) + scaled(n3, Rational(1, 6));
}
Matrix mlog(const Matrix& u) {
  const Matrix n = u - Matrix::identity(u.rows());
  const Matrix n2 = n * n, n3 = n2 * n;
  return n - scaled(n2, Rational(1, 2)) + scaled(n3, Rational(1, 3));
}

// Matrix of the point with recipe coordinates p.
Matrix point_matrix(const Group& G, const std::vector<Matrix>& basis, const GroupPoint& p) {
  Matrix m = Matrix::identity(basis[0].rows());
  for (const auto& factor : G.recipe().factors) {
    Vector x(G.dim());
    for (auto i : factor) x[i] = p[i];
    m = m * mexp(rep(basis, x));
  }
  return m;
}

PolyVectorField frame_field(std::vector<std::string> comps) {
  PolyVectorField v;
  for (auto& c : comps) v.components.push_back(Polynomial::parse(c, xyz));
  return v;
}

struct Engel {
  GradedLieAlgebra g = build_algebra(presets::engel());
  Group G{g, CoordinateRecipe::engel(g)};
  Frame frame = left_invariant_frame(G);
};

}  // namespace

TEST(Bch, AgreesWithMatrixLogarithm) {
  std::mt19937 rng(51);
  for (const auto& [spec, basis] : {std::pair{presets::engel(), engel_rep()}, std::pair{presets::heisenberg(), heisenberg_rep()}}) {
    const auto g = build_algebra(spec);
    for (int trial = 0; trial < 25; ++trial) {
      const Vector a = random_vector(rng, g.dim()), b = random_vector(rng, g.dim());
      EXPECT_EQ(rep(basis, bch(g, a, b)), mlog(mexp(rep(basis, a)) * mexp(rep(basis, b))));
    }
  }
}

TEST(Bch, RepresentationIsFaithfulHomomorphism) {
  const auto g = build_algebra(presets::engel());
  const auto basis = engel_rep();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_EQ(basis[i] * basis[j] - basis[j] * basis[i], rep(basis, g.structure(i, j)));
}

TEST(Bch, StepFourUnsupported) {
  AlgebraSpec f{"filiform4", {{"X1", "X2"}, {"Y2"}, {"Y3"}, {"Y4"}}, {}};
  f.brackets = {{"X1", "X2", {{1, "Y2"}}, 1}, {"X1", "Y2", {{1, "Y3"}}, 2}, {"X1", "Y3", {{1, "Y4"}}, 3}};
  const auto g = build_algebra(f);
  try {
    bch(g, g.unit(0), g.unit(1));
    FAIL();
  } catch (const RealizationError& e) {
    EXPECT_EQ(e.kind(), RealizationErrorKind::UnsupportedStep);
  }
}

TEST(Group, ProductMatchesMatrixProduct) {
  std::mt19937 rng(52);
  const Engel e;
  const auto basis = engel_rep();
  for (int trial = 0; trial < 25; ++trial) {
    const GroupPoint p = random_vector(rng, 4), q = random_vector(rng, 4);
    EXPECT_EQ(point_matrix(e.G, basis, e.G.product(p, q)), point_matrix(e.G, basis, p) * point_matrix(e.G, basis, q));
    EXPECT_EQ(e.G.product(p, e.G.inverse(p)), GroupPoint(4));
    const Vector x = random_vector(rng, 4);
    EXPECT_EQ(point_matrix(e.G, basis, e.G.exp(x)), mexp(rep(basis, x)));
  }
}

TEST(Group, AssociativeWithIdentity) {
  std::mt19937 rng(53);
  const auto h = build_algebra(presets::heisenberg());
  const Group H(h, CoordinateRecipe::first_kind(h));
  for (int trial = 0; trial < 20; ++trial) {
    const GroupPoint p = random_vector(rng, 3), q = random_vector(rng, 3), r = random_vector(rng, 3);
    EXPECT_EQ(H.product(H.product(p, q), r), H.product(p, H.product(q, r)));
    EXPECT_EQ(H.product(p, GroupPoint(3)), p);
  }
  EXPECT_EQ(H.coordinates().names, (std::vector<std::string>{"x1", "x2", "y"}));
}

TEST(Group, RecipeValidation) {
  const auto g = build_algebra(presets::engel());
  CoordinateRecipe bad{{{0, 1}, {1, 2, 3}}, {"a", "b", "c", "d"}};
  try {
    Group G(g, bad);
    FAIL();
  } catch (const RealizationError& e) {
    EXPECT_EQ(e.kind(), RealizationErrorKind::InvalidRecipe);
  }
}

TEST(Group, LeftTranslationIsProduct) {
  std::mt19937 rng(54);
  const Engel e;
  const GroupPoint p = random_vector(rng, 4), q = random_vector(rng, 4);
  const PolyMap lp = e.G.left_translation(p);
  GroupPoint image;
  for (const auto& c : lp) image.push_back(c.evaluate(q));
  EXPECT_EQ(image, e.G.product(p, q));
}

TEST(Group, RightInvariantFieldsCommuteWithLeftInvariant) {
  const Engel e;
  const auto right = right_invariant_fields(e.G);
  for (const auto& r : right)
    for (const auto& l : e.frame.fields) EXPECT_TRUE(lie_bracket(r, l).is_zero());
}

TEST(Tau, EngelTable) {
  const Engel e;
  const Subspace g0 = constrain_g0(e.g, strata_derivations(e.g), GZeroConstraint::conformal());
  const auto [s, report] = full_prolongation(e.g, g0);
  const auto tau = realize_tau(s, e.G);
  ASSERT_EQ(tau.fields.size(), 5u);
  // components along (X1~, X2~, Y~, Z~)
  EXPECT_EQ(tau.fields[0], frame_field({"1", "0", "x2", "y - x1*x2"}));
  EXPECT_EQ(tau.fields[1], frame_field({"0", "1", "-x1", "1/2*x1^2"}));
  EXPECT_EQ(tau.fields[2], frame_field({"0", "0", "1", "-x1"}));
  EXPECT_EQ(tau.fields[3], frame_field({"0", "0", "0", "1"}));
  EXPECT_EQ(tau.fields[4], frame_field({"x1", "x2", "2*y - x1*x2", "3*z - 2*x1*y + 1/2*x1^2*x2"}));
}

TEST(Tau, DilationGeneratorIsEulerField) {
  // exp(tD) acts by (e^t x1, e^t x2, e^2t y, e^3t z)
  const Engel e;
  Matrix d(4, 4);
  d(0, 0) = 1, d(1, 1) = 1, d(2, 2) = 2, d(3, 3) = 3;
  const PolyVectorField flow = automorphism_flow_field(e.G, d);
  const PolyVectorField euler{{Polynomial::parse("x1", xyz), Polynomial::parse("x2", xyz),
                               Polynomial::parse("2*y", xyz), Polynomial::parse("3*z", xyz)}};
  EXPECT_EQ(flow, euler);
}

TEST(Tau, HomomorphismSignIsGlobal) {
  for (const auto& spec : {presets::engel(), presets::heisenberg(), presets::abelian(3)}) {
    const auto g = build_algebra(spec);
    const Group G(g, spec.name == "engel" ? CoordinateRecipe::engel(g) : CoordinateRecipe::first_kind(g));
    const Frame frame = left_invariant_frame(G);
    const auto [s, report] = full_prolongation(g, constrain_g0(g, strata_derivations(g), GZeroConstraint::conformal()));
    const auto tau = realize_tau(s, G);
    EXPECT_EQ(tau.sign, -1);
    for (std::size_t a = 0; a < s.dim(); ++a)
      for (std::size_t b = 0; b < s.dim(); ++b) {
        const auto lhs =
            to_frame(frame, lie_bracket(to_coordinates(frame, tau.fields[a]), to_coordinates(frame, tau.fields[b])));
        PolyVectorField rhs = PolyVectorField::zero(g.dim(), g.dim());
        for (std::size_t k = 0; k < s.dim(); ++k)
          if (!s.structure(a, b)[k].is_zero()) rhs += (Rational(tau.sign) * s.structure(a, b)[k]) * tau.fields[k];
        EXPECT_EQ(lhs, rhs) << spec.name << " " << s.name(a) << "," << s.name(b);
      }
  }
}

TEST(Tau, RefusesTruncatedAlgebra) {
  const auto g = build_algebra(presets::abelian(2));
  const auto [s, report] = full_prolongation(g, constrain_g0(g, strata_derivations(g), GZeroConstraint::conformal()), 3);
  try {
    realize_tau(s, Group(g, CoordinateRecipe::first_kind(g)));
    FAIL();
  } catch (const RealizationError& e) {
    EXPECT_EQ(e.kind(), RealizationErrorKind::NotTerminated);
  }
}

TEST(Similarity, TranslationsAndDilations) {
  std::mt19937 rng(55);
  const Engel e;
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = similarity_check(e.G.left_translation(random_vector(rng, 4)), e.frame);
    EXPECT_TRUE(r.contact);
    EXPECT_TRUE(r.similar);
    EXPECT_EQ(r.k, Polynomial::constant(4, Rational(1)));
  }
  for (const Rational lambda : {Rational(2), Rational(1, 3), Rational(5, 2)}) {
    const auto r = similarity_check(dilation(e.g, lambda), e.frame);
    EXPECT_TRUE(r.similar);
    EXPECT_EQ(r.k, Polynomial::constant(4, lambda * lambda));
  }
  EXPECT_THROW(dilation(e.g, Rational(0)), RealizationError);
}

TEST(Similarity, Diag12AutomorphismIsNotSimilar) {
  const Engel e;
  Matrix block(2, 2);
  block(0, 0) = 1, block(1, 1) = 2;
  const auto alpha = extend_graded_automorphism(e.g, block);
  ASSERT_TRUE(alpha.has_value());
  Matrix expected(4, 4);
  expected(0, 0) = 1, expected(1, 1) = 2, expected(2, 2) = 2, expected(3, 3) = 2;
  EXPECT_EQ(*alpha, expected);
  const auto r = similarity_check(e.G.automorphism(*alpha), e.frame);
  EXPECT_TRUE(r.contact);
  EXPECT_FALSE(r.similar);
}

TEST(Similarity, NonContactAndSingularMaps) {
  const Engel e;
  // swap x1 and x2: not contact
  PolyMap swap{Polynomial::variable(4, 1), Polynomial::variable(4, 0), Polynomial::variable(4, 2),
               Polynomial::variable(4, 3)};
  EXPECT_FALSE(similarity_check(swap, e.frame).contact);
  PolyMap singular{Polynomial::variable(4, 0), Polynomial(4), Polynomial::variable(4, 2), Polynomial::variable(4, 3)};
  try {
    similarity_check(singular, e.frame);
    FAIL();
  } catch (const RealizationError& err) {
    EXPECT_EQ(err.kind(), RealizationErrorKind::NotInvertible);
  }
}

TEST(Automorphism, ExtensionFailsForSwap) {
  const Engel e;
  Matrix swap(2, 2);
  swap(0, 1) = 1, swap(1, 0) = 1;
  EXPECT_FALSE(extend_graded_automorphism(e.g, swap).has_value());
}

TEST(Automorphism, HeisenbergRotationIsIsometry) {
  const auto h = build_algebra(presets::heisenberg());
  const Group H(h, CoordinateRecipe::first_kind(h));
  Matrix rot(2, 2);
  rot(0, 1) = -1, rot(1, 0) = 1;
  const auto alpha = extend_graded_automorphism(h, rot);
  ASSERT_TRUE(alpha.has_value());
  const auto r = similarity_check(H.automorphism(*alpha), left_invariant_frame(H));
  EXPECT_TRUE(r.similar);
  EXPECT_EQ(r.k, Polynomial::constant(3, Rational(1)));
}
