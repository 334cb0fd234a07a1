#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/cli.hpp"

using namespace carnot;

namespace {

const std::string data = CARNOT_DATA_DIR;

struct Output {
  int code;
  std::string out;
  std::string err;
};

Output run(std::vector<std::string> args) {
  args.insert(args.begin(), "carnot");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string file(const std::string& name) { return data + "/" + name; }

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

std::size_t parse_error_column(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

std::filesystem::path temp_spec(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(SpecFile, ParsesEngel) {
  const ProblemSpec p = load_problem(file("engel.alg"));
  EXPECT_EQ(p.algebra.name, "engel");
  EXPECT_EQ(p.algebra.layers, (std::vector<std::vector<std::string>>{{"X1", "X2"}, {"Y"}, {"Z"}}));
  ASSERT_EQ(p.algebra.brackets.size(), 2u);
  EXPECT_EQ(p.algebra.brackets[1].left, "X1");
  EXPECT_EQ(p.algebra.brackets[1].right, "Y");
  ASSERT_TRUE(p.recipe.has_value());
  const auto g = build_algebra(p.algebra);
  const auto r = resolve_recipe(p, g);
  const auto expected = CoordinateRecipe::engel(g);
  EXPECT_EQ(r.factors, expected.factors);
  EXPECT_EQ(r.coordinate_names, expected.coordinate_names);
}

TEST(SpecFile, RationalCoefficientsAndExplicitG0) {
  const ProblemSpec p = parse_problem(
      "[algebra]\nname = h\nlayer = A B\nlayer = C\n[A,B] = 1/2 C  # comment\n"
      "[g0]\nkind = explicit\ncondition = d(A,B)\ncondition = 1/2 d(B,A) - d(A,B)\n");
  EXPECT_EQ(p.algebra.brackets[0].terms.front().first, Rational(1, 2));
  const auto g = build_algebra(p.algebra);
  const auto c = resolve_constraint(p, g);
  ASSERT_EQ(c.conditions.size(), 2u);
  EXPECT_EQ(c.conditions[1](1, 0), Rational(1, 2));
  EXPECT_EQ(c.conditions[1](0, 1), Rational(-1));
  // diagonal first-layer blocks only: two-dimensional g0
  EXPECT_EQ(constrain_g0(g, strata_derivations(g), c).dim(), 2u);
}

TEST(SpecFile, PositionedErrors) {
  const std::string head = "[algebra]\nname = e\nlayer = A B\nlayer = C\n";
  try {
    parse_problem(head + "[A,B] = 2 ^C\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 11u);
  }
  EXPECT_EQ(parse_error_column(head + "[A B] = C\n"), 4u);  // no comma: read as a section header
  EXPECT_EQ(parse_error_column("[algebra]\nname = e\nlayer = A\n[A,B = C\n"), 6u);
  EXPECT_EQ(parse_error_column("[stuff]\n"), 2u);
  EXPECT_EQ(parse_error_column("name = e\n"), 1u);
  EXPECT_EQ(parse_error_column(head + "[options]\nmax_k = -3\n"), 9u);
  EXPECT_EQ(parse_error_column(head + "[g0]\nkind = weird\n"), 8u);
  EXPECT_THROW(parse_problem("[algebra]\nlayer = A\n"), ParseError);
  EXPECT_THROW(parse_problem(head + "[g0]\ncondition = d(A,A)\n"), ParseError);
  EXPECT_THROW(load_problem("/nonexistent/file.alg"), ParseError);
}

TEST(Cli, ValidateBundled) {
  for (const char* f : {"engel.alg", "heisenberg.alg", "r1.alg", "r2_co2.alg", "r3_co3.alg"}) {
    const auto r = run({"validate", file(f)});
    EXPECT_EQ(r.code, 0) << f << r.err;
    EXPECT_TRUE(has_line(r.out, "valid = true")) << r.out;
  }
}

TEST(Cli, ValidateReportsViolations) {
  const auto bad = temp_spec("carnot_bad_grading.alg", "[algebra]\nname = bad\nlayer = A B\nlayer = C\n[A,B] = A\n");
  const auto r = run({"validate", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has_line(r.out, "violation = GradingViolation"));
  EXPECT_TRUE(has_line(r.out, "offenders = [A,B]"));
  const auto split = temp_spec("carnot_split.alg", "[algebra]\nname = split\nlayer = X\nlayer = Y\n");
  const auto s = run({"validate", split.string()});
  EXPECT_EQ(s.code, 1);
  EXPECT_TRUE(has_line(s.out, "violation = GenerationFailure"));
}

TEST(Cli, ParseAndUsageErrorsExitTwo) {
  const auto bad = temp_spec("carnot_bad_token.alg", "[algebra]\nname = bad\nlayer = A B\nlayer = C\n[A,B] = 1/ C\n");
  const auto r = run({"validate", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":5:11:"), std::string::npos) << r.err;
  EXPECT_EQ(run({"prolong"}).code, 2);
  EXPECT_EQ(run({"frobnicate", file("engel.alg")}).code, 2);
  EXPECT_EQ(run({"prolong", file("engel.alg"), "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"prolong", file("engel.alg"), "--max-k", "0"}).code, 2);
  EXPECT_EQ(run({"verify", file("engel.alg"), "--inject", "Q"}).code, 2);
  EXPECT_EQ(run({"prolong", "/nonexistent.alg"}).code, 2);
}

TEST(Cli, ProlongSummaries) {
  EXPECT_TRUE(has_line(run({"prolong", file("engel.alg")}).out,
                       "summary = g0_dim=1 levels=[1,0] total=5 terminated_at=1"));
  EXPECT_TRUE(has_line(run({"prolong", file("r2_co2.alg"), "--max-k", "6"}).out,
                       "summary = cutoff_reached levels=[2,2,2,2,2,2,2]"));
  EXPECT_TRUE(has_line(run({"prolong", file("r3_co3.alg")}).out,
                       "summary = g0_dim=4 levels=[4,3,0] total=10 terminated_at=2"));
  EXPECT_TRUE(has_line(run({"prolong", file("heisenberg.alg")}).out,
                       "summary = g0_dim=2 levels=[2,2,1,0] total=8 terminated_at=3"));
  const auto engel = run({"prolong", file("engel.alg")});
  EXPECT_TRUE(has_line(engel.out, "basis.g0_1 = X1 -> X1; X2 -> X2; Y -> 2 Y; Z -> 3 Z"));
  EXPECT_TRUE(has_line(run({"prolong", file("r1.alg"), "--max-k", "3"}).out, "summary = cutoff_reached levels=[1,1,1,1]"));
}

TEST(Cli, VerifyEngel) {
  const auto r = run({"verify", file("engel.alg")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "verdict = PASS"));
  EXPECT_TRUE(has_line(r.out, "tau_sign = -1"));
  EXPECT_TRUE(has_line(r.out, "homomorphism_pairs = 10"));
  EXPECT_TRUE(has_line(r.out, "translations = 10/10"));
  EXPECT_TRUE(has_line(r.out, "dilation.k = 4"));
  EXPECT_TRUE(has_line(r.out, "automorphism.first_layer = diag(1,2)"));
  EXPECT_TRUE(has_line(r.out, "automorphism.similar = false"));
  EXPECT_TRUE(has_line(r.out, "field.Y.tau = (-x1)*Z~ + (1)*Y~"));
}

TEST(Cli, VerifyInjectedFieldFails) {
  const auto r = run({"verify", file("engel.alg"), "--inject", "Y"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has_line(r.out, "field.inject_Y.contact = fail"));
  EXPECT_TRUE(has_line(r.out, "verdict = FAIL"));
}

TEST(Cli, VerifyOtherAlgebras) {
  EXPECT_EQ(run({"verify", file("heisenberg.alg")}).code, 0);
  EXPECT_EQ(run({"verify", file("r3_co3.alg")}).code, 0);
  const auto r2 = run({"verify", file("r2_co2.alg")});
  EXPECT_EQ(r2.code, 1);
  EXPECT_TRUE(has_line(r2.out, "status = cutoff_reached"));
}

TEST(Cli, Oracle) {
  const auto e = run({"oracle", file("engel.alg"), "--degree", "6"});
  EXPECT_EQ(e.code, 0);
  EXPECT_TRUE(has_line(e.out, "dim = 5"));
  EXPECT_TRUE(has_line(e.out, "match = yes"));
  const auto h = run({"oracle", file("heisenberg.alg"), "--degree", "4"});
  EXPECT_TRUE(has_line(h.out, "dim = 8"));
  EXPECT_TRUE(has_line(h.out, "prolongation_total = 8"));
  const auto low = run({"oracle", file("heisenberg.alg"), "--degree", "1"});
  EXPECT_EQ(low.code, 0);
  EXPECT_TRUE(has_line(low.out, "match = inconclusive"));
  EXPECT_NE(low.out.find("cutoff too small"), std::string::npos);
  const auto r2 = run({"oracle", file("r2_co2.alg"), "--degree", "2"});
  EXPECT_TRUE(has_line(r2.out, "prolongation = cutoff_reached"));
}

TEST(Cli, DeterministicAndFormatsAgree) {
  for (const char* cmd : {"prolong", "verify", "oracle"}) {
    const auto a = run({cmd, file("engel.alg"), "--format", "struct"});
    const auto b = run({cmd, file("engel.alg"), "--format", "struct"});
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run({cmd, file("engel.alg")}).out, run({cmd, file("engel.alg")}).out);
  }
  const auto text = run({"prolong", file("engel.alg")}).out;
  const auto doc = nlohmann::json::parse(run({"prolong", file("engel.alg"), "--format", "struct"}).out);
  EXPECT_EQ(doc["command"], "prolong");
  const auto& res = doc["result"];
  EXPECT_TRUE(has_line(text, "total = " + res["total"].dump()));
  EXPECT_TRUE(has_line(text, "g0_dim = " + res["g0_dim"].dump()));
  EXPECT_TRUE(has_line(text, "summary = " + res["summary"].get<std::string>()));
  EXPECT_EQ(res["levels"], nlohmann::json::array({1, 0}));
}

TEST(Cli, RationalsRenderedExactly) {
  const auto out = run({"verify", file("engel.alg")}).out;
  EXPECT_NE(out.find("1/2*x1^2"), std::string::npos);
  EXPECT_EQ(out.find("0.5"), std::string::npos);
}
