#include "carnot/cli.hpp"

#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "carnot/contact.hpp"

namespace carnot {

namespace {

using json = nlohmann::ordered_json;

std::string combination(const Vector& v, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    const bool neg = v[i].sign() < 0;
    const Rational mag = neg ? -v[i] : v[i];
    if (out.empty()) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    if (mag != Rational(1)) out += mag.str() + " ";
    out += names[i];
  }
  return out.empty() ? "0" : out;
}

std::vector<std::string> names_of(const ProlongationAlgebra& s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.dim(); ++i) out.push_back(s.name(i));
  return out;
}

std::vector<std::string> frame_names(const GradedLieAlgebra& g) {
  std::vector<std::string> out;
  for (const auto& b : g.basis()) out.push_back(b + "~");
  return out;
}

// u -> "X1 -> ..., X2 -> ..." through the bracket table, [u, X] = u(X).
std::string action(const ProlongationAlgebra& s, std::size_t i) {
  const auto names = names_of(s);
  std::string out;
  for (std::size_t x = 0; x < s.negative().dim(); ++x) {
    if (!out.empty()) out += "; ";
    out += s.negative().basis_name(x) + " -> " + combination(s.structure(i, x), names);
  }
  return out;
}

std::string seq(const std::vector<std::size_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

struct Pipeline {
  GradedLieAlgebra g;
  GZeroConstraint constraint;
  Subspace ders;
  Subspace g0;
  std::optional<ProlongationAlgebra> s;
  TerminationReport report;
};

Pipeline prolong(const ProblemSpec& p, int max_k) {
  Pipeline out;
  out.g = build_algebra(p.algebra);
  out.constraint = resolve_constraint(p, out.g);
  out.ders = strata_derivations(out.g);
  out.g0 = constrain_g0(out.g, out.ders, out.constraint);
  auto [s, rep] = full_prolongation(out.g, out.g0, max_k);
  out.s.emplace(std::move(s));
  out.report = std::move(rep);
  return out;
}

bool terminated(const TerminationReport& r) { return r.status == TerminationReport::Status::terminated; }

void describe_levels(json& f, const Pipeline& pl) {
  f["levels"] = pl.report.level_dims;
  f["total"] = pl.report.total_dim;
  f["status"] = terminated(pl.report) ? "terminated" : "cutoff_reached";
  if (terminated(pl.report)) f["terminated_at"] = pl.report.terminated_at;
}

GroupPoint random_point(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  GroupPoint p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(Rational(num(rng), den(rng)));
  return p;
}

// A^1 as a graded map lies in g_1 (or vanishes when g_1 was never computed).
bool first_jet_in_g1(const ContactJet& j, const ProlongationAlgebra& s) {
  const auto u = one_part_as_graded_map(j, s);
  if (!u || !s.stack().satisfies_leibniz(*u)) return false;
  const Vector flat = s.stack().encode(*u);
  return s.levels().size() > 1 ? s.levels()[1].contains(flat) : is_zero(flat);
}

std::string jet_failure(const PolyVectorField& v, const Pipeline& pl, const Frame& frame, std::mt19937& rng,
                        int points) {
  const GradedLieAlgebra& g = pl.g;
  for (int k = 0; k < points; ++k) {
    const GroupPoint p = random_point(rng, g.dim());
    const ContactJet j = jet(v, p, 1, g, frame);
    std::string where;
    for (std::size_t i = 0; i < p.size(); ++i) where += (i ? "," : "") + p[i].str();
    if (!pl.g0.contains(j.zero_part.flat(g))) return "A0 outside g0 at (" + where + ")";
    if (!jet_jacobi_check(j, g)) return "A0 not a derivation at (" + where + ")";
    if (!first_jet_in_g1(j, *pl.s)) return "A1 outside g1 at (" + where + ")";
  }
  return "";
}

PolyVectorField frame_bracket(const Frame& frame, const PolyVectorField& a, const PolyVectorField& b) {
  return to_frame(frame, lie_bracket(to_coordinates(frame, a), to_coordinates(frame, b)));
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      return s + "]";
    }
    return v.dump();
  };
  auto walk = [&](auto& self, const json& obj, const std::string& prefix) -> void {
    for (const auto& [key, value] : obj.items()) {
      const std::string full = prefix.empty() ? key : prefix + "." + key;
      if (value.is_object()) self(self, value, full);
      else out << full << " = " << scalar(value) << "\n";
    }
  };
  out << "command = " << r.command << "\n";
  walk(walk, r.fields, "");
  return out.str();
}

std::string render_struct(const Report& r) {
  json doc;
  doc["command"] = r.command;
  doc["exit_code"] = r.exit_code;
  doc["result"] = r.fields;
  return doc.dump(2) + "\n";
}

Report cmd_validate(const ProblemSpec& p) {
  Report r{"validate"};
  auto& f = r.fields;
  f["algebra"] = p.algebra.name;
  GradedLieAlgebra g;
  try {
    g = build_algebra(p.algebra, false);
  } catch (const AlgebraError& e) {
    f["valid"] = false;
    f["violation"] = to_string(e.kind());
    f["offenders"] = e.offenders();
    f["message"] = e.what();
    r.exit_code = exit_failure;
    return r;
  }
  f["dim"] = g.dim();
  f["step"] = g.step();
  f["layer_dims"] = g.layer_dims();
  f["brackets"] = p.algebra.brackets.size();
  const bool generated = check_generation(g);
  f["generated"] = generated;
  const GZeroConstraint c = resolve_constraint(p, g);
  f["g0_kind"] = to_string(c.kind);
  bool recipe_ok = true;
  if (p.recipe) {
    try {
      resolve_recipe(p, g).validate(g);
    } catch (const RealizationError& e) {
      recipe_ok = false;
      f["recipe_error"] = e.what();
    }
  }
  f["recipe"] = p.recipe ? (recipe_ok ? "valid" : "invalid") : "first_kind";
  f["valid"] = generated && recipe_ok;
  if (!generated) {
    f["violation"] = to_string(AlgebraErrorKind::GenerationFailure);
    f["message"] = "the weight -1 layer does not generate the algebra";
  }
  r.exit_code = generated && recipe_ok ? exit_pass : exit_failure;
  return r;
}

Report cmd_prolong(const ProblemSpec& p, int max_k) {
  Report r{"prolong"};
  auto& f = r.fields;
  const Pipeline pl = prolong(p, max_k);
  f["algebra"] = pl.g.name();
  f["g0_kind"] = to_string(pl.constraint.kind);
  f["max_k"] = max_k;
  f["derivations_dim"] = pl.ders.dim();
  f["g0_dim"] = pl.g0.dim();
  describe_levels(f, pl);
  json basis = json::object();
  for (std::size_t i = pl.g.dim(); i < pl.s->dim(); ++i) basis[pl.s->name(i)] = action(*pl.s, i);
  f["basis"] = basis;
  std::string summary;
  if (terminated(pl.report))
    summary = "g0_dim=" + std::to_string(pl.g0.dim()) + " levels=" + seq(pl.report.level_dims) +
              " total=" + std::to_string(pl.report.total_dim) +
              " terminated_at=" + std::to_string(pl.report.terminated_at);
  else
    summary = "cutoff_reached levels=" + seq(pl.report.level_dims);
  f["summary"] = summary;
  return r;
}

Report cmd_verify(const ProblemSpec& p, const VerifyOptions& opts) {
  Report r{"verify"};
  auto& f = r.fields;
  const Pipeline pl = prolong(p, opts.max_k);
  const GradedLieAlgebra& g = pl.g;
  f["algebra"] = g.name();
  describe_levels(f, pl);
  std::vector<std::string> failures;
  if (!terminated(pl.report)) {
    f["failures"] = std::vector<std::string>{"prolongation did not terminate within max_k"};
    f["verdict"] = "FAIL";
    r.exit_code = exit_failure;
    return r;
  }
  const ProlongationAlgebra& s = *pl.s;
  const Group group(g, resolve_recipe(p, g));
  const Frame frame = left_invariant_frame(group);
  const auto directions = frame_names(g);
  const auto& coords = group.coordinates().names;
  const TauRealization tau = realize_tau(s, group);
  f["dim_s"] = s.dim();
  f["tau_sign"] = tau.sign;

  std::vector<std::pair<std::string, PolyVectorField>> fields;
  for (std::size_t i = 0; i < s.dim(); ++i) fields.emplace_back(s.name(i), tau.fields[i]);
  if (opts.inject) {
    auto idx = g.index_of(*opts.inject);
    if (!idx) throw std::invalid_argument("--inject: unknown generator '" + *opts.inject + "'");
    PolyVectorField v = PolyVectorField::zero(g.dim(), g.dim());
    v.components[*idx] = Polynomial::constant(g.dim(), Rational(1));
    fields.emplace_back("inject_" + *opts.inject, std::move(v));
  }

  std::mt19937 rng(opts.seed);
  json per_field = json::object();
  for (const auto& [name, v] : fields) {
    json entry = json::object();
    entry["tau"] = render(v, coords, directions);
    const DefectReport contact = contact_defect(v, frame);
    entry["contact"] = contact.all_zero ? "pass" : "fail";
    if (!contact.all_zero) {
      entry["contact_failing"] = contact.failing();
      failures.push_back(name + ": contact defect");
      entry["conformal"] = "skipped";
      entry["jets"] = "skipped";
      per_field[name] = entry;
      continue;
    }
    const DefectReport conformal = constraint_defect(v, frame, pl.constraint);
    entry["conformal"] = conformal.all_zero ? "pass" : "fail";
    if (!conformal.all_zero) {
      entry["conformal_failing"] = conformal.failing();
      failures.push_back(name + ": conformal defect");
    }
    const std::string jet_err = jet_failure(v, pl, frame, rng, opts.points_per_field);
    entry["jets"] = jet_err.empty() ? "pass" : "fail: " + jet_err;
    if (!jet_err.empty()) failures.push_back(name + ": " + jet_err);
    per_field[name] = entry;
  }
  f["field"] = per_field;

  std::size_t pairs = 0;
  bool hom = true;
  for (std::size_t a = 0; a < s.dim(); ++a)
    for (std::size_t b = a + 1; b < s.dim(); ++b, ++pairs) {
      PolyVectorField rhs = PolyVectorField::zero(g.dim(), g.dim());
      const Vector& c = s.structure(a, b);
      for (std::size_t k = 0; k < s.dim(); ++k)
        if (!c[k].is_zero()) rhs += (Rational(tau.sign) * c[k]) * tau.fields[k];
      if (!(frame_bracket(frame, tau.fields[a], tau.fields[b]) == rhs)) {
        if (hom) failures.push_back("homomorphism fails on [" + s.name(a) + "," + s.name(b) + "]");
        hom = false;
      }
    }
  f["homomorphism"] = hom ? "pass" : "fail";
  f["homomorphism_pairs"] = pairs;

  int translations_ok = 0;
  for (int t = 0; t < opts.translations; ++t) {
    const auto res = similarity_check(group.left_translation(random_point(rng, g.dim())), frame);
    if (res.similar && res.k == Polynomial::constant(g.dim(), Rational(1))) ++translations_ok;
  }
  f["translations"] = std::to_string(translations_ok) + "/" + std::to_string(opts.translations);
  if (translations_ok != opts.translations) failures.push_back("left translation not an isometry");

  const Rational lambda(2);
  const auto dil = similarity_check(dilation(g, lambda), frame);
  const bool dil_ok = dil.similar && dil.k == Polynomial::constant(g.dim(), lambda * lambda);
  f["dilation"] = json{{"scale", lambda.str()}, {"k", dil.similar ? dil.k.str(coords) : "none"},
                       {"result", dil_ok ? "pass" : "fail"}};
  if (!dil_ok) failures.push_back("dilation is not a similarity with k = scale^2");

  // First-layer block diag(1, 2, ..., m): informational only.
  const std::size_t m = g.layer_dim(-1);
  Matrix block(m, m);
  std::string label = "diag(";
  for (std::size_t i = 0; i < m; ++i) {
    block(i, i) = Rational(static_cast<long>(i + 1));
    label += (i ? "," : "") + std::to_string(i + 1);
  }
  label += ")";
  json aut = json{{"first_layer", label}};
  if (auto alpha = extend_graded_automorphism(g, block)) {
    const auto res = similarity_check(group.automorphism(*alpha), frame);
    aut["similar"] = res.similar;
  } else {
    aut["similar"] = "not extendable";
  }
  f["automorphism"] = aut;

  f["failures"] = failures;
  f["verdict"] = failures.empty() ? "PASS" : "FAIL";
  r.exit_code = failures.empty() ? exit_pass : exit_failure;
  return r;
}

Report cmd_oracle(const ProblemSpec& p, int degree, int max_k) {
  Report r{"oracle"};
  auto& f = r.fields;
  const Pipeline pl = prolong(p, max_k);
  const GradedLieAlgebra& g = pl.g;
  const Group group(g, resolve_recipe(p, g));
  const Frame frame = left_invariant_frame(group);
  const ConformalSolution sol = solve_polynomial_conformal(g, frame, degree, pl.constraint);
  f["algebra"] = g.name();
  f["degree"] = degree;
  f["unknowns"] = sol.unknowns.size();
  f["dim"] = sol.dim();
  std::vector<std::string> basis;
  for (const auto& v : sol.basis_fields()) basis.push_back(render(v, group.coordinates().names, frame_names(g)));
  f["basis"] = basis;
  if (!terminated(pl.report)) {
    f["prolongation"] = "cutoff_reached";
    f["levels"] = pl.report.level_dims;
    f["match"] = "n/a";
    return r;
  }
  f["prolongation_total"] = pl.report.total_dim;
  const TauRealization tau = realize_tau(*pl.s, group);
  std::vector<Vector> encoded;
  for (const auto& v : tau.fields)
    if (auto e = sol.encode(v)) encoded.push_back(*e);
  f["tau_representable"] = std::to_string(encoded.size()) + "/" + std::to_string(tau.fields.size());
  const bool span_match = encoded.size() == tau.fields.size() &&
                          Subspace::span(sol.unknowns.size(), encoded) == sol.space;
  f["span_match"] = span_match;
  if (sol.dim() < pl.report.total_dim) {
    f["warning"] = "cutoff too small: ansatz dimension " + std::to_string(sol.dim()) +
                   " is below the prolongation total " + std::to_string(pl.report.total_dim);
    f["match"] = "inconclusive";
  } else if (sol.dim() == pl.report.total_dim && span_match) {
    f["match"] = "yes";
  } else {
    f["match"] = "no";
    r.exit_code = exit_failure;
  }
  return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tanaka prolongation and conformal vector fields on Carnot groups", "carnot"};
  app.require_subcommand(1);
  std::string file, format = "text";
  std::optional<int> max_k, degree;
  std::optional<std::string> inject;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "algebra spec file")->required();
    cmd->add_option("--max-k", max_k, "prolongation cutoff")->check(CLI::Range(1, 64));
    cmd->add_option("--degree", degree, "oracle weighted degree")->check(CLI::Range(0, 32));
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "struct"}));
  };
  auto* validate = app.add_subcommand("validate", "check the algebra spec");
  auto* prolong_cmd = app.add_subcommand("prolong", "compute the Tanaka prolongation");
  auto* verify = app.add_subcommand("verify", "realize and check the conformal fields");
  auto* oracle = app.add_subcommand("oracle", "solve the conformal system on a polynomial ansatz");
  for (auto* cmd : {validate, prolong_cmd, verify, oracle}) common(cmd);
  verify->add_option("--inject", inject, "also check the left-invariant field of this generator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    const ProblemSpec p = load_problem(file);
    const int k = max_k.value_or(p.max_k);
    Report report;
    if (*validate) report = cmd_validate(p);
    else if (*prolong_cmd) report = cmd_prolong(p, k);
    else if (*verify) {
      VerifyOptions opts;
      opts.max_k = k;
      opts.inject = inject;
      report = cmd_verify(p, opts);
    } else {
      report = cmd_oracle(p, degree.value_or(p.oracle_degree), k);
    }
    out << (format == "struct" ? render_struct(report) : render_text(report));
    return report.exit_code;
  } catch (const ParseError& e) {
    if (e.line() == 0) err << "error: " << e.what() << "\n";
    else err << "parse error: " << file << ":" << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace carnot
