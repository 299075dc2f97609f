// Acceptance run: one PASS/FAIL line per criterion, evaluated on the catalog
// configuration. Every criterion also checks that the records it relies on
// were produced at no looser than the stated tolerance and on enough samples.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "indicatrix/expr.hpp"
#include "indicatrix/run.hpp"
#include "indicatrix/scalar_field.hpp"

using namespace indicatrix;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (note.empty()) note = why;
    }
  }
};

struct Selection {
  std::string suite;
  std::function<bool(const std::string&)> identity;
  double max_tolerance;
};

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }
auto exactly(std::string name) {
  return [name](const std::string& s) { return s == name; };
}
auto prefixed(std::string p) {
  return [p](const std::string& s) { return starts_with(s, p); };
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// All identity records matched by `sel` pass, use tolerance <= max_tolerance,
// and cover at least `min_samples` samples on each manifold in `manifolds`.
Outcome identities(const VerificationReport& rep, const Selection& sel, const std::set<std::string>& manifolds,
                   int min_samples, double* worst_out = nullptr) {
  Outcome o;
  std::map<std::string, std::set<int>> samples;
  double worst = 0.0;
  int count = 0;
  for (const auto& r : rep.records()) {
    if (r.kind != RecordKind::identity || r.suite != sel.suite) continue;
    if (r.identity == "suite completed") o.require(r.pass, r.manifold + ": " + r.detail);
    if (!sel.identity(r.identity)) continue;
    ++count;
    samples[r.manifold].insert(r.sample);
    if (!(r.residual <= worst)) worst = r.residual;
    o.require(r.tolerance <= sel.max_tolerance * (1.0 + 1e-9),
              "'" + r.identity + "' ran at tolerance " + sci(r.tolerance));
    o.require(r.pass, "'" + r.identity + "' on " + r.manifold + " sample " + std::to_string(r.sample) +
                          ": residual " + sci(r.residual) + " > " + sci(r.tolerance));
  }
  o.require(count > 0, "no records for " + sel.suite);
  for (const auto& m : manifolds)
    o.require(static_cast<int>(samples[m].size()) >= min_samples,
              sel.suite + " on " + m + ": " + std::to_string(samples[m].size()) + " samples");
  if (worst_out) *worst_out = std::max(*worst_out, worst);
  return o;
}

void merge(Outcome& into, const Outcome& o) {
  if (!o.pass) into.require(false, o.note);
}

std::string verdict(const VerificationReport& rep, const std::string& suite, const std::string& manifold,
                    const std::string& identity) {
  for (const auto& r : rep.records())
    if (r.kind == RecordKind::classification && r.suite == suite && r.manifold == manifold && r.identity == identity)
      return r.detail;
  return {};
}

// Central difference of a plain function in coordinate i.
double central(const std::function<double(std::vector<double>)>& f, std::vector<double> p, int i, double h) {
  p[i] += h;
  const double a = f(p);
  p[i] -= 2 * h;
  return (a - f(p)) / (2 * h);
}

Outcome jets_vs_differences(double* worst) {
  Outcome o;
  const char* battery[] = {"exp(x1)*cos(x2) + x3^2*x1", "sqrt(1 + x1^2 + 2*x2^2)*log(2 + x3)",
                           "sin(x1*x2 + x3)/(2 + cos(x1))", "(1.5 + x1*x2)^(-0.5) + x3^3"};
  const std::vector<std::vector<double>> points{{0.1, 0.2, 0.3}, {-0.7, 0.4, 0.9}, {0.9, -0.9, -0.5}};
  const double h = 1e-4;
  for (const char* text : battery) {
    const Expr e = Expr::parse(text, Dims{3, 0, false});
    ScalarField f{3, [e](std::span<const JetD> z) {
                    Env<JetD> env;
                    env.x = z;
                    return e.evaluate(env);
                  }};
    auto plain = [e](std::vector<double> z) {
      Env<double> env;
      env.x = z;
      return e.evaluate(env);
    };
    for (const auto& p : points)
      for (int i = 0; i < 3; ++i) {
        MultiIndex ei(3, 0);
        ei[i] = 1;
        const double d1 = std::abs(partial(f, ei, p) - central(plain, p, i, h));
        *worst = std::max(*worst, d1);
        o.require(d1 <= 1e-5, std::string(text) + ": first derivative off by " + sci(d1));
        for (int j = 0; j < 3; ++j) {
          MultiIndex eij = ei;
          ++eij[j];
          auto di = [&](std::vector<double> q) { return central(plain, q, i, h); };
          const double d2 = std::abs(partial(f, eij, p) - central(di, p, j, h));
          *worst = std::max(*worst, d2);
          o.require(d2 <= 1e-5, std::string(text) + ": second derivative off by " + sci(d2));
        }
      }
  }
  return o;
}

Outcome parser_corpus() {
  Outcome o;
  const Dims dims{2, 2, true};
  const char* valid[] = {"y1^2 + y2^2",
                         "sqrt(y1^2 + y2^2) + 0.5*y1",
                         "exp(x1)*(v1^2 + v2^2)",
                         "-(x1 - x2)/(1 + u1^2)",
                         "2^3 - -y1",
                         "sin(x1)*cos(x2) + log(1 + t)",
                         "(y1^2 + 2*y1*y2*0.1 + y2^2)^0.5",
                         "1e-3*x1 + 2.5E+2"};
  for (const char* text : valid) {
    try {
      const Expr e = Expr::parse(text, dims);
      o.require(Expr::parse(e.print(), dims) == e, std::string("round trip changed '") + text + "'");
    } catch (const ParseError& err) {
      o.require(false, std::string("rejected '") + text + "': " + err.what());
    }
  }
  const char* malformed[] = {"y1 + * y2", "y1 +", "(y1", "y1 y2", "z1 + 1", "1 + y3", "u3", "y0",
                             "y1^x1",     "exp y1", "abs(y1)", "",     "   ",   "sqrt(y1",  "x1 ** 2", "1..2"};
  for (const char* text : malformed) {
    bool rejected = false;
    try {
      Expr::parse(text, dims);
    } catch (const ParseError&) {
      rejected = true;
    }
    o.require(rejected, std::string("accepted malformed '") + text + "'");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : INDICATRIX_CATALOG;
  RunConfig cfg = load_config(path);
  cfg.suites = {"all"};
  const VerificationReport rep = run_suites(cfg);

  std::set<std::string> all;
  for (const auto& m : cfg.manifolds) all.insert(m.name);
  const int min_samples = 100;
  std::vector<Outcome> results(10);
  std::vector<std::string> titles(10);
  std::vector<double> worst(10, 0.0);

  // 1. warped products
  titles[1] = "warped blocks, spray and connection closed forms to 1e-6";
  {
    Outcome& o = results[1];
    merge(o, identities(rep, {"check-finsler", prefixed("warped"), 1e-6}, all, min_samples, &worst[1]));
    int warps = 0;
    for (const auto& m : cfg.manifolds) warps += m.warp != "1";
    o.require(all.size() >= 3, "fewer than three warped products");
    o.require(warps >= 1, "no non-constant warp in the catalog");
  }

  // 2. contact structure of the indicatrix
  titles[2] = "contact axioms and d eta*(X, Y) = G(X, phi Y) to 1e-6";
  {
    Outcome& o = results[2];
    merge(o, identities(rep, {"verify-contact", [](const std::string&) { return true; }, 1e-6}, all, min_samples,
                        &worst[2]));
    bool randers = false;
    for (const auto& m : cfg.manifolds) randers |= m.factor1.kind == "randers" || m.factor2.kind == "randers";
    o.require(randers, "no Randers factor in the catalog");
    if (!o.pass) {
      double reversed = 0.0;
      for (const auto& r : rep.records())
        if (r.suite == "verify-contact" && r.identity == "d eta*(X, Y) = -G(X, phi Y)")
          reversed = std::max(reversed, r.residual);
      o.note += "; with the opposite sign the worst residual is " + sci(reversed);
    }
  }

  // 3. integrability of J against flatness
  titles[3] = "N_J vanishes exactly where R does, N_J = -R to 1e-5";
  {
    Outcome& o = results[3];
    merge(o, identities(rep, {"verify-kahler", [](const std::string&) { return true; }, 1e-5}, all, min_samples,
                        &worst[3]));
    int flat = 0, curved = 0;
    for (const auto& m : all) {
      const auto k = verdict(rep, "verify-kahler", m, "Kaehler verdict from N_J");
      const auto f = verdict(rep, "verify-kahler", m, "flatness verdict from R");
      o.require((k == "Kaehler") == (f == "flat"), m + ": Kaehler verdict '" + k + "' vs flatness '" + f + "'");
      (f == "flat" ? flat : curved) += 1;
    }
    o.require(flat > 0 && curved > 0, "catalog lacks a flat or a curved case");
  }

  // 4. Oproiu structures
  titles[4] = "Oproiu: P Q = Id 1e-10, J~ and G~ 1e-9, N~ closed forms 1e-5";
  {
    Outcome& o = results[4];
    merge(o, identities(rep, {"verify-oproiu", [](const std::string&) { return true; }, 1e-5}, all, min_samples,
                        &worst[4]));
    merge(o, identities(rep, {"verify-oproiu", prefixed("random (A, B, tau): P Q^-1"), 1e-10}, all, 20));
    merge(o, identities(rep, {"verify-oproiu", exactly("P Q^-1 = Id"), 1e-10}, all, min_samples));
    for (const char* name : {"J~^2 = -Id", "G~ compatibility", "Kaehler form components"}) {
      merge(o, identities(rep, {"verify-oproiu", exactly(name), 1e-9}, all, min_samples));
      merge(o, identities(rep, {"verify-oproiu", exactly(std::string("random (A, B, tau): ") + name), 1e-9}, all, 20));
    }
    o.require(cfg.oproiu.random_configs >= 20, "fewer than 20 random (A, B, tau) configurations");
  }

  // 5. Levi-Civita table
  titles[5] = "closed-form connection table = Koszul to 1e-5, Koszul torsion-free and compatible to 1e-6";
  {
    Outcome& o = results[5];
    merge(o, identities(rep, {"levi-civita", prefixed("closed-form table line"), 1e-5}, all, min_samples, &worst[5]));
    merge(o, identities(rep, {"levi-civita", exactly("metric compatibility"), 1e-6}, all, min_samples, &worst[5]));
    merge(o, identities(rep, {"levi-civita", exactly("torsion-free"), 1e-6}, all, min_samples, &worst[5]));
    int lines = 0;
    for (int k = 1; k <= 11; ++k)
      for (const auto& r : rep.records())
        if (r.suite == "levi-civita" && r.identity == "closed-form table line " + std::to_string(k)) {
          ++lines;
          break;
        }
    o.require(lines == 11, std::to_string(lines) + " of 11 table lines checked");
    int flat = 0;
    for (const auto& m : all) flat += verdict(rep, "verify-kahler", m, "flatness verdict from R") == "flat";
    o.require(flat > 0 && flat < static_cast<int>(all.size()), "catalog lacks a flat or a curved metric");
  }

  // 6. second fundamental form
  titles[6] = "H(pbar_a, pbar_b) = -g_ab L to 1e-8, never totally geodesic";
  {
    Outcome& o = results[6];
    merge(o, identities(rep, {"levi-civita", exactly("second fundamental form on verticals"), 1e-8}, all, min_samples,
                        &worst[6]));
    merge(o, identities(rep, {"levi-civita", exactly("not totally geodesic"), 1e-8}, all, min_samples));
    for (const auto& m : all)
      o.require(verdict(rep, "levi-civita", m, "totally geodesic verdict") == "not totally geodesic",
                m + ": indicatrix reported totally geodesic");
  }

  // 7. curvature relations
  titles[7] = "seven curvature relations and the coinciding cases to 1e-3";
  {
    Outcome& o = results[7];
    merge(o, identities(rep, {"curvature-relations", prefixed("curvature relation "), 1e-3}, all, min_samples,
                        &worst[7]));
    merge(o, identities(rep, {"curvature-relations", exactly("remaining combinations coincide"), 1e-3}, all,
                        min_samples, &worst[7]));
  }

  // 8. Sasakian obstruction
  titles[8] = "max |(nabla~_X phi) Y| >= lambda_min / 2, component = g_ab to 1e-4";
  {
    Outcome& o = results[8];
    merge(o, identities(rep, {"sasakian-obstruction", exactly("obstruction lower bound"), 1e-9}, all, min_samples));
    merge(o, identities(rep, {"sasakian-obstruction", exactly("obstruction component equals g_ab"), 1e-4}, all,
                        min_samples, &worst[8]));
    for (const auto& m : all)
      o.require(verdict(rep, "sasakian-obstruction", m, "Sasakian verdict") == "Sasakian impossible",
                m + ": obstruction verdict not reached");
  }

  // 9. infrastructure
  titles[9] = "jets = central differences to 1e-5, parser corpus, deterministic reports";
  {
    Outcome& o = results[9];
    merge(o, jets_vs_differences(&worst[9]));
    merge(o, parser_corpus());
    RunConfig serial = cfg;
    serial.threads = 1;
    const auto a = rep.to_json(false).dump();
    const auto b = run_suites(serial).to_json(false).dump();
    o.require(a == b, "report changed between a parallel and a serial run");
    const auto round = VerificationReport::from_json(rep.to_json(true)).to_json(false).dump();
    o.require(round == a, "report JSON does not round-trip");
  }

  int failed = 0;
  for (int c = 1; c <= 9; ++c) {
    const auto& o = results[c];
    failed += !o.pass;
    std::printf("criterion %d %s  %s", c, o.pass ? "PASS" : "FAIL", titles[c].c_str());
    if (worst[c] > 0.0) std::printf("  [worst %s]", sci(worst[c]).c_str());
    if (!o.pass) std::printf("\n    %s", o.note.c_str());
    std::printf("\n");
  }
  std::printf("%d of 9 criteria pass\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
