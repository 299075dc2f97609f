#include <gtest/gtest.h>

#include <string>

#include "indicatrix/run.hpp"

using namespace indicatrix;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "schema_version": 1, "samples": 12, "seed": 7,
    "manifolds": [{"name": "plane", "n": 2, "m": 1, "warp": "1"}]
  })");
}

std::string config_error(const json& j) {
  try {
    auto cfg = parse_config(j);
    for (const auto& m : cfg.manifolds) build_manifold(m, cfg.radius);
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << j.dump();
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Config, MinimalIsValid) {
  const auto cfg = parse_config(minimal());
  ASSERT_EQ(cfg.manifolds.size(), 1u);
  EXPECT_EQ(cfg.manifolds[0].factor1.kind, "euclidean");
  EXPECT_EQ(cfg.samples, 12);
  const auto m = build_manifold(cfg.manifolds[0], cfg.radius);
  EXPECT_EQ(m.product.dim(), 3);
}

TEST(Config, WarpOutsideDomainNamesManifold) {
  auto j = minimal();
  j["manifolds"][0]["warp"] = "sqrt(-1)";
  const auto msg = config_error(j);
  EXPECT_TRUE(contains(msg, "plane")) << msg;
  EXPECT_TRUE(contains(msg, "sqrt")) << msg;
}

TEST(Config, NonPositiveWarpRejected) {
  auto j = minimal();
  j["manifolds"][0]["warp"] = "x1";
  EXPECT_TRUE(contains(config_error(j), "plane"));
}

TEST(Config, DimensionRules) {
  auto j = minimal();
  j["manifolds"][0]["n"] = 1;
  EXPECT_TRUE(contains(config_error(j), "$.manifolds[0].n"));
  j = minimal();
  j["manifolds"][0]["m"] = 0;
  EXPECT_TRUE(contains(config_error(j), "$.manifolds[0].m"));
}

TEST(Config, SyntaxErrorHasPathAndOffset) {
  auto j = minimal();
  j["manifolds"][0]["warp"] = "1 + * x1";
  const auto msg = config_error(j);
  EXPECT_TRUE(contains(msg, "$.manifolds[0].warp")) << msg;
  EXPECT_TRUE(contains(msg, "offset 4")) << msg;
}

TEST(Config, WarpMayNotUseDirections) {
  auto j = minimal();
  j["manifolds"][0]["warp"] = "1 + y1^2";
  EXPECT_TRUE(contains(config_error(j), "direction"));
}

TEST(Config, RandersNormBound) {
  auto j = minimal();
  j["manifolds"][0]["factor1"] = json::parse(R"({"kind": "randers", "a": [["1", "0"], ["0", "1"]], "b": ["0.5", "0.5"]})");
  EXPECT_NO_THROW(build_manifold(parse_config(j).manifolds[0], 0.5));
  // |b| = 0.9 at the centre but 1.1 at a corner of the box
  j["manifolds"][0]["factor1"]["b"] = json::parse(R"(["0.9 + 0.4*x1", "0"])");
  const auto msg = config_error(j);
  EXPECT_TRUE(contains(msg, "|b|_a")) << msg;
  EXPECT_TRUE(contains(msg, "plane.factor1.b")) << msg;
}

TEST(Config, IndefiniteFormRejected) {
  auto j = minimal();
  j["manifolds"][0]["factor1"] = json::parse(R"({"kind": "riemannian", "a": [["1", "2"], ["2", "1"]]})");
  EXPECT_TRUE(contains(config_error(j), "positive definite"));
}

TEST(Config, NonFinslerExpressionRejected) {
  auto j = minimal();
  j["manifolds"][0]["factor1"] = json::parse(R"({"kind": "expression", "f2": "y1^2 - y2^2"})");
  EXPECT_TRUE(contains(config_error(j), "plane.factor1"));
}

TEST(Config, SchemaViolations) {
  auto j = minimal();
  j["sample"] = 3;
  EXPECT_TRUE(contains(config_error(j), "$.sample"));
  j = minimal();
  j["suites"] = json::parse(R"(["levi-civita", "geodesics"])");
  EXPECT_TRUE(contains(config_error(j), "$.suites[1]"));
  j = minimal();
  j["tolerances"] = {{"levi-civita.closeform", 1e-3}};
  EXPECT_TRUE(contains(config_error(j), "$.tolerances.levi-civita.closeform"));
  j = minimal();
  j["samples"] = "many";
  EXPECT_TRUE(contains(config_error(j), "$.samples"));
  j = minimal();
  j["manifolds"] = json::array();
  EXPECT_TRUE(contains(config_error(j), "$.manifolds"));
  j = minimal();
  j["manifolds"][0]["factor2"] = json::parse(R"({"kind": "finsler"})");
  EXPECT_TRUE(contains(config_error(j), "$.manifolds[0].factor2.kind"));
}

TEST(Config, MissingFileAndBadJson) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, SuiteExpansionKeepsRunOrder) {
  EXPECT_EQ(expand_suites({"all"}), suite_names());
  EXPECT_EQ(expand_suites({"levi-civita", "brackets", "levi-civita"}),
            (std::vector<std::string>{"brackets", "levi-civita"}));
  EXPECT_THROW(expand_suites({"nope"}), ConfigError);
}

TEST(Config, ToleranceOverridesBySuite) {
  auto j = minimal();
  j["tolerances"] = {{"fd", 1e-2}, {"levi-civita.closed-form", 1e-7}};
  const auto tol = build_tolerances(parse_config(j));
  EXPECT_EQ(tol.get("curvature-relations", "fd"), 1e-2);
  EXPECT_EQ(tol.get("levi-civita", "closed-form"), 1e-7);
  EXPECT_EQ(tol.get("brackets", "closed-form"), 1e-5);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  auto j = minimal();
  j["manifolds"].push_back(json::parse(R"j({"name": "bent", "n": 2, "m": 1, "warp": "exp(0.3*x1)"})j"));
  auto cfg = parse_config(j);
  cfg.suites = {"brackets", "verify-contact", "levi-civita"};
  cfg.threads = 1;
  const auto a = run_suites(cfg).to_json(false).dump();
  cfg.threads = 4;
  const auto b = run_suites(cfg).to_json(false).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(run_suites(cfg).to_json(false).dump(), a);
  cfg.seed += 1;
  EXPECT_NE(run_suites(cfg).to_json(false).dump(), a);
}

TEST(Run, SamplesStayAwayFromFactorZeroSections) {
  auto cfg = parse_config(minimal());
  const auto m = build_manifold(cfg.manifolds[0], cfg.radius);
  const auto s = indicatrix_samples(m.product.combined, 200, cfg.radius, 3, DirectionDomain{2, 0.2});
  for (const auto& p : s) {
    EXPECT_GE(p.y.head(2).norm(), 0.2 * p.y.norm() - 1e-12);
    EXPECT_GE(p.y.tail(1).norm(), 0.2 * p.y.norm() - 1e-12);
  }
}

// The flat pipeline passes everything except the literal exterior derivative
// of eta*, whose sign is opposite to the one computed (the acceptance run reports it).
TEST(Run, FlatPipeline) {
  auto cfg = parse_config(minimal());
  const auto rep = run_suites(cfg);
  for (const auto& r : rep.records())
    if (r.kind == RecordKind::identity && !r.pass)
      EXPECT_EQ(r.identity, "d eta*(X, Y) = G(X, phi Y)") << r.suite << " " << r.detail;
  bool obstruction = false;
  for (const auto& r : rep.records())
    if (r.identity == "Sasakian verdict") obstruction = r.detail == "Sasakian impossible";
  EXPECT_TRUE(obstruction);
}

TEST(Run, CurvedWarpIsNonKaehlerWithoutFailing) {
  auto j = minimal();
  j["manifolds"][0]["warp"] = "sqrt(1 + x1^2)";
  auto cfg = parse_config(j);
  cfg.suites = {"verify-kahler"};
  const auto rep = run_suites(cfg);
  EXPECT_TRUE(rep.all_passed());
  std::string verdict;
  for (const auto& r : rep.records())
    if (r.identity == "Kaehler verdict from N_J") verdict = r.detail;
  EXPECT_EQ(verdict, "non-Kaehler");
}

TEST(Run, EvaluationErrorsBecomeFailingRecords) {
  auto j = minimal();
  // positive at the centre and the corners, negative for 0.16 < |x1| < 0.47
  j["manifolds"][0]["warp"] = "cos(10*x1)";
  auto cfg = parse_config(j);
  cfg.suites = {"check-finsler"};
  cfg.samples = 40;
  VerificationReport rep;
  ASSERT_NO_THROW(rep = run_suites(cfg));
  EXPECT_FALSE(rep.all_passed());
}
