#include <gtest/gtest.h>

#include <cmath>

#include "indicatrix/error.hpp"
#include "indicatrix/report.hpp"

using namespace indicatrix;

namespace {

VerificationReport sample_report() {
  VerificationReport rep;
  rep.check("levi-civita", "flat", "torsion-free", "T = 0", 0, 1e-12, 1e-6);
  rep.check("levi-civita", "flat", "torsion-free", "T = 0", 1, 2e-6, 1e-6).detail = "large";
  rep.check("levi-civita", "warp", "torsion-free", "T = 0", 0, NAN, 1e-6);
  rep.classify("verify-kahler", "warp", "Kaehler verdict", -1, "non-Kaehler", 0.3);
  rep.info("verify-contact", "flat", "opposite sign", "d eta = -G(X, phi Y)", 0, INFINITY, "note");
  rep.duration_seconds = 1.25;
  return rep;
}

}  // namespace

TEST(Report, SummaryTalliesRecords) {
  const auto s = sample_report().summary();
  EXPECT_EQ(s.identities, 3);
  EXPECT_EQ(s.passed, 1);
  EXPECT_EQ(s.failed, 2);
  EXPECT_EQ(s.classifications, 1);
  EXPECT_EQ(s.infos, 1);
}

TEST(Report, NonFiniteResidualFails) {
  VerificationReport rep;
  EXPECT_FALSE(rep.check("s", "m", "i", "", 0, NAN, 1.0).pass);
  EXPECT_FALSE(rep.check("s", "m", "i", "", 0, INFINITY, 1.0).pass);
  EXPECT_TRUE(rep.check("s", "m", "i", "", 0, 0.0, 0.0).pass);
}

TEST(Report, ClassificationsNeverFail) {
  VerificationReport rep;
  rep.check("s", "m", "i", "", 0, 0.0, 1e-9);
  rep.classify("s", "m", "verdict", -1, "non-Kaehler", 5.0);
  rep.info("s", "m", "extra", "", 0, 1e9);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Report, JsonRoundTrip) {
  const auto rep = sample_report();
  const auto j = rep.to_json();
  EXPECT_EQ(j["schema_version"], VerificationReport::kSchemaVersion);
  EXPECT_EQ(j["records"][2]["residual"], "nan");
  EXPECT_EQ(j["records"][4]["residual"], "inf");
  const auto back = VerificationReport::from_json(j);
  ASSERT_EQ(back.records().size(), rep.records().size());
  for (std::size_t i = 0; i < rep.records().size(); ++i) {
    const auto& a = rep.records()[i];
    const auto& b = back.records()[i];
    EXPECT_EQ(a.identity, b.identity);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.pass, b.pass);
    EXPECT_EQ(a.detail, b.detail);
    EXPECT_TRUE(a.residual == b.residual || (std::isnan(a.residual) && std::isnan(b.residual)));
  }
  EXPECT_EQ(back.duration_seconds, 1.25);
  EXPECT_EQ(back.to_json().dump(), j.dump());
}

TEST(Report, DurationCanBeLeftOut) {
  const auto j = sample_report().to_json(false);
  EXPECT_FALSE(j.contains("duration_seconds"));
  EXPECT_NO_THROW(VerificationReport::from_json(j));
}

TEST(Report, RejectsInconsistentJson) {
  auto j = sample_report().to_json();
  j["summary"]["failed"] = 0;
  EXPECT_THROW(VerificationReport::from_json(j), Error);
  j = sample_report().to_json();
  j["schema_version"] = 2;
  EXPECT_THROW(VerificationReport::from_json(j), Error);
  j = sample_report().to_json();
  j["records"][0]["kind"] = "opinion";
  EXPECT_THROW(VerificationReport::from_json(j), Error);
}

TEST(Report, ByIdentityKeysOnSuiteAndName) {
  const auto stats = sample_report().by_identity();
  ASSERT_EQ(stats.size(), 3u);
  EXPECT_EQ(stats[0].identity, "torsion-free");
  EXPECT_EQ(stats[0].count, 3);
  EXPECT_EQ(stats[0].failed, 2);
  EXPECT_TRUE(std::isnan(stats[0].max_residual));
}

TEST(Report, MergeKeepsOrder) {
  VerificationReport a, b;
  a.check("s", "m", "first", "", 0, 0.0, 1.0);
  b.check("s", "m", "second", "", 0, 0.0, 1.0);
  a.merge(b);
  ASSERT_EQ(a.records().size(), 2u);
  EXPECT_EQ(a.records()[1].identity, "second");
}

TEST(Tolerances, DefaultsAndOverrides) {
  Tolerances tol;
  EXPECT_EQ(tol.get("levi-civita", "closed-form"), 1e-5);
  EXPECT_EQ(tol.get("curvature-relations", "fd"), 1e-3);
  EXPECT_EQ(tol.get("anything", "algebraic"), 1e-10);
  tol.set("jet", 1e-7);
  tol.set("brackets.jet", 1e-8);
  EXPECT_EQ(tol.get("brackets", "jet"), 1e-8);
  EXPECT_EQ(tol.get("verify-contact", "jet"), 1e-7);
  EXPECT_THROW(tol.set("jets", 1e-3), ConfigError);
  EXPECT_THROW(tol.set("fd", -1.0), ConfigError);
  EXPECT_THROW(tol.get("s", "unknown"), Error);
}
