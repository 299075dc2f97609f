#include <gtest/gtest.h>

#include "indicatrix/connection.hpp"
#include "indicatrix/warped.hpp"

using namespace indicatrix;

namespace {

FinslerMetric randers3() {
  return FinslerMetric::randers(
      3,
      [](std::span<const JetD> x) {
        MatJ a(3, 3);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) a(i, j) = JetD(i == j ? 1.0 : 0.0);
        a(0, 0) = 1.0 + 0.3 * x[1] * x[1];
        a(1, 2) = a(2, 1) = 0.1 * x[0];
        return a;
      },
      [](std::span<const JetD> x) {
        VecJ b(3);
        b(0) = 0.2 * sin(x[1]);
        b(1) = 0.1 * x[0];
        b(2) = 0.05 * x[2] * x[0];
        return b;
      });
}

FinslerMetric curved_warp() {
  Expr e = Expr::parse("sqrt(1 + x1^2 + 0.5*x2^2)", Dims{2, 0, false});
  ScalarField f{2, [e](std::span<const JetD> x) {
                  Env<JetD> env;
                  env.x = x;
                  return e.evaluate(env);
                }};
  return build_warped(FinslerMetric::euclidean(2), FinslerMetric::euclidean(1), f).combined;
}

void expect_identities_pass(const VerificationReport& rep) {
  for (const auto& s : rep.by_identity())
    if (s.kind == RecordKind::identity) EXPECT_EQ(s.failed, 0) << s.identity << " max residual " << s.max_residual;
}

}  // namespace

TEST(Connection, FlatCoordinateFieldsAreParallel) {
  // in the flat case the horizontal frame fields built from constant E are parallel along each other
  const auto metric = FinslerMetric::euclidean(2);
  const auto p = tangent_point(metric, VectorXd::Zero(2), (VectorXd(2) << 0.0, 1.0).finished());
  const auto fr = indicatrix_frame(p);
  const auto t = levi_civita_table(p, fr);
  EXPECT_LT(t(fr.xi(), fr.xi()).norm(), 1e-14);
  EXPECT_LT(t(fr.dbar(0), fr.dbar(0)).norm(), 1e-14);
}

TEST(Connection, KoszulAgreesWithDirectFormula) {
  const auto metric = randers3();
  const auto s = indicatrix_samples(metric, 1, 1.0, 4).front();
  const auto p = tangent_point(metric, s.x, s.y);
  const auto fr = indicatrix_frame(p);
  const auto t = levi_civita_table(p, fr);
  const MatrixXd G0 = values(fr.gram);
  for (int A = 0; A < fr.size(); ++A)
    for (int B = 0; B < fr.size(); ++B)
      for (int C = 0; C < fr.size(); ++C)
        EXPECT_NEAR(koszul(fr, t, A, B, C), 2.0 * t(A, B).dot(G0.col(C)), 1e-12);
}

TEST(Connection, LastLineOfTable) {
  const auto metric = randers3();
  for (const auto& s : indicatrix_samples(metric, 5, 1.0, 8)) {
    const auto p = tangent_point(metric, s.x, s.y);
    const auto fr = indicatrix_frame(p);
    const auto t = levi_civita_table(p, fr);
    const int xi = fr.xi(), L = fr.L();
    EXPECT_LT(t(xi, xi).norm(), 1e-10);
    EXPECT_LT(t(xi, L).norm(), 1e-10);
    VectorXd e = VectorXd::Zero(fr.size());
    e(xi) = 1.0;
    EXPECT_LT((t(L, xi) - e).norm(), 1e-10);
    e.setZero();
    e(L) = 1.0;
    EXPECT_LT((t(L, L) - e).norm(), 1e-10);
    for (int a = 0; a < fr.N - 1; ++a) EXPECT_LT(t(fr.dbar(a), L).norm(), 1e-10);
  }
}

TEST(Connection, EuclideanVerticalNormalTerm) {
  const auto metric = FinslerMetric::euclidean(3);
  const auto p = tangent_point(metric, VectorXd::Zero(3), (VectorXd(3) << 0.6, 0.0, 0.8).finished());
  const auto fr = indicatrix_frame(p);
  const MatrixXd h = second_fundamental_form(fr, levi_civita_table(p, fr));
  const auto sc = frame_scalars(p, fr);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(h(fr.pbar(a), fr.pbar(b)), -sc.g(a, b), 1e-12);
}

TEST(Connection, LeviCivitaSuiteOnRanders) {
  const auto metric = randers3();
  const auto rep = levi_civita(metric, indicatrix_samples(metric, 10, 1.0, 2), {}, "levi-civita", "randers");
  expect_identities_pass(rep);
  double spec_reading = 0.0;
  for (const auto& r : rep.records())
    if (r.kind == RecordKind::info) spec_reading = std::max(spec_reading, r.residual);
  EXPECT_GT(spec_reading, 1e-3);
}

TEST(Connection, LeviCivitaSuiteOnCurvedWarp) {
  const auto metric = curved_warp();
  expect_identities_pass(levi_civita(metric, indicatrix_samples(metric, 10, 1.0, 6), {}, "levi-civita", "warp"));
}

TEST(Connection, CurvatureRelations) {
  for (const auto& metric : {randers3(), curved_warp(), FinslerMetric::euclidean(3)})
    expect_identities_pass(
        curvature_relations(metric, indicatrix_samples(metric, 5, 1.0, 12), {}, "curvature-relations", "m"));
}

TEST(Connection, FlatGTermPersists) {
  // for a flat base only the third relation carries a correction
  const auto metric = FinslerMetric::euclidean(3);
  const auto p = tangent_point(metric, VectorXd::Zero(3), (VectorXd(3) << 0.0, 0.6, 0.8).finished());
  const auto fr = indicatrix_frame(p);
  const auto cd = curvature(metric, p, fr);
  double g_term = 0.0, rest = 0.0;
  for (int A = 0; A < fr.size(); ++A)
    for (int B = 0; B < fr.size(); ++B)
      for (int C = 0; C < fr.size(); ++C) {
        if (A == fr.L() || B == fr.L() || C == fr.L()) continue;
        const double d = (cd.ambient(A, B, C) - cd.induced(A, B, C)).cwiseAbs().maxCoeff();
        if (A > fr.xi() && B > fr.xi() && C > fr.xi())
          g_term = std::max(g_term, d);
        else
          rest = std::max(rest, d);
      }
  EXPECT_GT(g_term, 0.5);
  EXPECT_LT(rest, 1e-6);
}

TEST(Connection, TildeConnectionOnContactDistribution) {
  const auto metric = randers3();
  const auto s = indicatrix_samples(metric, 1, 1.0, 5).front();
  const auto p = tangent_point(metric, s.x, s.y);
  const auto fr = indicatrix_frame(p);
  const auto t = levi_civita_table(p, fr);
  const auto c = frame_contact(fr, t);
  // eta vanishes on D, so only the xi correction is added
  const int A = fr.dbar(0), B = fr.pbar(1);
  VectorXd expected = t(A, B);
  expected(fr.L()) = 0.0;
  expected(fr.xi()) += c.d_eta(A, B) + 0.5 * c.lie_xi_g(A, B);
  EXPECT_LT((tilde_connection(fr, t, c, A, B) - expected).norm(), 1e-14);
  EXPECT_LT(tilde_connection(fr, t, c, fr.xi(), fr.xi()).norm(), 1e-10);
}

TEST(Connection, SasakianObstruction) {
  for (const auto& metric : {randers3(), curved_warp(), FinslerMetric::euclidean(2)}) {
    const auto rep = sasakian_obstruction(metric, indicatrix_samples(metric, 8, 1.0, 9), {}, "sasakian-obstruction", "m");
    expect_identities_pass(rep);
    bool impossible = false;
    for (const auto& r : rep.records())
      if (r.kind == RecordKind::classification) impossible = r.detail == "Sasakian impossible";
    EXPECT_TRUE(impossible);
  }
}
