#include <gtest/gtest.h>

#include "indicatrix/structures.hpp"
#include "indicatrix/warped.hpp"

using namespace indicatrix;

namespace {

ScalarField warp_from(const std::string& text, int n) {
  Expr e = Expr::parse(text, Dims{n, 0, false});
  return ScalarField{n, [e](std::span<const JetD> x) {
                       Env<JetD> env;
                       env.x = x;
                       return e.evaluate(env);
                     }};
}

ScalarField tau_from(const std::string& text) {
  Expr e = Expr::parse(text, Dims{0, 0, true});
  return ScalarField{1, [e](std::span<const JetD> t) {
                       Env<JetD> env;
                       env.t = &t[0];
                       return e.evaluate(env);
                     }};
}

FinslerMetric randers_metric() {
  return FinslerMetric::randers(2, constant_matrix(MatrixXd::Identity(2, 2)), [](std::span<const JetD> x) {
    VecJ b(2);
    b(0) = 0.2 * sin(x[1]);
    b(1) = 0.1 * x[0];
    return b;
  });
}

// f^2 = 1 + x1^2 on R x R: a surface of revolution, horizontally non-flat.
FinslerMetric curved_warp() {
  auto base = FinslerMetric::euclidean(1);
  return build_warped(base, FinslerMetric::euclidean(1), warp_from("sqrt(1 + x1^2)", 1)).combined;
}

const VerificationReport::IdentityStats* find(const VerificationReport& rep, const std::string& name) {
  static std::vector<VerificationReport::IdentityStats> keep;
  keep = rep.by_identity();
  for (const auto& s : keep)
    if (s.identity == name) return &s;
  return nullptr;
}

}  // namespace

TEST(Structures, FlatReebFieldIsHorizontalLiftOfY) {
  const auto p = tangent_point(FinslerMetric::euclidean(2), VectorXd::Zero(2), (VectorXd(2) << 0.6, 0.8).finished());
  const auto c = contact_data(p);
  EXPECT_NEAR((c.xi - (VectorXd(4) << 0.6, 0.8, 0, 0).finished()).norm(), 0.0, 1e-14);
  EXPECT_NEAR(c.eta_star.dot(c.xi), 1.0, 1e-14);
  EXPECT_NEAR((c.phi * c.xi).norm(), 0.0, 1e-14);
}

TEST(Structures, ContactAxiomsOnRanders) {
  const auto metric = randers_metric();
  const auto rep = verify_contact(metric, indicatrix_samples(metric, 10, 1.0, 7), {}, "verify-contact", "randers", 7);
  for (const auto& name : {"eta*(xi*) = 1", "phi(xi*) = 0", "eta* o phi = 0", "phi^2 = -Id + eta* (x) xi*",
                           "metric compatibility", "phi preserves T(IM)", "J compatibility", "eta = dF",
                           "d eta*(xi*, Y) = 0"}) {
    const auto* s = find(rep, name);
    ASSERT_NE(s, nullptr) << name;
    EXPECT_EQ(s->failed, 0) << name << " " << s->max_residual;
  }
}

TEST(Structures, ExteriorDerivativeCarriesTheOppositeSign) {
  const auto metric = randers_metric();
  const auto rep = verify_contact(metric, indicatrix_samples(metric, 10, 1.0, 3), {}, "verify-contact", "randers", 3);
  const auto* reversed = find(rep, "d eta*(X, Y) = -G(X, phi Y)");
  ASSERT_NE(reversed, nullptr);
  EXPECT_LT(reversed->max_residual, 1e-8);
  const auto* literal = find(rep, "d eta*(X, Y) = G(X, phi Y)");
  ASSERT_NE(literal, nullptr);
  EXPECT_GT(literal->min_residual, 1e-3);
}

TEST(Structures, FlatNijenhuisVanishes) {
  const auto metric = FinslerMetric::euclidean(2);
  const auto rep = kahler_check(metric, tangent_samples(metric, 5, 1.0, 1), {}, "verify-kahler", "flat");
  EXPECT_TRUE(rep.all_passed());
  bool kahler = false;
  for (const auto& r : rep.records())
    if (r.identity == "Kaehler verdict from N_J") kahler = r.detail == "Kaehler";
  EXPECT_TRUE(kahler);
}

TEST(Structures, NijenhuisMatchesCurvatureOnCurvedWarp) {
  const auto metric = curved_warp();
  const auto samples = tangent_samples(metric, 8, 1.0, 5);
  double rmax = 0.0;
  for (const auto& s : samples) {
    const auto p = tangent_point(metric, s.x, s.y);
    for (const auto& R : p.R.R) rmax = std::max(rmax, R.cwiseAbs().maxCoeff());
  }
  EXPECT_GT(rmax, 1e-3);
  const auto rep = kahler_check(metric, samples, {}, "verify-kahler", "warp");
  for (const auto& s : rep.by_identity()) EXPECT_EQ(s.failed, 0) << s.identity << " " << s.max_residual;
}

TEST(Structures, FlatnessCheckOnRanders) {
  const auto metric = randers_metric();
  const auto rep = flatness_integrability_check(metric, indicatrix_samples(metric, 5, 1.0, 2), {},
                                                "sasakian-obstruction", "randers");
  for (const auto& s : rep.by_identity()) EXPECT_EQ(s.failed, 0) << s.identity << " " << s.max_residual;
}

TEST(Structures, TrivialOproiuIsTheCanonicalStructure) {
  const auto metric = randers_metric();
  const auto p = tangent_point(metric, (VectorXd(2) << 0.1, -0.2).finished(), (VectorXd(2) << 0.7, 0.4).finished());
  OproiuParams params;
  params.tau = tau_from("0");
  const auto d = oproiu_build(p, params);
  EXPECT_LT((values(d.Jt) - values(p.J)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((d.Gt - adapted_frame(p).frame.transpose() * values(p.sasaki) * adapted_frame(p).frame)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(Structures, OproiuInverseByHand) {
  const auto p =
      tangent_point(FinslerMetric::euclidean(2), VectorXd::Zero(2), (VectorXd(2) << 0.6, 0.8).finished());
  OproiuParams params;
  params.A = 2.0;
  params.B = 3.0;
  params.tau = tau_from("t");
  const auto d = oproiu_build(p, params);
  // F^2 = 1, tau = 1: P = I/2 + yy^T/6, Q^ = 2 I - yy^T/2
  const Eigen::Vector2d y(0.6, 0.8);
  const MatrixXd P = 0.5 * MatrixXd::Identity(2, 2) + y * y.transpose() / 6.0;
  const MatrixXd Qup = 2.0 * MatrixXd::Identity(2, 2) - 0.5 * y * y.transpose();
  EXPECT_LT((values(d.P) - P).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((values(d.Qup) - Qup).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((P * Qup - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Structures, OproiuRejectsVanishingDenominator) {
  const auto p =
      tangent_point(FinslerMetric::euclidean(2), VectorXd::Zero(2), (VectorXd(2) << 0.6, 0.8).finished());
  OproiuParams params;
  params.B = 1.0;
  params.tau = tau_from("-1");
  EXPECT_THROW(oproiu_build(p, params), GeometryError);
}

TEST(Structures, OproiuClosedFormsMatchGenericNijenhuis) {
  const auto metric = randers_metric();
  OproiuParams params;
  params.A = 1.3;
  params.B = 0.7;
  params.tau = tau_from("0.2 + 0.1*t");
  const auto rep = verify_oproiu(metric, tangent_samples(metric, 6, 1.0, 11), params, {}, "verify-oproiu", "randers",
                                 11, 6);
  for (const auto& s : rep.by_identity())
    if (s.kind == RecordKind::identity) EXPECT_EQ(s.failed, 0) << s.identity << " " << s.max_residual;
  for (const auto& s : rep.by_identity())
    if (s.kind == RecordKind::info) std::printf("info %s: %g\n", s.identity.c_str(), s.max_residual);
}
