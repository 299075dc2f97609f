#include <gtest/gtest.h>

#include "indicatrix/frames.hpp"
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

FinslerMetric randers_metric() {
  return FinslerMetric::randers(2, constant_matrix(MatrixXd::Identity(2, 2)), [](std::span<const JetD> x) {
    VecJ b(2);
    b(0) = 0.2 * sin(x[1]);
    b(1) = 0.1 * x[0];
    return b;
  });
}

void expect_all_pass(const VerificationReport& rep) {
  EXPECT_TRUE(rep.all_passed());
  for (const auto& s : rep.by_identity())
    EXPECT_EQ(s.failed, 0) << s.identity << " max residual " << s.max_residual;
}

}  // namespace

TEST(Frames, CoordinateFieldsCommute) {
  auto dx = [](int k) {
    return VectorField::from_coefficients(4, [k](std::span<const JetD>) {
      VecJ c(4);
      for (int i = 0; i < 4; ++i) c(i) = JetD(i == k ? 1.0 : 0.0);
      return c;
    });
  };
  EXPECT_LT(lie_bracket(dx(0), dx(1), Eigen::Vector4d(0.1, 0.2, 0.3, 0.4)).norm(), 1e-15);
}

TEST(Frames, BracketWithScaledField) {
  // X = d/dx2, f = x1 + x2^2: [X, fX] = X(f) X = 2 x2 X
  auto X = VectorField::from_coefficients(4, [](std::span<const JetD>) {
    VecJ c(4);
    for (int i = 0; i < 4; ++i) c(i) = JetD(i == 1 ? 1.0 : 0.0);
    return c;
  });
  auto fX = VectorField::from_coefficients(4, [](std::span<const JetD> z) {
    VecJ c(4);
    for (int i = 0; i < 4; ++i) c(i) = JetD(0.0);
    c(1) = z[0] + z[1] * z[1];
    return c;
  });
  const Eigen::Vector4d z(0.3, 0.7, 1.0, 0.0);
  const VectorXd b = lie_bracket(X, fX, z);
  EXPECT_NEAR(b(1), 2 * 0.7, 1e-14);
  EXPECT_NEAR(b(0) + b(2) + b(3), 0.0, 1e-14);
}

TEST(Frames, FlatAdaptedFrameIsCoordinate) {
  auto W = build_warped(FinslerMetric::euclidean(2), FinslerMetric::euclidean(2), warp_from("1", 2));
  auto p = tangent_point(W.combined, Eigen::Vector4d(0.1, 0.2, 0.3, 0.4), Eigen::Vector4d(0.5, 0.1, -0.4, 0.2));
  auto f = adapted_frame(p);
  EXPECT_LT((f.frame - MatrixXd::Identity(8, 8)).norm(), 1e-14);
}

TEST(Frames, AdaptedFieldsMatchWarpedClosedForm) {
  auto W = build_warped(FinslerMetric::euclidean(2), FinslerMetric::euclidean(2), warp_from("sqrt(1 + x1^2)", 2));
  VectorXd z(8);
  z << 0.4, -0.2, 0.3, 0.1, 0.6, -0.5, 0.2, 0.7;
  auto p = tangent_point(W.combined, z.head(4), z.tail(4));
  auto f = adapted_frame(p);
  auto c = warped_connection_closed_form(W, z);
  // delta*/delta*u^alpha carries -B^i_alpha d/dy^i
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(f.frame(4 + i, 2 + alpha), -c.Bab(i, 2 + alpha), 1e-8);
  // the generic VectorField form agrees with the point form
  auto fields = adapted_frame_fields(W.combined);
  EXPECT_LT((values(fields[2].at(z)) - f.frame.col(2)).norm(), 1e-14);
}

TEST(Frames, EuclideanIndicatrixFrame) {
  auto F = FinslerMetric::euclidean(2);
  auto p = tangent_point(F, Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0));
  auto fr = indicatrix_frame(p);
  EXPECT_EQ(fr.i0, 0);
  const MatrixXd E = values(fr.E);
  // Gram-Schmidt of e2 against y = e1 gives e2 itself
  EXPECT_NEAR(E(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(E(0, 1), 1.0, 1e-15);
}

TEST(Frames, OffIndicatrixRejected) {
  auto F = FinslerMetric::euclidean(2);
  auto p = tangent_point(F, Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(2.0, 0.0));
  EXPECT_THROW(indicatrix_frame(p), GeometryError);
}

TEST(Frames, BracketTableOnCatalogLikeMetrics) {
  auto R = randers_metric();
  expect_all_pass(frame_brackets(R, indicatrix_samples(R, 30, 1.0, 4)));
  auto W = build_warped(randers_metric(), FinslerMetric::euclidean(2), warp_from("exp(0.2*x1)", 2));
  expect_all_pass(frame_brackets(W.combined, indicatrix_samples(W.combined, 30, 1.0, 5)));
}

TEST(Frames, FlatHorizontalBracketHasNoVerticalPart) {
  auto W = build_warped(FinslerMetric::euclidean(2), FinslerMetric::euclidean(2), warp_from("1", 2));
  for (const auto& s : indicatrix_samples(W.combined, 10, 1.0, 6)) {
    auto p = tangent_point(W.combined, s.x, s.y);
    auto fr = indicatrix_frame(p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const VectorXd br = lie_bracket(fr.column(fr.dbar(a)), fr.column(fr.dbar(b)));
        // vertical part of [dbar_a, dbar_b] minus the part carried by the delta_i = d/dx^i term
        EXPECT_LT(br.tail(4).cwiseAbs().maxCoeff(), 1e-12);
      }
  }
}
