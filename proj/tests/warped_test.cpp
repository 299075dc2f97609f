#include <gtest/gtest.h>

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

WarpedProduct euclidean_pair(const std::string& f) {
  return build_warped(FinslerMetric::euclidean(2), FinslerMetric::euclidean(2), warp_from(f, 2));
}

VectorXd point(std::initializer_list<double> v) {
  VectorXd p(v.size());
  int i = 0;
  for (double d : v) p(i++) = d;
  return p;
}

}  // namespace

TEST(Warped, TrivialWarpIsEuclidean) {
  auto W = euclidean_pair("1");
  auto s = fundamental_tensor(W.combined, point({0.1, 0.2, 0.3, 0.4}), point({0.5, -0.2, 0.1, 0.7}));
  EXPECT_LT((s.g - MatrixXd::Identity(4, 4)).norm(), 1e-14);
}

TEST(Warped, WarpScalesSecondBlock) {
  auto W = euclidean_pair("sqrt(1 + x1^2)");
  const double x1 = 0.7;
  auto s = fundamental_tensor(W.combined, point({x1, 0.2, -0.3, 0.4}), point({0.5, -0.2, 0.1, 0.7}));
  MatrixXd expected = MatrixXd::Identity(4, 4);
  expected(2, 2) = expected(3, 3) = 1.0 + x1 * x1;
  EXPECT_LT((s.g - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Warped, NonpositiveWarpRejected) {
  EXPECT_THROW(euclidean_pair("x1"), GeometryError);
  EXPECT_THROW(euclidean_pair("0.5 - x1^2"), GeometryError);
}

TEST(Warped, ConstantWarpLeavesSprayUnchanged) {
  MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.0, 1.0;
  auto F1 = FinslerMetric::randers(2, constant_matrix(A), [](std::span<const JetD> x) {
    VecJ b(2);
    b(0) = 0.2 * sin(x[1]);
    b(1) = 0.1 * x[0];
    return b;
  });
  auto W = build_warped(F1, FinslerMetric::euclidean(2), warp_from("2", 2));
  VectorXd p = point({0.3, -0.2, 0.5, 0.1, 0.4, 0.6, -0.3, 0.2});
  auto c = warped_connection_closed_form(W, p);
  auto G1 = spray(F1, p.segment(0, 2), p.segment(4, 2));
  EXPECT_LT((c.B.head(2) - G1.G).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(c.B.tail(2).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((c.Bab.topLeftCorner(2, 2) - G1.Gj).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(c.Bab.topRightCorner(2, 2).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(c.Bab.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Warped, HandEvaluatedSprayAndConnectionTerms) {
  auto W = euclidean_pair("sqrt(1 + x1^2)");
  // x1 = 1, v = (1, 0): B^1 = -1/4 * |v|^2 * 2 x1 = -0.5
  auto c = warped_connection_closed_form(W, point({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0}));
  EXPECT_NEAR(c.B(0), -0.5, 1e-12);
  EXPECT_NEAR(c.B_generic(0), -0.5, 1e-12);
  // x1 = 1, y = (1, 0): the (1/2f^2) df^2/dx^j y^j term of B^alpha_beta is 0.5
  auto d = warped_connection_closed_form(W, point({1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.3, 0.4}));
  EXPECT_NEAR(d.Bab(2, 2), 0.5, 1e-12);
  EXPECT_NEAR(d.Bab(3, 3), 0.5, 1e-12);
  EXPECT_NEAR(d.Bab_jet(2, 2), 0.5, 1e-12);
}

TEST(Warped, ClosedFormsMatchGenericMachinery) {
  MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.0, 1.0;
  auto F1 = FinslerMetric::randers(2, constant_matrix(A), constant_vector(Eigen::Vector2d(0.3, 0.2)));
  auto F2 = FinslerMetric::riemannian(2, [](std::span<const JetD> u) {
    MatJ a(2, 2);
    a(0, 0) = JetD(1.0);
    a(0, 1) = a(1, 0) = JetD(0.0);
    a(1, 1) = 1.0 + u[0] * u[0];
    return a;
  });
  auto W = build_warped(F1, F2, warp_from("exp(0.2*x1) + 0.1*x2^2", 2));
  auto rep = check_warped(W, tangent_samples(W.combined, 100, 1.0, 17));
  EXPECT_TRUE(rep.all_passed());
  for (const auto& stats : rep.by_identity()) EXPECT_EQ(stats.failed, 0) << stats.identity << " max " << stats.max_residual;
}
