#include "indicatrix/warped.hpp"

#include <cmath>

namespace indicatrix {

namespace {

double warp_value(const ScalarField& warp, const VectorXd& x) {
  return warp.at(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

}  // namespace

WarpedProduct build_warped(FinslerMetric F1, FinslerMetric F2, ScalarField warp, std::string label, double radius) {
  const int n = F1.dim();
  const int m = F2.dim();
  if (warp.arity != n) throw Error("build_warped: warp must be a function of the first factor's x");

  // centre plus the corners of the sampling box
  for (int mask = -1; mask < (1 << n); ++mask) {
    VectorXd x = VectorXd::Zero(n);
    if (mask >= 0)
      for (int i = 0; i < n; ++i) x(i) = (mask >> i & 1) ? radius : -radius;
    const double f = warp_value(warp, x);
    if (!(f > 0.0)) throw GeometryError("warp f is not positive at a probe point (f = " + std::to_string(f) + ")");
  }

  ScalarField f2{2 * (n + m), [F1, F2, warp, n, m](std::span<const JetD> z) {
                   const int N = n + m;
                   auto x = z.first(n);
                   auto u = z.subspan(n, m);
                   auto y = z.subspan(N, n);
                   auto v = z.subspan(N + n, m);
                   const JetD f = warp(x);
                   if (!(scalar_value(f.value()) > 0.0)) throw GeometryError("warp f is not positive");
                   return F1.f2(x, y) + f * f * F2.f2(u, v);
                 }};
  FinslerMetric combined(n + m, MetricKind::warped, std::move(f2), std::move(label));
  return WarpedProduct{std::move(F1), std::move(F2), std::move(warp), std::move(combined)};
}

namespace {

WarpedConnection closed_form(const WarpedProduct& W, const VectorXd& point, bool with_connection) {
  const int n = W.n();
  const int m = W.m();
  const int N = n + m;
  if (point.size() != 2 * N) throw Error("warped: point must have 2(n+m) coordinates");

  // Order 3 gives G^i to order 1, hence dB/dy by jets, and G^i_j exactly.
  std::vector<double> p(point.data(), point.data() + point.size());
  const auto z = seed_variables(p, 3);
  std::span<const JetD> zs(z);
  std::vector<int> xv(n), yv(n), uv(m), vv(m);
  for (int i = 0; i < n; ++i) {
    xv[i] = i;
    yv[i] = N + i;
  }
  for (int a = 0; a < m; ++a) {
    uv[a] = n + a;
    vv[a] = N + n + a;
  }
  const MetricJets j1 = metric_jets(W.F1, zs.first(n), zs.subspan(N, n), xv, yv);
  const MetricJets j2 = metric_jets(W.F2, zs.subspan(n, m), zs.subspan(N + n, m), uv, vv);

  const JetD f = W.warp(zs.first(n));
  const JetD fsq3 = f * f;
  const JetD fsq = fsq3.truncate(1);
  std::vector<JetD> dfsq(n);  // d f^2 / dx^j, order 1
  for (int j = 0; j < n; ++j) dfsq[j] = fsq3.derivative(j).truncate(1);
  const JetD F2sq = j2.f2.truncate(1);
  std::vector<JetD> dF2(m);  // dF2^2 / dv^beta, order 1
  for (int b = 0; b < m; ++b) dF2[b] = j2.f2.derivative(vv[b]).truncate(1);
  const MatJ ginv1 = truncate(j1.ginv, 1);
  const MatJ ginv2 = truncate(j2.ginv, 1);

  JetD ydf;  // (df^2/dx^i) y^i
  for (int i = 0; i < n; ++i) ydf = ydf + dfsq[i] * z[N + i].truncate(1);

  VecJ B(N);
  for (int i = 0; i < n; ++i) {
    JetD s;
    for (int j = 0; j < n; ++j) s = s + ginv1(i, j) * dfsq[j];
    B(i) = j1.spray(i) - 0.25 * s * F2sq;
  }
  for (int a = 0; a < m; ++a) {
    JetD s;
    for (int b = 0; b < m; ++b) s = s + ginv2(a, b) * dF2[b];
    B(n + a) = j2.spray(a) + s * ydf / (4.0 * fsq);
  }

  WarpedConnection out;
  out.B = values(B);
  const auto local = local_geometry(W.combined, point.head(N), point.tail(N), with_connection ? 4 : 2);
  out.g = values(local.jets.g);
  out.g1 = values(j1.g);
  out.g2 = values(j2.g);
  out.f2 = fsq.value();
  // the generic spray needs F^2 to order 2 beyond g; order 2 already gives G^a
  out.B_generic = values(local.jets.spray);
  if (!with_connection) return out;

  out.Bab_generic = values(local.jets.connection);
  out.Bab_jet.resize(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) out.Bab_jet(a, b) = B(a).gradient(N + b);

  // Factor-level values for the connection blocks.
  const MatrixXd G1j = values(j1.connection);
  const MatrixXd G2j = values(j2.connection);
  const MatrixXd gi1 = values(j1.ginv);
  const MatrixXd gi2 = values(j2.ginv);
  const double fs = fsq.value();
  const double F2v = F2sq.value();
  VectorXd dfv(n), dF2v(m);
  for (int j = 0; j < n; ++j) dfv(j) = dfsq[j].value();
  for (int b = 0; b < m; ++b) dF2v(b) = dF2[b].value();
  const double ydfv = ydf.value();

  MatrixXd& C = out.Bab;
  C.setZero(N, N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int h = 0; h < n; ++h) s += dfv(h) * j1.ginv(i, h).gradient(yv[j]);
      C(i, j) = G1j(i, j) - 0.25 * F2v * s;
    }
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b) C(i, n + b) = -0.25 * gi1.row(i).dot(dfv) * dF2v(b);
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < n; ++j) C(n + a, j) = gi2.row(a).dot(dF2v) * dfv(j) / (4.0 * fs);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) C(n + a, n + b) = G2j(a, b) + (a == b ? ydfv / (2.0 * fs) : 0.0);
  return out;
}

}  // namespace

WarpedConnection warped_spray_closed_form(const WarpedProduct& W, const VectorXd& point) {
  return closed_form(W, point, false);
}

WarpedConnection warped_connection_closed_form(const WarpedProduct& W, const VectorXd& point) {
  return closed_form(W, point, true);
}

VerificationReport check_warped(const WarpedProduct& W, const std::vector<Sample>& samples, const Tolerances& tol,
                                const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const int n = W.n();
  const int N = W.dim();
  const double alg = tol.get(suite, "algebraic");
  const double jet = tol.get(suite, "jet");
  for (const auto& s : samples) {
    try {
      VectorXd p(2 * N);
      p << s.x, s.y;
      const auto c = warped_connection_closed_form(W, p);

      MatrixXd expected = MatrixXd::Zero(N, N);
      expected.topLeftCorner(n, n) = c.g1;
      expected.bottomRightCorner(N - n, N - n) = c.f2 * c.g2;
      const double scale = std::max(1.0, c.g.cwiseAbs().maxCoeff());
      rep.check(suite, manifold, "warped metric blocks", "g = diag(g_ij, f^2 g_alpha beta), no mixed block", s.index,
                (c.g - expected).cwiseAbs().maxCoeff() / scale, alg);
      rep.check(suite, manifold, "warped spray closed form",
                "B^i = G^i - 1/4 g^ij F2^2 df^2/dx^j, B^alpha = G^alpha + (1/4f^2) g^alpha beta dF2^2/dv^beta df^2/dx^i y^i",
                s.index, (c.B - c.B_generic).cwiseAbs().maxCoeff(), jet);
      rep.check(suite, manifold, "warped connection closed form", "four blocks of B^a_b vs dB^a/dy^b by jets", s.index,
                (c.Bab - c.Bab_jet).cwiseAbs().maxCoeff(), jet);
      rep.check(suite, manifold, "warped connection vs combined metric",
                "closed-form B^a_b vs nonlinear connection of the combined metric", s.index,
                (c.Bab - c.Bab_generic).cwiseAbs().maxCoeff(), jet);
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "warped product evaluable at the sample", s.index, INFINITY, 0.0).detail =
          e.what();
    }
  }
  return rep;
}

}  // namespace indicatrix
