#include "indicatrix/frames.hpp"

#include <cmath>

namespace indicatrix {

VectorField VectorField::from_coefficients(int dim, std::function<VecJ(std::span<const JetD> z)> coeffs) {
  return VectorField{dim, [dim, coeffs](const VectorXd& z) {
                       if (z.size() != dim) throw Error("VectorField: point has the wrong dimension");
                       std::vector<double> p(z.data(), z.data() + z.size());
                       const auto seeds = seed_variables(p, 1);
                       return coeffs(seeds);
                     }};
}

double directional(const JetD& f, const VectorXd& v) {
  double d = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) d += v(k) * f.gradient(static_cast<int>(k));
  return d;
}

VectorXd lie_bracket(const VecJ& X, const VecJ& Y) {
  if (X.size() != Y.size()) throw Error("lie_bracket: fields of different dimension");
  const VectorXd x0 = values(X);
  const VectorXd y0 = values(Y);
  VectorXd out(X.size());
  for (Eigen::Index c = 0; c < X.size(); ++c) out(c) = directional(Y(c), x0) - directional(X(c), y0);
  return out;
}

VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const VectorXd& z) {
  return lie_bracket(X.at(z), Y.at(z));
}

VectorXd TangentPoint::z() const {
  VectorXd out(2 * N);
  out << x, y;
  return out;
}

TangentPoint tangent_point(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y) {
  TangentPoint p;
  p.N = metric.dim();
  p.x = x;
  p.y = y;
  p.local = local_geometry(metric, x, y, 4);
  const int N = p.N;
  const auto& m = p.local.jets;
  if (!is_positive_definite(values(m.g)))
    throw GeometryError("non-Finsler point: fundamental tensor is not positive definite");
  p.f2 = m.f2.truncate(1);
  p.yv.resize(N);
  for (int i = 0; i < N; ++i) p.yv(i) = p.local.z[N + i].truncate(1);
  p.g = truncate(m.g, 1);
  p.ginv = truncate(m.ginv, 1);
  p.N_ = m.connection;
  p.berwald = m.berwald;
  p.R = nl_curvature(p.local);

  const MatJ gN = mul(p.g, p.N_);
  const MatJ Nt = p.N_.transpose();
  p.sasaki.resize(2 * N, 2 * N);
  p.sasaki.topLeftCorner(N, N) = p.g + mul(Nt, gN);
  p.sasaki.topRightCorner(N, N) = gN.transpose();
  p.sasaki.bottomLeftCorner(N, N) = gN;
  p.sasaki.bottomRightCorner(N, N) = p.g;

  const MatJ I = MatrixXd::Identity(N, N).cast<JetD>();
  p.J.resize(2 * N, 2 * N);
  p.J.topLeftCorner(N, N) = p.N_;
  p.J.topRightCorner(N, N) = I;
  p.J.bottomLeftCorner(N, N) = -(I + mul(p.N_, p.N_));
  p.J.bottomRightCorner(N, N) = -p.N_;
  return p;
}

double sasaki_metric(const TangentPoint& p, const VectorXd& X, const VectorXd& Y) {
  return X.dot(values(p.sasaki) * Y);
}

namespace {

VecJ horizontal_lift(const TangentPoint& p, const VecJ& w) {
  // w^i delta_i = (w, -N w)
  const int N = p.N;
  VecJ out(2 * N);
  const VecJ nw = mul(p.N_, w);
  for (int i = 0; i < N; ++i) {
    out(i) = w(i);
    out(N + i) = -nw(i);
  }
  return out;
}

VecJ vertical_lift(int N, const VecJ& w) {
  VecJ out(2 * N);
  for (int i = 0; i < N; ++i) {
    out(i) = JetD(0.0);
    out(N + i) = w(i);
  }
  return out;
}

VecJ unit(int N, int a) {
  VecJ e(N);
  for (int i = 0; i < N; ++i) e(i) = JetD(i == a ? 1.0 : 0.0);
  return e;
}

}  // namespace

AdaptedFrame adapted_frame(const TangentPoint& p) {
  const int N = p.N;
  AdaptedFrame f;
  f.frame.resize(2 * N, 2 * N);
  for (int a = 0; a < N; ++a) {
    f.horizontal.push_back(horizontal_lift(p, unit(N, a)));
    f.vertical.push_back(vertical_lift(N, unit(N, a)));
    f.frame.col(a) = values(f.horizontal.back());
    f.frame.col(N + a) = values(f.vertical.back());
  }
  const MatrixXd N0 = values(p.N_);
  f.coframe = MatrixXd::Zero(2 * N, 2 * N);
  f.coframe.topLeftCorner(N, N).setIdentity();
  f.coframe.bottomLeftCorner(N, N) = N0;
  f.coframe.bottomRightCorner(N, N).setIdentity();
  return f;
}

std::vector<VectorField> adapted_frame_fields(const FinslerMetric& metric) {
  const int N = metric.dim();
  std::vector<VectorField> out;
  for (int k = 0; k < 2 * N; ++k) {
    out.push_back(VectorField{2 * N, [metric, N, k](const VectorXd& z) {
                                const auto p = tangent_point(metric, z.head(N), z.tail(N));
                                const auto f = adapted_frame(p);
                                return k < N ? f.horizontal[k] : f.vertical[k - N];
                              }});
  }
  return out;
}

int default_chart(const VectorXd& y) {
  Eigen::Index i0 = 0;
  y.cwiseAbs().maxCoeff(&i0);
  return static_cast<int>(i0);
}

IndicatrixFrame level_set_frame(const TangentPoint& p, int i0) {
  const int N = p.N;
  if (i0 < 0 || i0 >= N) throw Error("indicatrix frame: chart index out of range");
  IndicatrixFrame fr;
  fr.N = N;
  fr.i0 = i0;
  for (int k = 0; k < N; ++k)
    if (k != i0) fr.chart.push_back(k);

  const VecJ ylow = mul(p.g, p.yv);  // y_i = g_ij y^j
  JetD f2;
  for (int i = 0; i < N; ++i) f2 = f2 + ylow(i) * p.yv(i);
  fr.E.resize(N - 1, N);
  for (int a = 0; a < N - 1; ++a) {
    const int k = fr.chart[a];
    const JetD c = ylow(k) / f2;
    for (int i = 0; i < N; ++i) fr.E(a, i) = (i == k ? 1.0 : 0.0) - c * p.yv(i);
  }

  fr.fields.resize(2 * N, 2 * N);
  for (int a = 0; a < N - 1; ++a) {
    const VecJ Ea = fr.E.row(a).transpose();
    fr.fields.col(fr.dbar(a)) = horizontal_lift(p, Ea);
    fr.fields.col(fr.pbar(a)) = vertical_lift(N, Ea);
  }
  fr.fields.col(fr.xi()) = horizontal_lift(p, p.yv);
  fr.fields.col(fr.L()) = vertical_lift(N, p.yv);
  fr.F0 = values(fr.fields);

  Eigen::JacobiSVD<MatrixXd> svd(fr.F0);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) throw GeometryError("indicatrix frame: degenerate chart (rank deficient)");
  fr.F0inv = fr.F0.inverse();
  fr.gram = mul(MatJ(fr.fields.transpose()), mul(p.sasaki, fr.fields));
  return fr;
}

IndicatrixFrame indicatrix_frame(const TangentPoint& p, int i0) {
  const double F = p.F();
  if (std::abs(F - 1.0) > 1e-8) throw GeometryError("indicatrix frame: point is off the indicatrix (F = " +
                                                    std::to_string(F) + ")");
  return level_set_frame(p, i0 < 0 ? default_chart(p.y) : i0);
}

namespace {

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

VerificationReport frame_brackets(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                  const Tolerances& tol, const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const int N = metric.dim();
  const double structure = tol.get(suite, "structure");
  const double jet = tol.get(suite, "jet");
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const MatrixXd N0 = values(p.N_);

      // adapted frame
      const auto af = adapted_frame(p);
      rep.check(suite, manifold, "adapted coframe duality", "<dx^a, delta*_b> = <delta*y^a, d/dy^b> = delta, cross 0",
                s.index, max_abs(af.coframe * af.frame - MatrixXd::Identity(2 * N, 2 * N)), structure);
      double hb = 0.0;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
          const VectorXd br = lie_bracket(af.horizontal[a], af.horizontal[b]);
          VectorXd expected = VectorXd::Zero(2 * N);
          for (int c = 0; c < N; ++c) expected(N + c) = p.R.R[c](a, b);
          hb = std::max(hb, (br - expected).cwiseAbs().maxCoeff());
        }
      rep.check(suite, manifold, "horizontal bracket", "[delta*_a, delta*_b] = R^c_ab d/dy^c", s.index, hb, jet);

      // indicatrix frame
      const auto fr = indicatrix_frame(p);
      const MatrixXd E = values(fr.E);
      const MatrixXd g0 = values(p.g);
      const VectorXd y = s.y;
      rep.check(suite, manifold, "E orthogonal to y", "E_a^i g_ij y^j = 0", s.index, max_abs(E * g0 * y), structure);
      Eigen::FullPivLU<MatrixXd> lu(E);
      rep.check(suite, manifold, "E maximal rank", "rank E = N - 1", s.index, lu.rank() == N - 1 ? 0.0 : 1.0, 0.0);
      Eigen::JacobiSVD<MatrixXd> svd(fr.F0);
      const double cond = svd.singularValues()(0) / svd.singularValues()(2 * N - 1);
      rep.check(suite, manifold, "frame completeness", "condition number of the frame matrix below 1e6", s.index,
                cond / 1e6, 1.0)
          .detail = "cond = " + std::to_string(cond);

      const MatrixXd gram = values(fr.gram);
      const MatrixXd gab = E * g0 * E.transpose();
      MatrixXd pattern = MatrixXd::Zero(2 * N, 2 * N);
      pattern.topLeftCorner(N - 1, N - 1) = gab;
      pattern.block(N, N, N - 1, N - 1) = gab;
      const double F2 = p.f2.value();
      pattern(fr.xi(), fr.xi()) = F2;
      pattern(fr.L(), fr.L()) = F2;
      rep.check(suite, manifold, "frame Gram pattern", "G = diag(g_ab, F^2, g_ab, F^2) in the indicatrix frame",
                s.index, max_abs(gram - pattern), structure);

      const MatrixXd J0 = values(p.J);
      double jmap = 0.0;
      for (int a = 0; a < N - 1; ++a)
        jmap = std::max(jmap, (J0 * fr.F0.col(fr.pbar(a)) - fr.F0.col(fr.dbar(a))).cwiseAbs().maxCoeff());
      jmap = std::max(jmap, (J0 * fr.F0.col(fr.L()) - fr.F0.col(fr.xi())).cwiseAbs().maxCoeff());
      rep.check(suite, manifold, "J on the frame", "J pbar_a = dbar_a, J L = xi", s.index, jmap, structure);
      rep.check(suite, manifold, "J squared", "J^2 = -Id", s.index,
                max_abs(J0 * J0 + MatrixXd::Identity(2 * N, 2 * N)), structure);

      // bracket identities
      const int n1 = N - 1;
      auto dE = [&](int A) {  // (a, i) -> X_A(E_a^i)
        MatrixXd d(n1, N);
        for (int a = 0; a < n1; ++a)
          for (int i = 0; i < N; ++i) d(a, i) = directional(fr.E(a, i), fr.F0.col(A));
        return d;
      };
      MatrixXd Hc(2 * N, N), Vc = MatrixXd::Zero(2 * N, N);
      Hc.topRows(N).setIdentity();
      Hc.bottomRows(N) = -N0;
      Vc.bottomRows(N).setIdentity();
      auto col = [&](int A) { return VectorXd(fr.F0.col(A)); };
      auto br = [&](int A, int B) { return lie_bracket(fr.column(A), fr.column(B)); };
      auto Rcontract = [&](const VectorXd& u, const VectorXd& w) {
        VectorXd r(N);
        for (int k = 0; k < N; ++k) r(k) = u.dot(p.R.R[k] * w);
        return r;
      };
      auto Gcontract = [&](const VectorXd& u, const VectorXd& w) {
        VectorXd r(N);
        for (int k = 0; k < N; ++k) r(k) = u.dot(p.berwald[k] * w);
        return r;
      };
      const MatrixXd dXi = dE(fr.xi());
      const MatrixXd dL = dE(fr.L());
      std::vector<MatrixXd> dD(n1), dP(n1);
      for (int a = 0; a < n1; ++a) {
        dD[a] = dE(fr.dbar(a));
        dP[a] = dE(fr.pbar(a));
      }
      double r1 = 0, r2 = 0, r3 = 0, r4 = 0, r5 = 0, r6 = 0, r7 = 0;
      for (int a = 0; a < n1; ++a) {
        const VectorXd Ea = E.row(a).transpose();
        for (int b = 0; b < n1; ++b) {
          const VectorXd Eb = E.row(b).transpose();
          const VectorXd e1 = Hc * (dD[a].row(b) - dD[b].row(a)).transpose() + Vc * Rcontract(Ea, Eb);
          r1 = std::max(r1, (br(fr.dbar(a), fr.dbar(b)) - e1).cwiseAbs().maxCoeff());
          const VectorXd e2 = Vc * (dD[a].row(b).transpose() + Gcontract(Ea, Eb)) - Hc * dP[b].row(a).transpose();
          r2 = std::max(r2, (br(fr.dbar(a), fr.pbar(b)) - e2).cwiseAbs().maxCoeff());
          const VectorXd e3 = Vc * (dP[a].row(b) - dP[b].row(a)).transpose();
          r3 = std::max(r3, (br(fr.pbar(a), fr.pbar(b)) - e3).cwiseAbs().maxCoeff());
        }
        const VectorXd e4 = -Hc * (N0 * Ea + dXi.row(a).transpose()) + Vc * Rcontract(Ea, y);
        r4 = std::max(r4, (br(fr.dbar(a), fr.xi()) - e4).cwiseAbs().maxCoeff());
        const VectorXd e5 = col(fr.dbar(a)) - Vc * (dXi.row(a).transpose() + N0 * Ea);
        r5 = std::max(r5, (br(fr.pbar(a), fr.xi()) - e5).cwiseAbs().maxCoeff());
        const VectorXd e6 = -Hc * dL.row(a).transpose();
        r6 = std::max(r6, (br(fr.dbar(a), fr.L()) - e6).cwiseAbs().maxCoeff());
        const VectorXd e7 = col(fr.pbar(a)) - Vc * dL.row(a).transpose();
        r7 = std::max(r7, (br(fr.pbar(a), fr.L()) - e7).cwiseAbs().maxCoeff());
      }
      const double r8 = std::max({br(fr.xi(), fr.xi()).cwiseAbs().maxCoeff(), br(fr.L(), fr.L()).cwiseAbs().maxCoeff(),
                                  (br(fr.xi(), fr.L()) + col(fr.xi())).cwiseAbs().maxCoeff()});
      rep.check(suite, manifold, "bracket (1) [dbar_a, dbar_b]",
                "(dbar_a E_b - dbar_b E_a)^i delta_i + E_a^i E_b^j R^k_ij d/dy^k", s.index, r1, jet);
      rep.check(suite, manifold, "bracket (2) [dbar_a, pbar_b]",
                "(dbar_a E_b^k + E_a^i E_b^j G^k_ij) d/dy^k - pbar_b(E_a^i) delta_i", s.index, r2, jet);
      rep.check(suite, manifold, "bracket (3) [pbar_a, pbar_b]", "(pbar_a E_b - pbar_b E_a)^i d/dy^i", s.index, r3, jet);
      rep.check(suite, manifold, "bracket (4) [dbar_a, xi]",
                "-(E_a^i G^j_i + xi(E_a^j)) delta_j + E_a^i y^j R^k_ij d/dy^k", s.index, r4, jet);
      rep.check(suite, manifold, "bracket (5) [pbar_a, xi]", "dbar_a - (xi(E_a^j) + E_a^i G^j_i) d/dy^j", s.index, r5,
                jet);
      rep.check(suite, manifold, "bracket (6) [dbar_a, L]", "-L(E_a^i) delta_i", s.index, r6, jet);
      rep.check(suite, manifold, "bracket (7) [pbar_a, L]", "pbar_a - L(E_a^i) d/dy^i", s.index, r7, jet);
      rep.check(suite, manifold, "bracket (8) xi and L", "[xi, xi] = [L, L] = [xi, L] + xi = 0", s.index, r8, jet);
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "frame evaluable at the sample", s.index, INFINITY, 0.0).detail = e.what();
    }
  }
  return rep;
}

}  // namespace indicatrix
