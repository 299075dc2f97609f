#include "indicatrix/connection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace indicatrix {

namespace {

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

enum class FieldType { dbar, xi, pbar, L };

FieldType type_of(const IndicatrixFrame& fr, int A) {
  if (A == fr.xi()) return FieldType::xi;
  if (A == fr.L()) return FieldType::L;
  return A < fr.xi() ? FieldType::dbar : FieldType::pbar;
}

}  // namespace

ConnectionTable frame_bracket_table(const IndicatrixFrame& fr) {
  const int n2 = fr.size();
  ConnectionTable t;
  t.n2 = n2;
  t.bracket.resize(n2 * n2);
  std::vector<VecJ> cols(n2);
  for (int A = 0; A < n2; ++A) cols[A] = fr.column(A);
  for (int A = 0; A < n2; ++A)
    for (int B = 0; B < n2; ++B) t.bracket[A * n2 + B] = fr.F0inv * lie_bracket(cols[A], cols[B]);
  return t;
}

double koszul(const IndicatrixFrame& fr, const ConnectionTable& t, int A, int B, int C) {
  const MatrixXd G0 = values(fr.gram);
  auto d = [&](int X, int Y, int Z) { return directional(fr.gram(Y, Z), fr.F0.col(X)); };
  return d(A, B, C) + d(B, A, C) - d(C, A, B) - t.c(A, C).dot(G0.col(B)) - t.c(B, C).dot(G0.col(A)) +
         t.c(A, B).dot(G0.col(C));
}

ConnectionTable levi_civita_table(const TangentPoint& p, const IndicatrixFrame& fr) {
  (void)p;
  ConnectionTable t = frame_bracket_table(fr);
  const int n2 = t.n2;
  const MatrixXd G0 = values(fr.gram);
  const MatrixXd G0inv = G0.inverse();
  // derivatives of the Gram matrix along every frame field: dG[X](Y, Z)
  std::vector<MatrixXd> dG(n2, MatrixXd(n2, n2));
  for (int X = 0; X < n2; ++X)
    for (int Y = 0; Y < n2; ++Y)
      for (int Z = 0; Z < n2; ++Z) dG[X](Y, Z) = directional(fr.gram(Y, Z), fr.F0.col(X));
  t.nabla.assign(n2 * n2, VectorXd());
  for (int A = 0; A < n2; ++A)
    for (int B = 0; B < n2; ++B) {
      VectorXd K(n2);
      for (int C = 0; C < n2; ++C)
        K(C) = dG[A](B, C) + dG[B](A, C) - dG[C](A, B) - t.c(A, C).dot(G0.col(B)) - t.c(B, C).dot(G0.col(A)) +
               t.c(A, B).dot(G0.col(C));
      t(A, B) = 0.5 * G0inv * K;
    }
  return t;
}

FrameScalars frame_scalars(const TangentPoint& p, const IndicatrixFrame& fr) {
  const int N = p.N;
  const int n = N - 1;
  FrameScalars s;
  s.n = n;
  s.f2 = p.f2.value();
  const MatrixXd E = values(fr.E);
  const MatrixXd g = values(p.g);
  const MatrixXd gi = values(p.ginv);
  const VectorXd y = p.y;
  const auto af = adapted_frame(p);
  s.g = E * g * E.transpose();
  s.ginv = s.g.inverse();

  // dgy[k](i, j) = dg_ij/dy^k, dgx[k](i, j) = delta*_k g_ij
  std::vector<MatrixXd> dgy(N, MatrixXd(N, N)), dgx(N, MatrixXd(N, N));
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        dgy[k](i, j) = p.g(i, j).gradient(N + k);
        dgx[k](i, j) = directional(p.g(i, j), af.frame.col(k));
      }
  // lowered Christoffel symbols of the horizontal derivatives: Gl[k](i, j) = Gamma^h_ij g_hk
  std::vector<MatrixXd> Gl(N, MatrixXd(N, N));
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) Gl[k](i, j) = 0.5 * (dgx[i](j, k) + dgx[j](i, k) - dgx[k](i, j));
  // Berwald lowered: Bl[k](i, j) = G^h_ij g_hk
  std::vector<MatrixXd> Bl(N, MatrixXd::Zero(N, N)), Rl(N, MatrixXd::Zero(N, N));
  for (int k = 0; k < N; ++k)
    for (int h = 0; h < N; ++h) {
      Bl[k] += g(h, k) * p.berwald[h];
      Rl[k] += g(h, k) * p.R.R[h];
    }

  auto contract3 = [&](auto&& T) {
    // out[d](a, b) = E_a^i E_b^j E_d^k T(i, j, k)
    std::vector<MatrixXd> out(n, MatrixXd::Zero(n, n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          double acc = 0.0;
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
              for (int k = 0; k < N; ++k) acc += E(a, i) * E(b, j) * E(d, k) * T(i, j, k);
          out[d](a, b) = acc;
        }
    return out;
  };
  s.g3 = contract3([&](int i, int j, int k) { return 0.5 * dgy[k](i, j); });
  s.christoffel = contract3([&](int i, int j, int k) { return Gl[k](i, j); });
  s.R3 = contract3([&](int i, int j, int k) { return Rl[k](i, j); });
  s.mixed_plus = contract3(
      [&](int i, int j, int k) { return 0.5 * (dgx[i](j, k) - Bl[j](i, k) + Bl[k](i, j)); });
  s.mixed_minus = contract3(
      [&](int i, int j, int k) { return 0.5 * (dgx[i](j, k) - Bl[j](i, k) - Bl[k](i, j)); });
  s.vertical_h = contract3(
      [&](int i, int j, int k) { return 0.5 * (Bl[j](i, k) + Bl[i](j, k) - dgx[k](i, j)); });

  const VectorXd ylow = g * y;
  s.Rbar.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int i = 0; i < N; ++i)
        acc += (directional(fr.E(b, i), fr.F0.col(fr.dbar(a))) - directional(fr.E(a, i), fr.F0.col(fr.dbar(b)))) *
               ylow(i);
      s.Rbar(a, b) = acc;
    }
  MatrixXd Ry(N, N);  // (k, i) -> y^j R^h_ij g_hk
  for (int k = 0; k < N; ++k) Ry.row(k) = (Rl[k] * y).transpose();
  // R_ab = E_a^i E_b^j y^k R^h_ki g_hj, the vertical part of [xi, dbar_a] paired with pbar_b
  s.R2_dbar_xi = E * Ry.transpose() * E.transpose();
  s.R2 = -s.R2_dbar_xi;
  (void)gi;
  return s;
}

int table_line(const IndicatrixFrame& fr, int A, int B) {
  using T = FieldType;
  const T a = type_of(fr, A), b = type_of(fr, B);
  if (a == T::dbar && b == T::dbar) return 1;
  if (a == T::dbar && b == T::pbar) return 2;
  if (a == T::pbar && b == T::dbar) return 3;
  if (a == T::pbar && b == T::pbar) return 4;
  if (a == T::dbar && b == T::xi) return 5;
  if (a == T::xi && b == T::dbar) return 6;
  if (a == T::pbar && b == T::xi) return 7;
  if (a == T::xi && b == T::pbar) return 8;
  if ((a == T::dbar && b == T::L) || (a == T::L && b == T::dbar)) return 9;
  if ((a == T::pbar && b == T::L) || (a == T::L && b == T::pbar)) return 10;
  return 11;
}

ConnectionTable closed_form_table(const TangentPoint& p, const IndicatrixFrame& fr, const FrameScalars& s) {
  const int N = p.N;
  const int n = s.n;
  const int n2 = fr.size();
  const MatrixXd g = values(p.g);
  const MatrixXd N0 = values(p.N_);
  const double f2 = s.f2;
  ConnectionTable t;
  t.n2 = n2;
  t.nabla.assign(n2 * n2, VectorXd::Zero(n2));

  // X(E_b^j) E_d^k g_jk for a frame field X: dE(X)(b, d)
  auto dE = [&](int X) {
    MatrixXd out(n, n);
    MatrixXd D(n, N);
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < N; ++j) D(b, j) = directional(fr.E(b, j), fr.F0.col(X));
    out = D * g * values(fr.E).transpose();
    return out;
  };
  const MatrixXd E = values(fr.E);
  const MatrixXd& gi = s.ginv;
  auto put_d = [&](VectorXd& v, const VectorXd& c) {
    for (int e = 0; e < n; ++e) v(fr.dbar(e)) += c(e);
  };
  auto put_p = [&](VectorXd& v, const VectorXd& c) {
    for (int e = 0; e < n; ++e) v(fr.pbar(e)) += c(e);
  };
  // raise the last index: row vector over d -> components over e
  auto up = [&](const VectorXd& low) { return VectorXd(gi * low); };
  auto slice = [&](const std::vector<MatrixXd>& T, int a, int b) {
    VectorXd v(n);
    for (int d = 0; d < n; ++d) v(d) = T[d](a, b);
    return v;
  };
  const MatrixXd Rl = s.R2;  // R_ab

  for (int a = 0; a < n; ++a) {
    const MatrixXd dEa_d = dE(fr.dbar(a));
    const MatrixXd dEa_p = dE(fr.pbar(a));
    for (int b = 0; b < n; ++b) {
      // nabla_{dbar_a} dbar_b
      {
        VectorXd& v = t(fr.dbar(a), fr.dbar(b));
        put_d(v, up(slice(s.christoffel, a, b)) + up(dEa_d.row(b).transpose()));
        put_p(v, -up(slice(s.g3, a, b)) + 0.5 * up(slice(s.R3, a, b)));
        v(fr.xi()) += s.Rbar(a, b) / (2.0 * f2);
      }
      // nabla_{dbar_a} pbar_b
      {
        VectorXd& v = t(fr.dbar(a), fr.pbar(b));
        VectorXd low(n);
        for (int d = 0; d < n; ++d) low(d) = s.mixed_plus[d](a, b) + dEa_d(b, d);
        put_p(v, up(low));
        VectorXd rbad(n);
        for (int d = 0; d < n; ++d) rbad(d) = s.R3[b](a, d);
        put_d(v, up(slice(s.g3, a, b)) - 0.5 * up(rbad));
        v(fr.xi()) += Rl(a, b) / (2.0 * f2);
      }
      // nabla_{pbar_b} dbar_a
      {
        VectorXd& v = t(fr.pbar(b), fr.dbar(a));
        const MatrixXd dEb_p = dE(fr.pbar(b));
        VectorXd rbad(n);
        for (int d = 0; d < n; ++d) rbad(d) = s.R3[b](a, d);
        put_d(v, up(slice(s.g3, a, b)) - 0.5 * up(rbad) + up(dEb_p.row(a).transpose()));
        v(fr.xi()) += (0.5 * Rl(a, b) - s.g(a, b)) / f2;
        put_p(v, up(slice(s.mixed_minus, a, b)));
      }
      // nabla_{pbar_a} pbar_b
      {
        VectorXd& v = t(fr.pbar(a), fr.pbar(b));
        put_d(v, up(slice(s.vertical_h, a, b)));
        put_p(v, up(slice(s.g3, a, b)) + up(dEa_p.row(b).transpose()));
        v(fr.L()) += -s.g(a, b) / f2;
      }
    }

    // lines with xi
    const VectorXd Rbar_da = s.Rbar.col(a);  // over d: Rbar_da
    const VectorXd R_ad = Rl.row(a).transpose();
    {
      VectorXd& v = t(fr.dbar(a), fr.xi());
      put_d(v, 0.5 * up(Rbar_da));
      put_p(v, -0.5 * up(R_ad));
    }
    const MatrixXd dEa_xi = dE(fr.xi());
    // E_a^i G^h_i g_hk E_d^k
    const MatrixXd NE = E * N0.transpose() * g * E.transpose();
    {
      VectorXd& v = t(fr.xi(), fr.dbar(a));
      put_d(v, up(dEa_xi.row(a).transpose() + NE.row(a).transpose() + 0.5 * Rbar_da));
      put_p(v, 0.5 * up(R_ad));
    }
    {
      VectorXd& v = t(fr.pbar(a), fr.xi());
      VectorXd delta = VectorXd::Zero(n);
      delta(a) = 1.0;
      put_d(v, delta - 0.5 * up(R_ad));
    }
    {
      VectorXd& v = t(fr.xi(), fr.pbar(a));
      put_d(v, -0.5 * up(R_ad));
      put_p(v, up(dEa_xi.row(a).transpose() + NE.row(a).transpose()));
    }
    // lines with L
    const MatrixXd dEa_L = dE(fr.L());
    t(fr.dbar(a), fr.L()).setZero();
    put_d(t(fr.L(), fr.dbar(a)), up(dEa_L.row(a).transpose()));
    t(fr.pbar(a), fr.L())(fr.pbar(a)) = 1.0;
    put_p(t(fr.L(), fr.pbar(a)), up(dEa_L.row(a).transpose()));
  }
  t(fr.L(), fr.xi())(fr.xi()) = 1.0;
  t(fr.L(), fr.L())(fr.L()) = 1.0;
  return t;
}

MatrixXd second_fundamental_form(const IndicatrixFrame& fr, const ConnectionTable& t) {
  const int n2 = fr.size();
  MatrixXd h = MatrixXd::Zero(n2, n2);
  for (int A = 0; A < n2; ++A)
    for (int B = 0; B < n2; ++B)
      if (A != fr.L() && B != fr.L()) h(A, B) = t(A, B)(fr.L());
  return h;
}

CurvatureData curvature(const FinslerMetric& metric, const TangentPoint& p, const IndicatrixFrame& fr, double h) {
  const int n2 = fr.size();
  const int N = p.N;
  const ConnectionTable t0 = levi_civita_table(p, fr);
  // dG[k][A * n2 + B] = d/dz^k of the coefficients of nabla_{X_A} X_B
  std::vector<std::vector<VectorXd>> dG(n2);
  for (int k = 0; k < n2; ++k) {
    std::vector<ConnectionTable> side;
    for (double sgn : {1.0, -1.0}) {
      VectorXd x = p.x, y = p.y;
      if (k < N)
        x(k) += sgn * h;
      else
        y(k - N) += sgn * h;
      const auto q = tangent_point(metric, x, y);
      side.push_back(levi_civita_table(q, level_set_frame(q, fr.i0)));
    }
    dG[k].resize(n2 * n2);
    for (int i = 0; i < n2 * n2; ++i) dG[k][i] = (side[0].nabla[i] - side[1].nabla[i]) / (2.0 * h);
  }
  // X_A(coefficients of nabla_B C)
  auto along = [&](int A, int B, int C) {
    VectorXd out = VectorXd::Zero(n2);
    for (int k = 0; k < n2; ++k) out += fr.F0(k, A) * dG[k][B * n2 + C];
    return out;
  };

  CurvatureData cd;
  cd.n2 = n2;
  cd.R.assign(n2 * n2 * n2, VectorXd::Zero(n2));
  cd.Rbar.assign(n2 * n2 * n2, VectorXd::Zero(n2));
  const int Lx = fr.L();
  auto tangential = [&](VectorXd v) {
    v(Lx) = 0.0;
    return v;
  };
  for (int A = 0; A < n2; ++A)
    for (int B = 0; B < n2; ++B)
      for (int C = 0; C < n2; ++C) {
        VectorXd r = along(A, B, C) - along(B, A, C);
        for (int D = 0; D < n2; ++D)
          r += t0(B, C)(D) * t0(A, D) - t0(A, C)(D) * t0(B, D) - t0.c(A, B)(D) * t0(D, C);
        cd.R[(A * n2 + B) * n2 + C] = r;
        if (A == Lx || B == Lx || C == Lx) continue;
        VectorXd rb = tangential(along(A, B, C) - along(B, A, C));
        for (int D = 0; D < n2; ++D) {
          if (D == Lx) continue;
          rb += t0(B, C)(D) * tangential(t0(A, D)) - t0(A, C)(D) * tangential(t0(B, D)) -
                t0.c(A, B)(D) * tangential(t0(D, C));
        }
        cd.Rbar[(A * n2 + B) * n2 + C] = rb;
      }
  return cd;
}

FrameContact frame_contact(const IndicatrixFrame& fr, const ConnectionTable& t) {
  const int n2 = fr.size();
  const int xi = fr.xi();
  const MatrixXd G0 = values(fr.gram);
  FrameContact c;
  c.eta = G0.row(xi).transpose();
  c.d_eta.resize(n2, n2);
  c.lie_xi_g.resize(n2, n2);
  for (int A = 0; A < n2; ++A)
    for (int B = 0; B < n2; ++B) {
      c.d_eta(A, B) = directional(fr.gram(xi, B), fr.F0.col(A)) - directional(fr.gram(xi, A), fr.F0.col(B)) -
                      t.c(A, B).dot(G0.col(xi));
      c.lie_xi_g(A, B) = directional(fr.gram(A, B), fr.F0.col(xi)) - t.c(xi, A).dot(G0.col(B)) -
                         t.c(xi, B).dot(G0.col(A));
    }
  c.phi = MatrixXd::Zero(n2, n2);
  for (int a = 0; a < fr.N - 1; ++a) {
    c.phi(fr.pbar(a), fr.dbar(a)) = -1.0;
    c.phi(fr.dbar(a), fr.pbar(a)) = 1.0;
  }
  return c;
}

VectorXd tilde_connection(const IndicatrixFrame& fr, const ConnectionTable& t, const FrameContact& c, int A, int B) {
  auto bar = [&](int X, int Y) {
    VectorXd v = t(X, Y);
    v(fr.L()) = 0.0;
    return v;
  };
  const int xi = fr.xi();
  VectorXd v = bar(A, B) - c.eta(A) * bar(B, xi) - c.eta(B) * bar(A, xi);
  v(xi) += c.d_eta(A, B) + 0.5 * c.lie_xi_g(A, B);
  return v;
}

namespace {

const char* const kLineText[12] = {
    "",
    "nabla_dbar_a dbar_b = (Gamma^e_ab + dbar_a(E_b) E_d g g^de) dbar_e + (-g^e_ab + R^e_ab / 2) pbar_e + Rbar_ab / "
    "(2F^2) xi",
    "nabla_dbar_a pbar_b = (mixed connection terms) pbar_e + (g^e_ab - R_bad g^de / 2) dbar_e + R_ab / (2F^2) xi",
    "nabla_pbar_b dbar_a = (g^e_ab - R_bad g^de / 2 + pbar_b(E_a) E_d g g^de) dbar_e + (R_ab / 2 - g_ab) / F^2 xi + "
    "(mixed connection terms) pbar_e",
    "nabla_pbar_a pbar_b = (Berwald and horizontal derivative terms) dbar_e + (g^e_ab + pbar_a(E_b) E_d g g^de) pbar_e "
    "- g_ab / F^2 L",
    "nabla_dbar_a xi = Rbar_da g^de / 2 dbar_e - R_ad g^de / 2 pbar_e",
    "nabla_xi dbar_a = (xi(E_a) E_d g + E_a G E_d g + Rbar_da / 2) g^de dbar_e + R_ad g^de / 2 pbar_e",
    "nabla_pbar_a xi = (delta_a^e - R_ad g^de / 2) dbar_e",
    "nabla_xi pbar_a = -R_ad g^de / 2 dbar_e + (xi(E_a) g + E_a G g) E_d g^de pbar_e",
    "nabla_dbar_a L = 0, nabla_L dbar_a = L(E_a) E_d g g^de dbar_e",
    "nabla_pbar_a L = pbar_a, nabla_L pbar_a = L(E_a) E_d g g^de pbar_e",
    "nabla_xi xi = nabla_xi L = 0, nabla_L xi = xi, nabla_L L = L",
};

double table_gap(const ConnectionTable& a, const ConnectionTable& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.nabla.size(); ++i) r = std::max(r, max_abs(a.nabla[i] - b.nabla[i]));
  return r;
}

double lambda_min(const MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

VerificationReport levi_civita(const FinslerMetric& metric, const std::vector<Sample>& samples, const Tolerances& tol,
                               const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const double jet = tol.get(suite, "jet");
  const double cf = tol.get(suite, "closed-form");
  const double normal = tol.get(suite, "normal");
  const double structure = tol.get(suite, "structure");
  double min_h = INFINITY;
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto fr = indicatrix_frame(p);
      const int n2 = fr.size();
      const auto t = levi_civita_table(p, fr);
      const MatrixXd G0 = values(fr.gram);

      double compat = 0.0, torsion = 0.0;
      for (int A = 0; A < n2; ++A)
        for (int B = 0; B < n2; ++B) {
          torsion = std::max(torsion, max_abs(t(A, B) - t(B, A) - t.c(A, B)));
          for (int C = 0; C < n2; ++C) {
            const double lhs = directional(fr.gram(B, C), fr.F0.col(A));
            compat = std::max(compat, std::abs(lhs - t(A, B).dot(G0.col(C)) - t(A, C).dot(G0.col(B))));
          }
        }
      rep.check(suite, manifold, "metric compatibility", "X G(Y, Z) = G(nabla_X Y, Z) + G(Y, nabla_X Z) on the frame",
                s.index, compat, jet);
      rep.check(suite, manifold, "torsion-free", "nabla_X Y - nabla_Y X = [X, Y] on the frame", s.index, torsion, jet);

      auto scalars = frame_scalars(p, fr);
      const auto closed = closed_form_table(p, fr, scalars);
      std::vector<double> line(12, 0.0);
      for (int A = 0; A < n2; ++A)
        for (int B = 0; B < n2; ++B) {
          const int l = table_line(fr, A, B);
          line[l] = std::max(line[l], max_abs(closed(A, B) - t(A, B)));
        }
      for (int l = 1; l <= 11; ++l)
        rep.check(suite, manifold, "closed-form table line " + std::to_string(l), kLineText[l], s.index, line[l], cf);

      scalars.R2 = scalars.R2_dbar_xi;
      rep.info(suite, manifold, "closed-form table with R_ab = G(vert[dbar_a, xi], pbar_b)",
               "the whole table with the opposite reading of R_ab", s.index,
               table_gap(closed_form_table(p, fr, scalars), t));

      const MatrixXd h = second_fundamental_form(fr, t);
      const double f2 = p.f2.value();
      const int n = fr.N - 1;
      double hv = 0.0, hsym = 0.0, hrest = 0.0;
      for (int A = 0; A < n2; ++A)
        for (int B = 0; B < n2; ++B) {
          if (A == fr.L() || B == fr.L()) continue;
          hsym = std::max(hsym, std::abs(h(A, B) - h(B, A)));
          const bool vv = A >= fr.pbar(0) && B >= fr.pbar(0);
          if (vv)
            hv = std::max(hv, std::abs(h(A, B) + scalars.g(A - fr.N, B - fr.N) / f2));
          else
            hrest = std::max(hrest, std::abs(h(A, B)));
        }
      rep.check(suite, manifold, "second fundamental form on verticals", "H(pbar_a, pbar_b) = -g_ab / F^2 L", s.index,
                hv, normal);
      rep.check(suite, manifold, "second fundamental form elsewhere",
                "H vanishes on every other pair of tangent frame fields", s.index, hrest, normal);
      rep.check(suite, manifold, "second fundamental form symmetric", "H(X, Y) = H(Y, X)", s.index, hsym, structure);
      double hnorm = 0.0;
      for (int a = 0; a < n; ++a)
        hnorm = std::max(hnorm, std::abs(h(fr.pbar(a), fr.pbar(a))) * std::sqrt(G0(fr.L(), fr.L())));
      const double lmin = lambda_min(scalars.g);
      rep.check(suite, manifold, "not totally geodesic", "max_a |H(pbar_a, pbar_a)| >= lambda_min(g_ab) > 0", s.index,
                std::max(0.0, lmin - hnorm) + (lmin > 0.0 ? 0.0 : 1.0), normal)
          .detail = "|H| = " + fmt(hnorm) + ", lambda_min = " + fmt(lmin);
      min_h = std::min(min_h, hnorm);
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "connection table evaluable at the sample", s.index, INFINITY, 0.0)
          .detail = e.what();
    }
  }
  if (std::isfinite(min_h))
    rep.classify(suite, manifold, "totally geodesic verdict", -1,
                 min_h > normal ? "not totally geodesic" : "totally geodesic", min_h);
  return rep;
}

VerificationReport curvature_relations(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                       const Tolerances& tol, const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const double fd = tol.get(suite, "fd");
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto fr = indicatrix_frame(p);
      const int n2 = fr.size();
      const int n = fr.N - 1;
      const auto cd = curvature(metric, p, fr);
      const auto sc = frame_scalars(p, fr);
      const double f2 = sc.f2;
      const int Lx = fr.L(), xi = fr.xi();
      auto gap = [&](int A, int B, int C) { return VectorXd(cd.ambient(A, B, C) - cd.induced(A, B, C)); };
      auto normal_only = [&](double c) {
        VectorXd v = VectorXd::Zero(n2);
        v(Lx) = c;
        return v;
      };

      std::vector<double> rel(8, 0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const int da = fr.dbar(a), db = fr.dbar(b), pa = fr.pbar(a), pb = fr.pbar(b);
          for (int c = 0; c < n; ++c) {
            const int dc = fr.dbar(c), pc = fr.pbar(c);
            rel[1] = std::max(rel[1], max_abs(gap(da, db, pc) - normal_only(sc.R3[c](a, b) / f2)));
            rel[2] = std::max(rel[2],
                              max_abs(gap(da, pb, dc) - normal_only((sc.R3[b](a, c) - 2.0 * sc.g3[c](a, b)) / (2.0 * f2))));
            VectorXd e3 = VectorXd::Zero(n2);
            e3(pa) -= sc.g(b, c) / f2;
            e3(pb) += sc.g(a, c) / f2;
            rel[3] = std::max(rel[3], max_abs(gap(pa, pb, pc) - e3));
            rel[4] = std::max(rel[4], max_abs(gap(da, pb, pc) - normal_only(sc.vertical_h[c](a, b) / f2)));
          }
          rel[5] = std::max(rel[5], max_abs(gap(da, pb, xi) - normal_only(-sc.R2(a, b) / (2.0 * f2))));
          rel[6] = std::max(rel[6], max_abs(gap(pa, xi, db) - normal_only(-sc.R2(a, b) / (2.0 * f2))));
          rel[7] = std::max(rel[7], max_abs(gap(da, xi, pb) - normal_only(-sc.R2(a, b) / f2)));
        }
      static const char* const text[8] = {
          "",
          "R(dbar_a, dbar_b) pbar_c = Rbar(dbar_a, dbar_b) pbar_c + R_cab / F^2 L",
          "R(dbar_a, pbar_b) dbar_c = Rbar(dbar_a, pbar_b) dbar_c + (R_bac - 2 g_abc) / (2F^2) L",
          "R(pbar_a, pbar_b) pbar_c = Rbar(pbar_a, pbar_b) pbar_c - g_bc / F^2 pbar_a + g_ac / F^2 pbar_b",
          "R(dbar_a, pbar_b) pbar_c = Rbar(dbar_a, pbar_b) pbar_c + E_a E_b E_c (G g + G g - dg/dx) / (2F^2) L",
          "R(dbar_a, pbar_b) xi = Rbar(dbar_a, pbar_b) xi - R_ab / (2F^2) L",
          "R(pbar_a, xi) dbar_b = Rbar(pbar_a, xi) dbar_b - R_ab / (2F^2) L",
          "R(dbar_a, xi) pbar_b = Rbar(dbar_a, xi) pbar_b - R_ab / F^2 L",
      };
      for (int r = 1; r <= 7; ++r)
        rep.check(suite, manifold, "curvature relation " + std::to_string(r), text[r], s.index, rel[r], fd);

      // type triples not covered above (up to swapping the first two slots)
      auto kind = [&](int A) { return A == xi ? 'x' : (A < xi ? 'd' : 'p'); };
      static const std::vector<std::string> listed = {"ddp", "dpd", "ppp", "dpp", "dpx", "pxd", "dxp",
                                                       "pdd", "pdp", "pdx", "xpd", "xdp"};
      double other = 0.0, antisym = 0.0, bianchi = 0.0;
      for (int A = 0; A < n2; ++A)
        for (int B = 0; B < n2; ++B)
          for (int C = 0; C < n2; ++C) {
            antisym = std::max(antisym, max_abs(cd.ambient(A, B, C) + cd.ambient(B, A, C)));
            bianchi =
                std::max(bianchi, max_abs(cd.ambient(A, B, C) + cd.ambient(B, C, A) + cd.ambient(C, A, B)));
            if (A == Lx || B == Lx || C == Lx) continue;
            const std::string key{kind(A), kind(B), kind(C)};
            if (std::find(listed.begin(), listed.end(), key) != listed.end()) continue;
            other = std::max(other, max_abs(gap(A, B, C)));
          }
      rep.check(suite, manifold, "remaining combinations coincide",
                "R = Rbar for every other combination of dbar, pbar and xi", s.index, other, fd);
      rep.check(suite, manifold, "curvature antisymmetry", "R(X, Y)Z = -R(Y, X)Z", s.index, antisym, fd);
      rep.check(suite, manifold, "first Bianchi identity", "R(X, Y)Z + R(Y, Z)X + R(Z, X)Y = 0", s.index, bianchi,
                fd);
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "curvature evaluable at the sample", s.index, INFINITY, 0.0).detail =
          e.what();
    }
  }
  return rep;
}

namespace {

struct Obstruction {
  double max_norm = 0.0;
  double min_norm = INFINITY;
  MatrixXd component;  // xi-components of (nabla~_dbar_a phi) dbar_b + (nabla~_pbar_a phi) pbar_b
  MatrixXd g;
};

Obstruction obstruction_at(const TangentPoint& p, const IndicatrixFrame& fr) {
  const auto t = levi_civita_table(p, fr);
  const auto c = frame_contact(fr, t);
  const int n = fr.N - 1;
  const MatrixXd G0 = values(fr.gram);
  std::vector<int> D;
  for (int a = 0; a < n; ++a) D.push_back(fr.dbar(a));
  for (int a = 0; a < n; ++a) D.push_back(fr.pbar(a));
  // (nabla~_A phi) X_B = sum_C phi(C, B) nabla~_A X_C - phi(nabla~_A X_B)
  auto deriv = [&](int A, int B) {
    VectorXd out = -c.phi * tilde_connection(fr, t, c, A, B);
    for (int C = 0; C < fr.size(); ++C)
      if (c.phi(C, B) != 0.0) out += c.phi(C, B) * tilde_connection(fr, t, c, A, C);
    return out;
  };
  Obstruction o;
  for (int A : D)
    for (int B : D) {
      const VectorXd v = deriv(A, B);
      const double norm = std::sqrt(std::max(0.0, v.dot(G0 * v)));
      o.max_norm = std::max(o.max_norm, norm);
      o.min_norm = std::min(o.min_norm, norm);
    }
  o.component.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      o.component(a, b) = deriv(fr.dbar(a), fr.dbar(b))(fr.xi()) + deriv(fr.pbar(a), fr.pbar(b))(fr.xi());
  o.g = frame_scalars(p, fr).g;
  return o;
}

}  // namespace

VerificationReport sasakian_obstruction(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                        const Tolerances& tol, const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const double component = tol.get(suite, "component");
  bool all_bounded = true;
  int evaluated = 0;
  double weakest = INFINITY;
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto fr = indicatrix_frame(p);
      const auto o = obstruction_at(p, fr);
      // for N = 2 the bound is attained, so allow rounding
      const double bound = 0.5 * lambda_min(o.g);
      const double slack = 1e-12 * std::max(1.0, bound);
      const bool bounded = o.max_norm >= bound - slack && bound > 0.0;
      rep.check(suite, manifold, "obstruction lower bound",
                "max over D-pairs of |(nabla~_X phi) Y| >= lambda_min(g_ab) / 2 > 0", s.index,
                std::max(0.0, bound - o.max_norm) + (bound > 0.0 ? 0.0 : 1.0), slack)
          .detail = "max = " + fmt(o.max_norm) + ", bound = " + fmt(bound);
      rep.check(suite, manifold, "obstruction component equals g_ab",
                "xi-components of (nabla~_dbar_a phi) dbar_b + (nabla~_pbar_a phi) pbar_b = g_ab", s.index,
                max_abs(o.component - o.g), component);
      rep.info(suite, manifold, "max obstruction norm", "max over D-pairs of |(nabla~_X phi) Y|", s.index, o.max_norm);
      rep.info(suite, manifold, "min obstruction norm", "min over D-pairs of |(nabla~_X phi) Y|", s.index, o.min_norm);

      // a second chart for E: the second largest |y^i|
      std::vector<int> order(fr.N);
      for (int i = 0; i < fr.N; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int i, int j) { return std::abs(s.y(i)) > std::abs(s.y(j)); });
      const auto alt_fr = level_set_frame(p, order[1]);
      const auto alt = obstruction_at(p, alt_fr);
      const double alt_bound = 0.5 * lambda_min(alt.g);
      const bool alt_bounded = alt.max_norm >= alt_bound - 1e-12 * std::max(1.0, alt_bound) && alt_bound > 0.0;
      rep.check(suite, manifold, "verdict independent of the chart",
                "the lower bound holds in the frame of a second chart as well", s.index,
                bounded == alt_bounded ? 0.0 : 1.0, 0.0)
          .detail = "second chart max = " + fmt(alt.max_norm);
      all_bounded = all_bounded && bounded;
      weakest = std::min(weakest, o.max_norm - bound);
      ++evaluated;
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "obstruction evaluable at the sample", s.index, INFINITY, 0.0).detail =
          e.what();
    }
  }
  if (evaluated > 0)
    rep.classify(suite, manifold, "Sasakian verdict", -1, all_bounded ? "Sasakian impossible" : "undetermined",
                 weakest);
  return rep;
}

}  // namespace indicatrix
