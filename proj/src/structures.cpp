#include "indicatrix/structures.hpp"

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

// Adapted components (h, w) of a coordinate vector: h = dx(v), w = delta*y(v).
VectorXd adapted_components(const MatrixXd& N0, const VectorXd& v) {
  const int N = static_cast<int>(N0.rows());
  VectorXd out(2 * N);
  out.head(N) = v.head(N);
  out.tail(N) = v.tail(N) + N0 * v.head(N);
  return out;
}

}  // namespace

ContactData contact_data(const TangentPoint& p) {
  const double F = p.F();
  if (std::abs(F - 1.0) > 1e-8)
    throw GeometryError("contact data: point is off the indicatrix (F = " + std::to_string(F) + ")");
  const int N = p.N;
  ContactData c;
  c.G = values(p.sasaki);
  c.J = values(p.J);
  c.L = VectorXd::Zero(2 * N);
  c.L.tail(N) = p.y / F;
  c.xi = c.J * c.L;
  c.eta = c.G * c.L;
  c.eta_star = c.G * c.xi;
  c.phi = c.J + c.L * c.eta_star.transpose();
  return c;
}

VecJ random_tangent_field(const IndicatrixFrame& frame, Rng& rng) {
  VecJ X = VecJ::Constant(frame.size(), JetD(0.0));
  for (int A = 0; A < frame.size(); ++A) {
    if (A == frame.L()) continue;
    const double c = rng.normal();
    for (int k = 0; k < frame.size(); ++k) X(k) = X(k) + c * frame.fields(k, A);
  }
  return X;
}

VerificationReport verify_contact(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                  const Tolerances& tol, const std::string& suite, const std::string& manifold,
                                  std::uint64_t seed, int pairs) {
  VerificationReport rep;
  const double structure = tol.get(suite, "structure");
  const double jet = tol.get(suite, "jet");
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto c = contact_data(p);
      const auto fr = indicatrix_frame(p);
      const int N = p.N;
      Rng rng = Rng::stream(seed ^ 0x636f6e74616374ULL, static_cast<std::uint64_t>(s.index));

      // eta* as a 1-form with jet coefficients: (y_a / F) dx^a
      const VecJ ylow = mul(p.g, p.yv);
      const JetD F = sqrt(p.f2);
      auto eta_of = [&](const VecJ& Y) {
        JetD e;
        for (int a = 0; a < N; ++a) e = e + ylow(a) * Y(a);
        return e / F;
      };
      auto d_eta = [&](const VecJ& X, const VecJ& Y) {
        const VectorXd x0 = values(X), y0 = values(Y);
        return directional(eta_of(Y), x0) - directional(eta_of(X), y0) - c.eta_star.dot(lie_bracket(X, Y));
      };
      auto G = [&](const VectorXd& u, const VectorXd& w) { return u.dot(c.G * w); };

      rep.check(suite, manifold, "eta*(xi*) = 1", "eta*(xi*) = 1", s.index, std::abs(c.eta_star.dot(c.xi) - 1.0),
                structure);
      rep.check(suite, manifold, "phi(xi*) = 0", "phi(xi*) = 0", s.index, max_abs(c.phi * c.xi), structure);
      rep.check(suite, manifold, "G(L, L) = 1", "G(L, L) = 1 on the indicatrix", s.index, std::abs(G(c.L, c.L) - 1.0),
                structure);

      // eta = dF
      double deta = 0.0;
      for (int A = 0; A < fr.size(); ++A)
        deta = std::max(deta, std::abs(directional(F, fr.F0.col(A)) - c.eta.dot(fr.F0.col(A))));
      rep.check(suite, manifold, "eta = dF", "G(L, X) = X(F)", s.index, deta, jet);

      const VecJ xi_field = fr.column(fr.xi());
      double r_eta_phi = 0, r_phi2 = 0, r_metric = 0, r_tangent = 0, r_dEta = 0, r_dEta_rev = 0, r_dEta_xi = 0,
             r_J = 0;
      for (int k = 0; k < pairs; ++k) {
        const VecJ Xf = random_tangent_field(fr, rng);
        const VecJ Yf = random_tangent_field(fr, rng);
        const VectorXd X = values(Xf), Y = values(Yf);
        const VectorXd phX = c.phi * X, phY = c.phi * Y;
        r_eta_phi = std::max(r_eta_phi, std::abs(c.eta_star.dot(phX)));
        r_phi2 = std::max(r_phi2, max_abs(c.phi * phX + X - c.eta_star.dot(X) * c.xi));
        r_metric = std::max(r_metric, std::abs(G(phX, phY) - G(X, Y) + c.eta_star.dot(X) * c.eta_star.dot(Y)));
        r_tangent = std::max(r_tangent, std::abs(c.eta.dot(phX)));
        const double d = d_eta(Xf, Yf);
        r_dEta = std::max(r_dEta, std::abs(d - G(X, phY)));
        r_dEta_rev = std::max(r_dEta_rev, std::abs(d + G(X, phY)));
        r_dEta_xi = std::max(r_dEta_xi, std::abs(d_eta(xi_field, Yf)));
        // J-compatibility on arbitrary vectors of TTM
        VectorXd U(2 * N), V(2 * N);
        for (int i = 0; i < 2 * N; ++i) {
          U(i) = rng.normal();
          V(i) = rng.normal();
        }
        r_J = std::max(r_J, std::abs(G(c.J * U, c.J * V) - G(U, V)) / std::max(1.0, std::abs(G(U, V))));
      }
      rep.check(suite, manifold, "eta* o phi = 0", "eta*(phi X) = 0 on T(IM)", s.index, r_eta_phi, structure);
      rep.check(suite, manifold, "phi^2 = -Id + eta* (x) xi*", "phi^2 X = -X + eta*(X) xi* on T(IM)", s.index, r_phi2,
                structure);
      rep.check(suite, manifold, "metric compatibility", "G(phi X, phi Y) = G(X, Y) - eta*(X) eta*(Y)", s.index,
                r_metric, structure);
      rep.check(suite, manifold, "phi preserves T(IM)", "dF(phi X) = 0", s.index, r_tangent, structure);
      rep.check(suite, manifold, "J compatibility", "G(JX, JY) = G(X, Y)", s.index, r_J, structure);
      rep.check(suite, manifold, "d eta*(X, Y) = G(X, phi Y)",
                "d eta*(X, Y) = X eta*(Y) - Y eta*(X) - eta*([X, Y]) equals G(X, phi Y) on T(IM)", s.index, r_dEta,
                jet);
      rep.info(suite, manifold, "d eta*(X, Y) = -G(X, phi Y)", "the same exterior derivative with the opposite sign",
               s.index, r_dEta_rev);
      rep.check(suite, manifold, "d eta*(xi*, Y) = 0", "xi* lies in the kernel of d eta*", s.index, r_dEta_xi, jet);
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "contact data evaluable at the sample", s.index, INFINITY, 0.0).detail =
          e.what();
    }
  }
  return rep;
}

VectorXd nijenhuis(const MatJ& Jop, const VecJ& X, const VecJ& Y) {
  const VecJ JX = mul(Jop, X);
  const VecJ JY = mul(Jop, Y);
  const MatrixXd J0 = values(Jop);
  return lie_bracket(JX, JY) - J0 * lie_bracket(JX, Y) - J0 * lie_bracket(X, JY) - lie_bracket(X, Y);
}

namespace {

struct NijenhuisSummary {
  double eq_hh = 0, eq_vv = 0, eq_hv = 0, antisym = 0;
  double max_n = 0, max_r = 0;
};

NijenhuisSummary nijenhuis_vs_curvature(const TangentPoint& p, const MatJ& Jop) {
  const int N = p.N;
  const auto af = adapted_frame(p);
  const MatrixXd N0 = values(p.N_);
  NijenhuisSummary out;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      VectorXd Rab(N);
      for (int c = 0; c < N; ++c) Rab(c) = p.R.R[c](a, b);
      out.max_r = std::max(out.max_r, Rab.cwiseAbs().maxCoeff());
      const VectorXd hh = adapted_components(N0, nijenhuis(Jop, af.horizontal[a], af.horizontal[b]));
      const VectorXd vv = adapted_components(N0, nijenhuis(Jop, af.vertical[a], af.vertical[b]));
      const VectorXd hv = adapted_components(N0, nijenhuis(Jop, af.horizontal[a], af.vertical[b]));
      const VectorXd vh = adapted_components(N0, nijenhuis(Jop, af.vertical[b], af.horizontal[a]));
      VectorXd e(2 * N);
      e << VectorXd::Zero(N), -Rab;
      out.eq_hh = std::max(out.eq_hh, max_abs(hh - e));
      e << VectorXd::Zero(N), Rab;
      out.eq_vv = std::max(out.eq_vv, max_abs(vv - e));
      e << -Rab, VectorXd::Zero(N);
      out.eq_hv = std::max(out.eq_hv, max_abs(hv - e));
      out.antisym = std::max(out.antisym, max_abs(hv + vh));
      out.max_n = std::max({out.max_n, max_abs(hh), max_abs(vv), max_abs(hv)});
    }
  return out;
}

}  // namespace

VerificationReport kahler_check(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                const Tolerances& tol, const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const double cf = tol.get(suite, "closed-form");
  const double verdict = tol.get(suite, "verdict");
  double worst_n = 0.0, worst_r = 0.0;
  int evaluated = 0;
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto r = nijenhuis_vs_curvature(p, p.J);
      rep.check(suite, manifold, "N_J(delta*_a, delta*_b) = -R^c_ab d/dy^c", "Nijenhuis tensor on horizontal pairs",
                s.index, r.eq_hh, cf);
      rep.check(suite, manifold, "N_J(d/dy^a, d/dy^b) = R^c_ab d/dy^c", "Nijenhuis tensor on vertical pairs", s.index,
                r.eq_vv, cf);
      rep.check(suite, manifold, "N_J(delta*_a, d/dy^b) = -R^c_ab delta*_c", "Nijenhuis tensor on mixed pairs",
                s.index, r.eq_hv, cf);
      rep.check(suite, manifold, "N_J antisymmetry", "N_J(X, Y) = -N_J(Y, X)", s.index, r.antisym, cf);
      const bool integrable = r.max_n < verdict;
      const bool flat = r.max_r < verdict;
      rep.check(suite, manifold, "integrable iff horizontally flat",
                "N_J = 0 exactly when the horizontal distribution is integrable (R^c_ab = 0)", s.index,
                integrable == flat ? 0.0 : 1.0, 0.0)
          .detail = "max|N_J| = " + fmt(r.max_n) + ", max|R| = " + fmt(r.max_r);
      worst_n = std::max(worst_n, r.max_n);
      worst_r = std::max(worst_r, r.max_r);
      ++evaluated;
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "Nijenhuis tensor evaluable at the sample", s.index, INFINITY, 0.0)
          .detail = e.what();
    }
  }
  if (evaluated > 0) {
    rep.classify(suite, manifold, "Kaehler verdict from N_J", -1, worst_n < verdict ? "Kaehler" : "non-Kaehler",
                 worst_n);
    rep.classify(suite, manifold, "flatness verdict from R", -1, worst_r < verdict ? "flat" : "non-flat", worst_r);
  }
  return rep;
}

VerificationReport flatness_integrability_check(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                                const Tolerances& tol, const std::string& suite,
                                                const std::string& manifold) {
  VerificationReport rep;
  const double verdict = tol.get(suite, "verdict");
  const double structure = tol.get(suite, "structure");
  double worst_n = 0.0, worst_r = 0.0;
  int evaluated = 0;
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto fr = indicatrix_frame(p);
      const int N2 = fr.size();
      // orthogonal projection onto span{xi, L} and Jbar = J (Id - 2 Pi)
      const VecJ xi = fr.column(fr.xi());
      const VecJ L = fr.column(fr.L());
      const VecJ Gxi = mul(p.sasaki, xi);
      const VecJ GL = mul(p.sasaki, L);
      MatJ Pi(N2, N2);
      for (int i = 0; i < N2; ++i)
        for (int j = 0; j < N2; ++j) Pi(i, j) = (xi(i) * Gxi(j) + L(i) * GL(j)) / p.f2;
      MatJ IminusPi = -2.0 * Pi;
      for (int i = 0; i < N2; ++i) IminusPi(i, i) = IminusPi(i, i) + 1.0;
      const MatJ Jbar = mul(p.J, IminusPi);
      const MatrixXd Jb0 = values(Jbar), J0 = values(p.J);

      double on_d = 0.0;
      for (int A = 0; A < N2; ++A) {
        if (A == fr.xi() || A == fr.L()) continue;
        on_d = std::max(on_d, max_abs((Jb0 - J0) * fr.F0.col(A)));
      }
      rep.check(suite, manifold, "Jbar = J on the contact distribution", "Jbar X = phi X = J X for X in D", s.index,
                on_d, structure);
      rep.info(suite, manifold, "Jbar xi - J xi", "Jbar xi = L while J xi = -L", s.index,
               max_abs((Jb0 - J0) * fr.F0.col(fr.xi())));

      const auto r = nijenhuis_vs_curvature(p, p.J);
      const auto rb = nijenhuis_vs_curvature(p, Jbar);
      rep.check(suite, manifold, "normal iff flat", "N_J = 0 exactly when R^c_ab = 0", s.index,
                (r.max_n < verdict) == (r.max_r < verdict) ? 0.0 : 1.0, 0.0)
          .detail = "max|N_J| = " + fmt(r.max_n) + ", max|R| = " + fmt(r.max_r);
      rep.info(suite, manifold, "max |N_Jbar|", "Nijenhuis tensor of Jbar on the adapted frame", s.index, rb.max_n);
      worst_n = std::max(worst_n, r.max_n);
      worst_r = std::max(worst_r, r.max_r);
      ++evaluated;
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "integrability data evaluable at the sample", s.index, INFINITY, 0.0)
          .detail = e.what();
    }
  }
  if (evaluated > 0) {
    rep.classify(suite, manifold, "normality verdict", -1, worst_n < verdict ? "normal" : "not normal", worst_n);
    rep.classify(suite, manifold, "flatness verdict", -1, worst_r < verdict ? "flat" : "non-flat", worst_r);
  }
  return rep;
}

OproiuData oproiu_build(const TangentPoint& p, const OproiuParams& params) {
  const int N = p.N;
  const double A = params.A, B = params.B;
  if (std::abs(A) <= 1e-8) throw GeometryError("Oproiu metric: A = " + fmt(A) + " vanishes");
  if (std::abs(B) <= 1e-8) throw GeometryError("Oproiu metric: B = " + fmt(B) + " vanishes");
  OproiuData d;
  d.A = A;
  d.B = B;
  const JetD t = p.f2;
  d.tau = params.tau(std::span<const JetD>(&t, 1));
  const JetD den = B + t * d.tau;
  if (std::abs(den.value()) <= 1e-8)
    throw GeometryError("Oproiu metric: B + F^2 tau = " + fmt(den.value()) + " vanishes");
  const JetD cp = d.tau / (A * B);
  const JetD cq = A * d.tau / den;
  const VecJ ylow = mul(p.g, p.yv);
  d.P.resize(N, N);
  d.Q.resize(N, N);
  d.Pm.resize(N, N);
  d.Qm.resize(N, N);
  d.Qup.resize(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const double delta = a == b ? 1.0 : 0.0;
      d.P(a, b) = p.g(a, b) / A + cp * ylow(a) * ylow(b);
      d.Q(a, b) = A * p.g(a, b) - cq * ylow(a) * ylow(b);
      d.Pm(a, b) = delta / A + cp * ylow(a) * p.yv(b);
      d.Qm(a, b) = A * delta - cq * ylow(a) * p.yv(b);
      d.Qup(a, b) = A * p.ginv(a, b) - cq * p.yv(a) * p.yv(b);
    }

  // adapted frame: J~(d/dy^a) = Q_a^b delta*_b, J~(delta*_a) = -P_a^b d/dy^b
  const JetD zero(0.0);
  MatJ Ja = MatJ::Constant(2 * N, 2 * N, zero);
  Ja.topRightCorner(N, N) = d.Qm.transpose();
  Ja.bottomLeftCorner(N, N) = -d.Pm.transpose();
  MatJ C = MatJ::Constant(2 * N, 2 * N, zero), Cinv = MatJ::Constant(2 * N, 2 * N, zero);
  for (int i = 0; i < 2 * N; ++i) C(i, i) = Cinv(i, i) = JetD(1.0);
  C.bottomLeftCorner(N, N) = p.N_;
  Cinv.bottomLeftCorner(N, N) = -p.N_;
  d.Jt = mul(Cinv, mul(Ja, C));
  d.Ja = values(Ja);
  d.Gt = MatrixXd::Zero(2 * N, 2 * N);
  d.Gt.topLeftCorner(N, N) = values(d.P);
  d.Gt.bottomRightCorner(N, N) = values(d.Q);
  return d;
}

VerificationReport oproiu_structures(const TangentPoint& p, const OproiuData& d, const Tolerances& tol,
                                     const std::string& suite, const std::string& manifold, int sample) {
  VerificationReport rep;
  const int N = p.N;
  const double alg = tol.get(suite, "algebraic");
  const double structure = tol.get(suite, "structure");
  const MatrixXd g0 = values(p.g), gi0 = values(p.ginv);
  const MatrixXd P0 = values(d.P), Q0 = values(d.Q), Qup0 = values(d.Qup);
  const MatrixXd I = MatrixXd::Identity(N, N);
  rep.check(suite, manifold, "P Q^-1 = Id", "Q^ab = g^ac Q_cd g^db is the inverse of P_ab", sample,
            max_abs(P0 * Qup0 - I), alg);
  rep.check(suite, manifold, "Q^ab by index raising", "Q^ab = g^ac Q_cd g^db", sample,
            max_abs(Qup0 - gi0 * Q0 * gi0) / std::max(1.0, max_abs(Qup0)), alg);
  rep.check(suite, manifold, "mixed P", "P_a^b = P_ac g^cb", sample, max_abs(values(d.Pm) - P0 * gi0), alg);
  rep.check(suite, manifold, "mixed Q", "Q_a^b = Q_ac g^cb", sample, max_abs(values(d.Qm) - Q0 * gi0), alg);
  rep.check(suite, manifold, "symmetry of P and Q", "P_ab = P_ba, Q_ab = Q_ba", sample,
            std::max(max_abs(P0 - P0.transpose()), max_abs(Q0 - Q0.transpose())), alg);

  const MatrixXd I2 = MatrixXd::Identity(2 * N, 2 * N);
  rep.check(suite, manifold, "J~^2 = -Id", "J~ is an almost complex structure", sample, max_abs(d.Ja * d.Ja + I2),
            structure);
  rep.check(suite, manifold, "G~ compatibility", "G~(J~X, J~Y) = G~(X, Y)", sample,
            max_abs(d.Ja.transpose() * d.Gt * d.Ja - d.Gt), structure);
  const MatrixXd Omega = d.Gt * d.Ja;  // Omega(X_A, X_B) = G~(X_A, J~ X_B)
  MatrixXd expected = MatrixXd::Zero(2 * N, 2 * N);
  expected.topRightCorner(N, N) = g0;
  expected.bottomLeftCorner(N, N) = -g0;
  rep.check(suite, manifold, "Kaehler form components",
            "Omega~(d/dy^a, delta*_b) = -g_ab, Omega~(delta*_a, d/dy^b) = g_ab, diagonal blocks 0", sample,
            max_abs(Omega - expected), structure);
  return rep;
}

VerificationReport oproiu_kahler_conditions(const TangentPoint& p, const OproiuData& d, const Tolerances& tol,
                                            const std::string& suite, const std::string& manifold, int sample) {
  VerificationReport rep;
  const int N = p.N;
  const double cf = tol.get(suite, "closed-form");
  const double verdict = tol.get(suite, "verdict");
  const auto af = adapted_frame(p);
  const MatrixXd N0 = values(p.N_);
  const MatrixXd Pm = values(d.Pm), Qm = values(d.Qm);
  const auto& Bk = p.berwald;  // [d](a, c) -> B^d_ac
  const auto& R = p.R.R;       // [d](a, b) -> R^d_ab

  // dy[c](a, b) = d(M_a^b)/dy^c and hd[c](a, b) = delta*_c(M_a^b)
  auto dy = [&](const MatJ& M) {
    std::vector<MatrixXd> out(N, MatrixXd(N, N));
    for (int c = 0; c < N; ++c)
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) out[c](a, b) = M(a, b).gradient(N + c);
    return out;
  };
  auto hd = [&](const MatJ& M) {
    std::vector<MatrixXd> out(N, MatrixXd(N, N));
    for (int c = 0; c < N; ++c) {
      const VectorXd dc = af.frame.col(c);
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) out[c](a, b) = directional(M(a, b), dc);
    }
    return out;
  };
  const auto dP = dy(d.Pm), dQ = dy(d.Qm), hP = hd(d.Pm), hQ = hd(d.Qm);

  double e1v = 0, e1h = 0, e2v = 0, e2h = 0, e2h_printed = 0, e3h = 0, e3v = 0, anti = 0, cond = 0, nmax = 0;
  std::vector<MatrixXd> cond1(N, MatrixXd(N, N));  // [d](a, b)
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      // generic values in adapted components
      const VectorXd n_hh = adapted_components(N0, nijenhuis(d.Jt, af.horizontal[a], af.horizontal[b]));
      const VectorXd n_vv = adapted_components(N0, nijenhuis(d.Jt, af.vertical[a], af.vertical[b]));
      const VectorXd n_vh = adapted_components(N0, nijenhuis(d.Jt, af.vertical[a], af.horizontal[b]));
      nmax = std::max({nmax, max_abs(n_hh), max_abs(n_vv), max_abs(n_vh)});

      // N(delta*_a, delta*_b)
      VectorXd v1(N), k1(N);
      for (int dd = 0; dd < N; ++dd) {
        double v = -R[dd](a, b), k = hP[a](b, dd) - hP[b](a, dd);
        for (int c = 0; c < N; ++c) {
          v += Pm(a, c) * dP[c](b, dd) - Pm(b, c) * dP[c](a, dd);
          k += Pm(b, c) * Bk[dd](a, c) - Pm(a, c) * Bk[dd](c, b);
        }
        v1(dd) = v;
        k1(dd) = k;
        cond1[dd](a, b) = v;
      }
      const VectorXd h1 = Qm.transpose() * k1;  // sum_d k_d Q_d^e
      e1v = std::max(e1v, max_abs(n_hh.tail(N) - v1));
      e1h = std::max(e1h, max_abs(n_hh.head(N) - h1));
      cond = std::max({cond, max_abs(v1), max_abs(k1)});

      // N(d/dy^a, d/dy^b)
      VectorXd v2(N), h2(N), h2p(N);
      for (int e = 0; e < N; ++e) {
        double v = 0;
        for (int c = 0; c < N; ++c) {
          for (int dd = 0; dd < N; ++dd) v += Qm(a, c) * Qm(b, dd) * R[e](c, dd);
          v += -Pm(c, e) * dQ[b](a, c) + Pm(c, e) * dQ[a](b, c);
        }
        v2(e) = v;
      }
      for (int dd = 0; dd < N; ++dd) {
        double common = 0, fixed = 0, printed = 0;
        for (int c = 0; c < N; ++c) {
          fixed += Qm(a, c) * hQ[c](b, dd) - Qm(b, c) * hQ[c](a, dd);
          printed += Qm(a, c) * hQ[c](b, dd) - Qm(b, c) * hQ[c](b, dd);
          for (int e = 0; e < N; ++e)
            common += Qm(b, e) * Bk[c](a, e) * Qm(c, dd) - Qm(a, c) * Bk[e](c, b) * Qm(e, dd);
        }
        h2(dd) = fixed + common;
        h2p(dd) = printed + common;
      }
      e2v = std::max(e2v, max_abs(n_vv.tail(N) - v2));
      e2h = std::max(e2h, max_abs(n_vv.head(N) - h2));
      e2h_printed = std::max(e2h_printed, max_abs(n_vv.head(N) - h2p));

      // N(d/dy^a, delta*_b)
      VectorXd h3(N), v3(N);
      for (int c = 0; c < N; ++c) {
        double h = 0;
        for (int dd = 0; dd < N; ++dd) {
          h += Pm(b, dd) * dQ[dd](a, c) + dP[a](b, dd) * Qm(dd, c);
          for (int e = 0; e < N; ++e) h -= Qm(a, dd) * Qm(e, c) * R[e](dd, b);
        }
        h3(c) = h;
      }
      for (int dd = 0; dd < N; ++dd) {
        double v = -Bk[dd](a, b);
        for (int c = 0; c < N; ++c) {
          v += Qm(a, c) * hP[c](b, dd) + hQ[b](a, c) * Pm(c, dd);
          for (int e = 0; e < N; ++e) v += Qm(a, c) * Bk[dd](c, e) * Pm(b, e);
        }
        v3(dd) = -v;
      }
      e3h = std::max(e3h, max_abs(n_vh.head(N) - h3));
      e3v = std::max(e3v, max_abs(n_vh.tail(N) - v3));
    }
  for (int dd = 0; dd < N; ++dd) anti = std::max(anti, max_abs(cond1[dd] + cond1[dd].transpose()));

  rep.check(suite, manifold, "N~(delta*, delta*) vertical part",
            "P_a^c dP_b^d/dy^c - P_b^c dP_a^d/dy^c - R^d_ab against the generic Nijenhuis tensor", sample, e1v, cf);
  rep.check(suite, manifold, "N~(delta*, delta*) horizontal part",
            "(P^d_b|a - P^d_a|b + P_b^c B^d_ac - P_a^c B^d_cb) Q_d^e against the generic Nijenhuis tensor", sample,
            e1h, cf);
  rep.check(suite, manifold, "N~(d/dy, d/dy) vertical part",
            "Q_a^c Q_b^d R^e_cd - P_c^e dQ_a^c/dy^b + P_d^e dQ_b^d/dy^a against the generic Nijenhuis tensor", sample,
            e2v, cf);
  rep.check(suite, manifold, "N~(d/dy, d/dy) horizontal part",
            "Q_a^c Q^d_b|c - Q_b^c Q^d_a|c + Q_b^e B^c_ae Q_c^d - Q_a^c B^e_cb Q_e^d against the generic Nijenhuis "
            "tensor",
            sample, e2h, cf);
  rep.info(suite, manifold, "N~(d/dy, d/dy) horizontal part as printed",
           "second term read literally as Q_b^c Q^d_b|c (repeated index)", sample, e2h_printed,
           e2h_printed > cf ? "disagrees with the generic Nijenhuis tensor" : "agrees at this sample");
  rep.check(suite, manifold, "N~(d/dy, delta*) horizontal part",
            "P_b^d dQ_a^c/dy^d + dP_b^d/dy^a Q_d^c - Q_a^d Q_e^c R^e_db against the generic Nijenhuis tensor", sample,
            e3h, cf);
  rep.check(suite, manifold, "N~(d/dy, delta*) vertical part",
            "-(Q_a^c P^d_b|c + Q^c_a|b P_c^d + Q_a^c B^d_ce P_b^e - B^d_ab) against the generic Nijenhuis tensor",
            sample, e3v, cf);
  rep.check(suite, manifold, "first condition antisymmetric", "the first Kaehler condition is antisymmetric in (a, b)",
            sample, anti, cf);
  rep.check(suite, manifold, "Kaehler conditions iff N~ = 0",
            "both conditions vanish exactly when the generic Nijenhuis tensor of J~ vanishes", sample,
            (cond < verdict) == (nmax < verdict) ? 0.0 : 1.0, 0.0)
      .detail = "max condition = " + fmt(cond) + ", max|N~| = " + fmt(nmax);
  rep.classify(suite, manifold, "Oproiu Kaehler verdict", sample, cond < verdict ? "Kaehler" : "non-Kaehler", cond);
  return rep;
}

VerificationReport verify_oproiu(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                 const OproiuParams& params, const Tolerances& tol, const std::string& suite,
                                 const std::string& manifold, std::uint64_t seed, int random_configs) {
  VerificationReport rep;
  for (const auto& s : samples) {
    try {
      const auto p = tangent_point(metric, s.x, s.y);
      const auto d = oproiu_build(p, params);
      rep.merge(oproiu_structures(p, d, tol, suite, manifold, s.index));
      rep.merge(oproiu_kahler_conditions(p, d, tol, suite, manifold, s.index));

      if (s.index < random_configs) {
        Rng rng = Rng::stream(seed ^ 0x6f7072696f75ULL, static_cast<std::uint64_t>(s.index));
        OproiuParams q;
        double c0 = 0, c1 = 0;
        const double t = p.f2.value();
        do {
          q.A = rng.uniform(0.5, 2.0);
          q.B = rng.uniform(0.5, 2.0);
          c0 = rng.uniform(-0.5, 0.5);
          c1 = rng.uniform(-0.5, 0.5);
        } while (std::abs(q.B + t * (c0 + c1 * t)) < 0.1);
        q.tau = ScalarField{1, [c0, c1](std::span<const JetD> v) { return c0 + c1 * v[0]; }};
        const auto dq = oproiu_build(p, q);
        auto sub = oproiu_structures(p, dq, tol, suite, manifold, s.index);
        for (auto& r : sub.records()) {
          r.identity = "random (A, B, tau): " + r.identity;
          r.detail = "A = " + fmt(q.A) + ", B = " + fmt(q.B) + ", tau(t) = " + fmt(c0) + " + " + fmt(c1) + " t";
        }
        rep.merge(sub);
      }
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "Oproiu data evaluable at the sample", s.index, INFINITY, 0.0).detail =
          e.what();
    }
  }
  return rep;
}

}  // namespace indicatrix
