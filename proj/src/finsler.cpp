#include "indicatrix/finsler.hpp"

#include <cmath>

namespace indicatrix {

const char* kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::riemannian:
      return "riemannian";
    case MetricKind::randers:
      return "randers";
    case MetricKind::expression:
      return "expression";
    case MetricKind::warped:
      return "warped";
  }
  return "?";
}

MatrixCoefficient constant_matrix(const MatrixXd& m) {
  return [m](std::span<const JetD>) -> MatJ { return m.cast<JetD>(); };
}

VectorCoefficient constant_vector(const VectorXd& v) {
  return [v](std::span<const JetD>) -> VecJ { return v.cast<JetD>(); };
}

FinslerMetric::FinslerMetric(int dim, MetricKind kind, ScalarField f2, std::string label)
    : dim_(dim), kind_(kind), f2_(std::move(f2)), label_(std::move(label)) {
  if (dim_ < 1) throw Error("FinslerMetric: dimension must be positive");
  if (f2_.arity != 2 * dim_) throw Error("FinslerMetric: F^2 must take 2*dim arguments");
}

FinslerMetric FinslerMetric::euclidean(int n) {
  ScalarField f{2 * n, [n](std::span<const JetD> z) {
                  JetD s = z[n] * z[n];
                  for (int i = 1; i < n; ++i) s = s + z[n + i] * z[n + i];
                  return s;
                }};
  return FinslerMetric(n, MetricKind::riemannian, std::move(f), "euclidean");
}

namespace {

JetD quadratic_form(const MatJ& a, std::span<const JetD> y) {
  const int n = static_cast<int>(y.size());
  JetD s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s = s + a(i, j) * y[i] * y[j];
  return s;
}

}  // namespace

FinslerMetric FinslerMetric::riemannian(int n, MatrixCoefficient a, std::string label) {
  ScalarField f{2 * n, [n, a](std::span<const JetD> z) { return quadratic_form(a(z.first(n)), z.subspan(n, n)); }};
  return FinslerMetric(n, MetricKind::riemannian, std::move(f), std::move(label));
}

FinslerMetric FinslerMetric::randers(int n, MatrixCoefficient a, VectorCoefficient b, std::string label) {
  ScalarField f{2 * n, [n, a, b](std::span<const JetD> z) {
                  auto x = z.first(n);
                  auto y = z.subspan(n, n);
                  const VecJ bx = b(x);
                  JetD beta;
                  for (int i = 0; i < n; ++i) beta = beta + bx(i) * y[i];
                  JetD F = sqrt(quadratic_form(a(x), y)) + beta;
                  return F * F;
                }};
  return FinslerMetric(n, MetricKind::randers, std::move(f), std::move(label));
}

FinslerMetric FinslerMetric::from_expression(int n, Expr e, bool is_fundamental_function, VarKind position,
                                             VarKind direction, std::string label) {
  ScalarField f{2 * n, [n, e, is_fundamental_function, position, direction](std::span<const JetD> z) {
                  Env<JetD> env;
                  auto bind = [&env](VarKind k, std::span<const JetD> s) {
                    switch (k) {
                      case VarKind::x:
                        env.x = s;
                        break;
                      case VarKind::y:
                        env.y = s;
                        break;
                      case VarKind::u:
                        env.u = s;
                        break;
                      case VarKind::v:
                        env.v = s;
                        break;
                      case VarKind::t:
                        break;
                    }
                  };
                  bind(position, z.first(n));
                  bind(direction, z.subspan(n, n));
                  JetD r = e.evaluate(env);
                  return is_fundamental_function ? r * r : r;
                }};
  return FinslerMetric(n, MetricKind::expression, std::move(f), std::move(label));
}

JetD FinslerMetric::f2(std::span<const JetD> x, std::span<const JetD> y) const {
  std::vector<JetD> z;
  z.reserve(2 * dim_);
  z.insert(z.end(), x.begin(), x.end());
  z.insert(z.end(), y.begin(), y.end());
  return f2_(z);
}

double FinslerMetric::f2_at(const VectorXd& x, const VectorXd& y) const {
  std::vector<double> z(x.data(), x.data() + x.size());
  z.insert(z.end(), y.data(), y.data() + y.size());
  return f2_.at(z);
}

double FinslerMetric::F_at(const VectorXd& x, const VectorXd& y) const {
  const double v = f2_at(x, y);
  if (!(v > 0.0)) throw GeometryError("F^2 is not positive at the requested point");
  return std::sqrt(v);
}

MetricJets metric_jets(const FinslerMetric& metric, std::span<const JetD> x, std::span<const JetD> y,
                       std::span<const int> xvar, std::span<const int> yvar) {
  const int n = metric.dim();
  MetricJets m;
  m.dim = n;
  m.f2 = metric.f2(x, y);
  if (!m.f2.has_shape()) throw OrderError("metric_jets: F^2 evaluated to a constant");
  const int K = m.f2.order();
  m.order = K;
  if (K < 2) throw OrderError("metric_jets: F^2 must be known to order 2 at least");

  std::vector<JetD> dy(n);
  for (int l = 0; l < n; ++l) dy[l] = m.f2.derivative(yvar[l]);
  m.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.g(j, i) = m.g(i, j) = 0.5 * dy[i].derivative(yvar[j]);
  m.ginv = jet_inverse(m.g);

  VecJ s(n);
  for (int l = 0; l < n; ++l) {
    JetD acc = -m.f2.derivative(xvar[l]).truncate(K - 2);
    for (int k = 0; k < n; ++k) acc = acc + y[k].truncate(K - 2) * dy[l].derivative(xvar[k]);
    s(l) = acc;
  }
  m.spray = 0.25 * mul(m.ginv, s);

  if (K >= 3) {
    m.connection.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.connection(i, j) = m.spray(i).derivative(yvar[j]);
  }
  if (K >= 4) {
    m.berwald.assign(n, MatrixXd(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m.berwald[i](j, k) = m.connection(i, j).gradient(yvar[k]);
  }
  return m;
}

LocalGeometry local_geometry(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y, int order) {
  const int n = metric.dim();
  if (x.size() != n || y.size() != n) throw Error("local_geometry: point has the wrong dimension");
  LocalGeometry local;
  local.x = x;
  local.y = y;
  std::vector<double> p(x.data(), x.data() + n);
  p.insert(p.end(), y.data(), y.data() + n);
  local.z = seed_variables(p, order);
  std::vector<int> xv(n), yv(n);
  for (int i = 0; i < n; ++i) {
    xv[i] = i;
    yv[i] = n + i;
  }
  std::span<const JetD> z(local.z);
  local.jets = metric_jets(metric, z.first(n), z.subspan(n, n), xv, yv);
  return local;
}

bool is_positive_definite(const MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const double trace = g.trace();
  return trace > 0.0 && es.eigenvalues().minCoeff() > 1e-8 * trace;
}

MetricSample fundamental_tensor(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y) {
  if (y.norm() == 0.0) throw GeometryError("fundamental_tensor: y must be nonzero");
  const auto local = local_geometry(metric, x, y, 2);
  MetricSample s;
  s.x = x;
  s.y = y;
  s.g = values(local.jets.g);
  if (!is_positive_definite(s.g)) throw GeometryError("non-Finsler point: fundamental tensor is not positive definite");
  s.ginv = s.g.inverse();
  const double residual = (s.g * s.ginv - MatrixXd::Identity(s.g.rows(), s.g.cols())).cwiseAbs().maxCoeff();
  if (residual > 1e-10) throw GeometryError("non-Finsler point: fundamental tensor is ill-conditioned");
  s.Fval = std::sqrt(local.jets.f2.value());
  return s;
}

SprayData spray(const LocalGeometry& local) {
  const auto& m = local.jets;
  if (m.order < 4) throw OrderError("spray: needs F^2 to order 4");
  SprayData s;
  s.G = values(m.spray);
  s.Gj = values(m.connection);
  s.Gjk.resize(m.dim);
  for (int i = 0; i < m.dim; ++i) s.Gjk[i] = m.berwald[i];
  return s;
}

SprayData spray(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y) {
  fundamental_tensor(metric, x, y);
  return spray(local_geometry(metric, x, y, 4));
}

double horizontal_derivative(const LocalGeometry& local, const JetD& f, int j) {
  const int n = local.dim();
  double d = f.gradient(local.xvar(j));
  for (int l = 0; l < n; ++l) d -= local.jets.connection(l, j).value() * f.gradient(local.yvar(l));
  return d;
}

NlCurvature nl_curvature(const LocalGeometry& local) {
  const int n = local.dim();
  if (local.jets.order < 4) throw OrderError("nl_curvature: needs F^2 to order 4");
  NlCurvature c;
  c.R.assign(n, MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c.R[k](i, j) = horizontal_derivative(local, local.jets.connection(k, i), j) -
                       horizontal_derivative(local, local.jets.connection(k, j), i);
  return c;
}

NlCurvature nl_curvature(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y) {
  fundamental_tensor(metric, x, y);
  return nl_curvature(local_geometry(metric, x, y, 4));
}

VerificationReport check_finsler(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                 const Tolerances& tol, const std::string& suite, const std::string& manifold) {
  VerificationReport rep;
  const double alg = tol.get(suite, "algebraic");
  for (const auto& s : samples) {
    try {
      const auto local = local_geometry(metric, s.x, s.y, 2);
      const double f2 = local.jets.f2.value();
      rep.check(suite, manifold, "F^2 positive", "F^2 > 0 on the slit tangent bundle", s.index, f2 > 0.0 ? 0.0 : 1.0,
                0.0)
          .detail = "F^2 = " + std::to_string(f2);

      const double f2_double = metric.f2_at(s.x, 2.0 * s.y);
      rep.check(suite, manifold, "2-homogeneity", "F^2(x, 2y) = 4 F^2(x, y)", s.index,
                std::abs(f2_double - 4.0 * f2) / std::max(1.0, 4.0 * std::abs(f2)), alg);

      const MatrixXd g = values(local.jets.g);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      rep.check(suite, manifold, "fundamental tensor SPD", "g positive definite (eigenvalue floor 1e-8 trace)",
                s.index, is_positive_definite(g) ? 0.0 : 1.0, 0.0)
          .detail = "lambda_min = " + std::to_string(lmin);

      const double euler = s.y.dot(g * s.y);
      rep.check(suite, manifold, "Euler identity", "g_ab y^a y^b = F^2", s.index,
                std::abs(euler - f2) / std::max(1.0, std::abs(f2)), alg);

      const MatrixXd ginv = values(local.jets.ginv);
      rep.check(suite, manifold, "inverse metric", "g g^-1 = Id", s.index,
                (g * ginv - MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), alg);
    } catch (const Error& e) {
      rep.check(suite, manifold, "evaluation", "metric evaluable at the sample", s.index, INFINITY, 0.0).detail =
          e.what();
    }
  }
  return rep;
}

}  // namespace indicatrix
