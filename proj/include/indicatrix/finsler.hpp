#pragma once

// A single Finsler metric: fundamental tensor, geodesic spray, nonlinear
// connection, Berwald coefficients and the curvature of the nonlinear
// connection.
//
// Every quantity is read off one jet of F^2. With F^2 known to order K at a
// point of TM:
//   g_ij   = 1/2 d^2F^2/dy^i dy^j                               order K-2
//   G^i    = 1/4 g^il (y^k d^2F^2/dy^l dx^k - dF^2/dx^l)       order K-2
//   G^i_j  = dG^i/dy^j                                         order K-3
//   G^i_jk = dG^i_j/dy^k                                       order K-4
// so K = 4 gives the Berwald coefficients and first derivatives of G^i_j.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "indicatrix/expr.hpp"
#include "indicatrix/linalg.hpp"
#include "indicatrix/report.hpp"
#include "indicatrix/sampling.hpp"
#include "indicatrix/scalar_field.hpp"

namespace indicatrix {

enum class MetricKind { riemannian, randers, expression, warped };

const char* kind_name(MetricKind k);

/// Matrix- and vector-valued coefficient functions of the base point.
using MatrixCoefficient = std::function<MatJ(std::span<const JetD> x)>;
using VectorCoefficient = std::function<VecJ(std::span<const JetD> x)>;

MatrixCoefficient constant_matrix(const MatrixXd& m);
VectorCoefficient constant_vector(const VectorXd& v);

class FinslerMetric {
 public:
  /// `f2` has arity 2 * dim and takes (x^1..x^n, y^1..y^n).
  FinslerMetric(int dim, MetricKind kind, ScalarField f2, std::string label = {});

  static FinslerMetric euclidean(int n);
  /// F^2 = A_ij(x) y^i y^j.
  static FinslerMetric riemannian(int n, MatrixCoefficient a, std::string label = "riemannian");
  /// F = sqrt(a_ij(x) y^i y^j) + b_i(x) y^i.
  static FinslerMetric randers(int n, MatrixCoefficient a, VectorCoefficient b, std::string label = "randers");
  /// F^2 given directly (or F, squared here when `is_fundamental_function`).
  /// `position` / `direction` name the coordinates used by the expression:
  /// (x, y) for a first factor, (u, v) for a second factor.
  static FinslerMetric from_expression(int n, Expr e, bool is_fundamental_function = false,
                                       VarKind position = VarKind::x, VarKind direction = VarKind::y,
                                       std::string label = "expression");

  int dim() const { return dim_; }
  MetricKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const ScalarField& f2() const { return f2_; }

  JetD f2(std::span<const JetD> x, std::span<const JetD> y) const;
  double f2_at(const VectorXd& x, const VectorXd& y) const;
  double F_at(const VectorXd& x, const VectorXd& y) const;

 private:
  int dim_;
  MetricKind kind_;
  ScalarField f2_;
  std::string label_;
};

/// Jets of the metric objects, in whatever variables the seeds carry.
struct MetricJets {
  int dim = 0;
  int order = 0;                // order of the F^2 jet
  JetD f2;                      // order K
  MatJ g;                       // order K-2
  MatJ ginv;                    // order K-2
  VecJ spray;                   // G^i, order K-2
  MatJ connection;              // (i, j) -> G^i_j, order K-3 (empty if K < 3)
  std::vector<MatrixXd> berwald;  // [i](j, k) -> G^i_jk (empty if K < 4)
};

/// Evaluates F^2 on the given seeds. `xvar[i]` / `yvar[i]` are the seed
/// variable indices of x^i / y^i, so the metric can sit inside a larger set
/// of variables (e.g. a factor of a product).
MetricJets metric_jets(const FinslerMetric& metric, std::span<const JetD> x, std::span<const JetD> y,
                       std::span<const int> xvar, std::span<const int> yvar);

/// Jets at (x, y) seeded in z = (x, y): variable i is x^i, variable n+i is y^i.
struct LocalGeometry {
  VectorXd x;
  VectorXd y;
  std::vector<JetD> z;  // seeds, order `jets.order`
  MetricJets jets;

  int dim() const { return jets.dim; }
  int xvar(int i) const { return i; }
  int yvar(int i) const { return jets.dim + i; }
};

LocalGeometry local_geometry(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y, int order = 4);

struct MetricSample {
  VectorXd x;
  VectorXd y;
  MatrixXd g;
  MatrixXd ginv;
  double Fval = 0.0;
};

struct SprayData {
  VectorXd G;                 // G^i
  MatrixXd Gj;                // (i, j) -> G^i_j
  std::vector<MatrixXd> Gjk;  // [i](j, k) -> G^i_jk
};

struct NlCurvature {
  std::vector<MatrixXd> R;  // [k](i, j) -> R^k_ij, with [d_i, d_j] = R^k_ij d/dy^k
};

/// SPD test used throughout: smallest eigenvalue above 1e-8 * trace.
bool is_positive_definite(const MatrixXd& g);

/// Throws GeometryError at non-Finsler points (indefinite or singular g).
MetricSample fundamental_tensor(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y);
SprayData spray(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y);
SprayData spray(const LocalGeometry& local);
NlCurvature nl_curvature(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y);
NlCurvature nl_curvature(const LocalGeometry& local);

/// d f / d(delta x^j) = df/dx^j - G^l_j df/dy^l at the base point, for a jet
/// in the seeded variables of `local`.
double horizontal_derivative(const LocalGeometry& local, const JetD& f, int j);

/// Positivity, 2-homogeneity, SPD of g and the Euler identity at each sample.
VerificationReport check_finsler(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                 const Tolerances& tol = {}, const std::string& suite = "check-finsler",
                                 const std::string& manifold = {});

}  // namespace indicatrix
