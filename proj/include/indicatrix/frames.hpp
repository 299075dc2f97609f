#pragma once

// Vector fields on TM, the adapted frame of a nonlinear connection and the
// indicatrix frame {dbar_a, xi, pbar_a, L}.
//
// Tangent vectors of TM are 2N vectors in the coordinate basis
// (d/dx^1..d/dx^N, d/dy^1..d/dy^N). A field is carried at a point as a vector
// of order-1 jets in the 2N coordinates z = (x, y), which is all a Lie bracket
// needs.

#include <functional>
#include <vector>

#include "indicatrix/finsler.hpp"

namespace indicatrix {

/// A vector field on TM: maps a point z = (x, y) to the 1-jet of its
/// coefficients there (2N order-1 jets seeded at z).
struct VectorField {
  int dim = 0;  // 2N
  std::function<VecJ(const VectorXd& z)> at;

  /// Field with coefficients given as functions of the seeded coordinates.
  static VectorField from_coefficients(int dim, std::function<VecJ(std::span<const JetD> z)> coeffs);
};

/// [X, Y]^C = X^A dY^C/dz^A - Y^A dX^C/dz^A for fields given as 1-jets at a
/// common point.
VectorXd lie_bracket(const VecJ& X, const VecJ& Y);
VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const VectorXd& z);

/// Derivative of a jet along a tangent vector.
double directional(const JetD& f, const VectorXd& v);

/// Everything about one point of TM needed by frames and structures, as jets
/// of order 1 in z (F^2 itself is taken to order 4).
struct TangentPoint {
  int N = 0;
  VectorXd x;
  VectorXd y;
  LocalGeometry local;
  JetD f2;                      // F^2
  VecJ yv;                      // y^a as jets
  MatJ g;                       // g_ab
  MatJ ginv;                    // g^ab
  MatJ N_;                      // (a, b) -> N^a_b = G^a_b
  std::vector<MatrixXd> berwald;  // [a](b, c) -> G^a_bc
  NlCurvature R;                // [c](a, b) -> R^c_ab
  MatJ sasaki;                  // Sasaki metric in coordinates, 2N x 2N
  MatJ J;                       // natural almost complex structure in coordinates

  VectorXd z() const;
  double F() const { return std::sqrt(f2.value()); }
};

TangentPoint tangent_point(const FinslerMetric& metric, const VectorXd& x, const VectorXd& y);

/// Sasaki metric G(X, Y) at the point.
double sasaki_metric(const TangentPoint& p, const VectorXd& X, const VectorXd& Y);

struct AdaptedFrame {
  std::vector<VecJ> horizontal;  // delta*/delta*x^a = d/dx^a - N^b_a d/dy^b
  std::vector<VecJ> vertical;    // d/dy^a
  MatrixXd frame;                // columns: horizontal then vertical
  MatrixXd coframe;              // rows: dx^a then delta*y^a = dy^a + N^a_b dx^b
};

AdaptedFrame adapted_frame(const TangentPoint& p);
/// The same fields as VectorFields over TM (each evaluation rebuilds the
/// local geometry).
std::vector<VectorField> adapted_frame_fields(const FinslerMetric& metric);

/// Frame of TTM adapted to the indicatrix: columns ordered
/// [dbar_1..dbar_{N-1}, xi, pbar_1..pbar_{N-1}, L] with
///   pbar_a = E_a^i d/dy^i, dbar_a = J pbar_a, xi = y^i delta_i, L = y^i d/dy^i.
/// E_a = e_{k_a} - (y_{k_a}/F^2) y over k_a != i0, with i0 frozen.
struct IndicatrixFrame {
  int N = 0;
  int i0 = 0;
  std::vector<int> chart;  // k_a
  MatJ E;                  // (N-1) x N
  MatJ fields;             // 2N x 2N, one column per frame field
  MatrixXd F0;             // values of `fields`
  MatrixXd F0inv;
  MatJ gram;               // G(X_A, X_B)

  int size() const { return 2 * N; }
  int dbar(int a) const { return a; }
  int xi() const { return N - 1; }
  int pbar(int a) const { return N + a; }
  int L() const { return 2 * N - 1; }
  VecJ column(int A) const { return fields.col(A); }
  /// Frame components of a coordinate vector.
  VectorXd components(const VectorXd& v) const { return F0inv * v; }
};

/// Requires F = 1 within 1e-8; `i0` < 0 picks argmax |y^i|.
IndicatrixFrame indicatrix_frame(const TangentPoint& p, int i0 = -1);
/// Same construction at any point of TM (used off the indicatrix by finite
/// differences, with the chart frozen).
IndicatrixFrame level_set_frame(const TangentPoint& p, int i0);

int default_chart(const VectorXd& y);

/// Duality of the adapted frame, the horizontal bracket vs R^c_ab, the
/// indicatrix frame invariants, J on the frame, and the eight bracket
/// identities of the frame.
VerificationReport frame_brackets(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                  const Tolerances& tol = {}, const std::string& suite = "brackets",
                                  const std::string& manifold = {});

}  // namespace indicatrix
