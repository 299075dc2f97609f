#pragma once

// Levi-Civita connection of the Sasaki metric in the indicatrix frame, its
// closed-form table, the second fundamental form of the indicatrix, curvature
// by finite differences, and the Sasakian obstruction.
//
// Frame fields are indexed as in IndicatrixFrame: dbar_a, xi, pbar_a, L. All
// vectors below are frame components unless stated otherwise.

#include <cstdint>

#include "indicatrix/structures.hpp"

namespace indicatrix {

/// nabla_{X_A} X_B and [X_A, X_B] at one point, both in frame components.
struct ConnectionTable {
  int n2 = 0;
  std::vector<VectorXd> nabla;    // [A * n2 + B]
  std::vector<VectorXd> bracket;  // [A * n2 + B]

  const VectorXd& operator()(int A, int B) const { return nabla[A * n2 + B]; }
  VectorXd& operator()(int A, int B) { return nabla[A * n2 + B]; }
  const VectorXd& c(int A, int B) const { return bracket[A * n2 + B]; }
};

/// Frame components of [X_A, X_B] for all pairs; fills `bracket` only.
ConnectionTable frame_bracket_table(const IndicatrixFrame& fr);

/// 2 G(nabla_{X_A} X_B, X_C) by the six-term Koszul formula, with derivatives
/// of the Gram matrix from jets and brackets taken from `t`.
double koszul(const IndicatrixFrame& fr, const ConnectionTable& t, int A, int B, int C);

/// Full table from the Koszul formula and the inverse frame Gram matrix. Works
/// at any point of TM for a frame built by level_set_frame.
ConnectionTable levi_civita_table(const TangentPoint& p, const IndicatrixFrame& fr);

/// Frame scalars used by the closed-form table.
struct FrameScalars {
  int n = 0;                        // N - 1
  double f2 = 1.0;                  // F^2
  MatrixXd g;                       // g_ab = g_ij E_a^i E_b^j
  MatrixXd ginv;                    // g^ab
  std::vector<MatrixXd> g3;         // [c](a, b) -> g_abc = 1/2 E E E dg_ij/dy^k
  std::vector<MatrixXd> christoffel;  // [d](a, b) -> E_a^i E_b^j E_d^k Gamma^h_ij g_hk
  std::vector<MatrixXd> R3;         // [d](a, b) -> R_dab = E_a^i E_b^j E_d^k R^h_ij g_hk
  MatrixXd Rbar;                    // Rbar_ab = (dbar_a E_b^i - dbar_b E_a^i) g_ij y^j
  MatrixXd R2;                      // R_ab = E_a^i E_b^j y^k R^h_ki g_hj = G(vert[xi, dbar_a], pbar_b)
  MatrixXd R2_dbar_xi;              // -R_ab = G(vert[dbar_a, xi], pbar_b)
  std::vector<MatrixXd> mixed_plus;   // [d](a, b) -> 1/2 E_a^i E_b^j E_d^k (dg_jk/dx^i - G^h_ik g_hj + G^h_ij g_hk)
  std::vector<MatrixXd> mixed_minus;  // same with - G^h_ij g_hk
  std::vector<MatrixXd> vertical_h;   // [d](a, b) -> 1/2 E_a^i E_b^j E_d^k (G^h_ik g_hj + G^h_jk g_hi - dg_ij/dx^k)
};

/// dg_ij/dx^k above is the horizontal derivative along delta*_k.
FrameScalars frame_scalars(const TangentPoint& p, const IndicatrixFrame& fr);

/// Which line of the closed-form table covers nabla_{X_A} X_B (1..11).
int table_line(const IndicatrixFrame& fr, int A, int B);

/// Every component of the table from the closed forms in frame scalars.
ConnectionTable closed_form_table(const TangentPoint& p, const IndicatrixFrame& fr, const FrameScalars& s);

/// Normal coefficient of nabla_X Y along L for tangent frame fields,
/// H(X_A, X_B) = h(A, B) L. Rows and columns for L are zero.
MatrixXd second_fundamental_form(const IndicatrixFrame& fr, const ConnectionTable& t);

/// Riemann tensors of nabla on TM and of the induced connection on the level
/// set of F, with R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// Derivatives of the connection coefficients use central differences with
/// step h in the 2N coordinates, the chart of E frozen.
struct CurvatureData {
  int n2 = 0;
  std::vector<VectorXd> R;     // [(A * n2 + B) * n2 + C]
  std::vector<VectorXd> Rbar;  // same layout, L rows and columns unused

  const VectorXd& ambient(int A, int B, int C) const { return R[(A * n2 + B) * n2 + C]; }
  const VectorXd& induced(int A, int B, int C) const { return Rbar[(A * n2 + B) * n2 + C]; }
};

CurvatureData curvature(const FinslerMetric& metric, const TangentPoint& p, const IndicatrixFrame& fr,
                        double h = 1e-4);

/// Contact data of the indicatrix expressed in the frame.
struct FrameContact {
  VectorXd eta;                 // eta(X_A) = G(xi, X_A)
  MatrixXd d_eta;               // d eta(X_A, X_B)
  MatrixXd lie_xi_g;            // (L_xi G)(X_A, X_B)
  MatrixXd phi;                 // phi on frame components
};

FrameContact frame_contact(const IndicatrixFrame& fr, const ConnectionTable& t);

/// nabla~_{X_A} X_B from the induced connection, in frame components.
VectorXd tilde_connection(const IndicatrixFrame& fr, const ConnectionTable& t, const FrameContact& c, int A, int B);

/// Metric compatibility, torsion-freeness, every line of the closed-form
/// table against the Koszul table, and the second fundamental form.
VerificationReport levi_civita(const FinslerMetric& metric, const std::vector<Sample>& samples,
                               const Tolerances& tol = {}, const std::string& suite = "levi-civita",
                               const std::string& manifold = {});

/// The seven curvature relations between the ambient and induced Riemann
/// tensors, the remaining type triples, antisymmetry and the first Bianchi
/// identity.
VerificationReport curvature_relations(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                       const Tolerances& tol = {}, const std::string& suite = "curvature-relations",
                                       const std::string& manifold = {});

/// (nabla~_X phi) Y over pairs of frame fields of the contact distribution,
/// the lower bound 0.5 lambda_min(g_ab), the component equal to g_ab and the
/// chart independence of the verdict.
VerificationReport sasakian_obstruction(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                        const Tolerances& tol = {}, const std::string& suite = "sasakian-obstruction",
                                        const std::string& manifold = {});

}  // namespace indicatrix
