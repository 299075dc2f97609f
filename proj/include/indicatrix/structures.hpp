#pragma once

// Contact data on the indicatrix, the Nijenhuis tensor of an almost complex
// structure on TM, and the Oproiu metric family with its complex structure.

#include <cstdint>

#include "indicatrix/frames.hpp"

namespace indicatrix {

/// Contact quantities at a point of the indicatrix, in coordinates.
struct ContactData {
  VectorXd L;         // y^a/F d/dy^a
  VectorXd xi;        // J L = y^a/F delta*_a
  VectorXd eta;       // dF as a covector, eta(X) = G(L, X)
  VectorXd eta_star;  // G(xi, .) = (y_a/F) dx^a
  MatrixXd phi;       // phi(X) = J X + eta*(X) L
  MatrixXd G;         // Sasaki metric
  MatrixXd J;
};

/// Requires F = 1 within 1e-8.
ContactData contact_data(const TangentPoint& p);

/// Random tangent field to the level sets of F: a constant combination of
/// dbar_a, xi, pbar_a.
VecJ random_tangent_field(const IndicatrixFrame& frame, Rng& rng);

/// Contact axioms, dF = eta, J-compatibility and the exterior derivative of
/// eta* against G(X, phi Y), at each indicatrix sample.
VerificationReport verify_contact(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                  const Tolerances& tol = {}, const std::string& suite = "verify-contact",
                                  const std::string& manifold = {}, std::uint64_t seed = 0, int pairs = 4);

/// N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y] for an operator given
/// as a matrix of 1-jets in coordinates.
VectorXd nijenhuis(const MatJ& Jop, const VecJ& X, const VecJ& Y);

/// Nijenhuis tensor of J on the adapted frame, compared to R^c_ab, with the
/// integrability and flatness verdicts.
VerificationReport kahler_check(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                const Tolerances& tol = {}, const std::string& suite = "verify-kahler",
                                const std::string& manifold = {});

/// The same verdict comparison viewed from the indicatrix: TM = IM x R with
/// the complex structure built from phi. Reports N_J, N_Jbar and R.
VerificationReport flatness_integrability_check(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                                const Tolerances& tol = {},
                                                const std::string& suite = "sasakian-obstruction",
                                                const std::string& manifold = {});

struct OproiuParams {
  double A = 1.0;
  double B = 1.0;
  ScalarField tau;  // arity 1, t = F^2
  std::string tau_text = "0";
};

/// Oproiu data at a point, as 1-jets. Mixed tensors are stored with
/// (a, b) -> P_a^b.
struct OproiuData {
  double A = 1.0;
  double B = 1.0;
  JetD tau;
  MatJ P;     // P_ab
  MatJ Q;     // Q_ab
  MatJ Pm;    // P_a^b
  MatJ Qm;    // Q_a^b
  MatJ Qup;   // Q^ab
  MatJ Jt;    // J~ in coordinates
  MatrixXd Gt;  // G~ in the adapted frame (blocks P_ab, Q_ab)
  MatrixXd Ja;  // J~ in the adapted frame
};

/// Throws GeometryError when A, B or B + F^2 tau is within 1e-8 of zero.
OproiuData oproiu_build(const TangentPoint& p, const OproiuParams& params);

/// Inverse property, mixed tensors, J~^2 = -Id, G~-compatibility and the
/// Kaehler form components.
VerificationReport oproiu_structures(const TangentPoint& p, const OproiuData& d, const Tolerances& tol,
                                     const std::string& suite, const std::string& manifold, int sample);

/// Closed-form Nijenhuis components of J~ against the generic Nijenhuis
/// tensor, and the two integrability conditions.
VerificationReport oproiu_kahler_conditions(const TangentPoint& p, const OproiuData& d, const Tolerances& tol,
                                            const std::string& suite, const std::string& manifold, int sample);

/// Runs both Oproiu checks at every sample with `params`, and the algebraic
/// checks with randomly drawn (A, B, tau) at the first `random_configs` samples.
VerificationReport verify_oproiu(const FinslerMetric& metric, const std::vector<Sample>& samples,
                                 const OproiuParams& params, const Tolerances& tol = {},
                                 const std::string& suite = "verify-oproiu", const std::string& manifold = {},
                                 std::uint64_t seed = 0, int random_configs = 20);

}  // namespace indicatrix
