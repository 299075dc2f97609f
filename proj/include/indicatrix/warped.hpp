#pragma once

// Warped products F^2 = F1^2(x, y) + f(x)^2 F2^2(u, v) and the closed forms of
// their spray and nonlinear connection in terms of the factor data.
//
// Coordinates on the product are ordered (x^1..x^n, u^1..u^m, y^1..y^n,
// v^1..v^m), so index a < n is a first-factor index and a = n + alpha a
// second-factor one.

#include <string>

#include "indicatrix/finsler.hpp"

namespace indicatrix {

struct WarpedProduct {
  FinslerMetric F1;
  FinslerMetric F2;
  ScalarField warp;  // f(x), arity n
  FinslerMetric combined;

  int n() const { return F1.dim(); }
  int m() const { return F2.dim(); }
  int dim() const { return F1.dim() + F2.dim(); }
};

/// Builds the product metric. The warp is probed at the centre and at the
/// corners of the box |x^i| <= radius; a nonpositive value throws
/// GeometryError. Evaluating the combined metric where f <= 0 also throws.
WarpedProduct build_warped(FinslerMetric F1, FinslerMetric F2, ScalarField warp, std::string label = "warped",
                           double radius = 1.0);

/// Spray and connection of the product at one point of TM, from the factor
/// closed forms and from the generic machinery applied to the combined metric.
struct WarpedConnection {
  VectorXd B;          // closed-form B^a
  VectorXd B_generic;  // spray of the combined metric
  MatrixXd Bab;        // closed-form (a, b) -> B^a_b, empty from warped_spray_closed_form
  MatrixXd Bab_jet;    // (a, b) -> dB^a/dy^b, differentiating the closed-form B by jets
  MatrixXd Bab_generic;  // nonlinear connection of the combined metric
  MatrixXd g;          // fundamental tensor of the combined metric
  MatrixXd g1;         // first-factor tensor g_ij
  MatrixXd g2;         // second-factor tensor g_alpha beta
  double f2 = 0.0;     // f(x)^2
};

/// `point` = (x, u, y, v) as a 2N vector.
WarpedConnection warped_spray_closed_form(const WarpedProduct& W, const VectorXd& point);
WarpedConnection warped_connection_closed_form(const WarpedProduct& W, const VectorXd& point);

/// Block structure of g, spray closed forms vs the generic spray, and the
/// connection blocks vs jet-differentiated B, at each sample.
VerificationReport check_warped(const WarpedProduct& W, const std::vector<Sample>& samples, const Tolerances& tol = {},
                                const std::string& suite = "check-finsler", const std::string& manifold = {});

}  // namespace indicatrix
