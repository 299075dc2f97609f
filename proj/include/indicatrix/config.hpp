#pragma once

// Run configuration: manifolds (warped products of two factor metrics), the
// sampling setup, tolerance overrides and the Oproiu parameters. The JSON
// schema is documented in docs/config.md.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "indicatrix/structures.hpp"
#include "indicatrix/warped.hpp"

namespace indicatrix {

struct MetricSpec {
  std::string kind = "euclidean";  // euclidean | riemannian | randers | expression
  std::vector<std::vector<std::string>> a;  // riemannian, randers
  std::vector<std::string> b;               // randers
  std::string f2;                           // expression: F^2
  std::string F;                            // expression: F (squared on use)
};

struct ManifoldSpec {
  std::string name;
  int n = 2;
  int m = 1;
  MetricSpec factor1;  // in x, y
  MetricSpec factor2;  // in u, v
  std::string warp = "1";
};

struct OproiuSpec {
  double A = 1.0;
  double B = 1.0;
  std::string tau = "0";
  int random_configs = 20;
};

struct RunConfig {
  std::vector<ManifoldSpec> manifolds;
  int samples = 100;
  std::uint64_t seed = 1;
  double radius = 0.5;
  // directions keep at least this Euclidean share in each factor, away from
  // the zero sections where a non-Riemannian factor is not smooth
  double factor_margin = 0.2;
  int threads = 0;  // 0: hardware concurrency
  std::vector<std::string> suites{"all"};
  std::map<std::string, double> tolerances;
  OproiuSpec oproiu;
};

/// A validated manifold ready for the suites.
struct Manifold {
  std::string name;
  WarpedProduct product;
};

/// Parses and validates; errors carry the JSON path of the offending field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Builds the factor metrics and the warp. Rejects n < 2, m < 1, Randers
/// forms with |b| >= 1 or non-positive a at the centre or a corner of the
/// sampling box, warps that are not positive there, and expressions that
/// fail to evaluate; messages name the manifold.
Manifold build_manifold(const ManifoldSpec& spec, double radius);

OproiuParams build_oproiu(const OproiuSpec& spec);
Tolerances build_tolerances(const RunConfig& cfg);

/// The suites accepted on the command line, in run order ("all" excluded).
const std::vector<std::string>& suite_names();

}  // namespace indicatrix
