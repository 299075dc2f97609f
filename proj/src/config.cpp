#include "indicatrix/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>

namespace indicatrix {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path + "." + key, "wrong type");
  }
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    const auto& key = item.key();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(path + "." + key, "unknown field");
  }
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

MetricSpec parse_metric(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "a", "b", "f2", "F"});
  MetricSpec m;
  m.kind = get<std::string>(j, "kind", path, "euclidean");
  m.a = get<std::vector<std::vector<std::string>>>(j, "a", path, {});
  m.b = get<std::vector<std::string>>(j, "b", path, {});
  m.f2 = get<std::string>(j, "f2", path, "");
  m.F = get<std::string>(j, "F", path, "");
  if (m.kind != "euclidean" && m.kind != "riemannian" && m.kind != "randers" && m.kind != "expression")
    fail(path + ".kind", "unknown metric kind '" + m.kind + "'");
  if ((m.kind == "riemannian" || m.kind == "randers") && m.a.empty()) fail(path + ".a", "required for " + m.kind);
  if (m.kind == "randers" && m.b.empty()) fail(path + ".b", "required for randers");
  if (m.kind == "expression" && m.f2.empty() == m.F.empty()) fail(path, "expression metrics need exactly one of f2, F");
  return m;
}

// First factor: x, y. Second factor: u, v.
Dims factor_dims(int dim, bool second) { return second ? Dims{0, dim, false} : Dims{dim, 0, false}; }

Expr parse_at(const std::string& text, Dims dims, const std::string& path) {
  try {
    return Expr::parse(text, dims);
  } catch (const ParseError& e) {
    fail(path, std::string("expression error: ") + e.what());
  }
}

// Coefficients depend on the position only.
Expr parse_position(const std::string& text, int dim, bool second, const std::string& path) {
  Expr e = parse_at(text, factor_dims(dim, second), path);
  const auto use = e.usage();
  if (use.y || use.v) fail(path, "coefficients may not depend on the direction variables");
  return e;
}

Env<JetD> position_env(std::span<const JetD> x, bool second) {
  Env<JetD> env;
  (second ? env.u : env.x) = x;
  return env;
}

// centre and corners of the box |x^i| <= radius
std::vector<VectorXd> probe_points(int dim, double radius) {
  std::vector<VectorXd> pts{VectorXd::Zero(dim)};
  for (int mask = 0; mask < (1 << dim); ++mask) {
    VectorXd p(dim);
    for (int i = 0; i < dim; ++i) p(i) = (mask >> i & 1) ? radius : -radius;
    pts.push_back(p);
  }
  return pts;
}

std::string format_point(const VectorXd& x) {
  std::string s = "(";
  for (int i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x(i));
  return s + ")";
}

std::vector<JetD> constants(const VectorXd& x) {
  return std::vector<JetD>(x.begin(), x.end());
}

FinslerMetric build_factor(const MetricSpec& spec, int dim, bool second, double radius, const std::string& path,
                           const std::string& label) {
  if (spec.kind == "euclidean") return FinslerMetric::euclidean(dim);

  if (spec.kind == "expression") {
    const bool is_F = !spec.F.empty();
    Expr e = parse_at(is_F ? spec.F : spec.f2, factor_dims(dim, second), path + (is_F ? ".F" : ".f2"));
    return FinslerMetric::from_expression(dim, e, is_F, second ? VarKind::u : VarKind::x,
                                          second ? VarKind::v : VarKind::y, label);
  }

  if (spec.a.size() != static_cast<std::size_t>(dim)) fail(path + ".a", "expected " + std::to_string(dim) + " rows");
  std::vector<std::vector<Expr>> a(dim);
  for (int i = 0; i < dim; ++i) {
    const auto row = index_path(path + ".a", i);
    if (spec.a[i].size() != static_cast<std::size_t>(dim)) fail(row, "expected " + std::to_string(dim) + " entries");
    for (int j = 0; j < dim; ++j) a[i].push_back(parse_position(spec.a[i][j], dim, second, index_path(row, j)));
  }
  // symmetric part, which is all that y^T a y sees
  MatrixCoefficient A = [a, dim, second](std::span<const JetD> x) {
    const auto env = position_env(x, second);
    MatJ out(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out(i, j) = 0.5 * (a[i][j].evaluate(env) + a[j][i].evaluate(env));
    return out;
  };

  VectorCoefficient Bv;
  if (spec.kind == "randers") {
    if (spec.b.size() != static_cast<std::size_t>(dim)) fail(path + ".b", "expected " + std::to_string(dim) + " entries");
    std::vector<Expr> b;
    for (int i = 0; i < dim; ++i) b.push_back(parse_position(spec.b[i], dim, second, index_path(path + ".b", i)));
    Bv = [b, dim, second](std::span<const JetD> x) {
      const auto env = position_env(x, second);
      VecJ out(dim);
      for (int i = 0; i < dim; ++i) out(i) = b[i].evaluate(env);
      return out;
    };
  }

  for (const auto& x : probe_points(dim, radius)) {
    const auto z = constants(x);
    MatrixXd av;
    try {
      av = values(A(z));
    } catch (const Error& e) {
      fail(path + ".a", "cannot evaluate at x = " + format_point(x) + ": " + e.what());
    }
    if (!av.allFinite() || !is_positive_definite(av))
      fail(path + ".a", "not positive definite at x = " + format_point(x));
    if (!Bv) continue;
    VectorXd bv;
    try {
      bv = values(Bv(z));
    } catch (const Error& e) {
      fail(path + ".b", "cannot evaluate at x = " + format_point(x) + ": " + e.what());
    }
    const double norm2 = bv.dot(av.ldlt().solve(bv));
    if (!std::isfinite(norm2) || norm2 >= 1.0)
      fail(path + ".b", "|b|_a = " + std::to_string(std::sqrt(norm2)) + " >= 1 at x = " + format_point(x));
  }

  if (spec.kind == "riemannian") return FinslerMetric::riemannian(dim, A, label);
  return FinslerMetric::randers(dim, A, Bv, label);
}

// Every factor is probed in a few directions at the box points; expression
// metrics get their only validation here.
void probe_factor(const FinslerMetric& metric, int dim, double radius, const std::string& path) {
  for (const auto& x : probe_points(dim, radius)) {
    for (int k = 0; k <= dim; ++k) {
      const VectorXd y = k < dim ? VectorXd::Unit(dim, k) : VectorXd::Ones(dim).normalized();
      try {
        fundamental_tensor(metric, x, y);
      } catch (const Error& e) {
        fail(path, "not a Finsler metric at x = " + format_point(x) + ", y = " + format_point(y) + ": " + e.what());
      }
    }
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"check-finsler", "brackets",    "verify-contact",      "verify-kahler",
                                              "verify-oproiu", "levi-civita", "curvature-relations",
                                              "sasakian-obstruction"};
  return names;
}

RunConfig parse_config(const json& j) {
  check_keys(j, "$",
             {"schema_version", "manifolds", "samples", "seed", "radius", "factor_margin", "threads", "suites", "tolerances", "oproiu"});
  RunConfig cfg;
  const int version = get<int>(j, "schema_version", "$", 1);
  if (version != 1) fail("$.schema_version", "unsupported version " + std::to_string(version));
  cfg.samples = get<int>(j, "samples", "$", cfg.samples);
  if (cfg.samples < 1) fail("$.samples", "must be positive");
  cfg.seed = get<std::uint64_t>(j, "seed", "$", cfg.seed);
  cfg.radius = get<double>(j, "radius", "$", cfg.radius);
  if (!(cfg.radius > 0.0) || !std::isfinite(cfg.radius)) fail("$.radius", "must be positive");
  cfg.factor_margin = get<double>(j, "factor_margin", "$", cfg.factor_margin);
  if (!(cfg.factor_margin >= 0.0 && cfg.factor_margin < 0.7)) fail("$.factor_margin", "must lie in [0, 0.7)");
  cfg.threads = get<int>(j, "threads", "$", cfg.threads);
  if (cfg.threads < 0) fail("$.threads", "must be non-negative");
  cfg.suites = get<std::vector<std::string>>(j, "suites", "$", cfg.suites);
  const auto& names = suite_names();
  for (std::size_t i = 0; i < cfg.suites.size(); ++i) {
    const auto& s = cfg.suites[i];
    if (s != "all" && std::find(names.begin(), names.end(), s) == names.end())
      fail(index_path("$.suites", i), "unknown suite '" + s + "'");
  }

  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) fail("$.tolerances", "expected an object");
    Tolerances probe;
    for (const auto& item : j["tolerances"].items()) {
      const auto path = "$.tolerances." + item.key();
      if (!item.value().is_number()) fail(path, "expected a number");
      const double v = item.value().get<double>();
      try {
        probe.set(item.key(), v);
      } catch (const Error& e) {
        fail(path, e.what());
      }
      cfg.tolerances[item.key()] = v;
    }
  }

  if (j.contains("oproiu")) {
    const auto& o = j["oproiu"];
    check_keys(o, "$.oproiu", {"A", "B", "tau", "random_configs"});
    cfg.oproiu.A = get<double>(o, "A", "$.oproiu", cfg.oproiu.A);
    cfg.oproiu.B = get<double>(o, "B", "$.oproiu", cfg.oproiu.B);
    cfg.oproiu.tau = get<std::string>(o, "tau", "$.oproiu", cfg.oproiu.tau);
    cfg.oproiu.random_configs = get<int>(o, "random_configs", "$.oproiu", cfg.oproiu.random_configs);
    if (!(cfg.oproiu.A > 0.0)) fail("$.oproiu.A", "must be positive");
    if (!(cfg.oproiu.B > 0.0)) fail("$.oproiu.B", "must be positive");
    if (cfg.oproiu.random_configs < 0) fail("$.oproiu.random_configs", "must be non-negative");
    parse_at(cfg.oproiu.tau, Dims{0, 0, true}, "$.oproiu.tau");
  }

  if (!j.contains("manifolds") || !j["manifolds"].is_array() || j["manifolds"].empty())
    fail("$.manifolds", "expected a non-empty array");
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < j["manifolds"].size(); ++i) {
    const std::string path = index_path("$.manifolds", i);
    const auto& m = j["manifolds"][i];
    check_keys(m, path, {"name", "n", "m", "factor1", "factor2", "warp"});
    ManifoldSpec spec;
    spec.name = get<std::string>(m, "name", path, "manifold" + std::to_string(i));
    if (std::find(seen.begin(), seen.end(), spec.name) != seen.end()) fail(path + ".name", "duplicate name");
    seen.push_back(spec.name);
    spec.n = get<int>(m, "n", path, spec.n);
    spec.m = get<int>(m, "m", path, spec.m);
    if (spec.n < 2) fail(path + ".n", "warped products need n >= 2");
    if (spec.m < 1) fail(path + ".m", "warped products need m >= 1");
    if (m.contains("factor1")) spec.factor1 = parse_metric(m["factor1"], path + ".factor1");
    if (m.contains("factor2")) spec.factor2 = parse_metric(m["factor2"], path + ".factor2");
    spec.warp = get<std::string>(m, "warp", path, spec.warp);
    parse_position(spec.warp, spec.n, false, path + ".warp");
    cfg.manifolds.push_back(spec);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Manifold build_manifold(const ManifoldSpec& spec, double radius) {
  const std::string where = "manifold " + spec.name;
  if (spec.n < 2) fail(where, "warped products need n >= 2");
  if (spec.m < 1) fail(where, "warped products need m >= 1");
  try {
    FinslerMetric F1 =
        build_factor(spec.factor1, spec.n, false, radius, where + ".factor1", spec.name + ".factor1");
    FinslerMetric F2 =
        build_factor(spec.factor2, spec.m, true, radius, where + ".factor2", spec.name + ".factor2");
    probe_factor(F1, spec.n, radius, where + ".factor1");
    probe_factor(F2, spec.m, radius, where + ".factor2");
    Expr w = parse_position(spec.warp, spec.n, false, where + ".warp");
    ScalarField warp{spec.n, [w](std::span<const JetD> x) { return w.evaluate(position_env(x, false)); }};
    return Manifold{spec.name, build_warped(std::move(F1), std::move(F2), std::move(warp), spec.name, radius)};
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

OproiuParams build_oproiu(const OproiuSpec& spec) {
  OproiuParams p;
  p.A = spec.A;
  p.B = spec.B;
  p.tau_text = spec.tau;
  Expr e = parse_at(spec.tau, Dims{0, 0, true}, "oproiu.tau");
  p.tau = ScalarField{1, [e](std::span<const JetD> t) {
                        Env<JetD> env;
                        env.t = &t[0];
                        return e.evaluate(env);
                      }};
  return p;
}

Tolerances build_tolerances(const RunConfig& cfg) {
  Tolerances tol;
  for (const auto& [key, value] : cfg.tolerances) tol.set(key, value);
  return tol;
}

}  // namespace indicatrix
