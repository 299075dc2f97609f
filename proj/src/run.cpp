#include "indicatrix/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "indicatrix/connection.hpp"
#include "indicatrix/frames.hpp"

namespace indicatrix {

namespace {

// FNV-1a over the purpose string, folded with splitmix64
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
  const auto& names = suite_names();
  const bool all = std::find(requested.begin(), requested.end(), "all") != requested.end();
  std::vector<std::string> out;
  for (const auto& name : names)
    if (all || std::find(requested.begin(), requested.end(), name) != requested.end()) out.push_back(name);
  for (const auto& r : requested)
    if (r != "all" && std::find(names.begin(), names.end(), r) == names.end())
      throw ConfigError("unknown suite '" + r + "'");
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::size_t manifold, const std::string& purpose) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) h = (h ^ c) * 0x100000001b3ULL;
  return mix(mix(seed ^ h) + manifold);
}

VerificationReport run_suite(const std::string& suite, const Manifold& manifold, std::size_t index,
                             const RunConfig& cfg, const Tolerances& tol) {
  const auto& W = manifold.product;
  const auto& metric = W.combined;
  const auto& name = manifold.name;
  // sample sets depend on the manifold only, so suites see the same points
  // whichever subset is run
  const DirectionDomain domain{W.n(), cfg.factor_margin};
  auto on_indicatrix = [&] {
    return indicatrix_samples(metric, cfg.samples, cfg.radius, derive_seed(cfg.seed, index, "indicatrix"), domain);
  };
  auto on_tangent = [&] {
    return tangent_samples(metric, cfg.samples, cfg.radius, derive_seed(cfg.seed, index, "tangent"), domain);
  };

  VerificationReport rep;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (suite == "check-finsler") {
      const auto s = on_tangent();
      rep.merge(check_finsler(metric, s, tol, suite, name));
      rep.merge(check_warped(W, s, tol, suite, name));
    } else if (suite == "brackets") {
      rep = frame_brackets(metric, on_indicatrix(), tol, suite, name);
    } else if (suite == "verify-contact") {
      rep = verify_contact(metric, on_indicatrix(), tol, suite, name, derive_seed(cfg.seed, index, suite));
    } else if (suite == "verify-kahler") {
      rep = kahler_check(metric, on_tangent(), tol, suite, name);
    } else if (suite == "verify-oproiu") {
      rep = verify_oproiu(metric, on_tangent(), build_oproiu(cfg.oproiu), tol, suite, name,
                          derive_seed(cfg.seed, index, suite), cfg.oproiu.random_configs);
    } else if (suite == "levi-civita") {
      rep = levi_civita(metric, on_indicatrix(), tol, suite, name);
    } else if (suite == "curvature-relations") {
      rep = curvature_relations(metric, on_indicatrix(), tol, suite, name);
    } else if (suite == "sasakian-obstruction") {
      const auto s = on_indicatrix();
      rep.merge(sasakian_obstruction(metric, s, tol, suite, name));
      rep.merge(flatness_integrability_check(metric, s, tol, suite, name));
    } else {
      throw ConfigError("unknown suite '" + suite + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    rep.check(suite, name, "suite completed", "", -1, INFINITY, 0.0).detail = e.what();
  }
  rep.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

VerificationReport run_suites(const RunConfig& cfg) {
  const auto suites = expand_suites(cfg.suites);
  const Tolerances tol = build_tolerances(cfg);
  std::vector<Manifold> manifolds;
  for (const auto& spec : cfg.manifolds) manifolds.push_back(build_manifold(spec, cfg.radius));

  struct Task {
    std::size_t manifold;
    std::string suite;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < manifolds.size(); ++i)
    for (const auto& s : suites) tasks.push_back({i, s});

  std::vector<VerificationReport> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < tasks.size();) {
      try {
        results[k] = run_suite(tasks[k].suite, manifolds[tasks[k].manifold], tasks[k].manifold, cfg, tol);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  VerificationReport out;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    out.merge(results[k]);
  }
  out.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace indicatrix
