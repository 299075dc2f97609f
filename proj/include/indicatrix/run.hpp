#pragma once

// Runs the selected suites over the configured manifolds. Work is split into
// (manifold, suite) tasks run on a thread pool; the merged report lists the
// tasks in manifold-then-suite order, so it depends only on the config.

#include <string>
#include <vector>

#include "indicatrix/config.hpp"

namespace indicatrix {

/// Suite names from the config or command line with "all" expanded,
/// deduplicated and put in run order.
std::vector<std::string> expand_suites(const std::vector<std::string>& requested);

/// Seed of an independent stream for (base seed, manifold index, purpose).
std::uint64_t derive_seed(std::uint64_t seed, std::size_t manifold, const std::string& purpose);

/// One suite on one manifold. Errors raised while evaluating are recorded as a
/// failing identity "suite completed" carrying the message.
VerificationReport run_suite(const std::string& suite, const Manifold& manifold, std::size_t manifold_index,
                             const RunConfig& cfg, const Tolerances& tol);

/// Builds every manifold (ConfigError on invalid ones) and runs the suites.
VerificationReport run_suites(const RunConfig& cfg);

}  // namespace indicatrix
