// indicatrix <suite> --config <file> [--json <path>] [--samples N] [--seed S]
//            [--tol-override key=value]... [--threads T] [--omit-duration]
//
// Exit status: 0 when every identity record passes, 1 when one fails, 2 on a
// usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "indicatrix/run.hpp"

using namespace indicatrix;

namespace {

struct Row {
  std::string manifold, suite, identity;
  RecordKind kind = RecordKind::identity;
  int count = 0;
  int failed = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  std::map<std::string, int> verdicts;
};

// One row per (manifold, suite, identity) in first-seen order.
std::vector<Row> aggregate(const VerificationReport& rep) {
  std::vector<Row> rows;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  for (const auto& r : rep.records()) {
    auto key = std::make_tuple(r.manifold, r.suite, r.identity);
    auto it = index.find(key);
    if (it == index.end()) {
      Row row{r.manifold, r.suite, r.identity, r.kind};
      row.worst = r.residual;
      it = index.emplace(key, rows.size()).first;
      rows.push_back(row);
    }
    Row& row = rows[it->second];
    ++row.count;
    if (r.kind == RecordKind::identity && !r.pass) ++row.failed;
    if (!(std::abs(r.residual) <= std::abs(row.worst))) row.worst = r.residual;
    row.tolerance = std::max(row.tolerance, r.tolerance);
    if (r.kind == RecordKind::classification) ++row.verdicts[r.detail];
  }
  return rows;
}

void print_table(const VerificationReport& rep) {
  std::string last;
  for (const auto& row : aggregate(rep)) {
    const std::string group = row.manifold + " / " + row.suite;
    if (group != last) {
      std::printf("\n== %s\n", group.c_str());
      last = group;
    }
    switch (row.kind) {
      case RecordKind::identity:
        std::printf("  %-4s %-58s n=%-4d max=%-10.3e tol=%.1e\n", row.failed ? "FAIL" : "ok", row.identity.c_str(),
                    row.count, row.worst, row.tolerance);
        break;
      case RecordKind::classification: {
        std::string v;
        for (const auto& [verdict, count] : row.verdicts) v += (v.empty() ? "" : ", ") + verdict + " x" + std::to_string(count);
        std::printf("  %-4s %-58s %s\n", "cls", row.identity.c_str(), v.c_str());
        break;
      }
      case RecordKind::info:
        std::printf("  %-4s %-58s n=%-4d max=%.3e\n", "info", row.identity.c_str(), row.count, row.worst);
        break;
    }
  }
  const auto s = rep.summary();
  std::printf("\nidentities %d, passed %d, failed %d, classifications %d, info %d, %.2f s\n", s.identities, s.passed,
              s.failed, s.classifications, s.infos, rep.duration_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Finsler warped products, their indicatrix bundles and the structures on them"};
  std::string suite;
  std::string config_path;
  std::string json_path;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> overrides;
  bool omit_duration = false;

  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  app.add_option("suite", suite, "Suite to run")->required()->check(CLI::IsMember(choices));
  app.add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--json", json_path, "Write the full report as JSON");
  app.add_option("--samples", samples, "Samples per suite and manifold")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol-override", overrides, "Tolerance override key=value, key may be suite.key")->take_all();
  app.add_flag("--omit-duration", omit_duration, "Leave the wall-clock duration out of the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  VerificationReport rep;
  try {
    RunConfig cfg = load_config(config_path);
    cfg.suites = {suite};
    if (samples) cfg.samples = *samples;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--tol-override expects key=value, got '" + o + "'");
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(o.substr(eq + 1), &used);
        if (used != o.size() - eq - 1) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError("--tol-override: '" + o.substr(eq + 1) + "' is not a number");
      }
      cfg.tolerances[o.substr(0, eq)] = value;
    }
    rep = run_suites(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  print_table(rep);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "error: cannot write " << json_path << "\n";
      return 2;
    }
    out << rep.to_json(!omit_duration).dump(2) << "\n";
  }
  return rep.all_passed() ? 0 : 1;
}
