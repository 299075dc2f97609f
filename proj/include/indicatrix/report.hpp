#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace indicatrix {

/// identity: a checked equation, counts toward the exit status.
/// classification: a verdict such as Kähler / non-Kähler, never a failure.
/// info: supplementary values (flagged discrepancies, alternative forms).
enum class RecordKind { identity, classification, info };

const char* kind_name(RecordKind k);

struct Record {
  std::string suite;
  std::string manifold;
  std::string identity;
  std::string reference;  // what the identity states, in words
  RecordKind kind = RecordKind::identity;
  int sample = -1;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string detail;

  bool operator==(const Record&) const = default;
};

class VerificationReport {
 public:
  static constexpr int kSchemaVersion = 1;

  struct Summary {
    int identities = 0;
    int passed = 0;
    int failed = 0;
    int classifications = 0;
    int infos = 0;
  };

  void add(Record r) { records_.push_back(std::move(r)); }

  /// Identity record; passes iff the residual is finite and within tolerance.
  Record& check(const std::string& suite, const std::string& manifold, const std::string& identity,
                const std::string& reference, int sample, double residual, double tolerance);

  Record& classify(const std::string& suite, const std::string& manifold, const std::string& identity, int sample,
                   const std::string& verdict, double value = 0.0);

  Record& info(const std::string& suite, const std::string& manifold, const std::string& identity,
               const std::string& reference, int sample, double value, const std::string& detail = {});

  void merge(const VerificationReport& other);

  const std::vector<Record>& records() const { return records_; }
  std::vector<Record>& records() { return records_; }
  Summary summary() const;
  bool all_passed() const;

  /// Worst residual / pass state per identity name (optionally restricted to
  /// a suite), in first-seen order.
  struct IdentityStats {
    std::string suite;
    std::string identity;
    std::string reference;
    RecordKind kind = RecordKind::identity;
    int count = 0;
    int failed = 0;
    double max_residual = 0.0;
    double min_residual = 0.0;
    double tolerance = 0.0;
  };
  std::vector<IdentityStats> by_identity() const;

  double duration_seconds = 0.0;

  nlohmann::json to_json(bool include_duration = true) const;
  static VerificationReport from_json(const nlohmann::json& j);

 private:
  std::vector<Record> records_;
};

/// Named tolerances with per-suite overrides ("suite.key" beats "key").
class Tolerances {
 public:
  Tolerances();

  double get(const std::string& suite, const std::string& key) const;
  void set(const std::string& key, double value);
  const std::map<std::string, double>& entries() const { return values_; }

  static const std::map<std::string, double>& defaults();

 private:
  std::map<std::string, double> values_;
};

}  // namespace indicatrix
