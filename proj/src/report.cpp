#include "indicatrix/report.hpp"

#include <cmath>
#include <stdexcept>

#include "indicatrix/error.hpp"

namespace indicatrix {

const char* kind_name(RecordKind k) {
  switch (k) {
    case RecordKind::identity:
      return "identity";
    case RecordKind::classification:
      return "classification";
    case RecordKind::info:
      return "info";
  }
  return "?";
}

namespace {

RecordKind parse_kind(const std::string& s) {
  if (s == "identity") return RecordKind::identity;
  if (s == "classification") return RecordKind::classification;
  if (s == "info") return RecordKind::info;
  throw Error("unknown record kind '" + s + "'");
}

// JSON has no inf/nan; non-finite residuals are written as strings.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double read_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  throw Error("bad numeric field '" + s + "'");
}

}  // namespace

Record& VerificationReport::check(const std::string& suite, const std::string& manifold, const std::string& identity,
                                  const std::string& reference, int sample, double residual, double tolerance) {
  Record r;
  r.suite = suite;
  r.manifold = manifold;
  r.identity = identity;
  r.reference = reference;
  r.sample = sample;
  r.residual = residual;
  r.tolerance = tolerance;
  r.pass = std::isfinite(residual) && residual <= tolerance;
  records_.push_back(std::move(r));
  return records_.back();
}

Record& VerificationReport::classify(const std::string& suite, const std::string& manifold,
                                     const std::string& identity, int sample, const std::string& verdict,
                                     double value) {
  Record r;
  r.suite = suite;
  r.manifold = manifold;
  r.identity = identity;
  r.kind = RecordKind::classification;
  r.sample = sample;
  r.residual = value;
  r.detail = verdict;
  records_.push_back(std::move(r));
  return records_.back();
}

Record& VerificationReport::info(const std::string& suite, const std::string& manifold, const std::string& identity,
                                 const std::string& reference, int sample, double value, const std::string& detail) {
  Record r;
  r.suite = suite;
  r.manifold = manifold;
  r.identity = identity;
  r.reference = reference;
  r.kind = RecordKind::info;
  r.sample = sample;
  r.residual = value;
  r.detail = detail;
  records_.push_back(std::move(r));
  return records_.back();
}

void VerificationReport::merge(const VerificationReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  duration_seconds += other.duration_seconds;
}

VerificationReport::Summary VerificationReport::summary() const {
  Summary s;
  for (const auto& r : records_) {
    switch (r.kind) {
      case RecordKind::identity:
        ++s.identities;
        (r.pass ? s.passed : s.failed) += 1;
        break;
      case RecordKind::classification:
        ++s.classifications;
        break;
      case RecordKind::info:
        ++s.infos;
        break;
    }
  }
  return s;
}

bool VerificationReport::all_passed() const { return summary().failed == 0; }

std::vector<VerificationReport::IdentityStats> VerificationReport::by_identity() const {
  std::vector<IdentityStats> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : records_) {
    auto key = std::make_pair(r.suite, r.identity);
    auto it = index.find(key);
    if (it == index.end()) {
      IdentityStats s;
      s.suite = r.suite;
      s.identity = r.identity;
      s.reference = r.reference;
      s.kind = r.kind;
      s.tolerance = r.tolerance;
      s.max_residual = r.residual;
      s.min_residual = r.residual;
      it = index.emplace(key, out.size()).first;
      out.push_back(s);
    }
    auto& s = out[it->second];
    ++s.count;
    if (r.kind == RecordKind::identity && !r.pass) ++s.failed;
    if (!(r.residual <= s.max_residual)) s.max_residual = r.residual;
    if (r.residual < s.min_residual) s.min_residual = r.residual;
    s.tolerance = std::max(s.tolerance, r.tolerance);
  }
  return out;
}

nlohmann::json VerificationReport::to_json(bool include_duration) const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  const auto s = summary();
  j["summary"] = {{"identities", s.identities},
                  {"passed", s.passed},
                  {"failed", s.failed},
                  {"classifications", s.classifications},
                  {"infos", s.infos}};
  if (include_duration) j["duration_seconds"] = duration_seconds;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : records_) {
    recs.push_back({{"suite", r.suite},
                    {"manifold", r.manifold},
                    {"identity", r.identity},
                    {"reference", r.reference},
                    {"kind", kind_name(r.kind)},
                    {"sample", r.sample},
                    {"residual", number(r.residual)},
                    {"tolerance", number(r.tolerance)},
                    {"pass", r.pass},
                    {"detail", r.detail}});
  }
  return j;
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw Error("unsupported report schema_version " + j.at("schema_version").dump());
  VerificationReport rep;
  if (j.contains("duration_seconds")) rep.duration_seconds = j["duration_seconds"].get<double>();
  for (const auto& e : j.at("records")) {
    Record r;
    r.suite = e.at("suite").get<std::string>();
    r.manifold = e.at("manifold").get<std::string>();
    r.identity = e.at("identity").get<std::string>();
    r.reference = e.at("reference").get<std::string>();
    r.kind = parse_kind(e.at("kind").get<std::string>());
    r.sample = e.at("sample").get<int>();
    r.residual = read_number(e.at("residual"));
    r.tolerance = read_number(e.at("tolerance"));
    r.pass = e.at("pass").get<bool>();
    r.detail = e.at("detail").get<std::string>();
    rep.add(std::move(r));
  }
  const auto s = rep.summary();
  const auto& js = j.at("summary");
  if (js.at("identities").get<int>() != s.identities || js.at("failed").get<int>() != s.failed)
    throw Error("report summary does not match its records");
  return rep;
}

const std::map<std::string, double>& Tolerances::defaults() {
  static const std::map<std::string, double> d{
      {"algebraic", 1e-10},   // purely algebraic identities
      {"jet", 1e-6},          // jet-vs-jet identities
      {"fd", 1e-3},           // finite-difference curvature
      {"closed-form", 1e-5},  // closed forms against generic brackets / Koszul
      {"structure", 1e-9},    // Oproiu structure identities
      {"normal", 1e-8},       // second fundamental form
      {"component", 1e-4},    // obstruction component
      {"verdict", 1e-6},      // "vanishes" threshold for classifications
  };
  return d;
}

Tolerances::Tolerances() : values_(defaults()) {}

double Tolerances::get(const std::string& suite, const std::string& key) const {
  if (auto it = values_.find(suite + "." + key); it != values_.end()) return it->second;
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  throw Error("unknown tolerance key '" + key + "'");
}

void Tolerances::set(const std::string& key, double value) {
  const auto dot = key.rfind('.');
  const std::string base = dot == std::string::npos ? key : key.substr(dot + 1);
  if (!defaults().count(base)) throw ConfigError("unknown tolerance key '" + key + "'");
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("tolerance '" + key + "' must be positive");
  values_[key] = value;
}

}  // namespace indicatrix
