#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "nagata/catalog.hpp"
#include "nagata/continuous_model.hpp"
#include "nagata/lie_algebra.hpp"
#include "nagata/metric.hpp"

namespace nagata {

/// One experiment run. `outputs` and `tables` are the primary outputs and are
/// deterministic for a given spec; timestamps and version are provenance.
struct ExperimentRecord {
  std::string id;          // "<kind>-<first 16 hex digits of the spec hash>"
  std::string kind;
  nlohmann::json inputs;   // canonical spec
  nlohmann::json outputs;
  std::map<std::string, std::string> tables;  // CSV file name -> contents
  std::string started;     // UTC, ISO 8601
  std::string finished;
  std::string code_version;

  bool operator==(const ExperimentRecord&) const = default;
};

struct RunOptions {
  /// Ball cache directory; empty disables caching.
  std::filesystem::path cache_dir;
  /// When set, the record is written to results_root / id.
  std::optional<std::filesystem::path> results_root;
};

/// Registered kinds: distortion, karidi, cover, control-curve,
/// filiform-diameter, lie-classify. Throws ValidationError naming every
/// missing or invalid field; ResourceError propagates and nothing is written.
ExperimentRecord run_experiment(const nlohmann::json& spec, const RunOptions& options = {});

/// Fills defaults and checks fields without running anything.
nlohmann::json canonical_spec(const nlohmann::json& spec);
std::string spec_hash(const nlohmann::json& canonical);

void save_record(const ExperimentRecord& r, const std::filesystem::path& dir);
ExperimentRecord load_record(const std::filesystem::path& dir);

/// Rounds every floating-point value to 6 significant digits.
nlohmann::json round_floats(const nlohmann::json& j);

enum class VerdictKind { pass, fail, evidence_only };
const char* to_string(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::evidence_only;
  std::string rule;
  std::string detail;
  std::string citation;
};

/// cover: family count against predicted asdim_AN + 1; distortion: fitted
/// shape against the entry's distortion prediction; control-curve: always
/// EVIDENCE-ONLY; lie-classify: predicted asdim_AN. Throws ValidationError
/// for pairs with no rule.
Verdict compare_to_prediction(const ExperimentRecord& record, const CatalogEntry& entry);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const DimensionReport& r);
nlohmann::json to_json(const KappaReport& r);
nlohmann::json to_json(const GridMeasurement& m);

}  // namespace nagata
