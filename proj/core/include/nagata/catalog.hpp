#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nagata/metric.hpp"

namespace nagata {

/// A predicted dimension value: a finite integer or infinity, never a
/// sentinel. Every prediction carries the reason it holds.
struct Prediction {
  enum class Kind { finite, infinite };
  Kind kind = Kind::finite;
  int value = 0;  // finite only
  std::string citation;

  static Prediction finite(int v, std::string why) { return {Kind::finite, v, std::move(why)}; }
  static Prediction infinite(std::string why) { return {Kind::infinite, 0, std::move(why)}; }
  bool is_infinite() const { return kind == Kind::infinite; }
  bool operator==(const Prediction&) const = default;
};

std::string to_string(const Prediction& p);

/// Expected shape of ||h||_G against ||h||_H for one subgroup.
struct DistortionPrediction {
  std::string subgroup;  // "center", "fiber", "whole"
  FitModel model = FitModel::power;
  /// power: predicted exponent of the ambient length in the intrinsic one.
  double exponent = 1;
  std::string citation;
};

struct CatalogEntry {
  std::string name;
  /// Discrete model constructor name, empty for algebra-only entries.
  std::string model;
  /// File name under the data directory's lie/ folder, empty if none.
  std::string lie_file;
  std::optional<Prediction> asdim;
  std::optional<Prediction> asdim_an;
  std::optional<Prediction> dim_an;
  std::optional<Prediction> hirsch;
  std::optional<DistortionPrediction> distortion;
  std::string notes;
};

const std::vector<CatalogEntry>& builtin_catalog();
/// Throws ValidationError for unknown names.
const CatalogEntry& catalog_lookup(const std::string& name);

/// NAGATA_DATA_DIR if set, else the directory the project was built from.
std::filesystem::path data_dir();
std::filesystem::path lie_path(const CatalogEntry& e);

nlohmann::json to_json(const Prediction& p);
nlohmann::json to_json(const CatalogEntry& e);

}  // namespace nagata
