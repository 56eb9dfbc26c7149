#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/models/models.hpp"

namespace kq {

class UnknownModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// $KQ_CATALOG_DIR if set, otherwise the catalog/ directory of the source tree.
std::filesystem::path default_catalog_dir();

/// One catalog file: kind, parameters (field expression trees where the
/// model takes functions), declared observables and expected verdicts.
struct CatalogEntry {
  std::string name;
  std::string kind;
  std::string description;
  nlohmann::json document;
  std::filesystem::path path;
};

class Catalog {
 public:
  /// Reads every *.json in dir. Throws IoError when dir is unreadable and
  /// ConfigError for malformed files.
  static Catalog load(const std::filesystem::path& dir);

  std::vector<std::string> names() const;
  /// Throws UnknownModelError.
  const CatalogEntry& entry(const std::string& name) const;

  /// Builds and validates the model. `dimension` selects n for the
  /// Staeckel models and is rejected elsewhere.
  ModelInstance instantiate(const std::string& name, std::optional<int> dimension = std::nullopt) const;

 private:
  std::vector<CatalogEntry> entries_;
};

/// Builds a model from one catalog document.
ModelInstance instantiate(const nlohmann::json& document, std::optional<int> dimension = std::nullopt);

}  // namespace kq
