#include "kq/models/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "kq/common/error.hpp"

#ifndef KQ_DEFAULT_CATALOG_DIR
#define KQ_DEFAULT_CATALOG_DIR "catalog"
#endif

namespace kq {

namespace fs = std::filesystem;

fs::path default_catalog_dir() {
  if (const char* env = std::getenv("KQ_CATALOG_DIR"); env != nullptr && *env != '\0') return fs::path(env);
  return fs::path(KQ_DEFAULT_CATALOG_DIR);
}

namespace {

const nlohmann::json& require_key(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

std::vector<double> ellipsoid_constants(const nlohmann::json& prm, int n) {
  if (prm.contains("a")) {
    const auto& table = prm.at("a");
    const std::string key = std::to_string(n);
    if (table.contains(key)) {
      auto a = table.at(key).get<std::vector<double>>();
      if (static_cast<int>(a.size()) != n + 1) throw ConfigError("constants a for n = " + key + " need n + 1 entries");
      return a;
    }
  }
  std::vector<double> a(n + 1);
  for (int k = 0; k <= n; ++k) a[k] = 1.0 + k;
  return a;
}

ModelInstance build(const nlohmann::json& doc, std::optional<int> dimension) {
  const std::string name = require_key(doc, "name", "catalog entry").get<std::string>();
  const std::string where = "catalog entry '" + name + "'";
  const std::string kind = require_key(doc, "kind", where).get<std::string>();
  const nlohmann::json prm = doc.value("parameters", nlohmann::json::object());
  const bool staeckel = kind == "jacobi-ellipsoid" || kind == "neumann";
  if (dimension && !staeckel) throw ConfigError(where + ": the dimension is fixed for kind '" + kind + "'");

  ModelInstance m;
  if (staeckel) {
    const int n = dimension.value_or(prm.value("dimension", 2));
    if (n < 1 || n > 6) throw ConfigError(where + ": dimension must be in 1..6");
    const auto a = ellipsoid_constants(prm, n);
    m = kind == "neumann" ? from_staeckel(name, neumann(a))
                          : from_staeckel(name, jacobi_ellipsoid(a, prm.value("harmonic", 0.0)));
  } else if (kind == "kns") {
    m = kns(KnsParameters::from_json(prm));
  } else if (kind == "multicentre") {
    MultiCentreFields f;
    f.v = ScalarField::from_json(require_key(prm, "V", where));
    const auto& a = require_key(prm, "A", where);
    if (!a.is_array() || a.size() != 3) throw ConfigError(where + ": \"A\" needs three components");
    for (int i = 0; i < 3; ++i) f.a[i] = ScalarField::from_json(a[i]);
    f.sign = prm.value("sign", 1);
    std::vector<NamedObservable> extra;
    if (doc.contains("observables")) {
      for (const auto& [key, obs] : doc.at("observables").items()) extra.push_back({key, PolyObservable::from_json(obs)});
    }
    m = multicentre(Chart::from_json(require_key(prm, "chart", where)), f, std::move(extra));
  } else if (kind == "dipirro") {
    DiPirroFields f;
    f.variant = dipirro_variant_from_string(require_key(prm, "variant", where).get<std::string>());
    f.a = ScalarField::from_json(require_key(prm, "a", where));
    f.b = ScalarField::from_json(require_key(prm, "b", where));
    f.gamma = ScalarField::from_json(require_key(prm, "gamma", where));
    f.c = ScalarField::from_json(require_key(prm, "c", where));
    m = dipirro(Chart::from_json(require_key(prm, "chart", where)), f);
  } else {
    throw ConfigError(where + ": unknown kind '" + kind + "'");
  }
  m.name = name;
  if (doc.contains("expected")) m.expected = ExpectedVerdicts::from_json(doc.at("expected"), m.expected);
  return m;
}

}  // namespace

ModelInstance instantiate(const nlohmann::json& document, std::optional<int> dimension) {
  try {
    return build(document, dimension);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed catalog entry: ") + e.what());
  }
}

Catalog Catalog::load(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("catalog directory '" + dir.string() + "' is not readable");
  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(dir, ec))
    if (f.path().extension() == ".json") files.push_back(f.path());
  if (ec) throw IoError("cannot list catalog directory '" + dir.string() + "': " + ec.message());
  std::sort(files.begin(), files.end());

  Catalog c;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open catalog file '" + path.string() + "'");
    CatalogEntry e;
    e.path = path;
    try {
      e.document = nlohmann::json::parse(in);
      e.name = e.document.at("name").get<std::string>();
      e.kind = e.document.at("kind").get<std::string>();
      e.description = e.document.value("description", "");
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError("malformed catalog file '" + path.string() + "': " + ex.what());
    }
    for (const auto& other : c.entries_)
      if (other.name == e.name) throw ConfigError("duplicate catalog name '" + e.name + "'");
    c.entries_.push_back(std::move(e));
  }
  std::sort(c.entries_.begin(), c.entries_.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return c;
}

std::vector<std::string> Catalog::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

const CatalogEntry& Catalog::entry(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw UnknownModelError("unknown model '" + name + "'");
}

ModelInstance Catalog::instantiate(const std::string& name, std::optional<int> dimension) const {
  return kq::instantiate(entry(name).document, dimension);
}

}  // namespace kq
