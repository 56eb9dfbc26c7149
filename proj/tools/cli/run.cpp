#include "run.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>

#include "kq/common/error.hpp"
#include "kq/models/catalog.hpp"
#include "suites.hpp"

namespace kq::cli {

namespace fs = std::filesystem;

std::string to_string(Suite s) {
  switch (s) {
    case Suite::kClassical: return "classical";
    case Suite::kRobertson: return "robertson";
    case Suite::kAnomaly: return "anomaly";
    case Suite::kOracle: return "oracle";
    case Suite::kFlow: return "flow";
  }
  return "?";
}

std::vector<Suite> parse_suites(const std::string& name) {
  const std::vector<Suite> every{Suite::kClassical, Suite::kRobertson, Suite::kAnomaly, Suite::kOracle, Suite::kFlow};
  if (name == "all") return every;
  for (Suite s : every)
    if (to_string(s) == name) return {s};
  throw ConfigError("unknown suite '" + name + "' (classical, robertson, anomaly, oracle, flow, all)");
}

bool SuiteReport::matches() const {
  for (const auto& [key, ok] : agreement.items())
    if (!ok.get<bool>()) return false;
  return true;
}

nlohmann::json SuiteReport::to_json() const {
  return {{"model", model},        {"suite", to_string(suite)}, {"claims", claims},
          {"computed", computed},  {"agreement", agreement},    {"verdict", matches() ? "match" : "mismatch"},
          {"metadata", metadata}};
}

namespace {

bool is_staeckel_kind(const std::string& kind) { return kind == "jacobi-ellipsoid" || kind == "neumann"; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

class Emitter {
 public:
  Emitter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
    if (!cfg.out.empty()) {
      std::error_code ec;
      fs::create_directories(cfg.out, ec);
      if (ec || !fs::is_directory(cfg.out)) throw IoError("cannot create output directory '" + cfg.out.string() + "'");
    }
  }

  void emit(const std::string& stem, const nlohmann::json& doc, const std::string& csv = {}) {
    const std::string text = doc.dump(2) + "\n";
    if (cfg_.out.empty()) {
      out_ << text;
      return;
    }
    write_file(cfg_.out / (stem + ".json"), text);
    if (!csv.empty()) write_file(cfg_.out / (stem + ".csv"), csv);
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

std::optional<FlowStart> catalog_flow_start(const CatalogEntry& e, int dim) {
  if (!e.document.contains("flow")) return std::nullopt;
  const auto& f = e.document.at("flow");
  FlowStart s{f.at("x").get<std::vector<double>>(), f.at("xi").get<std::vector<double>>()};
  if (static_cast<int>(s.x.size()) != dim || static_cast<int>(s.xi.size()) != dim)
    throw ConfigError("flow start of '" + e.name + "' has the wrong dimension");
  return s;
}

int run_check(const RunConfig& cfg, const Catalog& cat, std::ostream& out, std::ostream& err) {
  const bool explicit_models = !cfg.models.empty();
  const std::vector<std::string> names = explicit_models ? cfg.models : cat.names();
  // Resolve every name before any work so an unknown model produces no report.
  for (const auto& name : names) cat.entry(name);
  if (cfg.samples < 1) throw ConfigError("--samples must be positive");

  Emitter emitter(cfg, out);
  bool all_match = true;
  for (const auto& name : names) {
    const CatalogEntry& entry = cat.entry(name);
    std::optional<int> dim;
    if (cfg.n && (explicit_models || is_staeckel_kind(entry.kind))) dim = cfg.n;
    const ModelInstance model = cat.instantiate(name, dim);
    const SamplePoints pts = sample_points(model, cfg.seed, cfg.samples);
    for (Suite s : cfg.suites) {
      const auto t0 = std::chrono::steady_clock::now();
      SuiteReport r;
      switch (s) {
        case Suite::kClassical: r = classical_suite(model, pts, cfg.tol.value_or(kClassicalTol)); break;
        case Suite::kRobertson: r = robertson_suite(model, pts, cfg.tol.value_or(kRobertsonTol)); break;
        case Suite::kAnomaly: r = anomaly_suite(model, pts, cfg.tol.value_or(kAnomalyTol)); break;
        case Suite::kOracle: r = oracle_suite(model, pts, cfg.tol.value_or(kOracleTol)); break;
        case Suite::kFlow: {
          FlowSettings fs{catalog_flow_start(entry, model.dim()), cfg.seed, cfg.flow_step, cfg.flow_steps};
          r = flow_suite(model, fs, cfg.tol.value_or(kFlowTol));
          break;
        }
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.computed["dimension"] = model.dim();
      r.computed["seed"] = cfg.seed;
      r.metadata = {{"timestamp", utc_timestamp()},
                    {"elapsedSeconds", elapsed},
                    {"catalogFile", entry.path.string()},
                    {"tool", "kq"}};
      const bool ok = r.matches();
      all_match = all_match && ok;
      err << model.name << " " << to_string(s) << ": " << (ok ? "match" : "MISMATCH") << "\n";
      emitter.emit(model.name + "." + to_string(s), r.to_json(), r.csv);
    }
  }
  return all_match ? kOk : kMismatch;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Catalog cat = Catalog::load(cfg.catalog_dir.value_or(default_catalog_dir()));
    switch (cfg.command) {
      case Command::kCatalogList: {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& name : cat.names()) {
          const auto& e = cat.entry(name);
          list.push_back({{"name", e.name}, {"kind", e.kind}, {"description", e.description}});
        }
        out << nlohmann::json{{"models", list}}.dump(2) << "\n";
        return kOk;
      }
      case Command::kCatalogValidate: {
        if (cfg.models.size() != 1) throw ConfigError("catalog validate takes exactly one model name");
        const auto& entry = cat.entry(cfg.models.front());
        const ModelInstance m = cat.instantiate(entry.name, cfg.n);
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& v : m.validation)
          checks.push_back({{"check", v.check},
                            {"residual", v.residual},
                            {"scale", v.scale},
                            {"tolerance", v.tolerance},
                            {"passed", v.passed}});
        nlohmann::json obs = nlohmann::json::array();
        for (const auto& o : m.observables) obs.push_back({{"name", o.name}, {"degree", o.observable.degree()}});
        out << nlohmann::json{{"model", m.name},
                              {"kind", entry.kind},
                              {"dimension", m.dim()},
                              {"observables", obs},
                              {"claims", m.expected.to_json()},
                              {"validation", checks},
                              {"valid", true}}
                   .dump(2)
            << "\n";
        return kOk;
      }
      case Command::kCheck: return run_check(cfg, cat, out, err);
    }
    return kOk;
  } catch (const UnknownModelError& e) {
    err << "error: " << e.what() << "\n";
    return kUnknownModel;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed configuration: " << e.what() << "\n";
    return kMalformedConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedConfig;
  } catch (const SingularError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedConfig;
  }
}

}  // namespace kq::cli
