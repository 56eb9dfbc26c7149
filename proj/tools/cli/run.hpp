#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kq::cli {

enum class Suite : std::uint8_t { kClassical, kRobertson, kAnomaly, kOracle, kFlow };
std::string to_string(Suite s);
/// "all" expands to every suite. Throws ConfigError.
std::vector<Suite> parse_suites(const std::string& name);

enum ExitCode : int { kOk = 0, kMismatch = 1, kUnknownModel = 2, kMalformedConfig = 3, kIoFailure = 4 };

enum class Command : std::uint8_t { kCatalogList, kCatalogValidate, kCheck };

struct RunConfig {
  Command command = Command::kCheck;
  /// Empty means every catalog model.
  std::vector<std::string> models;
  std::vector<Suite> suites{Suite::kClassical, Suite::kRobertson, Suite::kAnomaly, Suite::kOracle, Suite::kFlow};
  int samples = 50;
  std::uint64_t seed = 1;
  /// Replaces the zero tolerance of every suite.
  std::optional<double> tol;
  /// Report directory; reports go to the output stream when empty.
  std::filesystem::path out;
  /// Dimension of the Staeckel models.
  std::optional<int> n;
  std::optional<std::filesystem::path> catalog_dir;
  int flow_steps = 10000;
  double flow_step = 1e-3;
};

/// Default tolerances per suite.
inline constexpr double kClassicalTol = 1e-9;
inline constexpr double kRobertsonTol = 1e-9;
inline constexpr double kAnomalyTol = 1e-9;
inline constexpr double kOracleTol = 1e-8;
inline constexpr double kFlowTol = 1e-6;

/// Report of one suite on one model. `claims` holds the expected verdicts,
/// `computed` what the suite found, `agreement` one flag per claim the suite
/// could decide. `metadata` carries run-dependent fields only.
struct SuiteReport {
  std::string model;
  Suite suite = Suite::kClassical;
  nlohmann::json claims = nlohmann::json::object();
  nlohmann::json computed = nlohmann::json::object();
  nlohmann::json agreement = nlohmann::json::object();
  nlohmann::json metadata = nlohmann::json::object();
  /// Drift series of the flow suite, written next to the JSON report.
  std::string csv;

  bool matches() const;
  nlohmann::json to_json() const;
};

/// Executes the command, writing reports to `out` (or to files under
/// config.out) and diagnostics to `err`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace kq::cli
