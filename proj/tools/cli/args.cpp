#include <ostream>

#include "CLI11.hpp"
#include "kq/common/error.hpp"
#include "run.hpp"

namespace kq::cli {

namespace {

struct Options {
  std::vector<std::string> models;
  std::string suite = "all";
  int samples = 50;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
  std::optional<int> n;
  std::optional<std::string> catalog;
  int steps = 10000;
  double step = 1e-3;
};

void add_run_options(CLI::App* app, Options& o, bool with_suite) {
  app->add_option("--model,-m", o.models, "Catalog model name (repeatable; default: every model)");
  if (with_suite)
    app->add_option("--suite", o.suite, "classical | robertson | anomaly | oracle | flow | all")->capture_default_str();
  app->add_option("--samples", o.samples, "Sample points per model")->capture_default_str();
  app->add_option("--seed", o.seed, "Seed of the sample points")->capture_default_str();
  app->add_option("--tol", o.tol, "Zero tolerance replacing the suite default");
  app->add_option("--out", o.out, "Directory for the JSON reports (default: standard output)");
  app->add_option("--n", o.n, "Dimension of the Staeckel models");
  app->add_option("--steps", o.steps, "Flow: number of steps")->capture_default_str();
  app->add_option("--step", o.step, "Flow: step size")->capture_default_str();
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and quantum integrability checks for quadratic Killing tensors", "kq"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--catalog", o.catalog, "Catalog directory (overrides KQ_CATALOG_DIR)");

  auto* catalog = app.add_subcommand("catalog", "Inspect the model catalog");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "List the catalog models");
  std::string validate_name;
  auto* validate = catalog->add_subcommand("validate", "Build one model and print its construction checks");
  validate->add_option("name", validate_name, "Model name")->required();
  validate->add_option("--n", o.n, "Dimension of the Staeckel models");

  auto* check = app.add_subcommand("check", "Run verification suites");
  add_run_options(check, o, true);
  auto* anomaly = app.add_subcommand("anomaly", "Quantum anomaly suite");
  add_run_options(anomaly, o, false);
  auto* oracle = app.add_subcommand("oracle", "Operator commutator oracle suite");
  add_run_options(oracle, o, false);
  auto* flow = app.add_subcommand("flow", "Integrate the Hamiltonian flow and record drift");
  add_run_options(flow, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kMalformedConfig;
  }

  RunConfig cfg;
  cfg.models = o.models;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.out = o.out;
  cfg.n = o.n;
  cfg.flow_steps = o.steps;
  cfg.flow_step = o.step;
  if (o.catalog) cfg.catalog_dir = *o.catalog;
  try {
    if (catalog->parsed()) {
      if (validate->parsed()) {
        cfg.command = Command::kCatalogValidate;
        cfg.models = {validate_name};
      } else {
        cfg.command = Command::kCatalogList;
      }
    } else if (check->parsed()) {
      cfg.suites = parse_suites(o.suite);
    } else if (anomaly->parsed()) {
      cfg.suites = {Suite::kAnomaly};
    } else if (oracle->parsed()) {
      cfg.suites = {Suite::kOracle};
    } else {
      cfg.suites = {Suite::kFlow};
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedConfig;
  }
  return run(cfg, out, err);
}

}  // namespace kq::cli
