// Batch front-end: fit / sobol / reliability / compare / oracle and the
// design exchange subcommands. Exit codes: 0 ok, 2 config error, 3 numeric
// error, 4 budget error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "hpce/errors.hpp"
#include "hpce/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  hpce::ConfigMap overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_file,
                  "config file (key = value); overrides all flags");
  auto opt = [&flags, cmd](const std::string& flag, const std::string& key,
                           const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.overrides[key] = v; },
        help);
  };
  opt("--model", "model",
      "beam | plane_truss | spatial_truss | analytic:<name> | external_csv");
  opt("--p-max", "p_max", "maximum total polynomial degree");
  opt("--method", "method", "sohplsr | olsr");
  opt("--gamma", "gamma", "expanded sample ratio: N = ceil(gamma * P)");
  opt("--phi", "phi", "raw sample ratio: N = ceil(phi * M)");
  opt("--n", "n", "explicit sample count");
  opt("--seed", "seed", "master seed");
  opt("--skip", "skip", "Sobol sequence offset (>= 1)");
  opt("--screening-threshold", "screening_threshold",
      "S_Ti screening threshold");
  opt("--n-mc", "n_mc", "surrogate Monte Carlo budget");
  opt("--oracle-n-mc", "oracle_n_mc", "direct-MC reference budget");
  opt("--failure-threshold", "failure_threshold",
      "exceedance level (overrides the model default)");
  opt("--output-dir", "output_dir", "output directory");
  opt("--max-components", "max_components", "PLS component cap per fit");
  opt("--memory-budget-mb", "memory_budget_mb", "dense-matrix budget");
  opt("--threads", "threads", "worker threads (0 = auto)");
  opt("--kl-terms", "kl_terms", "beam: number of KL modes");
  opt("--analytic-dim", "analytic_dim", "analytic models: input dimension");
  opt("--geometry", "geometry", "truss geometry file");
  opt("--design", "design", "design CSV (external_csv model)");
  opt("--external-dim", "external_dim", "doe-export: dimension for external_csv");
  opt("--with-responses", "with_responses", "doe-export: evaluate responses");
  opt("--reference", "reference", "reference sobol.json for error tables");
  opt("--pf-reference", "pf_reference", "reference failure probability");
}

hpce::ExperimentConfig resolve(const CommonFlags& flags) {
  hpce::ConfigMap map = flags.overrides;
  if (!flags.config_file.empty()) {
    for (const auto& [k, v] : hpce::parse_config_file(flags.config_file)) {
      map[k] = v;  // file wins
    }
  }
  return hpce::ExperimentConfig::from_map(map);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical PLS polynomial-chaos toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string model_file, what = "pf", import_csv;

  CLI::App* fit = app.add_subcommand("fit", "build a surrogate from a design");
  add_common(fit, flags);

  CLI::App* sobol = app.add_subcommand("sobol", "Sobol indices of a model file");
  add_common(sobol, flags);
  sobol->add_option("--model-file", model_file, "model.json from fit")
      ->required();

  CLI::App* reliability = app.add_subcommand(
      "reliability", "screen -> reconstruct -> failure probability");
  add_common(reliability, flags);
  reliability->add_option("--model-file", model_file, "model.json from fit")
      ->required();

  CLI::App* compare =
      app.add_subcommand("compare", "method x sample-plan sweep");
  add_common(compare, flags);

  CLI::App* oracle = app.add_subcommand(
      "oracle", "brute-force reference on the true model");
  add_common(oracle, flags);
  oracle->add_option("--what", what, "pf | sobol");

  CLI::App* doe_export =
      app.add_subcommand("doe-export", "write a design CSV for external solvers");
  add_common(doe_export, flags);

  CLI::App* doe_import = app.add_subcommand(
      "doe-import", "validate and normalize an externally filled design CSV");
  add_common(doe_import, flags);
  doe_import->add_option("--csv", import_csv, "externally filled design CSV")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const hpce::ExperimentConfig config = resolve(flags);
    if (fit->parsed()) {
      const auto art = hpce::run_fit(config);
      std::printf("model: %s\nreport: %s\ndesign: %s\n", art.model_path.c_str(),
                  art.report_path.c_str(), art.design_path.c_str());
    } else if (sobol->parsed()) {
      std::string reference;
      if (const auto it = config.raw.find("reference"); it != config.raw.end()) {
        reference = it->second;
      }
      const auto art = hpce::run_sensitivity(config, model_file, reference);
      std::printf("sobol: %s\n", art.json_path.c_str());
    } else if (reliability->parsed()) {
      const auto art = hpce::run_reliability(config, model_file);
      std::printf("reliability: %s (pf = %.6g +- %.2g)\n",
                  art.json_path.c_str(), art.result.pf, art.result.pf_se);
    } else if (compare->parsed()) {
      std::printf("compare: %s\n", hpce::run_compare(config).c_str());
    } else if (oracle->parsed()) {
      std::printf("oracle: %s\n", hpce::run_oracle(config, what).c_str());
    } else if (doe_export->parsed()) {
      std::printf("design: %s\n", hpce::run_doe_export(config).c_str());
    } else if (doe_import->parsed()) {
      std::printf("design: %s\n",
                  hpce::run_doe_import(config, import_csv).c_str());
    }
    return 0;
  } catch (const hpce::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hpce::BudgetError& e) {
    std::fprintf(stderr, "budget error: %s\n", e.what());
    return 4;
  } catch (const hpce::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
