#include "hpce/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hpce/errors.hpp"
#include "hpce/hierarchy.hpp"
#include "hpce/parallel.hpp"
#include "hpce/rng.hpp"

namespace hpce {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" +
                      value + "'");
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer '" +
                      value + "'");
  }
}

std::vector<double> to_double_list(const std::string& key,
                                   const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(to_double(key, tok));
  }
  return out;
}

json sobol_to_json(const SobolResult& sobol) {
  json j;
  j["schema"] = "hpce-sobol/1";
  j["M"] = sobol.main.size();
  j["main"] = std::vector<double>(sobol.main.begin(), sobol.main.end());
  j["total"] = std::vector<double>(sobol.total.begin(), sobol.total.end());
  j["main_se"] = std::vector<double>(sobol.main_se.begin(), sobol.main_se.end());
  j["total_se"] =
      std::vector<double>(sobol.total_se.begin(), sobol.total_se.end());
  j["model_variance"] = sobol.model_variance;
  j["degenerate"] = sobol.degenerate;
  j["note"] = sobol.index_sets_note;
  return j;
}

SobolResult sobol_from_json(const json& j) {
  SobolResult sobol;
  const auto main = j.at("main").get<std::vector<double>>();
  const auto total = j.at("total").get<std::vector<double>>();
  sobol.main = Eigen::Map<const Eigen::VectorXd>(main.data(),
                                                 static_cast<long>(main.size()));
  sobol.total = Eigen::Map<const Eigen::VectorXd>(
      total.data(), static_cast<long>(total.size()));
  sobol.main_se = Eigen::VectorXd::Zero(sobol.main.size());
  sobol.total_se = Eigen::VectorXd::Zero(sobol.total.size());
  if (j.contains("main_se")) {
    const auto se = j.at("main_se").get<std::vector<double>>();
    sobol.main_se = Eigen::Map<const Eigen::VectorXd>(
        se.data(), static_cast<long>(se.size()));
  }
  if (j.contains("total_se")) {
    const auto se = j.at("total_se").get<std::vector<double>>();
    sobol.total_se = Eigen::Map<const Eigen::VectorXd>(
        se.data(), static_cast<long>(se.size()));
  }
  sobol.model_variance = j.value("model_variance", 0.0);
  return sobol;
}

}  // namespace

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("parse_config_file: cannot open " + path);
  ConfigMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    map[key] = value;
  }
  return map;
}

ExperimentConfig ExperimentConfig::from_map(const ConfigMap& map) {
  ExperimentConfig c;
  c.raw = map;
  for (const auto& [key, value] : map) {
    if (key == "model") c.model = value;
    else if (key == "p_max") c.p_max = static_cast<int>(to_long(key, value));
    else if (key == "method") c.method = value;
    else if (key == "gamma") c.gamma = to_double(key, value);
    else if (key == "phi") c.phi = to_double(key, value);
    else if (key == "n") c.n = to_long(key, value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "skip") c.skip = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "screening_threshold") c.screening_threshold = to_double(key, value);
    else if (key == "n_mc") c.n_mc = to_long(key, value);
    else if (key == "oracle_n_mc") c.oracle_n_mc = to_long(key, value);
    else if (key == "failure_threshold") c.failure_threshold = to_double(key, value);
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "max_components") c.max_components = static_cast<int>(to_long(key, value));
    else if (key == "memory_budget_mb") {
      c.memory_budget_bytes = static_cast<std::size_t>(to_long(key, value)) << 20;
    } else if (key == "threads") c.threads = static_cast<int>(to_long(key, value));
    else if (key == "kl_terms") c.kl_terms = static_cast<int>(to_long(key, value));
    else if (key == "analytic_dim") c.analytic_dim = static_cast<int>(to_long(key, value));
    else if (key == "geometry") c.geometry = value;
    else if (key == "design") c.design = value;
    else if (key.rfind("compare.", 0) == 0 || key == "reference" ||
             key == "pf_reference" || key == "external_dim" ||
             key == "with_responses") {
      // consumed by the subcommands that need them
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  const int plans = (c.gamma ? 1 : 0) + (c.phi ? 1 : 0) + (c.n ? 1 : 0);
  if (plans > 1) {
    throw ConfigError("config: give exactly one of gamma / phi / n");
  }
  if (c.p_max < 1) throw ConfigError("config: p_max must be >= 1");
  if (c.method != "sohplsr" && c.method != "olsr") {
    throw ConfigError("config: method must be 'sohplsr' or 'olsr'");
  }
  if (c.skip < 1) throw ConfigError("config: skip must be >= 1");
  return c;
}

int ExperimentConfig::resolved_threads() const {
  return threads > 0 ? threads : default_thread_count();
}

std::string default_data_dir() {
  if (const char* env = std::getenv("HPCE_DATA_DIR")) return env;
#ifdef HPCE_DATA_DIR
  return HPCE_DATA_DIR;
#else
  return "data";
#endif
}

std::unique_ptr<RandomModel> make_model(const ExperimentConfig& config) {
  if (config.model == "beam") {
    BeamSpec spec;
    spec.field.n_terms = config.kl_terms;
    return std::make_unique<BeamModel>(spec);
  }
  if (config.model == "plane_truss" || config.model == "spatial_truss") {
    std::string path = config.geometry;
    if (path.empty()) {
      path = default_data_dir() + (config.model == "plane_truss"
                                       ? "/plane32.geom"
                                       : "/spatial36.geom");
    }
    return std::make_unique<TrussModel>(parse_truss_geometry(path));
  }
  if (config.model.rfind("analytic:", 0) == 0) {
    const std::string name = config.model.substr(9);
    return std::make_unique<AnalyticModel>(
        analytic_case(name, config.analytic_dim),
        std::numeric_limits<double>::quiet_NaN());
  }
  if (config.model == "external_csv") {
    throw ConfigError("make_model: external_csv has no built-in solver; "
                      "supply a design file with responses");
  }
  throw ConfigError("unknown model '" + config.model + "'");
}

namespace {

struct ResolvedPlan {
  long n = 0;
  std::uint64_t p = 0;
  double gamma = 0.0;
  double phi = 0.0;
};

ResolvedPlan resolve_plan(const ExperimentConfig& config, int dim) {
  ResolvedPlan plan;
  plan.p = count_basis(dim, config.p_max);
  if (config.gamma) {
    plan.n = static_cast<long>(
        std::ceil(*config.gamma * static_cast<double>(plan.p)));
  } else if (config.phi) {
    plan.n = static_cast<long>(std::ceil(*config.phi * dim));
  } else if (config.n) {
    plan.n = *config.n;
  } else {
    throw ConfigError("config: one of gamma / phi / n is required");
  }
  if (plan.n < 3) throw ConfigError("config: resolved N must be >= 3");
  plan.gamma = static_cast<double>(plan.n) / static_cast<double>(plan.p);
  plan.phi = static_cast<double>(plan.n) / dim;
  return plan;
}

json resolved_config_json(const ExperimentConfig& config,
                          const ResolvedPlan& plan, int dim) {
  json j;
  j["model"] = config.model;
  j["method"] = config.method;
  j["M"] = dim;
  j["p_max"] = config.p_max;
  j["N"] = plan.n;
  j["P"] = plan.p;
  j["gamma"] = plan.gamma;
  j["phi"] = plan.phi;
  j["seed"] = config.seed;
  j["skip"] = config.skip;
  j["screening_threshold"] = config.screening_threshold;
  j["n_mc"] = config.n_mc;
  j["output_dir"] = config.output_dir;
  j["max_components"] = config.max_components;
  if (config.model == "beam") j["kl_terms"] = config.kl_terms;
  if (config.model.rfind("analytic:", 0) == 0) j["analytic_dim"] = config.analytic_dim;
  if (!config.geometry.empty()) j["geometry"] = config.geometry;
  if (!config.design.empty()) j["design"] = config.design;
  return j;
}

// Builds (or loads, for external_csv) the training design with responses.
DesignOfExperiments training_design(const ExperimentConfig& config,
                                    const RandomModel* model, long n) {
  if (config.model == "external_csv") {
    if (config.design.empty()) {
      throw ConfigError("external_csv model requires the 'design' key "
                        "(CSV with responses)");
    }
    DesignOfExperiments doe = read_design_csv(config.design);
    if (doe.response_centered.size() == 0) {
      throw ConfigError("external design has no response column values");
    }
    return doe;
  }
  const std::vector<MarginalSpec> marginals = model->marginals();
  DesignOfExperiments doe =
      make_design(n, model->dimension(), config.skip,
                  marginals.empty() ? nullptr : &marginals);
  attach_responses(
      doe,
      [&](const Eigen::VectorXd& xi) { return model->evaluate(xi); },
      config.resolved_threads());
  return doe;
}

json latent_counts_json(const SohplsrModel& model) {
  json level1 = json::array();
  json level2 = json::array();
  for (const auto& fi : model.per_interaction) {
    for (std::size_t k = 0; k < fi.level1.size(); ++k) {
      level1.push_back(json{{"i", fi.interaction},
                            {"p", fi.block_keys[k].degree},
                            {"h", fi.level1[k].n_components()}});
    }
    level2.push_back(json{{"i", fi.interaction}, {"h", fi.level2_width()}});
  }
  const int top = model.level3_passthrough
                      ? model.per_interaction.front().level2_width()
                      : model.level3.n_components();
  json j;
  j["level1"] = std::move(level1);
  j["level2"] = std::move(level2);
  j["level3"] = json{{"h", top}};
  return j;
}

}  // namespace

FitArtifacts run_fit(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);

  std::unique_ptr<RandomModel> model;
  int dim = 0;
  if (config.model == "external_csv") {
    DesignOfExperiments probe = read_design_csv(config.design);
    dim = static_cast<int>(probe.dim());
  } else {
    model = make_model(config);
    dim = model->dimension();
  }

  const ResolvedPlan plan = resolve_plan(config, dim);
  DesignOfExperiments doe = training_design(config, model.get(), plan.n);
  const long n_actual = static_cast<long>(doe.n_samples());

  const BasisPartition partition = enumerate_partition(dim, config.p_max);

  FitArtifacts art;
  art.n = n_actual;
  art.p = plan.p;

  json report;
  report["config"] = resolved_config_json(config, plan, dim);
  report["config"]["N"] = n_actual;
  report["F_mean"] = doe.response_mean;

  if (config.method == "sohplsr") {
    SohplsrModel fitted =
        sohplsr_fit(partition, doe.gaussian, doe.response_centered,
                    doe.response_mean, config.max_components);
    art.model = fitted.pce;
    report["i_star"] = fitted.i_star;
    report["k_star"] = fitted.k_star_by_interaction();
    report["eps_star"] = fitted.eps_star_final;
    report["eps_star_by_interaction"] = std::vector<double>(
        fitted.eps_star_by_interaction.begin(),
        fitted.eps_star_by_interaction.end());
    report["latent_counts"] = latent_counts_json(fitted);
  } else {
    if (static_cast<std::uint64_t>(n_actual) < plan.p) {
      report["warnings"] = json::array(
          {"underdetermined OLSR (N < P): minimum-norm pseudo-inverse "
           "solution"});
    }
    art.model = olsr_fit(partition, doe.gaussian, doe.response_centered,
                         doe.response_mean, config.memory_budget_bytes);
  }
  report["n_terms"] = art.model.terms().size();

  art.model_path = config.output_dir + "/model.json";
  art.report_path = config.output_dir + "/fit_report.json";
  art.design_path = config.output_dir + "/design.csv";

  json extra;
  extra["method"] = config.method;
  extra["seed"] = config.seed;
  save_model(art.model_path, art.model, extra.dump());
  write_text(art.report_path, report.dump(2) + "\n");
  write_design_csv(art.design_path, doe);
  return art;
}

SensitivityArtifacts run_sensitivity(const ExperimentConfig& config,
                                     const std::string& model_path,
                                     const std::string& reference_path) {
  fs::create_directories(config.output_dir);
  const PceModel model = load_model(model_path);
  SensitivityArtifacts art;
  art.result = sobol_indices(model);

  art.csv_path = config.output_dir + "/sobol.csv";
  art.json_path = config.output_dir + "/sobol.json";

  std::ostringstream csv;
  csv << "variable,S_i,S_Ti\n";
  for (Eigen::Index i = 0; i < art.result.main.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", long(i + 1),
                  art.result.main[i], art.result.total[i]);
    csv << buf;
  }
  write_text(art.csv_path, csv.str());
  write_text(art.json_path, sobol_to_json(art.result).dump(2) + "\n");

  if (!reference_path.empty()) {
    std::ifstream in(reference_path);
    if (!in) throw ConfigError("run_sensitivity: missing reference file " +
                               reference_path);
    json jref = json::parse(in);
    const SobolResult ref = sobol_from_json(jref);
    if (ref.main.size() != art.result.main.size()) {
      throw ConfigError("run_sensitivity: reference dimension mismatch");
    }
    std::ostringstream ecsv;
    ecsv << "variable,rel_err_main,rel_err_total\n";
    std::map<int, int> histogram_main, histogram_total;  // log10 bins
    for (Eigen::Index i = 0; i < ref.main.size(); ++i) {
      const double em = std::abs(art.result.main[i] - ref.main[i]) /
                        std::max(std::abs(ref.main[i]), 1e-300);
      const double et = std::abs(art.result.total[i] - ref.total[i]) /
                        std::max(std::abs(ref.total[i]), 1e-300);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%ld,%.6g,%.6g\n", long(i + 1), em, et);
      ecsv << buf;
      ++histogram_main[static_cast<int>(std::floor(std::log10(em + 1e-300)))];
      ++histogram_total[static_cast<int>(std::floor(std::log10(et + 1e-300)))];
    }
    write_text(config.output_dir + "/sobol_errors.csv", ecsv.str());
    json jerr;
    jerr["order_of_magnitude_counts_main"] = histogram_main;
    jerr["order_of_magnitude_counts_total"] = histogram_total;
    write_text(config.output_dir + "/sobol_errors.json", jerr.dump(2) + "\n");
  }
  return art;
}

ReliabilityArtifacts run_reliability(const ExperimentConfig& config,
                                     const std::string& model_path) {
  fs::create_directories(config.output_dir);
  const PceModel surrogate = load_model(model_path);
  const SobolResult sobol = sobol_indices(surrogate);
  const std::vector<int> retained = screen(sobol, config.screening_threshold);

  std::unique_ptr<RandomModel> model;
  double limit = config.failure_threshold.value_or(
      std::numeric_limits<double>::quiet_NaN());
  long n = 0;
  if (config.model == "external_csv") {
    if (std::isnan(limit)) {
      throw ConfigError("run_reliability: external_csv needs an explicit "
                        "failure_threshold");
    }
  } else {
    model = make_model(config);
    if (std::isnan(limit)) limit = model->failure_threshold();
    n = resolve_plan(config, model->dimension()).n;
  }
  if (std::isnan(limit)) {
    throw ConfigError("run_reliability: model has no failure threshold; set "
                      "failure_threshold");
  }

  DesignOfExperiments doe = training_design(config, model.get(), n);
  ReconstructedModel rec = reconstruct(
      retained, doe.gaussian, doe.response_centered, doe.response_mean,
      config.p_max, config.max_components, config.memory_budget_bytes);

  ReliabilityArtifacts art;
  art.result = failure_probability(rec.model, limit, config.n_mc, config.seed,
                                   config.resolved_threads());
  art.result.retained = retained;
  art.result.threshold = config.screening_threshold;
  art.result.strategy = rec.strategy;

  json j;
  j["schema"] = "hpce-reliability/1";
  j["threshold"] = config.screening_threshold;
  json jret = json::array();
  for (int v : retained) jret.push_back(v + 1);  // 1-based in reports
  j["retained"] = std::move(jret);
  j["strategy"] = rec.strategy;
  j["limit"] = limit;
  j["pf"] = art.result.pf;
  j["pf_se"] = art.result.pf_se;
  j["n_mc"] = art.result.n_mc;
  j["seed"] = art.result.seed;
  j["zero_failure_warning"] = art.result.zero_failure_warning;
  art.json_path = config.output_dir + "/reliability.json";
  write_text(art.json_path, j.dump(2) + "\n");
  return art;
}

std::string run_oracle(const ExperimentConfig& config, const std::string& what) {
  fs::create_directories(config.output_dir);
  std::unique_ptr<RandomModel> model = make_model(config);
  const auto fn = [&](const Eigen::VectorXd& xi) {
    return model->evaluate(xi);
  };

  if (what == "pf") {
    const double limit =
        config.failure_threshold.value_or(model->failure_threshold());
    if (std::isnan(limit)) {
      throw ConfigError("oracle pf: model has no failure threshold");
    }
    const McEstimate est =
        direct_mc_reference(fn, model->dimension(), limit, config.oracle_n_mc,
                            config.seed, config.resolved_threads());
    json j;
    j["schema"] = "hpce-oracle-pf/1";
    j["model"] = config.model;
    j["limit"] = limit;
    j["pf"] = est.pf;
    j["pf_se"] = est.se;
    j["n_mc"] = est.n;
    j["seed"] = config.seed;
    j["zero_failure_warning"] = est.zero_failure_warning;
    const std::string path = config.output_dir + "/oracle_pf.json";
    write_text(path, j.dump(2) + "\n");
    return path;
  }
  if (what == "sobol") {
    const SobolResult ref =
        mc_sobol_reference(fn, model->dimension(), config.oracle_n_mc,
                           config.seed, config.resolved_threads());
    json j = sobol_to_json(ref);
    j["model"] = config.model;
    j["n_mc"] = config.oracle_n_mc;
    j["seed"] = config.seed;
    const std::string path = config.output_dir + "/oracle_sobol.json";
    write_text(path, j.dump(2) + "\n");
    return path;
  }
  throw ConfigError("oracle: 'what' must be pf or sobol");
}

std::string run_compare(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);

  struct Cell {
    std::string method;
    std::string plan;  // gamma | phi | n
    double value = 0.0;
  };
  std::vector<Cell> cells;
  for (const std::string method : {"sohplsr", "olsr"}) {
    for (const std::string plan : {"gamma", "phi", "n"}) {
      const auto it = config.raw.find("compare." + method + "_" + plan);
      if (it == config.raw.end()) continue;
      for (double v : to_double_list(it->first, it->second)) {
        cells.push_back(Cell{method, plan, v});
      }
    }
  }
  if (cells.empty()) {
    throw ConfigError("run_compare: no compare.<method>_<plan> keys given");
  }

  SobolResult reference;
  bool have_reference = false;
  if (const auto it = config.raw.find("reference"); it != config.raw.end()) {
    std::ifstream in(it->second);
    if (!in) throw ConfigError("run_compare: missing reference " + it->second);
    reference = sobol_from_json(json::parse(in));
    have_reference = true;
  }
  double pf_reference = std::numeric_limits<double>::quiet_NaN();
  if (const auto it = config.raw.find("pf_reference"); it != config.raw.end()) {
    pf_reference = to_double(it->first, it->second);
  }

  std::ostringstream csv;
  csv << "method,plan,plan_value,N,gamma,status,fit_seconds,"
         "max_abs_err_main,max_abs_err_total,pf,pf_rel_err,message\n";
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const Cell& cell = cells[idx];
    ExperimentConfig cc = config;
    cc.method = cell.method;
    cc.gamma.reset();
    cc.phi.reset();
    cc.n.reset();
    if (cell.plan == "gamma") cc.gamma = cell.value;
    else if (cell.plan == "phi") cc.phi = cell.value;
    else cc.n = static_cast<long>(cell.value);
    cc.seed = mix_seed(config.seed, idx);
    cc.output_dir = config.output_dir + "/cell_" + std::to_string(idx);

    std::string status = "ok", message;
    long n_resolved = 0;
    double gamma_resolved = std::nan(""), fit_seconds = std::nan("");
    double err_main = std::nan(""), err_total = std::nan("");
    double pf = std::nan(""), pf_rel = std::nan("");
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const FitArtifacts fit = run_fit(cc);
      fit_seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0).count();
      n_resolved = fit.n;
      gamma_resolved = static_cast<double>(fit.n) / static_cast<double>(fit.p);
      const SobolResult sobol = sobol_indices(fit.model);
      if (have_reference) {
        err_main = (sobol.main - reference.main).cwiseAbs().maxCoeff();
        err_total = (sobol.total - reference.total).cwiseAbs().maxCoeff();
      }
      if (!std::isnan(pf_reference)) {
        const ReliabilityArtifacts rel = run_reliability(cc, fit.model_path);
        pf = rel.result.pf;
        pf_rel = std::abs(pf - pf_reference) / pf_reference;
      }
    } catch (const std::exception& e) {
      status = "error";
      message = e.what();
    }
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s,%s,%.6g,%ld,%.6g,%s,%.3f,%.6g,%.6g,%.6g,%.6g,\"%s\"\n",
                  cell.method.c_str(), cell.plan.c_str(), cell.value,
                  n_resolved, gamma_resolved, status.c_str(), fit_seconds,
                  err_main, err_total, pf, pf_rel, message.c_str());
    csv << buf;
  }
  const std::string path = config.output_dir + "/compare.csv";
  write_text(path, csv.str());
  return path;
}

std::string run_doe_export(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);
  int dim = 0;
  std::vector<MarginalSpec> marginals;
  std::unique_ptr<RandomModel> model;
  if (config.model == "external_csv") {
    const auto it = config.raw.find("external_dim");
    if (it == config.raw.end()) {
      throw ConfigError("doe-export for external_csv needs 'external_dim'");
    }
    dim = static_cast<int>(to_long(it->first, it->second));
  } else {
    model = make_model(config);
    dim = model->dimension();
    marginals = model->marginals();
  }
  const ResolvedPlan plan = resolve_plan(config, dim);
  DesignOfExperiments doe = make_design(
      plan.n, dim, config.skip, marginals.empty() ? nullptr : &marginals);
  bool with_responses = false;
  if (const auto it = config.raw.find("with_responses"); it != config.raw.end()) {
    with_responses = (it->second == "true" || it->second == "1");
  }
  if (with_responses) {
    if (model == nullptr) {
      throw ConfigError("doe-export: with_responses needs a built-in model");
    }
    attach_responses(
        doe, [&](const Eigen::VectorXd& xi) { return model->evaluate(xi); },
        config.resolved_threads());
  }
  const std::string path = config.output_dir + "/design.csv";
  write_design_csv(path, doe);
  return path;
}

std::string run_doe_import(const ExperimentConfig& config,
                           const std::string& csv_path) {
  fs::create_directories(config.output_dir);
  DesignOfExperiments doe = read_design_csv(csv_path);
  if (doe.response_centered.size() == 0) {
    throw ConfigError("doe-import: CSV has no response values; the external "
                      "solver must fill the response column");
  }
  const std::string path = config.output_dir + "/design.csv";
  write_design_csv(path, doe);
  return path;
}

}  // namespace hpce
