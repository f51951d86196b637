#include "hpce/design.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hpce/errors.hpp"
#include "hpce/parallel.hpp"
#include "hpce/sobol_sequence.hpp"

namespace hpce {

DesignOfExperiments make_design(Eigen::Index n, int dim, std::uint64_t skip,
                                const std::vector<MarginalSpec>* marginals) {
  if (skip == 0) {
    throw ConfigError("make_design: skip must be >= 1 (point 0 of the Sobol "
                      "sequence is all zeros and has no Gaussian image)");
  }
  DesignOfExperiments doe;
  doe.unit = sobol_points(n, dim, skip);
  doe.gaussian = to_gaussian(doe.unit);
  if (marginals != nullptr && !marginals->empty()) {
    doe.physical = to_physical(doe.gaussian, *marginals);
  }
  return doe;
}

void attach_responses(DesignOfExperiments& doe,
                      const std::function<double(const Eigen::VectorXd&)>& model,
                      int threads) {
  const Eigen::Index n = doe.n_samples();
  Eigen::VectorXd raw(n);
  parallel_chunks(n, 256, threads,
                  [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                    for (std::int64_t i = begin; i < end; ++i) {
                      raw[static_cast<Eigen::Index>(i)] =
                          model(doe.gaussian.row(i).transpose());
                    }
                  });
  attach_responses(doe, raw);
}

void attach_responses(DesignOfExperiments& doe, const Eigen::VectorXd& raw) {
  if (raw.size() != doe.n_samples()) {
    throw ConfigError("attach_responses: response length mismatch");
  }
  doe.response_mean = raw.mean();
  doe.response_centered = raw.array() - doe.response_mean;
}

namespace {

void print_value(std::FILE* f, double v, char sep) {
  std::fprintf(f, "%.17g%c", v, sep);
}

}  // namespace

void write_design_csv(const std::string& path, const DesignOfExperiments& doe) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw ConfigError("write_design_csv: cannot open " + path);
  const Eigen::Index n = doe.n_samples();
  const Eigen::Index m = doe.dim();
  const bool has_phys = doe.physical.size() > 0;
  // Without responses the column is omitted entirely (the external solver
  // appends it before doe-import).
  const bool has_resp = doe.response_centered.size() > 0;

  for (Eigen::Index j = 0; j < m; ++j) std::fprintf(f, "u_%ld,", long(j + 1));
  for (Eigen::Index j = 0; j < m; ++j) {
    std::fprintf(f, "xi_%ld%c", long(j + 1),
                 (has_phys || has_resp || j + 1 < m) ? ',' : '\n');
  }
  if (has_phys) {
    for (Eigen::Index j = 0; j < m; ++j) {
      std::fprintf(f, "x_%ld%c", long(j + 1),
                   (has_resp || j + 1 < m) ? ',' : '\n');
    }
  }
  if (has_resp) std::fprintf(f, "response\n");

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) print_value(f, doe.unit(i, j), ',');
    for (Eigen::Index j = 0; j < m; ++j) {
      print_value(f, doe.gaussian(i, j),
                  (has_phys || has_resp || j + 1 < m) ? ',' : '\n');
    }
    if (has_phys) {
      for (Eigen::Index j = 0; j < m; ++j) {
        print_value(f, doe.physical(i, j),
                    (has_resp || j + 1 < m) ? ',' : '\n');
      }
    }
    if (has_resp) {
      print_value(f, doe.response_centered[i] + doe.response_mean, '\n');
    }
  }
  std::fclose(f);
}

DesignOfExperiments read_design_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_design_csv: cannot open " + path);

  const auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
      s.pop_back();
    }
    return s;
  };

  std::string header;
  if (!std::getline(in, header)) {
    throw ConfigError("read_design_csv: empty file " + path);
  }
  std::vector<std::string> cols;
  {
    std::stringstream ss(strip(header));
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(strip(tok));
  }
  int n_u = 0, n_xi = 0, n_x = 0;
  bool has_resp = false;
  for (const auto& c : cols) {
    if (c.rfind("u_", 0) == 0) ++n_u;
    else if (c.rfind("xi_", 0) == 0) ++n_xi;
    else if (c.rfind("x_", 0) == 0) ++n_x;
    else if (c == "response") has_resp = true;
    else throw ConfigError("read_design_csv: unknown column '" + c + "'");
  }
  if (n_xi == 0) throw ConfigError("read_design_csv: xi_* columns are required");
  if (n_u != 0 && n_u != n_xi) throw ConfigError("read_design_csv: u/xi column count mismatch");
  if (n_x != 0 && n_x != n_xi) throw ConfigError("read_design_csv: x/xi column count mismatch");

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (row.size() != cols.size()) {
      throw ConfigError("read_design_csv: row with " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(cols.size()));
    }
    rows.push_back(std::move(row));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw ConfigError("read_design_csv: no data rows in " + path);

  DesignOfExperiments doe;
  const int m = n_xi;
  doe.unit.resize(n_u > 0 ? n : 0, n_u > 0 ? m : 0);
  doe.gaussian.resize(n, m);
  doe.physical.resize(n_x > 0 ? n : 0, n_x > 0 ? m : 0);
  Eigen::VectorXd raw(has_resp ? n : 0);

  for (Eigen::Index i = 0; i < n; ++i) {
    int off = 0;
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_u; ++j) doe.unit(i, j) = row[static_cast<std::size_t>(off++)];
    for (int j = 0; j < n_xi; ++j) doe.gaussian(i, j) = row[static_cast<std::size_t>(off++)];
    for (int j = 0; j < n_x; ++j) doe.physical(i, j) = row[static_cast<std::size_t>(off++)];
    if (has_resp) raw[i] = row[static_cast<std::size_t>(off)];
  }
  if (has_resp) attach_responses(doe, raw);
  return doe;
}

}  // namespace hpce
