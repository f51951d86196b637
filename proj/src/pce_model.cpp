#include "hpce/pce_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hpce/errors.hpp"
#include "hpce/hermite.hpp"
#include "hpce/parallel.hpp"

namespace hpce {

using nlohmann::json;

PceModel::PceModel(int dim, int max_degree, double constant,
                   std::vector<PceTerm> terms)
    : dim_(dim), max_degree_(max_degree), constant_(constant),
      terms_(std::move(terms)) {
  for (const PceTerm& t : terms_) {
    if (static_cast<int>(t.alpha.size()) != dim_) {
      throw ConfigError("PceModel: term dimension mismatch");
    }
  }
  build_support();
}

void PceModel::build_support() {
  support_offsets_.clear();
  support_.clear();
  support_offsets_.reserve(terms_.size() + 1);
  support_offsets_.push_back(0);
  for (const PceTerm& t : terms_) {
    for (int v = 0; v < dim_; ++v) {
      if (t.alpha[static_cast<std::size_t>(v)] != 0) {
        support_.emplace_back(v, t.alpha[static_cast<std::size_t>(v)]);
      }
    }
    support_offsets_.push_back(static_cast<int>(support_.size()));
  }
}

double PceModel::evaluate(const Eigen::VectorXd& xi) const {
  if (xi.size() != dim_) {
    throw ConfigError("PceModel::evaluate: dimension mismatch");
  }
  double acc = constant_;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    double prod = terms_[j].beta;
    for (int s = support_offsets_[j]; s < support_offsets_[j + 1]; ++s) {
      const auto& [v, d] = support_[static_cast<std::size_t>(s)];
      prod *= hermite_value(d, xi[v]);
    }
    acc += prod;
  }
  return acc;
}

Eigen::VectorXd PceModel::evaluate_batch(const Eigen::MatrixXd& xi,
                                         int threads) const {
  Eigen::VectorXd out(xi.rows());
  parallel_chunks(xi.rows(), 1024, threads,
                  [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                    for (std::int64_t i = begin; i < end; ++i) {
                      out[static_cast<Eigen::Index>(i)] =
                          evaluate(xi.row(i).transpose());
                    }
                  });
  return out;
}

double PceModel::variance() const {
  double var = 0.0;
  for (const PceTerm& t : terms_) {
    var += t.beta * t.beta * hermite_norm_sq(t.alpha);
  }
  return var;
}

PceModel PceModel::pruned(double tol) const {
  std::vector<PceTerm> kept;
  for (const PceTerm& t : terms_) {
    if (std::abs(t.beta) > tol) kept.push_back(t);
  }
  return PceModel(dim_, max_degree_, constant_, std::move(kept));
}

std::string to_json(const PceModel& model) {
  json j;
  j["schema"] = "hpce-model/1";
  j["M"] = model.dim();
  j["p_max"] = model.max_degree();
  j["F_mean"] = model.constant();
  json entries = json::array();
  for (const PceTerm& t : model.terms()) {
    entries.push_back(json{{"alpha", t.alpha}, {"beta", t.beta}});
  }
  j["entries"] = std::move(entries);
  return j.dump(2);
}

PceModel pce_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  const int dim = j.at("M").get<int>();
  const int p_max = j.at("p_max").get<int>();
  const double constant = j.at("F_mean").get<double>();
  std::vector<PceTerm> terms;
  for (const auto& e : j.at("entries")) {
    PceTerm t;
    t.alpha = e.at("alpha").get<MultiIndex>();
    t.beta = e.at("beta").get<double>();
    terms.push_back(std::move(t));
  }
  return PceModel(dim, p_max, constant, std::move(terms));
}

void save_model(const std::string& path, const PceModel& model,
                const std::string& extra_json) {
  json j = json::parse(to_json(model));
  if (!extra_json.empty()) {
    json extra = json::parse(extra_json);
    for (auto it = extra.begin(); it != extra.end(); ++it) {
      j[it.key()] = it.value();
    }
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("save_model: cannot open " + path);
  out << j.dump(2) << "\n";
}

PceModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_model: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return pce_from_json(ss.str());
}

}  // namespace hpce
