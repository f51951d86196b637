#include "hpce/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "hpce/errors.hpp"

namespace hpce {

namespace {

// Matches the tie handling inside pls_fit: argmin improvements below this
// are floating-point noise and parsimony keeps the lower index.
constexpr double kEpsTieTol = 1e-12;

Eigen::MatrixXd concat_columns(const std::vector<const Eigen::MatrixXd*>& parts,
                               Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto* p : parts) cols += p->cols();
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index off = 0;
  for (const auto* p : parts) {
    if (p->cols() > 0) out.middleCols(off, p->cols()) = *p;
    off += p->cols();
  }
  return out;
}

}  // namespace

int FohplsrResult::level2_width() const {
  return static_cast<int>(level2_scores().cols());
}

const Eigen::MatrixXd& FohplsrResult::level2_scores() const {
  if (level2_passthrough) {
    static const Eigen::MatrixXd empty;
    return level1.empty() ? empty : level1.front().scores;
  }
  return level2.scores;
}

FohplsrResult fohplsr(int interaction,
                      const std::vector<const CenteredBlock*>& blocks,
                      const Eigen::VectorXd& f_ini, int max_components) {
  if (blocks.empty()) throw ConfigError("fohplsr: empty block list");
  const Eigen::Index n = f_ini.size();
  const int n_sub = static_cast<int>(blocks.size());
  PlsOptions opts;
  opts.max_components = max_components;

  FohplsrResult res;
  res.interaction = interaction;

  // Level 1: subblock k = 1 against the initial response, k >= 2 against
  // the running residual.
  std::vector<PlsFitResult> level1_fits;
  level1_fits.reserve(static_cast<std::size_t>(n_sub));
  Eigen::VectorXd f_chain = f_ini;
  for (int k = 0; k < n_sub; ++k) {
    level1_fits.push_back(
        pls_fit(blocks[static_cast<std::size_t>(k)]->values, f_chain,
                blocks[static_cast<std::size_t>(k)]->column_means, opts));
    f_chain = level1_fits.back().residual;
  }

  // Level 2: eps*_{[1]} comes from the first level-1 fit itself; for
  // k >= 2 from a PLS fit of f_ini on the concatenated scores. A subblock
  // with no extracted covariance contributes zero columns and inherits the
  // previous eps* entry, which keeps the argmin well defined.
  std::vector<double> eps(static_cast<std::size_t>(n_sub));
  std::vector<PlsFitResult> level2_fits(static_cast<std::size_t>(n_sub));
  eps[0] = level1_fits[0].model.empty() ? 1.0 : level1_fits[0].cv.eps_star;
  std::vector<const Eigen::MatrixXd*> score_parts{&level1_fits[0].model.scores};
  const Eigen::VectorXd no_means;
  for (int k = 1; k < n_sub; ++k) {
    score_parts.push_back(&level1_fits[static_cast<std::size_t>(k)].model.scores);
    Eigen::MatrixXd concat = concat_columns(score_parts, n);
    if (concat.cols() == 0) {
      eps[static_cast<std::size_t>(k)] = eps[static_cast<std::size_t>(k - 1)];
      continue;
    }
    level2_fits[static_cast<std::size_t>(k)] =
        pls_fit(concat, f_ini, no_means, opts);
    const PlsFitResult& f2 = level2_fits[static_cast<std::size_t>(k)];
    eps[static_cast<std::size_t>(k)] =
        f2.model.empty() ? 1.0 : f2.cv.eps_star;
  }

  int k_star = 0;
  for (int k = 1; k < n_sub; ++k) {
    if (eps[static_cast<std::size_t>(k)] <
        eps[static_cast<std::size_t>(k_star)] - kEpsTieTol) {
      k_star = k;
    }
  }

  res.k_star = k_star + 1;
  res.eps_star = eps[static_cast<std::size_t>(k_star)];
  res.eps_star_by_subblock = Eigen::Map<Eigen::VectorXd>(
      eps.data(), static_cast<Eigen::Index>(eps.size()));
  res.residual = level1_fits[static_cast<std::size_t>(k_star)].residual;

  for (int k = 0; k <= k_star; ++k) {
    res.block_keys.push_back(blocks[static_cast<std::size_t>(k)]->key);
    res.level1.push_back(std::move(level1_fits[static_cast<std::size_t>(k)].model));
    res.level1_indices.push_back(blocks[static_cast<std::size_t>(k)]->indices);
  }
  if (res.k_star == 1) {
    res.level2_passthrough = true;
  } else {
    res.level2 = std::move(level2_fits[static_cast<std::size_t>(k_star)].model);
  }
  return res;
}

namespace {

// Distributes a coefficient vector over concatenated score segments.
std::vector<Eigen::VectorXd> split_segments(
    const Eigen::VectorXd& coeffs, const std::vector<int>& widths) {
  std::vector<Eigen::VectorXd> out;
  Eigen::Index off = 0;
  for (int w : widths) {
    out.push_back(coeffs.segment(off, w));
    off += w;
  }
  return out;
}

struct BetaAccumulator {
  std::map<MultiIndex, double> beta;
  double mean_shift = 0.0;  // sum beta_alpha * column_mean_alpha

  void add_block(const PlsBlockModel& level1,
                 const std::vector<MultiIndex>& indices,
                 const Eigen::VectorXd& score_coeffs) {
    if (level1.empty() || score_coeffs.size() == 0) return;
    const Eigen::VectorXd col_coeffs = weight_map(level1) * score_coeffs;
    for (Eigen::Index j = 0; j < col_coeffs.size(); ++j) {
      beta[indices[static_cast<std::size_t>(j)]] += col_coeffs[j];
      mean_shift += col_coeffs[j] * level1.col_means[j];
    }
  }
};

// Expands one interaction degree's share of the top-level coefficient
// vector down through level 2 (or its passthrough) to polynomial columns.
void expand_interaction(const FohplsrResult& fi,
                        const Eigen::VectorXd& level2_coeffs,
                        BetaAccumulator& acc) {
  if (fi.level2_passthrough) {
    acc.add_block(fi.level1.front(), fi.level1_indices.front(), level2_coeffs);
    return;
  }
  if (fi.level2.empty() || level2_coeffs.size() == 0) return;
  const Eigen::VectorXd level1_coeffs = weight_map(fi.level2) * level2_coeffs;
  std::vector<int> widths;
  widths.reserve(fi.level1.size());
  for (const auto& m : fi.level1) widths.push_back(m.n_components());
  const auto segments = split_segments(level1_coeffs, widths);
  for (std::size_t k = 0; k < fi.level1.size(); ++k) {
    acc.add_block(fi.level1[k], fi.level1_indices[k], segments[k]);
  }
}

}  // namespace

std::vector<int> SohplsrModel::k_star_by_interaction() const {
  std::vector<int> out;
  out.reserve(per_interaction.size());
  for (const auto& fi : per_interaction) out.push_back(fi.k_star);
  return out;
}

SohplsrModel sohplsr_fit(const BasisPartition& partition,
                         const Eigen::MatrixXd& xi,
                         const Eigen::VectorXd& f_centered, double f_mean,
                         int max_components) {
  if (f_centered.size() < 3) throw ConfigError("sohplsr_fit: need N >= 3");
  if (xi.rows() != f_centered.size()) {
    throw ConfigError("sohplsr_fit: design/response size mismatch");
  }
  const Eigen::Index n = f_centered.size();
  const int max_interaction = std::min(partition.dim, partition.max_degree);
  PlsOptions opts;
  opts.max_components = max_components;

  SohplsrModel model;

  // FOHPLSR per interaction degree on the chained residuals. Blocks for
  // one degree are built on demand and released right after the fit.
  Eigen::VectorXd f_chain = f_centered;
  for (int i = 1; i <= max_interaction; ++i) {
    std::vector<CenteredBlock> storage;
    std::vector<const CenteredBlock*> blocks;
    for (const GroupKey& key : partition.keys_for_interaction(i)) {
      storage.push_back(build_block(partition, key, xi));
    }
    for (const auto& b : storage) blocks.push_back(&b);
    model.per_interaction.push_back(
        fohplsr(i, blocks, f_chain, max_components));
    f_chain = model.per_interaction.back().residual;
  }

  // Level 3: eps*^{[1]} is the first FOHPLSR's error; for i >= 2 a PLS fit
  // of the original response on the concatenated level-2 scores. Degrees
  // whose level-2 stage produced no columns inherit the previous entry.
  std::vector<double> eps(static_cast<std::size_t>(max_interaction));
  std::vector<PlsFitResult> level3_fits(static_cast<std::size_t>(max_interaction));
  eps[0] = model.per_interaction[0].level2_width() == 0
               ? 1.0
               : model.per_interaction[0].eps_star;
  std::vector<const Eigen::MatrixXd*> parts{
      &model.per_interaction[0].level2_scores()};
  const Eigen::VectorXd no_means;
  for (int i = 2; i <= max_interaction; ++i) {
    parts.push_back(&model.per_interaction[static_cast<std::size_t>(i - 1)]
                         .level2_scores());
    Eigen::MatrixXd concat = concat_columns(parts, n);
    if (concat.cols() == 0) {
      eps[static_cast<std::size_t>(i - 1)] = eps[static_cast<std::size_t>(i - 2)];
      continue;
    }
    level3_fits[static_cast<std::size_t>(i - 1)] =
        pls_fit(concat, f_centered, no_means, opts);
    const PlsFitResult& f3 = level3_fits[static_cast<std::size_t>(i - 1)];
    eps[static_cast<std::size_t>(i - 1)] = f3.model.empty() ? 1.0 : f3.cv.eps_star;
  }

  int best = 0;
  for (int i = 1; i < max_interaction; ++i) {
    if (eps[static_cast<std::size_t>(i)] <
        eps[static_cast<std::size_t>(best)] - kEpsTieTol) {
      best = i;
    }
  }
  model.i_star = best + 1;
  model.eps_star_final = eps[static_cast<std::size_t>(best)];
  model.eps_star_by_interaction = Eigen::Map<Eigen::VectorXd>(
      eps.data(), static_cast<Eigen::Index>(eps.size()));
  model.per_interaction.resize(static_cast<std::size_t>(model.i_star));
  if (model.i_star == 1) {
    model.level3_passthrough = true;
  } else {
    model.level3 = std::move(level3_fits[static_cast<std::size_t>(best)].model);
  }

  // Back-substitution: the delivered predictor is the top-level PLS fit
  // only; its inner coefficients are pushed down through the weight maps,
  // level by level, until they land on polynomial columns.
  BetaAccumulator acc;
  if (model.level3_passthrough) {
    const FohplsrResult& f1 = model.per_interaction.front();
    if (f1.level2_passthrough) {
      const PlsBlockModel& top = f1.level1.front();
      if (!top.empty()) {
        acc.add_block(top, f1.level1_indices.front(), top.inner_coeffs);
      }
    } else if (!f1.level2.empty()) {
      expand_interaction(f1, f1.level2.inner_coeffs, acc);
    }
  } else if (!model.level3.empty()) {
    const Eigen::VectorXd level2_coeffs =
        weight_map(model.level3) * model.level3.inner_coeffs;
    std::vector<int> widths;
    widths.reserve(model.per_interaction.size());
    for (const auto& fi : model.per_interaction) {
      widths.push_back(fi.level2_width());
    }
    const auto segs = split_segments(level2_coeffs, widths);
    for (std::size_t i = 0; i < model.per_interaction.size(); ++i) {
      expand_interaction(model.per_interaction[i], segs[i], acc);
    }
  }

  std::vector<PceTerm> terms;
  terms.reserve(acc.beta.size());
  for (const auto& [alpha, beta] : acc.beta) {
    terms.push_back(PceTerm{alpha, beta});
  }
  model.pce = PceModel(partition.dim, partition.max_degree,
                       f_mean - acc.mean_shift, std::move(terms));
  return model;
}

PceModel olsr_fit(const BasisPartition& partition, const Eigen::MatrixXd& xi,
                  const Eigen::VectorXd& f_centered, double f_mean,
                  std::size_t memory_budget_bytes) {
  const Eigen::Index n = xi.rows();
  const std::uint64_t p = partition.total_indices();
  const std::uint64_t bytes =
      static_cast<std::uint64_t>(n) * p * sizeof(double);
  if (bytes > memory_budget_bytes) {
    throw BudgetError("olsr_fit: dense basis matrix needs " +
                      std::to_string(bytes) + " bytes, budget is " +
                      std::to_string(memory_budget_bytes));
  }

  Eigen::MatrixXd psi(n, static_cast<Eigen::Index>(p));
  Eigen::VectorXd means(static_cast<Eigen::Index>(p));
  std::vector<MultiIndex> order;
  order.reserve(p);
  Eigen::Index off = 0;
  for (const auto& [key, group] : partition.groups) {
    CenteredBlock block = build_block(partition, key, xi);
    psi.middleCols(off, block.values.cols()) = block.values;
    means.segment(off, block.values.cols()) = block.column_means;
    order.insert(order.end(), block.indices.begin(), block.indices.end());
    off += block.values.cols();
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(psi,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd beta = svd.solve(f_centered);

  std::vector<PceTerm> terms;
  terms.reserve(order.size());
  double mean_shift = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    terms.push_back(PceTerm{order[static_cast<std::size_t>(j)], beta[j]});
    mean_shift += beta[j] * means[j];
  }
  return PceModel(partition.dim, partition.max_degree, f_mean - mean_shift,
                  std::move(terms));
}

}  // namespace hpce
