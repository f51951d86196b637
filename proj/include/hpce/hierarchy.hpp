#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hpce/blocks.hpp"
#include "hpce/multi_index.hpp"
#include "hpce/pce_model.hpp"
#include "hpce/pls.hpp"

namespace hpce {

// One interaction degree of the hierarchy: per-subblock PLS fits chained on
// residuals (level 1), then a PLS fit of the initial response on the
// concatenated level-1 scores (level 2). When the selected nonlinearity
// count k* is 1 the level-2 stage is a passthrough of the first level-1
// score matrix.
struct FohplsrResult {
  int interaction = 0;
  std::vector<GroupKey> block_keys;           // keys for k = 1..k_star
  std::vector<PlsBlockModel> level1;          // per subblock, k = 1..k_star
  std::vector<std::vector<MultiIndex>> level1_indices;  // column labels per k
  PlsBlockModel level2;
  bool level2_passthrough = false;
  int k_star = 0;
  double eps_star = 1.0;
  Eigen::VectorXd eps_star_by_subblock;       // evaluated eps*_{[k]}
  Eigen::VectorXd residual;                   // F_res of this degree

  // Width of the score matrix this degree passes to level 3.
  int level2_width() const;
  const Eigen::MatrixXd& level2_scores() const;
};

// First-order hierarchical fit of one interaction degree. `blocks` must be
// ordered by increasing total degree (p = interaction .. p_max).
FohplsrResult fohplsr(int interaction,
                      const std::vector<const CenteredBlock*>& blocks,
                      const Eigen::VectorXd& f_ini, int max_components);

struct SohplsrModel {
  PceModel pce;                              // back-substituted surrogate
  int i_star = 0;
  double eps_star_final = 1.0;
  Eigen::VectorXd eps_star_by_interaction;   // evaluated eps*^{[i]}
  std::vector<FohplsrResult> per_interaction;  // i = 1..i_star
  PlsBlockModel level3;
  bool level3_passthrough = false;

  std::vector<int> k_star_by_interaction() const;
};

// Full second-order hierarchical fit over the partition's groups; blocks
// are generated on the fly and released after each interaction degree.
SohplsrModel sohplsr_fit(const BasisPartition& partition,
                         const Eigen::MatrixXd& xi,
                         const Eigen::VectorXd& f_centered, double f_mean,
                         int max_components = 200);

// OLSR baseline over the full (centered) basis, rank-revealing SVD solve
// with relative singular-value cutoff 1e-10. Throws BudgetError when the
// dense basis matrix would exceed `memory_budget_bytes`.
PceModel olsr_fit(const BasisPartition& partition, const Eigen::MatrixXd& xi,
                  const Eigen::VectorXd& f_centered, double f_mean,
                  std::size_t memory_budget_bytes = std::size_t(4) << 30);

}  // namespace hpce
