#pragma once

#include <Eigen/Core>

#include "hpce/multi_index.hpp"

namespace hpce {

// Centered evaluations of one basis group at the training design.
struct CenteredBlock {
  GroupKey key;
  std::vector<MultiIndex> indices;   // column labels, partition order
  Eigen::MatrixXd values;            // N x K, each column empirically centered
  Eigen::VectorXd column_means;      // training means, length K
};

// Evaluates the group's polynomial columns at the sample matrix `xi`
// (N x M, standard-Gaussian space) and centers them. Columns are generated
// one at a time; nothing wider than this block is ever materialized.
CenteredBlock build_block(const BasisPartition& partition, GroupKey key,
                          const Eigen::MatrixXd& xi);

// Uncentered single-row evaluation of a group's columns (for oracles/tests).
Eigen::VectorXd evaluate_group_row(const std::vector<MultiIndex>& indices,
                                   const Eigen::VectorXd& xi);

}  // namespace hpce
