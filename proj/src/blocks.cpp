#include "hpce/blocks.hpp"

#include <string>

#include "hpce/errors.hpp"
#include "hpce/hermite.hpp"

namespace hpce {

CenteredBlock build_block(const BasisPartition& partition, GroupKey key,
                          const Eigen::MatrixXd& xi) {
  const auto it = partition.groups.find(key);
  if (it == partition.groups.end() || it->second.empty()) {
    throw ConfigError("build_block: no group (" + std::to_string(key.interaction) +
                      "," + std::to_string(key.degree) + ") in partition");
  }
  if (xi.rows() < 2) throw ConfigError("build_block: need at least 2 samples");
  if (xi.cols() != partition.dim) {
    throw ConfigError("build_block: sample dimension does not match partition");
  }

  const std::vector<MultiIndex>& group = it->second;
  const Eigen::Index n = xi.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(group.size());

  CenteredBlock block;
  block.key = key;
  block.indices = group;
  block.values.resize(n, k);
  block.column_means.resize(k);

  for (Eigen::Index j = 0; j < k; ++j) {
    const MultiIndex& alpha = group[static_cast<std::size_t>(j)];
    // support of alpha: at most `interaction` variables
    for (Eigen::Index i = 0; i < n; ++i) {
      double prod = 1.0;
      for (int v = 0; v < partition.dim; ++v) {
        const int a = alpha[static_cast<std::size_t>(v)];
        if (a != 0) prod *= hermite_value(a, xi(i, v));
      }
      block.values(i, j) = prod;
    }
    const double mean = block.values.col(j).mean();
    block.column_means[j] = mean;
    block.values.col(j).array() -= mean;
  }
  return block;
}

Eigen::VectorXd evaluate_group_row(const std::vector<MultiIndex>& indices,
                                   const Eigen::VectorXd& xi) {
  Eigen::VectorXd row(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    row[static_cast<Eigen::Index>(j)] = multi_hermite_value(indices[j], xi);
  }
  return row;
}

}  // namespace hpce
