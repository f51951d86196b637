#include "hpce/multi_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "hpce/errors.hpp"

namespace hpce {

int total_degree(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

int interaction_degree(const MultiIndex& alpha) {
  return static_cast<int>(
      std::count_if(alpha.begin(), alpha.end(), [](int a) { return a != 0; }));
}

std::uint64_t binomial_checked(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int j = 1; j <= k; ++j) {
    acc = acc * static_cast<unsigned>(n - k + j);
    acc /= static_cast<unsigned>(j);  // exact: product of j consecutive ints
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw OverflowError("binomial_checked: C(" + std::to_string(n) + "," +
                          std::to_string(k) + ") exceeds 64-bit range");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t count_basis(int dim, int max_degree) {
  if (dim < 1 || max_degree < 1) {
    throw ConfigError("count_basis: dim and max_degree must be >= 1");
  }
  return binomial_checked(dim + max_degree, max_degree) - 1;
}

std::uint64_t BasisPartition::total_indices() const {
  std::uint64_t n = 0;
  for (const auto& [key, group] : groups) n += group.size();
  return n;
}

std::vector<GroupKey> BasisPartition::keys_for_interaction(
    int interaction) const {
  std::vector<GroupKey> out;
  for (const auto& [key, group] : groups) {
    if (key.interaction == interaction) out.push_back(key);
  }
  return out;
}

namespace {

// Emit every alpha with the given support positions and positive parts
// summing to `degree` (compositions of `degree` into |support| parts).
void emit_compositions(const std::vector<int>& support, int slot, int remaining,
                       MultiIndex& work, std::vector<MultiIndex>& out) {
  const int slots_left = static_cast<int>(support.size()) - slot;
  if (slots_left == 1) {
    work[support[slot]] = remaining;
    out.push_back(work);
    work[support[slot]] = 0;
    return;
  }
  for (int v = 1; v <= remaining - (slots_left - 1); ++v) {
    work[support[slot]] = v;
    emit_compositions(support, slot + 1, remaining - v, work, out);
  }
  work[support[slot]] = 0;
}

void for_each_subset(int dim, int size, std::vector<int>& current,
                     int next_start, auto&& fn) {
  if (static_cast<int>(current.size()) == size) {
    fn(current);
    return;
  }
  for (int v = next_start; v < dim; ++v) {
    current.push_back(v);
    for_each_subset(dim, size, current, v + 1, fn);
    current.pop_back();
  }
}

}  // namespace

BasisPartition enumerate_partition(int dim, int max_degree) {
  count_basis(dim, max_degree);  // validates inputs, detects overflow

  BasisPartition partition;
  partition.dim = dim;
  partition.max_degree = max_degree;

  for (int i = 1; i <= std::min(dim, max_degree); ++i) {
    for (int p = i; p <= max_degree; ++p) {
      std::vector<MultiIndex> group;
      MultiIndex work(dim, 0);
      std::vector<int> support;
      for_each_subset(dim, i, support, 0, [&](const std::vector<int>& s) {
        emit_compositions(s, 0, p, work, group);
      });
      std::sort(group.begin(), group.end());
      partition.groups.emplace(GroupKey{i, p}, std::move(group));
    }
  }
  return partition;
}

}  // namespace hpce
