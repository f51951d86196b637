#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace hpce {

// Degree vector alpha = (alpha_1, ..., alpha_M) of a tensorized Hermite
// polynomial. The all-zeros index (the mean term) is never enumerated.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);

// Number of nonzero entries, i.e. how many distinct variables the term uses.
int interaction_degree(const MultiIndex& alpha);

// C(n, k) with overflow detection. Throws OverflowError.
std::uint64_t binomial_checked(int n, int k);

// Cardinality of the truncated basis without the constant term:
// C(dim + max_degree, max_degree) - 1.
std::uint64_t count_basis(int dim, int max_degree);

// Group label: interaction degree i and total degree p, with 1 <= i <= p.
struct GroupKey {
  int interaction = 0;
  int degree = 0;
  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

// The truncated basis split into (interaction degree, total degree) groups.
// Iteration over `groups` is the canonical column order used everywhere:
// keys ascending, indices lexicographic within a group.
struct BasisPartition {
  int dim = 0;
  int max_degree = 0;
  std::map<GroupKey, std::vector<MultiIndex>> groups;

  std::uint64_t total_indices() const;
  // Keys (i, p) for p = i..max_degree that exist for interaction degree i.
  std::vector<GroupKey> keys_for_interaction(int interaction) const;
};

BasisPartition enumerate_partition(int dim, int max_degree);

}  // namespace hpce
