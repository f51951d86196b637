#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace hpce {

// Unscrambled Sobol' low-discrepancy sequence in Gray-code order, with
// random access by point index (index 0 is the all-zeros point). Direction
// numbers are the Joe-Kuo D6 set; 32 bits of resolution.
class SobolSequence {
 public:
  static constexpr int kMaxDimension = 69;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dim);

  int dim() const { return dim_; }

  // Point `index` of the sequence, entries in [0, 1).
  void point(std::uint64_t index, double* out) const;

 private:
  int dim_;
  std::vector<std::uint32_t> directions_;  // dim_ * kBits, v[d][k]
};

// First `n` points starting at `skip` (row i = point skip + i).
// skip=1 drops the degenerate all-zeros point.
Eigen::MatrixXd sobol_points(Eigen::Index n, int dim, std::uint64_t skip);

}  // namespace hpce
