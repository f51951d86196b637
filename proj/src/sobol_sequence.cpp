#include "hpce/sobol_sequence.hpp"

#include <string>

#include "hpce/errors.hpp"

namespace hpce {

namespace {

// Joe & Kuo "D6" primitive polynomials and initial direction integers for
// Sobol dimensions 2..69 (dimension 1 is the van der Corput sequence).
// `poly` encodes the inner coefficients a_1..a_{s-1}, most significant first.
struct DirectionSeed {
  int degree;
  unsigned poly;
  unsigned m[9];
};

constexpr DirectionSeed kSeeds[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    {7, 7, {1, 1, 3, 13, 7, 35, 63}},
    {7, 8, {1, 3, 5, 9, 1, 25, 53}},
    {7, 14, {1, 3, 1, 13, 9, 35, 107}},
    {7, 19, {1, 3, 1, 5, 27, 61, 31}},
    {7, 21, {1, 1, 5, 11, 19, 41, 61}},
    {7, 28, {1, 3, 5, 3, 3, 13, 69}},
    {7, 31, {1, 1, 7, 13, 1, 19, 1}},
    {7, 32, {1, 3, 7, 5, 13, 19, 59}},
    {7, 37, {1, 1, 3, 9, 25, 29, 41}},
    {7, 41, {1, 3, 5, 13, 23, 1, 55}},
    {7, 42, {1, 3, 7, 3, 13, 59, 17}},
    {7, 50, {1, 3, 1, 3, 5, 53, 69}},
    {7, 55, {1, 1, 5, 5, 23, 33, 13}},
    {7, 56, {1, 1, 7, 7, 1, 61, 123}},
    {7, 59, {1, 1, 7, 9, 13, 61, 49}},
    {7, 62, {1, 3, 3, 5, 3, 55, 33}},
    {8, 14, {1, 3, 1, 15, 31, 13, 49, 245}},
    {8, 21, {1, 3, 5, 15, 31, 59, 63, 97}},
    {8, 22, {1, 3, 1, 11, 11, 11, 77, 249}},
    {8, 38, {1, 3, 1, 11, 27, 43, 71, 9}},
    {8, 47, {1, 1, 7, 15, 21, 11, 81, 45}},
    {8, 49, {1, 3, 7, 3, 25, 31, 65, 79}},
    {8, 50, {1, 3, 1, 1, 19, 11, 3, 205}},
    {8, 52, {1, 1, 5, 9, 19, 21, 29, 157}},
    {8, 56, {1, 3, 7, 11, 1, 33, 89, 185}},
    {8, 67, {1, 3, 3, 3, 15, 9, 79, 71}},
    {8, 70, {1, 3, 7, 11, 15, 39, 119, 27}},
    {8, 84, {1, 1, 3, 1, 11, 31, 97, 225}},
    {8, 97, {1, 1, 1, 3, 23, 43, 57, 177}},
    {8, 103, {1, 3, 7, 7, 17, 17, 37, 71}},
    {8, 115, {1, 3, 1, 5, 27, 63, 123, 213}},
    {8, 122, {1, 1, 3, 5, 11, 43, 53, 133}},
    {9, 8, {1, 3, 5, 5, 29, 17, 47, 173, 479}},
    {9, 13, {1, 3, 3, 11, 3, 1, 109, 9, 69}},
    {9, 16, {1, 1, 1, 5, 17, 39, 23, 5, 343}},
    {9, 22, {1, 3, 1, 5, 25, 15, 31, 103, 499}},
    {9, 25, {1, 1, 1, 11, 11, 17, 63, 105, 183}},
    {9, 44, {1, 1, 5, 11, 9, 29, 97, 231, 363}},
    {9, 47, {1, 1, 5, 15, 19, 45, 41, 7, 383}},
    {9, 52, {1, 3, 7, 7, 31, 19, 83, 137, 221}},
    {9, 55, {1, 1, 1, 3, 23, 15, 111, 223, 83}},
    {9, 59, {1, 1, 5, 13, 31, 15, 55, 25, 161}},
    {9, 62, {1, 1, 3, 13, 25, 47, 39, 87, 257}},
    {9, 67, {1, 1, 1, 11, 21, 53, 125, 249, 293}},
    {9, 74, {1, 1, 7, 11, 11, 7, 57, 79, 323}},
    {9, 81, {1, 1, 5, 5, 17, 13, 81, 3, 131}},
    {9, 82, {1, 1, 7, 13, 23, 7, 65, 251, 475}},
    {9, 87, {1, 3, 5, 1, 9, 43, 3, 149, 11}},
};

constexpr int kSeedCount = static_cast<int>(sizeof(kSeeds) / sizeof(kSeeds[0]));
static_assert(kSeedCount + 1 == SobolSequence::kMaxDimension);

}  // namespace

SobolSequence::SobolSequence(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDimension) {
    throw ConfigError("SobolSequence: dimension " + std::to_string(dim) +
                      " outside supported range [1, " +
                      std::to_string(kMaxDimension) + "]");
  }
  directions_.assign(static_cast<std::size_t>(dim) * kBits, 0);

  // First coordinate: van der Corput (m_k = 1 for all k).
  for (int k = 0; k < kBits; ++k) {
    directions_[static_cast<std::size_t>(k)] = 1u << (kBits - 1 - k);
  }

  for (int d = 1; d < dim; ++d) {
    const DirectionSeed& seed = kSeeds[d - 1];
    const int s = seed.degree;
    std::uint32_t m[kBits];
    for (int k = 0; k < s; ++k) m[k] = seed.m[k];
    for (int k = s; k < kBits; ++k) {
      std::uint32_t v = m[k - s] ^ (m[k - s] << s);
      for (int t = 1; t < s; ++t) {
        if ((seed.poly >> (s - 1 - t)) & 1u) v ^= m[k - t] << t;
      }
      m[k] = v;
    }
    std::uint32_t* row = directions_.data() + static_cast<std::size_t>(d) * kBits;
    for (int k = 0; k < kBits; ++k) row[k] = m[k] << (kBits - 1 - k);
  }
}

void SobolSequence::point(std::uint64_t index, double* out) const {
  // Gray-code form: XOR the direction vectors selected by gray(index).
  const std::uint64_t gray = index ^ (index >> 1);
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  for (int d = 0; d < dim_; ++d) {
    const std::uint32_t* row =
        directions_.data() + static_cast<std::size_t>(d) * kBits;
    std::uint32_t x = 0;
    std::uint64_t g = gray;
    for (int k = 0; g != 0 && k < kBits; ++k, g >>= 1) {
      if (g & 1u) x ^= row[k];
    }
    out[d] = static_cast<double>(x) * scale;
  }
}

Eigen::MatrixXd sobol_points(Eigen::Index n, int dim, std::uint64_t skip) {
  if (n < 1) throw ConfigError("sobol_points: need n >= 1");
  SobolSequence seq(dim);
  Eigen::MatrixXd pts(n, dim);
  std::vector<double> row(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < n; ++i) {
    seq.point(skip + static_cast<std::uint64_t>(i), row.data());
    for (int d = 0; d < dim; ++d) pts(i, d) = row[static_cast<std::size_t>(d)];
  }
  return pts;
}

}  // namespace hpce
