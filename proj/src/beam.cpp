#include <cmath>
#include <vector>

#include "hpce/errors.hpp"
#include "hpce/models.hpp"
#include "hpce/parallel.hpp"

namespace hpce {

Eigen::VectorXd evaluate_batch(const RandomModel& model,
                               const Eigen::MatrixXd& xi, int threads) {
  Eigen::VectorXd out(xi.rows());
  parallel_chunks(xi.rows(), 256, threads,
                  [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                    for (std::int64_t i = begin; i < end; ++i) {
                      out[static_cast<Eigen::Index>(i)] =
                          model.evaluate(xi.row(i).transpose());
                    }
                  });
  return out;
}

namespace {

// Symmetric banded Cholesky (lower storage, half bandwidth `bw`):
// band(i, j) holds A(i, i - j) for j = 0..bw. Factorization and solve in
// place, O(n bw^2).
class BandedSpd {
 public:
  BandedSpd(int n, int bw)
      : n_(n), bw_(bw), band_(static_cast<std::size_t>(n) * (bw + 1), 0.0),
        diag_(static_cast<std::size_t>(n), 0.0) {}

  double& at(int row, int col) {  // row >= col, row - col <= bw
    return band_[static_cast<std::size_t>(row * (bw_ + 1) + (row - col))];
  }

  void reset() { std::fill(band_.begin(), band_.end(), 0.0); }

  void factorize() {
    for (int j = 0; j < n_; ++j) {
      double d = at(j, j);
      const int kmin = std::max(0, j - bw_);
      for (int k = kmin; k < j; ++k) {
        const double l = at(j, k);
        d -= l * l * diag_[static_cast<std::size_t>(k)];
      }
      if (!(d > 0.0)) {
        throw NumericError("banded solve: matrix not positive definite");
      }
      diag_[static_cast<std::size_t>(j)] = d;
      const int imax = std::min(n_ - 1, j + bw_);
      for (int i = j + 1; i <= imax; ++i) {
        double s = at(i, j);
        const int k0 = std::max({0, i - bw_, j - bw_});
        for (int k = k0; k < j; ++k) {
          s -= at(i, k) * at(j, k) * diag_[static_cast<std::size_t>(k)];
        }
        at(i, j) = s / d;
      }
    }
  }

  void solve_in_place(std::vector<double>& rhs) const {
    for (int i = 0; i < n_; ++i) {
      double s = rhs[static_cast<std::size_t>(i)];
      const int k0 = std::max(0, i - bw_);
      for (int k = k0; k < i; ++k) {
        s -= band_[static_cast<std::size_t>(i * (bw_ + 1) + (i - k))] *
             rhs[static_cast<std::size_t>(k)];
      }
      rhs[static_cast<std::size_t>(i)] = s;
    }
    for (int i = 0; i < n_; ++i) {
      rhs[static_cast<std::size_t>(i)] /= diag_[static_cast<std::size_t>(i)];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = rhs[static_cast<std::size_t>(i)];
      const int kmax = std::min(n_ - 1, i + bw_);
      for (int k = i + 1; k <= kmax; ++k) {
        s -= band_[static_cast<std::size_t>(k * (bw_ + 1) + (k - i))] *
             rhs[static_cast<std::size_t>(k)];
      }
      rhs[static_cast<std::size_t>(i)] = s;
    }
  }

 private:
  int n_;
  int bw_;
  std::vector<double> band_;
  std::vector<double> diag_;
};

}  // namespace

BeamModel::BeamModel(const BeamSpec& spec)
    : spec_(spec), kl_(spec.field), mu_n_(spec.field.underlying_mean()) {
  if (spec.n_elements < 2 || spec.n_elements % 2 != 0) {
    throw ConfigError("BeamModel: need an even element count >= 2 so the "
                      "midspan falls on a node");
  }
  if (spec.field.domain_length != spec.length) {
    throw ConfigError("BeamModel: field domain must equal the beam length");
  }
  std::vector<double> midpoints(static_cast<std::size_t>(spec.n_elements));
  const double le = spec.length / spec.n_elements;
  for (int e = 0; e < spec.n_elements; ++e) {
    midpoints[static_cast<std::size_t>(e)] = (e + 0.5) * le;
  }
  field_modes_ = spec.field.underlying_std() * kl_.mode_values(midpoints);
}

double BeamModel::evaluate(const Eigen::VectorXd& xi) const {
  if (xi.size() != dimension()) {
    throw ConfigError("BeamModel::evaluate: dimension mismatch");
  }
  const Eigen::VectorXd log_part = field_modes_ * xi;
  Eigen::VectorXd modulus(spec_.n_elements);
  for (int e = 0; e < spec_.n_elements; ++e) {
    modulus[e] = std::exp(mu_n_ + log_part[e]);
  }
  return solve_with_moduli(modulus);
}

double BeamModel::solve_with_moduli(const Eigen::VectorXd& modulus) const {
  const int ne = spec_.n_elements;
  if (modulus.size() != ne) {
    throw ConfigError("solve_with_moduli: one modulus per element required");
  }
  const int n_dof = 2 * (ne + 1);  // deflection + rotation per node
  const double le = spec_.length / ne;
  const double le2 = le * le;

  BandedSpd k(n_dof, 3);
  std::vector<double> f(static_cast<std::size_t>(n_dof), 0.0);

  // Hermite-cubic element stiffness; deflection positive in the load
  // direction so the reported midspan value is positive.
  for (int e = 0; e < ne; ++e) {
    const double c = modulus[e] * spec_.inertia / (le2 * le);
    const double k_local[4][4] = {
        {12 * c, 6 * c * le, -12 * c, 6 * c * le},
        {6 * c * le, 4 * c * le2, -6 * c * le, 2 * c * le2},
        {-12 * c, -6 * c * le, 12 * c, 6 * c * le},
        {6 * c * le, 2 * c * le2, -6 * c * le, 4 * c * le2}};
    const int base = 2 * e;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b <= a; ++b) {
        k.at(base + a, base + b) += k_local[a][b];
      }
    }
    // consistent nodal loads of the uniform load q
    f[static_cast<std::size_t>(base + 0)] += spec_.load * le / 2;
    f[static_cast<std::size_t>(base + 1)] += spec_.load * le2 / 12;
    f[static_cast<std::size_t>(base + 2)] += spec_.load * le / 2;
    f[static_cast<std::size_t>(base + 3)] -= spec_.load * le2 / 12;
  }

  // Simply supported: deflection fixed at both ends. Zero the coupled band
  // entries and pin the diagonal, which keeps the matrix SPD and banded.
  const int constrained[2] = {0, 2 * ne};
  for (int dof : constrained) {
    for (int j = std::max(0, dof - 3); j < dof; ++j) k.at(dof, j) = 0.0;
    for (int i = dof + 1; i <= std::min(n_dof - 1, dof + 3); ++i) {
      k.at(i, dof) = 0.0;
    }
    k.at(dof, dof) = 1.0;
    f[static_cast<std::size_t>(dof)] = 0.0;
  }

  k.factorize();
  k.solve_in_place(f);
  return f[static_cast<std::size_t>(ne)];  // midspan node deflection (2*(ne/2))
}

}  // namespace hpce
