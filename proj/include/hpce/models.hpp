#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hpce/distributions.hpp"
#include "hpce/kl_expansion.hpp"

namespace hpce {

// A stochastic benchmark: deterministic solver plus the isoprobabilistic
// map from standard-Gaussian coordinates to its physical inputs.
class RandomModel {
 public:
  virtual ~RandomModel() = default;
  virtual int dimension() const = 0;
  virtual double evaluate(const Eigen::VectorXd& xi) const = 0;
  // Exceedance level of the failure event, NaN when not defined.
  virtual double failure_threshold() const = 0;
  // Per-variable physical marginals; empty when the coordinates have no
  // marginal of their own (e.g. Karhunen-Loeve mode amplitudes).
  virtual std::vector<MarginalSpec> marginals() const { return {}; }
};

Eigen::VectorXd evaluate_batch(const RandomModel& model,
                               const Eigen::MatrixXd& xi, int threads);

// ---------------------------------------------------------------------------
// Simply supported beam under uniform load, lognormal modulus field.

struct BeamSpec {
  double length = 3.0;             // m
  double inertia = 8e-6;           // m^4
  double load = 13e3;              // N/m, downward
  int n_elements = 100;
  RandomFieldSpec field{3.0, 0.5, 2.1e11, 0.2, 40};
  double failure_threshold = 0.012;  // m, midspan deflection exceedance
};

class BeamModel : public RandomModel {
 public:
  explicit BeamModel(const BeamSpec& spec);

  int dimension() const override { return spec_.field.n_terms; }
  double evaluate(const Eigen::VectorXd& xi) const override;
  double failure_threshold() const override { return spec_.failure_threshold; }

  const BeamSpec& spec() const { return spec_; }
  const KlExpansion& kl() const { return kl_; }

  // Deterministic solve with explicit per-element moduli (oracle entry).
  double solve_with_moduli(const Eigen::VectorXd& modulus) const;

 private:
  BeamSpec spec_;
  KlExpansion kl_;
  Eigen::MatrixXd field_modes_;  // n_elements x M, sigma_N sqrt(l_k) f_k(x_mid)
  double mu_n_ = 0.0;
};

// ---------------------------------------------------------------------------
// Pin-jointed trusses (2D/3D) defined by a geometry file.

struct TrussResponse {
  enum class Kind { node_dof, max_horizontal } kind = Kind::node_dof;
  int node = 0;       // 1-based, for node_dof
  int dof = 0;        // 0=x, 1=y, 2=z
  double sign = 1.0;  // reported response = sign * displacement
  std::vector<int> nodes;  // 1-based, for max_horizontal
};

struct TrussLoad {
  int node = 0;                  // 1-based
  Eigen::Vector3d direction;     // unit vector
  MarginalSpec marginal;
};

struct TrussGeometry {
  std::string name;
  int spatial_dim = 2;
  std::vector<Eigen::Vector3d> nodes;               // z = 0 for 2D
  std::vector<std::array<int, 2>> elements;         // 1-based node ids
  std::vector<double> diameters;                    // per element, m
  std::vector<std::pair<int, std::vector<int>>> supports;  // node, fixed dofs
  std::vector<TrussLoad> loads;
  MarginalSpec modulus_marginal;                    // shared by all elements
  TrussResponse response;
  double failure_threshold = std::numeric_limits<double>::quiet_NaN();
};

TrussGeometry parse_truss_geometry(const std::string& path);

class TrussModel : public RandomModel {
 public:
  explicit TrussModel(TrussGeometry geometry);

  int dimension() const override;
  double evaluate(const Eigen::VectorXd& xi) const override;
  double failure_threshold() const override { return geom_.failure_threshold; }
  std::vector<MarginalSpec> marginals() const override;

  const TrussGeometry& geometry() const { return geom_; }

  // Deterministic solve (oracle entry): per-element moduli and one value
  // per load line.
  double solve(const Eigen::VectorXd& modulus,
               const Eigen::VectorXd& load_values) const;

 private:
  TrussGeometry geom_;
  int n_dof_ = 0;
  std::vector<int> fixed_dof_;            // 0-based global dof -> constrained?
  std::vector<Eigen::VectorXd> cosines_; // per element, direction cosines
  std::vector<double> lengths_;
  std::vector<double> areas_;
};

// ---------------------------------------------------------------------------
// Analytic fixtures with closed-form Sobol decompositions.

struct AnalyticCase {
  std::string name;
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> fn;
  Eigen::VectorXd exact_main;
  Eigen::VectorXd exact_total;
  double variance = 0.0;
};

// Catalog: additive (a_k = 1/k), product xi1*xi2, mixed xi1 + xi1*xi2,
// cubic xi1^3; dummy variables pad the requested dimension.
AnalyticCase analytic_case(const std::string& name, int dim);

class AnalyticModel : public RandomModel {
 public:
  AnalyticModel(AnalyticCase c, double threshold)
      : case_(std::move(c)), threshold_(threshold) {}
  int dimension() const override { return case_.dim; }
  double evaluate(const Eigen::VectorXd& xi) const override {
    return case_.fn(xi);
  }
  double failure_threshold() const override { return threshold_; }
  const AnalyticCase& analytic() const { return case_; }

 private:
  AnalyticCase case_;
  double threshold_;
};

}  // namespace hpce
