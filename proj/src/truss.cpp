#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "hpce/errors.hpp"
#include "hpce/models.hpp"

namespace hpce {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

int dof_index_from_name(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw ConfigError("truss geometry: unknown dof '" + s + "'");
}

MarginalSpec parse_marginal(std::istringstream& ss, const std::string& ctx) {
  std::string kind;
  double mean = 0.0, std_dev = 0.0;
  if (!(ss >> kind >> mean >> std_dev)) {
    throw ConfigError("truss geometry: malformed marginal in " + ctx);
  }
  MarginalSpec m{marginal_kind_from_string(kind), mean, std_dev};
  m.validate();
  return m;
}

}  // namespace

TrussGeometry parse_truss_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("parse_truss_geometry: cannot open " + path);

  TrussGeometry g;
  g.name = path;
  bool saw_format = false;
  bool saw_modulus = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    const std::string ctx = path + ":" + std::to_string(line_no);

    if (tag == "format") {
      std::string version;
      ss >> version;
      if (version != "truss/1") {
        throw ConfigError(ctx + ": unsupported format '" + version + "'");
      }
      saw_format = true;
    } else if (tag == "dim") {
      ss >> g.spatial_dim;
      if (g.spatial_dim != 2 && g.spatial_dim != 3) {
        throw ConfigError(ctx + ": dim must be 2 or 3");
      }
    } else if (tag == "node") {
      int id;
      double x = 0, y = 0, z = 0;
      if (!(ss >> id >> x >> y)) throw ConfigError(ctx + ": malformed node");
      if (g.spatial_dim == 3 && !(ss >> z)) {
        throw ConfigError(ctx + ": 3D node needs z");
      }
      if (id != static_cast<int>(g.nodes.size()) + 1) {
        throw ConfigError(ctx + ": node ids must be 1,2,3,... in order");
      }
      g.nodes.emplace_back(x, y, z);
    } else if (tag == "element") {
      int id, a, b;
      double diameter;
      if (!(ss >> id >> a >> b >> diameter)) {
        throw ConfigError(ctx + ": malformed element");
      }
      if (id != static_cast<int>(g.elements.size()) + 1) {
        throw ConfigError(ctx + ": element ids must be 1,2,3,... in order");
      }
      g.elements.push_back({a, b});
      g.diameters.push_back(diameter);
    } else if (tag == "support") {
      int id;
      if (!(ss >> id)) throw ConfigError(ctx + ": malformed support");
      std::vector<int> dofs;
      std::string d;
      while (ss >> d) dofs.push_back(dof_index_from_name(d));
      if (dofs.empty()) throw ConfigError(ctx + ": support needs dof list");
      g.supports.emplace_back(id, std::move(dofs));
    } else if (tag == "load") {
      TrussLoad load;
      double dx = 0, dy = 0, dz = 0;
      if (!(ss >> load.node >> dx >> dy)) {
        throw ConfigError(ctx + ": malformed load");
      }
      if (g.spatial_dim == 3 && !(ss >> dz)) {
        throw ConfigError(ctx + ": 3D load needs z direction");
      }
      load.direction = Eigen::Vector3d(dx, dy, dz);
      const double norm = load.direction.norm();
      if (!(norm > 0)) throw ConfigError(ctx + ": zero load direction");
      load.direction /= norm;
      load.marginal = parse_marginal(ss, ctx);
      g.loads.push_back(std::move(load));
    } else if (tag == "modulus") {
      g.modulus_marginal = parse_marginal(ss, ctx);
      saw_modulus = true;
    } else if (tag == "response") {
      std::string kind;
      if (!(ss >> kind)) throw ConfigError(ctx + ": malformed response");
      if (kind == "node") {
        std::string dof;
        if (!(ss >> g.response.node >> dof)) {
          throw ConfigError(ctx + ": response node needs id and dof");
        }
        g.response.kind = TrussResponse::Kind::node_dof;
        g.response.dof = dof_index_from_name(dof);
        double sign;
        if (ss >> sign) g.response.sign = sign;
      } else if (kind == "max_horizontal") {
        g.response.kind = TrussResponse::Kind::max_horizontal;
        int id;
        while (ss >> id) g.response.nodes.push_back(id);
        if (g.response.nodes.empty()) {
          throw ConfigError(ctx + ": max_horizontal needs node list");
        }
      } else {
        throw ConfigError(ctx + ": unknown response kind '" + kind + "'");
      }
    } else if (tag == "failure_threshold") {
      if (!(ss >> g.failure_threshold)) {
        throw ConfigError(ctx + ": malformed failure_threshold");
      }
    } else {
      throw ConfigError(ctx + ": unknown tag '" + tag + "'");
    }
  }
  if (!saw_format) throw ConfigError(path + ": missing 'format truss/1' line");
  if (!saw_modulus) throw ConfigError(path + ": missing 'modulus' line");
  if (g.nodes.empty() || g.elements.empty()) {
    throw ConfigError(path + ": geometry needs nodes and elements");
  }
  for (const auto& e : g.elements) {
    for (int id : e) {
      if (id < 1 || id > static_cast<int>(g.nodes.size())) {
        throw ConfigError(path + ": element references unknown node " +
                          std::to_string(id));
      }
    }
  }
  return g;
}

TrussModel::TrussModel(TrussGeometry geometry) : geom_(std::move(geometry)) {
  const int nd = geom_.spatial_dim;
  n_dof_ = nd * static_cast<int>(geom_.nodes.size());

  fixed_dof_.assign(static_cast<std::size_t>(n_dof_), 0);
  for (const auto& [node, dofs] : geom_.supports) {
    if (node < 1 || node > static_cast<int>(geom_.nodes.size())) {
      throw ConfigError("TrussModel: support references unknown node");
    }
    for (int d : dofs) {
      fixed_dof_[static_cast<std::size_t>(nd * (node - 1) + d)] = 1;
    }
  }

  cosines_.reserve(geom_.elements.size());
  lengths_.reserve(geom_.elements.size());
  areas_.reserve(geom_.elements.size());
  for (std::size_t e = 0; e < geom_.elements.size(); ++e) {
    const Eigen::Vector3d delta =
        geom_.nodes[static_cast<std::size_t>(geom_.elements[e][1] - 1)] -
        geom_.nodes[static_cast<std::size_t>(geom_.elements[e][0] - 1)];
    const double len = delta.norm();
    if (!(len > 0)) throw ConfigError("TrussModel: zero-length element");
    lengths_.push_back(len);
    const double d = geom_.diameters[e];
    areas_.push_back(kPi * d * d / 4.0);
    cosines_.push_back((delta / len).head(nd));
  }

  // Mean-input solve validates the constrained stiffness (mechanism check).
  Eigen::VectorXd e_mean(geom_.elements.size());
  e_mean.setConstant(geom_.modulus_marginal.mean);
  Eigen::VectorXd loads(geom_.loads.size());
  for (std::size_t i = 0; i < geom_.loads.size(); ++i) {
    loads[static_cast<Eigen::Index>(i)] = geom_.loads[i].marginal.mean;
  }
  solve(e_mean, loads);
}

int TrussModel::dimension() const {
  return static_cast<int>(geom_.elements.size() + geom_.loads.size());
}

std::vector<MarginalSpec> TrussModel::marginals() const {
  std::vector<MarginalSpec> out;
  out.reserve(static_cast<std::size_t>(dimension()));
  for (std::size_t e = 0; e < geom_.elements.size(); ++e) {
    out.push_back(geom_.modulus_marginal);
  }
  for (const auto& load : geom_.loads) out.push_back(load.marginal);
  return out;
}

double TrussModel::evaluate(const Eigen::VectorXd& xi) const {
  if (xi.size() != dimension()) {
    throw ConfigError("TrussModel::evaluate: dimension mismatch");
  }
  const Eigen::Index ne = static_cast<Eigen::Index>(geom_.elements.size());
  Eigen::VectorXd modulus(ne);
  for (Eigen::Index e = 0; e < ne; ++e) {
    modulus[e] = geom_.modulus_marginal.from_gaussian(xi[e]);
  }
  Eigen::VectorXd loads(static_cast<Eigen::Index>(geom_.loads.size()));
  for (Eigen::Index j = 0; j < loads.size(); ++j) {
    loads[j] = geom_.loads[static_cast<std::size_t>(j)].marginal.from_gaussian(
        xi[ne + j]);
  }
  return solve(modulus, loads);
}

double TrussModel::solve(const Eigen::VectorXd& modulus,
                         const Eigen::VectorXd& load_values) const {
  const int nd = geom_.spatial_dim;
  if (modulus.size() != static_cast<Eigen::Index>(geom_.elements.size()) ||
      load_values.size() != static_cast<Eigen::Index>(geom_.loads.size())) {
    throw ConfigError("TrussModel::solve: input size mismatch");
  }
  for (Eigen::Index e = 0; e < modulus.size(); ++e) {
    if (!(modulus[e] > 0)) throw NumericError("TrussModel: nonpositive modulus");
  }

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_dof_, n_dof_);
  for (std::size_t e = 0; e < geom_.elements.size(); ++e) {
    const double axial = modulus[static_cast<Eigen::Index>(e)] * areas_[e] /
                         lengths_[e];
    const Eigen::VectorXd& c = cosines_[e];
    const int ia = nd * (geom_.elements[e][0] - 1);
    const int ib = nd * (geom_.elements[e][1] - 1);
    for (int r = 0; r < nd; ++r) {
      for (int s = 0; s < nd; ++s) {
        const double v = axial * c[r] * c[s];
        k(ia + r, ia + s) += v;
        k(ib + r, ib + s) += v;
        k(ia + r, ib + s) -= v;
        k(ib + r, ia + s) -= v;
      }
    }
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dof_);
  for (std::size_t j = 0; j < geom_.loads.size(); ++j) {
    const TrussLoad& load = geom_.loads[j];
    const int base = nd * (load.node - 1);
    for (int r = 0; r < nd; ++r) {
      f[base + r] += load_values[static_cast<Eigen::Index>(j)] *
                     load.direction[r];
    }
  }

  // Constrained dofs: identity row/column keeps the system SPD.
  for (int i = 0; i < n_dof_; ++i) {
    if (fixed_dof_[static_cast<std::size_t>(i)] == 0) continue;
    k.row(i).setZero();
    k.col(i).setZero();
    k(i, i) = 1.0;
    f[i] = 0.0;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("TrussModel: constrained stiffness is not positive "
                      "definite (mechanism in the geometry?)");
  }
  const Eigen::VectorXd u = llt.solve(f);

  const TrussResponse& r = geom_.response;
  if (r.kind == TrussResponse::Kind::node_dof) {
    return r.sign * u[nd * (r.node - 1) + r.dof];
  }
  double best = 0.0;
  for (int node : r.nodes) {
    const int base = nd * (node - 1);
    double h2 = u[base] * u[base];
    if (nd == 3) h2 += u[base + 1] * u[base + 1];
    best = std::max(best, h2);
  }
  return std::sqrt(best);
}

}  // namespace hpce
