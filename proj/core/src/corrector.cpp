#include "ferronema/corrector.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "ferronema/fit.hpp"
#include "ferronema/quadrature.hpp"

namespace ferronema {

double CellProblem::outer_radius() const { return std::pow(epsilon, kappa - alpha); }

double CellProblem::surface_coefficient() const { return g * std::pow(epsilon, 3.0 - alpha); }

void CellProblem::validate() const {
  particle.validate();
  if (!(alpha > 1.0 && alpha < 2.0)) throw ConfigError(fmt::format("cell problem: alpha = {} not in (1, 2)", alpha));
  if (!(kappa > 1.0 && kappa < alpha))
    throw ConfigError(fmt::format("cell problem: kappa = {} not in (1, alpha = {})", kappa, alpha));
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("cell problem: epsilon must lie in (0, 1)");
  const double R = outer_radius();
  if (!(R > 2.0 * particle.a))
    throw ConfigError(fmt::format("cell problem: R = eps^(kappa-alpha) = {:.6g} does not exceed 2a = {:.6g}", R,
                                  2.0 * particle.a));
}

namespace {

constexpr double kPi = std::numbers::pi;

struct ShellMesh {
  int K, T, P;  // radial layers, polar intervals, azimuthal intervals
  int per_layer;
  std::vector<Vec3> nodes;  // world positions, layer-major

  int angular(int i, int j) const {
    if (i == 0) return 0;
    if (i == T) return per_layer - 1;
    return 1 + (i - 1) * P + ((j % P) + P) % P;
  }
  int node(int k, int i, int j) const { return k * per_layer + angular(i, j); }
};

ShellMesh build_mesh(const Spheroid& s, double R, const CellResolution& res) {
  ShellMesh m{res.radial, res.polar, res.azimuthal, (res.polar - 1) * res.azimuthal + 2, {}};
  std::vector<double> frac(m.K + 1);
  for (int k = 0; k <= m.K; ++k)
    frac[k] = res.growth == 1.0 ? double(k) / m.K : (std::pow(res.growth, k) - 1.0) / (std::pow(res.growth, m.K) - 1.0);
  m.nodes.resize(static_cast<std::size_t>(m.per_layer) * (m.K + 1));
  for (int k = 0; k <= m.K; ++k)
    for (int i = 0; i <= m.T; ++i) {
      const double th = kPi * i / m.T;
      const int jmax = (i == 0 || i == m.T) ? 1 : m.P;
      for (int j = 0; j < jmax; ++j) {
        const double ph = 2.0 * kPi * j / m.P;
        const Vec3 dir(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        const Vec3 inner(s.b * dir.x(), s.b * dir.y(), s.a * dir.z());
        const Vec3 y = inner + frac[k] * (R * dir - inner);
        m.nodes[m.node(k, i, j)] = s.to_world(y);
      }
    }
  return m;
}

// Scalar Q1 stiffness and mass of one hexahedron by 3x3x3 Gauss.
void element_matrices(const std::array<Vec3, 8>& x, Eigen::Matrix<double, 8, 8>& G, Eigen::Matrix<double, 8, 8>& M) {
  static const GaussRule gr = gauss_legendre(3, 0.0, 1.0);
  G.setZero();
  M.setZero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double xi[3] = {gr.nodes[a], gr.nodes[b], gr.nodes[c]};
        const double wq = gr.weights[a] * gr.weights[b] * gr.weights[c];
        Eigen::Matrix<double, 8, 1> N;
        Eigen::Matrix<double, 8, 3> dN;
        for (int n = 0; n < 8; ++n) {
          const int d[3] = {(n >> 2) & 1, (n >> 1) & 1, n & 1};
          double f[3], df[3];
          for (int r = 0; r < 3; ++r) {
            f[r] = d[r] ? xi[r] : 1.0 - xi[r];
            df[r] = d[r] ? 1.0 : -1.0;
          }
          N[n] = f[0] * f[1] * f[2];
          dN(n, 0) = df[0] * f[1] * f[2];
          dN(n, 1) = f[0] * df[1] * f[2];
          dN(n, 2) = f[0] * f[1] * df[2];
        }
        Mat3 J = Mat3::Zero();  // J(i, r) = d x_i / d xi_r
        for (int n = 0; n < 8; ++n) J += x[n] * dN.row(n);
        const double det = J.determinant();
        if (!(std::abs(det) > 0.0)) throw ResolutionError("cell mesh has a degenerate element");
        const Eigen::Matrix<double, 8, 3> grad = dN * J.inverse();
        const double w = wq * std::abs(det);
        G.noalias() += w * grad * grad.transpose();
        M.noalias() += w * N * N.transpose();
      }
}

struct SurfacePoint {
  std::array<int, 4> node;
  std::array<double, 4> shape;
  Vec3 normal;
  double weight;
};

std::vector<SurfacePoint> surface_points(const Spheroid& s, const ShellMesh& m) {
  static const GaussRule gr = gauss_legendre(4, 0.0, 1.0);
  std::vector<SurfacePoint> out;
  const double dth = kPi / m.T, dph = 2.0 * kPi / m.P;
  for (int i = 0; i < m.T; ++i)
    for (int j = 0; j < m.P; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double st = gr.nodes[a], sp = gr.nodes[b];
          const double th = (i + st) * dth, ph = (j + sp) * dph;
          const double sn = std::sin(th), cs = std::cos(th);
          SurfacePoint q;
          q.node = {m.node(0, i, j), m.node(0, i, j + 1), m.node(0, i + 1, j), m.node(0, i + 1, j + 1)};
          q.shape = {(1 - st) * (1 - sp), (1 - st) * sp, st * (1 - sp), st * sp};
          const Vec3 n(s.a * sn * std::cos(ph), s.a * sn * std::sin(ph), s.b * cs);
          q.normal = s.rotation.apply(n.normalized());
          q.weight = gr.weights[a] * gr.weights[b] * dth * dph * s.b * sn *
                     std::sqrt(s.a * s.a * sn * sn + s.b * s.b * cs * cs);
          out.push_back(q);
        }
  return out;
}

}  // namespace

CellSolution solve_cell(const CellProblem& cp, const CellResolution& res) {
  cp.validate();
  if (res.radial < 16)
    throw ResolutionError(fmt::format("cell problem needs at least 16 radial layers, got {}", res.radial));
  if (res.polar < 4 || res.azimuthal < 4) throw ResolutionError("cell problem angular resolution below 4");

  CellSolution sol;
  const double R_full = cp.outer_radius();
  sol.truncated = R_full > res.max_radius;
  sol.radius = sol.truncated ? res.max_radius : R_full;
  const ShellMesh mesh = build_mesh(cp.particle, sol.radius, res);
  const int n_nodes = static_cast<int>(mesh.nodes.size());
  const int n_free = mesh.K * mesh.per_layer;  // outer layer is fixed at zero
  const int n_dof = 3 * n_free;
  sol.dofs = static_cast<std::size_t>(n_dof);

  // scalar stiffness and mass, free nodes only
  std::vector<Eigen::Triplet<double>> tg, tm;
  for (int k = 0; k < mesh.K; ++k)
    for (int i = 0; i < mesh.T; ++i)
      for (int j = 0; j < mesh.P; ++j) {
        std::array<int, 8> ids;
        std::array<Vec3, 8> x;
        for (int n = 0; n < 8; ++n) {
          ids[n] = mesh.node(k + ((n >> 2) & 1), i + ((n >> 1) & 1), j + (n & 1));
          x[n] = mesh.nodes[ids[n]];
        }
        Eigen::Matrix<double, 8, 8> G, M;
        element_matrices(x, G, M);
        for (int a = 0; a < 8; ++a) {
          if (ids[a] >= n_free) continue;
          for (int b = 0; b < 8; ++b) {
            if (ids[b] >= n_free) continue;
            tg.emplace_back(ids[a], ids[b], G(a, b));
            tm.emplace_back(ids[a], ids[b], M(a, b));
          }
        }
      }
  Eigen::SparseMatrix<double> G(n_free, n_free), M(n_free, n_free);
  G.setFromTriplets(tg.begin(), tg.end());
  M.setFromTriplets(tm.begin(), tm.end());

  const double c = cp.surface_coefficient();
  const std::vector<SurfacePoint> surf = surface_points(cp.particle, mesh);
  std::vector<Eigen::Triplet<double>> tk;
  tk.reserve(3 * (G.nonZeros() + M.nonZeros()) + surf.size() * 144);
  const Eigen::SparseMatrix<double> S = G + M;
  for (int outer = 0; outer < S.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, outer); it; ++it)
      for (int comp = 0; comp < 3; ++comp)
        tk.emplace_back(3 * static_cast<int>(it.row()) + comp, 3 * static_cast<int>(it.col()) + comp, it.value());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_dof);
  for (const SurfacePoint& q : surf) {
    const double wn = cp.w.dot(q.normal);
    for (int a = 0; a < 4; ++a) {
      for (int i = 0; i < 3; ++i) rhs[3 * q.node[a] + i] -= c * q.weight * wn * q.normal[i] * q.shape[a];
      for (int b = 0; b < 4; ++b)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            tk.emplace_back(3 * q.node[a] + i, 3 * q.node[b] + j,
                            c * q.weight * q.shape[a] * q.shape[b] * q.normal[i] * q.normal[j]);
    }
  }
  Eigen::SparseMatrix<double> K(n_dof, n_dof);
  K.setFromTriplets(tk.begin(), tk.end());

  // Jacobi preconditioned CG on K x = rhs
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_dof);
  const double rhs_norm = rhs.norm();
  if (rhs_norm > 0.0) {
    const Eigen::VectorXd diag = K.diagonal();
    for (int i = 0; i < n_dof; ++i)
      if (!(diag[i] > 0.0)) throw CoercivityError("cell problem: non-positive diagonal entry");
    Eigen::VectorXd r = rhs, z = r.cwiseQuotient(diag), p = z, kp(n_dof);
    double rz = r.dot(z);
    const int max_it = 20 * n_dof;
    int it = 0;
    for (; it < max_it; ++it) {
      if (r.norm() <= res.tol * rhs_norm) break;
      kp.noalias() = K * p;
      const double curv = p.dot(kp);
      if (!(curv > 0.0))
        throw CoercivityError(fmt::format(
            "cell problem lost coercivity (g = {}, eps = {}): direction of non-positive curvature {:.3e}", cp.g,
            cp.epsilon, curv));
      const double step = rz / curv;
      x += step * p;
      r -= step * kp;
      z = r.cwiseQuotient(diag);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    sol.iterations = it;
    if (r.norm() > res.tol * rhs_norm)
      throw NumericalError(fmt::format("cell problem CG did not converge in {} iterations", max_it));
    sol.residual = (K * x - rhs).norm() / rhs_norm;
  }

  sol.nodes = mesh.nodes;
  sol.values.assign(n_nodes, Vec3::Zero());
  for (int n = 0; n < n_free; ++n) sol.values[n] = x.segment<3>(3 * n);
  for (int comp = 0; comp < 3; ++comp) {
    Eigen::VectorXd uc(n_free);
    for (int n = 0; n < n_free; ++n) uc[n] = x[3 * n + comp];
    sol.grad_energy += uc.dot(G * uc);
    sol.l2_energy += uc.dot(M * uc);
  }
  double anchoring = 0.0;
  for (const SurfacePoint& q : surf) {
    Vec3 u = Vec3::Zero();
    for (int a = 0; a < 4; ++a) u += q.shape[a] * sol.values[q.node[a]];
    sol.surf_energy += q.weight * u.squaredNorm();
    const double v = (u + cp.w).dot(q.normal);
    anchoring += c * q.weight * v * v;
  }
  sol.functional = sol.grad_energy + sol.l2_energy + anchoring;
  for (int n = n_free; n < n_nodes; ++n) sol.outer_max_abs = std::max(sol.outer_max_abs, sol.values[n].norm());
  return sol;
}

CellScalingStudy cell_scaling_study(double g, const Vec3& w, double alpha, double kappa,
                                    const std::vector<double>& epsilons, const Spheroid& particle,
                                    const CellResolution& res) {
  if (epsilons.size() < 4) throw ConfigError("cell_scaling_study needs at least 4 epsilon values");
  const auto [lo, hi] = std::minmax_element(epsilons.begin(), epsilons.end());
  if (*hi < 10.0 * *lo * (1.0 - 1e-12)) throw ConfigError("cell_scaling_study: epsilons must span a decade");
  CellScalingStudy study;
  study.expected_slope = 6.0 - 2.0 * alpha;
  std::vector<double> eg, el, es;
  bool all_zero = true;
  for (double eps : epsilons) {
    const CellProblem cp{particle, w, g, eps, alpha, kappa};
    const CellSolution s = solve_cell(cp, res);
    study.rows.push_back({eps, s.radius, s.grad_energy, s.l2_energy, s.surf_energy, s.truncated});
    eg.push_back(s.grad_energy);
    el.push_back(s.l2_energy);
    es.push_back(s.surf_energy);
    all_zero = all_zero && s.grad_energy == 0.0 && s.l2_energy == 0.0 && s.surf_energy == 0.0;
  }
  study.exact_zero = all_zero;
  if (!all_zero) {
    study.slope_grad = loglog_slope(epsilons, eg);
    study.slope_l2 = loglog_slope(epsilons, el);
    study.slope_surf = loglog_slope(epsilons, es);
  }
  return study;
}

BoundaryTermLimit boundary_term_limit(const VectorFunction& w, const ScalingParams& p,
                                      const std::vector<double>& epsilons, const Spheroid& reference,
                                      const Box& domain, const RotationField& field, int gl_order) {
  const AnchoringEigenvalues lam = anchoring_eigenvalues(reference);
  const Mat3 t = Vec3(lam.transverse, lam.transverse, lam.axial).asDiagonal();
  BoundaryTermLimit out{};
  const GaussRule gx = gauss_legendre(gl_order, domain.lo.x(), domain.hi.x());
  const GaussRule gy = gauss_legendre(gl_order, domain.lo.y(), domain.hi.y());
  const GaussRule gz = gauss_legendre(gl_order, domain.lo.z(), domain.hi.z());
  for (int i = 0; i < gl_order; ++i)
    for (int j = 0; j < gl_order; ++j)
      for (int k = 0; k < gl_order; ++k) {
        const Vec3 x(gx.nodes[i], gy.nodes[j], gz.nodes[k]);
        const Mat3& r = field(x).matrix();
        const Vec3 v = w(x);
        out.limit += gx.weights[i] * gy.weights[j] * gz.weights[k] * p.g * v.dot(r * t * r.transpose() * v);
      }
  out.gap_decreasing = true;
  // gaps at rounding level (the lattice sum can be exact) count as converged
  const double noise = 1e-12 * std::max(1.0, std::abs(out.limit));
  for (double eps : epsilons) {
    const ParticleEnsemble e = generate_periodic(eps, domain, p, reference, field);
    double sum = 0.0;
    for (const Particle& q : e.particles) {
      const Vec3 v = w(q.center);
      const Mat3& r = q.rotation.matrix();
      sum += v.dot(r * t * r.transpose() * v);
    }
    sum *= p.g * eps * eps * eps;
    const double gap = std::abs(sum - out.limit);
    if (!out.rows.empty() && !(gap < out.rows.back().gap || (gap <= noise && out.rows.back().gap <= noise)))
      out.gap_decreasing = false;
    out.rows.push_back({eps, e.size(), sum, gap});
  }
  return out;
}

}  // namespace ferronema
