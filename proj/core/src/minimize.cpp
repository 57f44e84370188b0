#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "ferronema/energy.hpp"

namespace ferronema {

namespace {

double dot(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

double eval_poly(const Quartic& c, double t) { return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4]))); }

// Global minimizer over t > 0 of the quartic, or a positive fallback step.
double quartic_step(const Quartic& c) {
  double t0;
  if (c[2] > 0.0) t0 = -c[1] / (2.0 * c[2]);
  else if (c[4] > 0.0) t0 = std::cbrt(std::abs(c[1]) / c[4]);
  else return 1.0;
  // p'(t0 s) = b0 + b1 s + b2 s^2 + b3 s^3
  const double b0 = c[1], b1 = 2.0 * c[2] * t0, b2 = 3.0 * c[3] * t0 * t0, b3 = 4.0 * c[4] * t0 * t0 * t0;
  const double scale = std::max({std::abs(b0), std::abs(b1), std::abs(b2), std::abs(b3)});
  std::vector<double> roots;
  if (std::abs(b3) > 1e-13 * scale) {
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    comp(0, 2) = -b0 / b3;
    comp(1, 2) = -b1 / b3;
    comp(2, 2) = -b2 / b3;
    const Eigen::Vector3cd ev = comp.eigenvalues();
    for (int i = 0; i < 3; ++i)
      if (std::abs(ev[i].imag()) <= 1e-9 * std::max(1.0, std::abs(ev[i].real()))) roots.push_back(ev[i].real());
  } else if (std::abs(b2) > 1e-13 * scale) {
    const double disc = b1 * b1 - 4.0 * b2 * b0;
    if (disc >= 0.0) {
      roots.push_back((-b1 + std::sqrt(disc)) / (2.0 * b2));
      roots.push_back((-b1 - std::sqrt(disc)) / (2.0 * b2));
    }
  } else if (b1 != 0.0) {
    roots.push_back(-b0 / b1);
  }
  double best_t = t0, best = eval_poly(c, t0);
  for (double s : roots) {
    if (!(s > 0.0)) continue;
    const double t = t0 * s;
    const double val = eval_poly(c, t);
    if (val < best) best = val, best_t = t;
  }
  return best_t;
}

double preconditioned_sup(const EnergyModel& model, const std::vector<Vec3>& g, std::vector<Vec3>& z) {
  const auto& w = model.node_weights();
  const auto& mask = model.mask();
  z.resize(g.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask[i] != NodeKind::Fluid) {
      z[i].setZero();
      continue;
    }
    z[i] = g[i] / w[i];
    sup = std::max(sup, z[i].cwiseAbs().maxCoeff());
  }
  return sup;
}

void check_anchoring_monitor(const EnergyModel& model, const EnergyBreakdown& b) {
  if (!model.negative_anchoring()) return;
  const double bulk = b.bulk_gradient + b.bulk_potential;
  if (-b.surface > 10.0 * std::max(bulk, model.fluid_volume()))
    throw NumericalError(fmt::format(
        "negative anchoring dominates: surface {:.6g} vs bulk {:.6g} (fluid volume {:.6g}); grid under-resolved",
        b.surface, bulk, model.fluid_volume()));
}

}  // namespace

MinimizeResult minimize(const EnergyModel& model, const VectorField& f0, const MinimizeOptions& opt) {
  if (!(f0.grid == model.grid())) throw ConfigError("minimize: field grid does not match the energy");
  MinimizeResult res;
  res.field = f0;
  res.field.mask = model.mask();
  res.field.enforce_dirichlet();
  std::vector<Vec3>& u = res.field.values;
  const std::size_t n = u.size();

  std::vector<Vec3> g, z, d(n), trial(n), g_new, z_new;
  EnergyBreakdown eb = model.evaluate(u, g);
  double gnorm = preconditioned_sup(model, g, z);
  for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
  bool steepest = true;
  int it = 0;
  while (gnorm > opt.tol && it < opt.max_iter) {
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
      slope = dot(g, d);
      steepest = true;
    }
    const Quartic poly = model.line_polynomial(u, d, eb.total, slope);
    double t = quartic_step(poly);
    EnergyBreakdown trial_eb;
    bool accepted = false;
    // Rounding band of a sum over all nodes; below it energy differences
    // carry no information and the exact line polynomial decides.
    const double noise = 1e-12 * std::max(1.0, std::abs(eb.total));
    for (int back = 0; back < 60; ++back) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + t * d[i];
      trial_eb = model.evaluate(trial, g_new);
      const double predicted = t * (poly[1] + t * (poly[2] + t * (poly[3] + t * poly[4])));
      if (trial_eb.total <= eb.total + 1e-4 * t * slope ||
          (predicted <= 1e-4 * t * slope && std::abs(predicted) < noise && trial_eb.total <= eb.total + noise)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!steepest) {
        for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
        steepest = true;
        continue;
      }
      throw StalledDescentError(
          fmt::format("line search failed at iteration {} (energy {:.17g}, gradient {:.3g})", it, eb.total, gnorm),
          res.field);
    }
    u.swap(trial);
    eb = trial_eb;
    if (opt.monitor_negative_anchoring) check_anchoring_monitor(model, eb);
    const double gnorm_new = preconditioned_sup(model, g_new, z_new);
    // Polak-Ribiere+
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += z_new[i].dot(g_new[i] - g[i]);
      den += z[i].dot(g[i]);
    }
    const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
    for (std::size_t i = 0; i < n; ++i) d[i] = -z_new[i] + beta * d[i];
    steepest = beta == 0.0;
    g.swap(g_new);
    z.swap(z_new);
    gnorm = gnorm_new;
    ++it;
    if (opt.observer) opt.observer(it, eb, gnorm);
  }
  res.iterations = it;
  res.grad_norm = gnorm;
  res.energy = eb;
  res.converged = gnorm <= opt.tol;
  return res;
}

VectorField harmonic_initial_guess(const VectorField& f) {
  const Grid& grid = f.grid;
  const std::size_t n = grid.size();
  std::vector<int> unknown(n, -1);
  int count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (f.mask[i] == NodeKind::Fluid) unknown[i] = count++;
  VectorField out = f;
  out.enforce_dirichlet();
  if (count == 0) return out;

  const Vec3 h = grid.spacing();
  const double coef[3] = {1.0 / (h.x() * h.x()), 1.0 / (h.y() * h.y()), 1.0 / (h.z() * h.z())};
  const std::size_t stride[3] = {1, static_cast<std::size_t>(grid.n[0]),
                                 static_cast<std::size_t>(grid.n[0]) * grid.n[1]};
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(count) * 7);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(count, 3);
  for (int k = 0; k < grid.n[2]; ++k)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int i = 0; i < grid.n[0]; ++i) {
        const std::size_t p = grid.index(i, j, k);
        const int row = unknown[p];
        if (row < 0) continue;
        const int ijk[3] = {i, j, k};
        double diag = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int s : {-1, 1}) {
            const int m = ijk[a] + s;
            if (m < 0 || m >= grid.n[a]) continue;
            const std::size_t q = s > 0 ? p + stride[a] : p - stride[a];
            if (f.mask[q] == NodeKind::Particle) continue;
            diag += coef[a];
            if (unknown[q] >= 0) trips.emplace_back(row, unknown[q], -coef[a]);
            else rhs.row(row) += coef[a] * out.values[q].transpose();
          }
        trips.emplace_back(row, row, diag > 0.0 ? diag : 1.0);
      }
  Eigen::SparseMatrix<double> lap(count, count);
  lap.setFromTriplets(trips.begin(), trips.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20 * count);
  cg.compute(lap);
  Eigen::MatrixXd guess(count, 3);
  for (std::size_t i = 0; i < n; ++i)
    if (unknown[i] >= 0) guess.row(unknown[i]) = f.values[i].transpose();
  const Eigen::MatrixXd sol = cg.solveWithGuess(rhs, guess);
  for (std::size_t i = 0; i < n; ++i)
    if (unknown[i] >= 0) out.values[i] = sol.row(unknown[i]).transpose();
  return out;
}

}  // namespace ferronema
