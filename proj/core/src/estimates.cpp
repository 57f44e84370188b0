#include "ferronema/estimates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "ferronema/quadrature.hpp"

namespace ferronema {

SmoothField constant_smooth_field(const Vec3& c) {
  return {[c](const Vec3&) { return c; }, [](const Vec3&) { return Mat3::Zero().eval(); }};
}

SmoothField random_polynomial_field(Rng& rng, int degree, const Vec3& origin, double scale) {
  struct Term {
    int p[3];
    Vec3 c;
  };
  std::vector<Term> terms;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j)
      for (int k = 0; i + j + k <= degree; ++k) {
        Term t{{i, j, k}, Vec3::Zero()};
        for (int a = 0; a < 3; ++a) t.c[a] = rng.uniform(-1.0, 1.0);
        terms.push_back(t);
      }
  // pw[a][k] = y_a^k
  auto powers = [origin, scale, degree](const Vec3& x) {
    const Vec3 y = (x - origin) / scale;
    std::array<std::vector<double>, 3> pw;
    for (int a = 0; a < 3; ++a) {
      pw[a].assign(degree + 1, 1.0);
      for (int k = 1; k <= degree; ++k) pw[a][k] = pw[a][k - 1] * y[a];
    }
    return pw;
  };
  auto value = [terms, powers](const Vec3& x) {
    const auto pw = powers(x);
    Vec3 v = Vec3::Zero();
    for (const Term& t : terms) v += t.c * (pw[0][t.p[0]] * pw[1][t.p[1]] * pw[2][t.p[2]]);
    return v;
  };
  auto jacobian = [terms, powers, scale](const Vec3& x) {
    const auto pw = powers(x);
    Mat3 jac = Mat3::Zero();
    for (const Term& t : terms)
      for (int a = 0; a < 3; ++a) {
        if (t.p[a] == 0) continue;
        double mono = t.p[a] / scale;
        for (int b = 0; b < 3; ++b) mono *= pw[b][b == a ? t.p[b] - 1 : t.p[b]];
        jac.col(a) += t.c * mono;
      }
    return jac;
  };
  return {value, jacobian};
}

Lemma1Result lemma1_check(const SmoothField& u, const Spheroid& s, double lambda, double hat_ratio, int n) {
  s.validate();
  if (!(hat_ratio > 2.0)) throw ConfigError(fmt::format("lemma1_check: hat ratio {} must exceed 2", hat_ratio));
  if (!(lambda > 0.0)) throw ConfigError("lemma1_check: lambda must be positive");
  const double A = s.b, B = s.a, hatA = hat_ratio * A;

  Lemma1Result r{};
  const SurfaceQuadrature q = make_surface_quadrature(s, 2 * n, 4 * n);
  for (std::size_t k = 0; k < q.size(); ++k) r.lhs += q.weights[k] * u.value(q.nodes[k]).squaredNorm();

  // Shell between s and its homothetic copy: local point rho (sin t cos p,
  // sin t sin p, (B/A) cos t), rho in [A, hat A], dV = (B/A) rho^2 d rho dcos dp.
  const GaussRule gr = gauss_legendre(2 * n, A, hatA);
  const GaussRule gt = gauss_legendre(n);
  const int np = 2 * n;
  const double dphi = 2.0 * std::numbers::pi / np;
  for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
    const double rho = gr.nodes[i];
    for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
      const double ct = gt.nodes[j], st = std::sqrt(1.0 - ct * ct);
      for (int k = 0; k < np; ++k) {
        const double phi = k * dphi;
        const Vec3 y(rho * st * std::cos(phi), rho * st * std::sin(phi), B / A * rho * ct);
        const Vec3 x = s.to_world(y);
        const double w = (B / A) * rho * rho * gr.weights[i] * gt.weights[j] * dphi;
        r.grad_term += w * u.jacobian(x).squaredNorm();
        r.l2_term += w * u.value(x).squaredNorm();
      }
    }
  }
  r.rhs = 3.0 * B * B * (1.0 + lambda) / A * r.grad_term +
          (1.0 + 1.0 / lambda) * 24.0 * A * A / (7.0 * hatA * hatA * hatA) * r.l2_term;
  r.holds = r.lhs <= r.rhs;
  return r;
}

Lemma2Sample lemma2_constant(const SmoothField& u, const ParticleEnsemble& e, double lambda, const Grid& grid,
                             int n_polar, int n_azimuthal) {
  Lemma2Sample out{};
  const ScalingParams& p = e.params;
  const double g_eps = p.g * std::pow(e.epsilon, p.gamma);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const SurfaceQuadrature q = make_surface_quadrature(e.realized(i), n_polar, n_azimuthal);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double v = u.value(q.nodes[k]).dot(q.normals[k]);
      out.surface += g_eps * q.weights[k] * v * v;
    }
  }
  const VectorField layout = make_vector_field(grid, [](const Vec3&) { return Vec3::Zero(); }, &e);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (layout.mask[idx] == NodeKind::Particle) continue;
    const Vec3 x = grid.position(idx);
    const double w = grid.weight(idx);
    out.gradient += w * u.jacobian(x).squaredNorm();
    out.l2 += w * u.value(x).squaredNorm();
  }
  const double denom = (1.0 + lambda) * (e.epsilon * out.gradient + out.l2 / lambda);
  out.constant = denom > 0.0 ? std::abs(out.surface) / denom : 0.0;
  return out;
}

UniformBoundStudy uniform_bound_study(const ScalingParams& p, const std::vector<double>& epsilons,
                                      const VectorFunction& U, const Spheroid& reference, const Box& domain,
                                      const RotationField& field, int grid_n, const MinimizeOptions& opt) {
  if (epsilons.size() < 3) throw ConfigError("uniform_bound_study needs at least 3 epsilon values");
  UniformBoundStudy study{};
  const Grid grid = make_grid(domain, grid_n);
  MicroOptions mo;
  mo.include_pair = false;
  double emin = INFINITY, emax = -INFINITY, hmin = INFINITY, hmax = -INFINITY;
  bool below = true;
  for (double eps : epsilons) {
    ScalingParams q = p;
    q.h = Vec3::Zero();
    const ParticleEnsemble e = generate_periodic(eps, domain, q, reference, field);
    const VectorField layout = make_vector_field(grid, U, &e);
    const EnergyModel model = EnergyModel::micro(layout, e, mo);
    const double e_U = model.evaluate(layout.values).total;
    const MinimizeResult res = minimize(model, harmonic_initial_guess(layout), opt);
    const Extension ext = extend(res.field);
    study.rows.push_back({eps, e.size(), e_U, res.energy.total, ext.h1_extended, ext.ratio(), res.iterations});
    emin = std::min(emin, std::abs(res.energy.total));
    emax = std::max(emax, std::abs(res.energy.total));
    hmin = std::min(hmin, ext.h1_extended);
    hmax = std::max(hmax, ext.h1_extended);
    below = below && res.energy.total <= e_U;
  }
  study.energy_ratio = emin > 0.0 ? emax / emin : INFINITY;
  study.h1_ratio = hmin > 0.0 ? hmax / hmin : INFINITY;
  study.bounded = below && study.energy_ratio < 2.0 && study.h1_ratio < 2.0;
  return study;
}

}  // namespace ferronema
