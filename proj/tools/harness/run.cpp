#include <Eigen/Core>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include <ferronema/effective.hpp>
#include <ferronema/estimates.hpp>
#include <ferronema/field_io.hpp>
#include <ferronema/fit.hpp>
#include <ferronema/magnetics.hpp>
#include <ferronema/random.hpp>

#include "harness.hpp"

#ifndef FERRONEMA_VERSION
#define FERRONEMA_VERSION "unknown"
#endif

namespace ferronema::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_line(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    if (!std::isnan(v)) line += format_number(v);
  }
  return line + "\r\n";
}

// Strict decrease; consecutive values that are both negligible count as
// decreasing.
bool strictly_decreasing(const std::vector<double>& v) {
  constexpr double negligible = 1e-12;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) <= negligible && std::abs(v[i - 1]) <= negligible) continue;
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

class Session {
 public:
  Session(const RunConfig& cfg, const fs::path& out, bool quiet, RunResult& res)
      : cfg(cfg), out_(out), quiet_(quiet), res_(res) {}

  std::ofstream open(const std::string& name) {
    res_.files.push_back(name);
    return open_output(out_ / name);
  }

  void check(std::string name, bool passed, double value, std::string expectation) {
    if (!quiet_) fmt::print("{} {} = {} ({})\n", passed ? "PASS" : "FAIL", name, format_number(value), expectation);
    res_.checks.push_back({std::move(name), passed, value, std::move(expectation)});
  }

  template <class... Args>
  void note(fmt::format_string<Args...> f, Args&&... args) {
    if (!quiet_) fmt::print("{}\n", fmt::format(f, std::forward<Args>(args)...));
  }

  const RunConfig& cfg;

 private:
  fs::path out_;
  bool quiet_;
  RunResult& res_;
};

VectorFunction boundary_data(const RunConfig& cfg) {
  return [U = cfg.boundary](const Vec3&) { return U; };
}

ParticleEnsemble make_ensemble(const RunConfig& cfg, double eps) {
  if (cfg.ensemble == "random")
    return generate_random(eps, cfg.domain, cfg.params, cfg.reference(), cfg.seed);
  return generate_periodic(eps, cfg.domain, cfg.params, cfg.reference(), cfg.rotation.make());
}

struct Coefficients {
  MatrixField A;
  EffectiveMagnetization M;
};

Coefficients closed_forms(const RunConfig& cfg, const Grid& grid) {
  const Spheroid ref = cfg.reference();
  const AnchoringEigenvalues lam = anchoring_eigenvalues(ref);
  const RotationField field = cfg.rotation.make();
  const double vol = ref.volume();
  return {closed_form_A(field, cfg.params.g, lam.axial, lam.transverse, grid),
          closed_form_M(field, cfg.params.m * vol * vol, grid)};
}

// Minimizes from the harmonic lift and records every iterate's breakdown.
MinimizeResult minimize_logged(Session& s, const EnergyModel& model, const VectorField& layout,
                               const std::string& log_name) {
  VectorField start = harmonic_initial_guess(layout);
  std::vector<std::string> rows;
  auto row = [&rows](int it, const EnergyBreakdown& b, double gnorm) {
    rows.push_back(csv_line({double(it), b.bulk_gradient, b.bulk_potential, b.surface, b.magnetic_pair, b.zeeman,
                             b.total, gnorm}));
  };
  std::vector<Vec3> grad;
  const EnergyBreakdown b0 = model.evaluate(start.values, grad);
  double g0 = 0.0;
  const auto& w = model.node_weights();
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (w[i] > 0.0) g0 = std::max(g0, grad[i].cwiseAbs().maxCoeff() / w[i]);
  row(0, b0, g0);
  MinimizeOptions opt = s.cfg.minimize_options();
  opt.observer = row;
  MinimizeResult r = minimize(model, start, opt);
  if (!log_name.empty()) {
    std::ofstream os = s.open(log_name);
    os << "iteration,bulk_gradient,bulk_potential,surface,magnetic_pair,zeeman,total,grad_norm\r\n";
    for (const auto& line : rows) os << line;
  }
  return r;
}

void write_field(Session& s, const VectorField& f, const std::string& stem) {
  {
    std::ofstream os = s.open(stem + ".vtk");
    write_vtk(os, f, "u");
  }
  std::ofstream os = s.open(stem + ".csv");
  write_csv(os, f);
}

void run_micro_min(Session& s) {
  const RunConfig& cfg = s.cfg;
  const double eps = cfg.epsilons.front();
  const ParticleEnsemble e = make_ensemble(cfg, eps);
  {
    std::ofstream os = s.open("ensemble.json");
    os << ensemble_to_json(e);
  }
  const Grid grid = make_grid(cfg.domain, cfg.resolution);
  const VectorField layout = make_vector_field(grid, boundary_data(cfg), &e);
  const EnergyModel model = EnergyModel::micro(layout, e);
  s.note("micro-min: eps {} with {} particles on {}^3 nodes", format_number(eps), e.size(), cfg.resolution);
  const MinimizeResult r = minimize_logged(s, model, layout, "energy_breakdown.csv");
  write_field(s, r.field, "field");
  s.check("converged", r.converged, r.grad_norm, fmt::format("grad_norm <= {:g}", cfg.tol));
  s.check("energy", std::isfinite(r.energy.total), r.energy.total, "finite");
}

void run_homog_min(Session& s) {
  const RunConfig& cfg = s.cfg;
  const Grid grid = make_grid(cfg.domain, cfg.resolution);
  const Coefficients c = closed_forms(cfg, grid);
  const VectorField layout = make_vector_field(grid, boundary_data(cfg));
  const EnergyModel model = EnergyModel::homogenized(layout, c.A, c.M, cfg.params.h);
  const MinimizeResult r = minimize_logged(s, model, layout, "energy_breakdown.csv");
  write_field(s, r.field, "field");
  {
    std::ofstream os = s.open("A.vtk");
    write_vtk(os, c.A, "A");
  }
  {
    std::ofstream os = s.open("M.vtk");
    write_vtk(os, c.M, "M");
  }
  s.check("converged", r.converged, r.grad_norm, fmt::format("grad_norm <= {:g}", cfg.tol));
  if (cfg.params.g != 0.0 && cfg.params.m != 0.0) {
    const double coupling = mean_bulk_coupling(r.field, c.M.values);
    if (cfg.params.g > 0.0)
      s.check("mean_bulk_coupling", coupling < 0.1, coupling, "< 0.1 for g > 0");
    else
      s.check("mean_bulk_coupling", coupling > 0.9, coupling, "> 0.9 for g < 0");
  }
}

void run_converge(Session& s) {
  const RunConfig& cfg = s.cfg;
  const Grid grid = make_grid(cfg.domain, cfg.resolution);
  const VectorFunction U = boundary_data(cfg);
  const Coefficients c = closed_forms(cfg, grid);
  const VectorField base = make_vector_field(grid, U);
  const EnergyModel hm = EnergyModel::homogenized(base, c.A, c.M, cfg.params.h);
  const MinimizeResult homog = minimize_logged(s, hm, base, "");
  s.note("F0 = {} after {} iterations", format_number(homog.energy.total), homog.iterations);
  bool all_converged = homog.converged;

  std::vector<double> gaps, dists;
  std::ofstream os = s.open("converge.csv");
  os << "epsilon,E_eps,F0,L2_distance,energy_gap,n_particles,iterations\r\n";
  MinimizeResult last{};
  for (double eps : cfg.epsilons) {
    const ParticleEnsemble e = make_ensemble(cfg, eps);
    const VectorField layout = make_vector_field(grid, U, &e);
    const EnergyModel mm = EnergyModel::micro(layout, e);
    MinimizeResult micro = minimize_logged(s, mm, layout, "");
    all_converged = all_converged && micro.converged;
    const Comparison cmp = compare_minimizers(micro, homog, e);
    os << csv_line({eps, micro.energy.total, homog.energy.total, cmp.l2_distance, cmp.energy_gap, double(e.size()),
                    double(micro.iterations)});
    s.note("eps {}: E = {}, gap {}, L2 {}", format_number(eps), format_number(micro.energy.total),
           format_number(cmp.energy_gap), format_number(cmp.l2_distance));
    gaps.push_back(cmp.energy_gap);
    dists.push_back(cmp.l2_distance);
    last = std::move(micro);
  }
  os.close();
  write_field(s, homog.field, "field_homog");
  write_field(s, last.field, "field_micro");

  const BoundaryTermLimit bt =
      boundary_term_limit(U, cfg.params, cfg.epsilons, cfg.reference(), cfg.domain, cfg.rotation.make());
  std::ofstream bs = s.open("boundary_term.csv");
  bs << "epsilon,n_particles,boundary_sum,limit,gap\r\n";
  for (const auto& row : bt.rows)
    bs << csv_line({row.epsilon, double(row.n_particles), row.boundary_sum, bt.limit, row.gap});

  s.check("all_converged", all_converged, all_converged ? 1.0 : 0.0, "every minimization converged");
  s.check("energy_gap_decreasing", strictly_decreasing(gaps), gaps.back(), "strictly decreasing over the sweep");
  s.check("L2_distance_decreasing", strictly_decreasing(dists), dists.back(), "strictly decreasing over the sweep");
  s.check("boundary_gap_decreasing", bt.gap_decreasing, bt.rows.back().gap, "strictly decreasing over the sweep");
}

void run_magnet_scaling(Session& s) {
  const RunConfig& cfg = s.cfg;
  const ScalingParams& p = cfg.params;
  const InteractionStudy st =
      interaction_scaling_study(p, cfg.epsilons, cfg.reference(), cfg.domain, cfg.rotation.make());
  {
    std::ofstream os = s.open("magnet_scaling.csv");
    os << "epsilon,n_particles,pair_energy_total,zeeman_energy,slope_running\r\n";
    for (const auto& r : st.rows)
      os << csv_line({r.epsilon, double(r.n_particles), r.pair_energy_total, r.zeeman_energy, r.slope_running});
  }
  std::vector<double> eps, phi;
  std::ofstream os = s.open("magnet_pairs.csv");
  os << "epsilon,n_particles,pair_energy_max,pair_bound_total,volume_fraction\r\n";
  for (const auto& r : st.rows) {
    const double vf = volume_fraction(make_ensemble(cfg, r.epsilon));
    os << csv_line({r.epsilon, double(r.n_particles), r.pair_energy_max, r.pair_bound_total, vf});
    eps.push_back(r.epsilon);
    phi.push_back(vf);
  }
  const double slope_vf = loglog_slope(eps, phi);
  const double pair_expected = 6 * p.alpha + 2 * p.beta1 - 3;
  const double total_expected = 6 * p.alpha + 2 * p.beta1 - 9;
  const double vf_expected = 3 * (p.alpha - 1);
  s.check("slope_pair", std::abs(st.slope_pair - pair_expected) <= 0.3, st.slope_pair,
          fmt::format("{:g} +- 0.3", pair_expected));
  s.check("slope_total", std::abs(st.slope_total - total_expected) <= 0.3, st.slope_total,
          fmt::format("{:g} +- 0.3", total_expected));
  s.check("slope_volume_fraction", std::abs(slope_vf - vf_expected) <= 0.1, slope_vf,
          fmt::format("{:g} +- 0.1", vf_expected));
}

void run_cell_scaling(Session& s) {
  const CellSpec& c = s.cfg.cell;
  const CellScalingStudy st =
      cell_scaling_study(c.g, c.w, c.alpha, c.kappa, c.epsilons, make_spheroid(c.a, c.b), c.resolution);
  std::ofstream os = s.open("cell_scaling.csv");
  os << "epsilon,R,grad_energy,l2_energy,surf_energy,slope_grad,slope_l2,slope_surf\r\n";
  for (std::size_t i = 0; i < st.rows.size(); ++i) {
    const auto& r = st.rows[i];
    double sg = kNaN, sl = kNaN, ss = kNaN;
    if (i > 0) {
      const auto& q = st.rows[i - 1];
      const std::vector<double> x{q.epsilon, r.epsilon};
      sg = loglog_slope(x, {q.grad_energy, r.grad_energy});
      sl = loglog_slope(x, {q.l2_energy, r.l2_energy});
      ss = loglog_slope(x, {q.surf_energy, r.surf_energy});
    }
    os << csv_line({r.epsilon, r.radius, r.grad_energy, r.l2_energy, r.surf_energy, sg, sl, ss});
  }
  if (c.g == 0.0) {
    s.check("exact_zero", st.exact_zero, 0.0, "all energies identically zero");
    return;
  }
  const double floor = st.expected_slope - 0.5;
  const std::string expect = fmt::format(">= {:g}", floor);
  s.check("slope_grad", st.slope_grad >= floor, st.slope_grad, expect);
  s.check("slope_l2", st.slope_l2 >= floor, st.slope_l2, expect);
  s.check("slope_surf", st.slope_surf >= floor, st.slope_surf, expect);
}

void run_verify_lemmas(Session& s) {
  const RunConfig& cfg = s.cfg;
  const LemmaSpec& L = cfg.lemma;
  std::size_t violations = 0, cases = 0;
  {
    Rng rng(cfg.seed, "lemma1");
    std::ofstream os = s.open("lemma1.csv");
    os << "a,b,field,lambda,lhs,grad_term,l2_term,rhs,holds\r\n";
    for (const auto& [a, b] : L.spheroids) {
      const Spheroid sp = make_spheroid(a, b);
      for (int k = 0; k < L.fields; ++k) {
        const SmoothField u = random_polynomial_field(rng, L.degree, Vec3::Zero(), L.hat_ratio * a);
        for (double lambda : L.lambdas) {
          const Lemma1Result r = lemma1_check(u, sp, lambda, L.hat_ratio);
          os << csv_line({a, b, double(k), lambda, r.lhs, r.grad_term, r.l2_term, r.rhs, r.holds ? 1.0 : 0.0});
          ++cases;
          if (!r.holds) ++violations;
        }
      }
    }
  }
  s.note("lemma1: {} violations in {} cases", violations, cases);
  s.check("lemma1_violations", violations == 0, double(violations), fmt::format("0 of {}", cases));

  Rng rng(cfg.seed, "lemma2");
  const Vec3 center = 0.5 * (cfg.domain.lo + cfg.domain.hi);
  const double scale = 0.5 * cfg.domain.extent().maxCoeff();
  std::vector<SmoothField> fields;
  for (int k = 0; k < L.lemma2_fields; ++k) fields.push_back(random_polynomial_field(rng, L.degree, center, scale));
  const Grid grid = make_grid(cfg.domain, cfg.resolution);
  std::vector<double> per_eps;
  std::ofstream os = s.open("lemma2.csv");
  os << "epsilon,n_particles,field,lambda,surface,gradient,l2,constant\r\n";
  for (double eps : cfg.epsilons) {
    const ParticleEnsemble e = make_ensemble(cfg, eps);
    double c_max = 0.0;
    for (std::size_t k = 0; k < fields.size(); ++k)
      for (double lambda : L.lambdas) {
        const Lemma2Sample r = lemma2_constant(fields[k], e, lambda, grid);
        os << csv_line({eps, double(e.size()), double(k), lambda, r.surface, r.gradient, r.l2, r.constant});
        c_max = std::max(c_max, r.constant);
      }
    per_eps.push_back(c_max);
  }
  if (!per_eps.empty()) {
    const auto [lo, hi] = std::minmax_element(per_eps.begin(), per_eps.end());
    const double ratio = *lo > 0.0 ? *hi / *lo : kNaN;
    s.check("lemma2_constant_ratio", ratio < 2.0, ratio, "max/min of the fitted constant over eps < 2");
  }
}

void run_coeff_assemble(Session& s) {
  const RunConfig& cfg = s.cfg;
  const Grid grid = make_grid(cfg.domain, cfg.resolution);
  const Coefficients c = closed_forms(cfg, grid);
  const double eta = cfg.mollifier_width;
  std::vector<double> dev_a, dev_m;
  std::ofstream os = s.open("coeff.csv");
  os << "epsilon,n_particles,dev_A,dev_M,eta\r\n";
  MatrixField A_last;
  EffectiveMagnetization M_last;
  for (double eps : cfg.epsilons) {
    const ParticleEnsemble e = make_ensemble(cfg, eps);
    MatrixField A = assemble_A_eps(e, cfg.params, eta, grid);
    EffectiveMagnetization M = assemble_M_eps(e, cfg.params, eta, grid);
    dev_a.push_back(max_interior_deviation(A, c.A, eta));
    dev_m.push_back(max_interior_deviation(M, c.M, eta));
    os << csv_line({eps, double(e.size()), dev_a.back(), dev_m.back(), eta});
    A_last = std::move(A);
    M_last = std::move(M);
  }
  os.close();
  {
    std::ofstream vs = s.open("A.vtk");
    write_vtk(vs, A_last, "A");
  }
  {
    std::ofstream vs = s.open("M.vtk");
    write_vtk(vs, M_last, "M");
  }
  s.check("dev_A_decreasing", strictly_decreasing(dev_a), dev_a.back(), "strictly decreasing over the sweep");
  s.check("dev_M_decreasing", strictly_decreasing(dev_m), dev_m.back(), "strictly decreasing over the sweep");
}

std::string error_type_name(const std::exception& ex) {
  if (dynamic_cast<const ConfigError*>(&ex)) return "ConfigError";
  if (dynamic_cast<const GeometryError*>(&ex)) return "GeometryError";
  if (dynamic_cast<const DomainError*>(&ex)) return "DomainError";
  if (dynamic_cast<const AccuracyError*>(&ex)) return "AccuracyError";
  if (dynamic_cast<const ResolutionError*>(&ex)) return "ResolutionError";
  if (dynamic_cast<const PackingError*>(&ex)) return "PackingError";
  if (dynamic_cast<const CoercivityError*>(&ex)) return "CoercivityError";
  if (dynamic_cast<const StalledDescentError*>(&ex)) return "StalledDescentError";
  if (dynamic_cast<const NumericalError*>(&ex)) return "NumericalError";
  return "Error";
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os = open_output(path);
  os << j.dump(2) << '\n';
}

}  // namespace

bool RunResult::all_passed() const {
  return exit_code == 0 && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

int exit_code_for(const std::exception& ex) {
  if (dynamic_cast<const ConfigError*>(&ex) || dynamic_cast<const GeometryError*>(&ex)) return 2;
  if (dynamic_cast<const NumericalError*>(&ex) || dynamic_cast<const DomainError*>(&ex) ||
      dynamic_cast<const AccuracyError*>(&ex))
    return 3;
  if (dynamic_cast<const ResolutionError*>(&ex) || dynamic_cast<const PackingError*>(&ex)) return 4;
  return 1;
}

Comparison compare_minimizers(const MinimizeResult& micro, const MinimizeResult& homog, const ParticleEnsemble& e) {
  const Grid& grid = micro.field.grid;
  if (!(grid == homog.field.grid)) throw ConfigError("compare_minimizers: the two fields live on different grids");
  const VectorField mask = make_vector_field(grid, [](const Vec3&) { return Vec3::Zero().eval(); }, &e);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (mask.mask[i] == NodeKind::Particle) continue;
    sum += grid.weight(i) * (micro.field.values[i] - homog.field.values[i]).squaredNorm();
  }
  return {std::sqrt(sum), std::abs(micro.energy.total - homog.energy.total)};
}

double mean_bulk_coupling(const VectorField& u, const std::vector<Vec3>& M, double core) {
  const Grid& grid = u.grid;
  if (M.size() != grid.size()) throw ConfigError("mean_bulk_coupling: size mismatch");
  const Vec3 center = 0.5 * (grid.box.lo + grid.box.hi);
  const Vec3 half = core * 0.5 * grid.box.extent();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 d = (grid.position(i) - center).cwiseAbs();
    if ((d.array() > half.array() + 1e-12).any()) continue;
    const double uu = u.values[i].squaredNorm(), mm = M[i].squaredNorm();
    if (uu == 0.0 || mm == 0.0) continue;
    const double c = u.values[i].dot(M[i]);
    sum += c * c / (uu * mm);
    ++count;
  }
  return count ? sum / double(count) : kNaN;
}

RunResult run(const RunConfig& cfg, const fs::path& out, bool quiet) {
  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    res.exit_code = 2;
    res.error_type = "ConfigError";
    res.error = "cannot create output directory " + out.string();
    return res;
  }
  try {
    validate(cfg);
    Session s(cfg, out, quiet, res);
    switch (cfg.kind) {
      case ExperimentKind::MicroMin: run_micro_min(s); break;
      case ExperimentKind::HomogMin: run_homog_min(s); break;
      case ExperimentKind::Converge: run_converge(s); break;
      case ExperimentKind::MagnetScaling: run_magnet_scaling(s); break;
      case ExperimentKind::CellScaling: run_cell_scaling(s); break;
      case ExperimentKind::VerifyLemmas: run_verify_lemmas(s); break;
      case ExperimentKind::CoeffAssemble: run_coeff_assemble(s); break;
    }
  } catch (const std::exception& ex) {
    res.exit_code = exit_code_for(ex);
    res.error_type = error_type_name(ex);
    res.error = ex.what();
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  try {
    if (res.exit_code == 0) {
      json checks = json::array();
      for (const auto& c : res.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"expectation", c.expectation}});
      write_json(out / "summary.json",
                 {{"kind", kind_name(cfg.kind)}, {"passed", res.all_passed()}, {"checks", checks}});
      res.files.push_back("summary.json");
    } else {
      write_json(out / "error.json",
                 {{"error_type", res.error_type}, {"message", res.error}, {"exit_code", res.exit_code}});
      res.files.push_back("error.json");
    }
    json manifest = {
        {"kind", kind_name(cfg.kind)},
        {"config", json::parse(config_to_json(cfg))},
        {"versions",
         {{"ferronema", FERRONEMA_VERSION},
          {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"fmt", FMT_VERSION},
          {"compiler", __VERSION__}}},
        {"wall_time", res.wall_time},
        {"exit_code", res.exit_code},
        {"files", res.files},
    };
    write_json(out / "manifest.json", manifest);
  } catch (const std::exception& ex) {
    if (res.exit_code == 0) {
      res.exit_code = 1;
      res.error_type = "Error";
      res.error = ex.what();
    }
  }
  return res;
}

}  // namespace ferronema::harness
