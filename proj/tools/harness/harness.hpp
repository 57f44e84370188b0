#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <ferronema/corrector.hpp>
#include <ferronema/energy.hpp>
#include <ferronema/ensemble.hpp>

namespace ferronema::harness {

enum class ExperimentKind { MicroMin, HomogMin, Converge, MagnetScaling, CellScaling, VerifyLemmas, CoeffAssemble };

std::optional<ExperimentKind> parse_kind(std::string_view name);
std::string_view kind_name(ExperimentKind kind);

struct RotationFieldSpec {
  std::string kind = "identity";  // identity | twist | constant
  Vec3 axis = Vec3::UnitX();      // twist: rotation axis
  Vec3 direction = Vec3::UnitX(); // twist: gradient direction; constant: image of z
  double rate = 0.0;              // twist: angle per unit length

  RotationField make() const;
};

struct CellSpec {
  double g = 1.0;
  Vec3 w = Vec3::UnitZ();
  double alpha = 1.5;
  double kappa = 1.25;
  double a = 1.0, b = 1.0;
  std::vector<double> epsilons{0.05, 0.02, 0.01, 0.005};
  CellResolution resolution;
};

struct LemmaSpec {
  int fields = 50;
  int degree = 3;
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  double hat_ratio = 2.5;
  std::vector<std::pair<double, double>> spheroids{{1.0, 1.0}, {2.0, 1.0}, {5.0, 1.0}};
  int lemma2_fields = 5;
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::VerifyLemmas;
  ScalingParams params;
  double ref_a = 0.8, ref_b = 0.5;
  Box domain;
  int resolution = 32;
  std::vector<double> epsilons{0.25, 1.0 / 6.0, 0.125};
  std::uint64_t seed = 1;
  double mollifier_width = 0.5;
  RotationFieldSpec rotation;
  Vec3 boundary = Vec3::UnitZ();  // constant Dirichlet data U
  std::string ensemble = "periodic";  // periodic | random
  double tol = 1e-6;
  int max_iter = 50000;
  CellSpec cell;
  LemmaSpec lemma;
  std::string source;  // JSON text as read, echoed in the manifest

  Spheroid reference() const { return make_spheroid(ref_a, ref_b); }
  MinimizeOptions minimize_options() const;
};

// Parses a JSON document; missing keys keep their defaults. Throws
// ConfigError on malformed input.
RunConfig parse_config(const std::string& json_text, ExperimentKind kind);
RunConfig load_config(const std::filesystem::path& path, ExperimentKind kind);
// Every field of `cfg` in the input schema; parse_config of the result
// reproduces `cfg`.
std::string config_to_json(const RunConfig& cfg);
// Resolution, epsilon ordering and scaling relations.
void validate(const RunConfig& cfg);

struct Check {
  std::string name;
  bool passed;
  double value;
  std::string expectation;
};

struct RunResult {
  int exit_code = 0;
  std::vector<Check> checks;
  std::vector<std::string> files;
  std::string error_type;
  std::string error;
  double wall_time = 0.0;

  bool all_passed() const;
};

// Runs the experiment, writing CSV/VTK artifacts, manifest.json and
// summary.json (or error.json) into `out`. Never throws for library errors;
// they become the exit code.
RunResult run(const RunConfig& cfg, const std::filesystem::path& out, bool quiet = true);

// 2 configuration, 3 numerical, 4 resolution or packing, 1 anything else.
int exit_code_for(const std::exception& ex);

struct Comparison {
  double l2_distance;  // (int_{Omega \ P} |u_eps - u_0|^2)^{1/2}
  double energy_gap;   // |E_eps[u_eps] - F_0[u_0]|
};

Comparison compare_minimizers(const MinimizeResult& micro, const MinimizeResult& homog, const ParticleEnsemble& e);

// Mean of (M,u)^2 / (|M|^2 |u|^2) over nodes with |x - c|_inf <= core * half
// extent of the box, c its center. Nodes with u = 0 or M = 0 are skipped.
double mean_bulk_coupling(const VectorField& u, const std::vector<Vec3>& M, double core = 0.5);

}  // namespace ferronema::harness
