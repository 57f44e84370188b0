#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "harness.hpp"

namespace ferronema::harness {

namespace {

using nlohmann::json;

constexpr std::pair<ExperimentKind, std::string_view> kKinds[] = {
    {ExperimentKind::MicroMin, "micro-min"},          {ExperimentKind::HomogMin, "homog-min"},
    {ExperimentKind::Converge, "converge"},           {ExperimentKind::MagnetScaling, "magnet-scaling"},
    {ExperimentKind::CellScaling, "cell-scaling"},    {ExperimentKind::VerifyLemmas, "verify-lemmas"},
    {ExperimentKind::CoeffAssemble, "coeff-assemble"},
};

Vec3 read_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(fmt::format("{} must be a 3-vector", what));
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void get_vec(const json& j, const char* key, Vec3& out) {
  if (j.contains(key)) out = read_vec(j.at(key), key);
}

}  // namespace

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKinds)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view kind_name(ExperimentKind kind) {
  for (const auto& [k, n] : kKinds)
    if (k == kind) return n;
  return "unknown";
}

RotationField RotationFieldSpec::make() const {
  if (kind == "identity") return identity_field();
  if (kind == "twist") return twist_field(axis, direction, rate);
  if (kind == "constant") return constant_field(direction);
  throw ConfigError("rotation_field.kind must be identity, twist or constant, got '" + kind + "'");
}

MinimizeOptions RunConfig::minimize_options() const {
  MinimizeOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return opt;
}

RunConfig parse_config(const std::string& json_text, ExperimentKind kind) {
  RunConfig cfg;
  cfg.kind = kind;
  cfg.source = json_text;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (j.contains("params")) {
      const json& p = j.at("params");
      get(p, "alpha", cfg.params.alpha);
      get(p, "beta1", cfg.params.beta1);
      get(p, "beta2", cfg.params.beta2);
      get(p, "gamma", cfg.params.gamma);
      get(p, "g", cfg.params.g);
      get(p, "m", cfg.params.m);
      get_vec(p, "h", cfg.params.h);
      get(p, "d", cfg.params.d);
      get(p, "D", cfg.params.D);
    }
    if (j.contains("reference")) {
      get(j.at("reference"), "a", cfg.ref_a);
      get(j.at("reference"), "b", cfg.ref_b);
    }
    if (j.contains("domain")) {
      get_vec(j.at("domain"), "lo", cfg.domain.lo);
      get_vec(j.at("domain"), "hi", cfg.domain.hi);
    }
    get(j, "resolution", cfg.resolution);
    get(j, "epsilons", cfg.epsilons);
    get(j, "seed", cfg.seed);
    get(j, "mollifier_width", cfg.mollifier_width);
    get(j, "ensemble", cfg.ensemble);
    if (j.contains("rotation_field")) {
      const json& r = j.at("rotation_field");
      get(r, "kind", cfg.rotation.kind);
      get_vec(r, "axis", cfg.rotation.axis);
      get_vec(r, "direction", cfg.rotation.direction);
      get(r, "rate", cfg.rotation.rate);
    }
    if (j.contains("boundary")) get_vec(j.at("boundary"), "U", cfg.boundary);
    if (j.contains("tolerances")) {
      get(j.at("tolerances"), "tol", cfg.tol);
      get(j.at("tolerances"), "max_iter", cfg.max_iter);
    }
    if (j.contains("cell")) {
      const json& c = j.at("cell");
      get(c, "g", cfg.cell.g);
      get_vec(c, "w", cfg.cell.w);
      get(c, "alpha", cfg.cell.alpha);
      get(c, "kappa", cfg.cell.kappa);
      get(c, "a", cfg.cell.a);
      get(c, "b", cfg.cell.b);
      get(c, "epsilons", cfg.cell.epsilons);
      get(c, "radial", cfg.cell.resolution.radial);
      get(c, "polar", cfg.cell.resolution.polar);
      get(c, "azimuthal", cfg.cell.resolution.azimuthal);
      get(c, "growth", cfg.cell.resolution.growth);
      get(c, "max_radius", cfg.cell.resolution.max_radius);
    }
    if (j.contains("lemma")) {
      const json& l = j.at("lemma");
      get(l, "fields", cfg.lemma.fields);
      get(l, "degree", cfg.lemma.degree);
      get(l, "lambdas", cfg.lemma.lambdas);
      get(l, "hat_ratio", cfg.lemma.hat_ratio);
      get(l, "lemma2_fields", cfg.lemma.lemma2_fields);
      if (l.contains("spheroids")) {
        cfg.lemma.spheroids.clear();
        for (const json& s : l.at("spheroids")) {
          if (!s.is_array() || s.size() != 2) throw ConfigError("lemma.spheroids entries must be [a, b]");
          cfg.lemma.spheroids.emplace_back(s[0].get<double>(), s[1].get<double>());
        }
      }
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, ExperimentKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), kind);
}

std::string config_to_json(const RunConfig& cfg) {
  auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  const ScalingParams& p = cfg.params;
  json spheroids = json::array();
  for (const auto& [a, b] : cfg.lemma.spheroids) spheroids.push_back({a, b});
  const CellResolution& r = cfg.cell.resolution;
  json j = {
      {"params",
       {{"alpha", p.alpha}, {"beta1", p.beta1}, {"beta2", p.beta2}, {"gamma", p.gamma}, {"g", p.g}, {"m", p.m},
        {"h", vec(p.h)}, {"d", p.d}, {"D", p.D}}},
      {"reference", {{"a", cfg.ref_a}, {"b", cfg.ref_b}}},
      {"domain", {{"lo", vec(cfg.domain.lo)}, {"hi", vec(cfg.domain.hi)}}},
      {"resolution", cfg.resolution},
      {"epsilons", cfg.epsilons},
      {"seed", cfg.seed},
      {"mollifier_width", cfg.mollifier_width},
      {"ensemble", cfg.ensemble},
      {"rotation_field",
       {{"kind", cfg.rotation.kind}, {"axis", vec(cfg.rotation.axis)}, {"direction", vec(cfg.rotation.direction)},
        {"rate", cfg.rotation.rate}}},
      {"boundary", {{"U", vec(cfg.boundary)}}},
      {"tolerances", {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}}},
      {"cell",
       {{"g", cfg.cell.g}, {"w", vec(cfg.cell.w)}, {"alpha", cfg.cell.alpha}, {"kappa", cfg.cell.kappa},
        {"a", cfg.cell.a}, {"b", cfg.cell.b}, {"epsilons", cfg.cell.epsilons}, {"radial", r.radial},
        {"polar", r.polar}, {"azimuthal", r.azimuthal}, {"growth", r.growth}, {"max_radius", r.max_radius}}},
      {"lemma",
       {{"fields", cfg.lemma.fields}, {"degree", cfg.lemma.degree}, {"lambdas", cfg.lemma.lambdas},
        {"hat_ratio", cfg.lemma.hat_ratio}, {"spheroids", spheroids}, {"lemma2_fields", cfg.lemma.lemma2_fields}}},
  };
  return j.dump(2);
}

void validate(const RunConfig& cfg) {
  require_valid_scalings(cfg.params);
  if (cfg.resolution < 8) throw ConfigError(fmt::format("resolution {} is below 8 nodes per direction", cfg.resolution));
  if (cfg.epsilons.empty()) throw ConfigError("epsilon list is empty");
  for (double e : cfg.epsilons)
    if (!(e > 0.0)) throw ConfigError("epsilon values must be positive");
  if (!std::is_sorted(cfg.epsilons.begin(), cfg.epsilons.end(), std::greater<>()) ||
      std::adjacent_find(cfg.epsilons.begin(), cfg.epsilons.end()) != cfg.epsilons.end())
    throw ConfigError("epsilon list must be sorted in strictly descending order");
  if (!std::is_sorted(cfg.cell.epsilons.begin(), cfg.cell.epsilons.end(), std::greater<>()))
    throw ConfigError("cell.epsilons must be sorted in descending order");
  if (cfg.ensemble != "periodic" && cfg.ensemble != "random")
    throw ConfigError("ensemble must be 'periodic' or 'random'");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 0) throw ConfigError("tolerances must be positive");
  make_spheroid(cfg.ref_a, cfg.ref_b);
  cfg.rotation.make();
}

}  // namespace ferronema::harness
