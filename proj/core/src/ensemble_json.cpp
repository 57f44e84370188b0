#include <fmt/format.h>

#include <json.hpp>

#include "ferronema/ensemble.hpp"
#include "ferronema/errors.hpp"

namespace ferronema {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string vec(const Vec3& v) { return fmt::format("[{},{},{}]", num(v.x()), num(v.y()), num(v.z())); }

Vec3 read_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

std::string ensemble_to_json(const ParticleEnsemble& e) {
  const ScalingParams& p = e.params;
  std::string out = "{\n";
  out += fmt::format("  \"epsilon\": {},\n", num(e.epsilon));
  out += fmt::format("  \"domain\": {{\"lo\": {}, \"hi\": {}}},\n", vec(e.domain.lo), vec(e.domain.hi));
  out += fmt::format("  \"reference\": {{\"a\": {}, \"b\": {}}},\n", num(e.reference.a), num(e.reference.b));
  out += fmt::format(
      "  \"params\": {{\"alpha\": {}, \"beta1\": {}, \"beta2\": {}, \"gamma\": {}, \"g\": {}, "
      "\"m\": {}, \"h\": {}, \"d\": {}, \"D\": {}}},\n",
      num(p.alpha), num(p.beta1), num(p.beta2), num(p.gamma), num(p.g), num(p.m), vec(p.h), num(p.d), num(p.D));
  out += "  \"particles\": [";
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Mat3& r = e.particles[i].rotation.matrix();
    out += i ? ",\n    " : "\n    ";
    out += fmt::format("{{\"center\": {}, \"rotation\": [", vec(e.particles[i].center));
    for (int k = 0; k < 9; ++k) out += (k ? "," : "") + num(r(k / 3, k % 3));
    out += "]}";
  }
  out += e.size() ? "\n  ]\n}\n" : "]\n}\n";
  return out;
}

ParticleEnsemble ensemble_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("ensemble JSON: ") + ex.what());
  }
  try {
    ParticleEnsemble e;
    e.epsilon = j.at("epsilon").get<double>();
    e.domain.lo = read_vec(j.at("domain").at("lo"));
    e.domain.hi = read_vec(j.at("domain").at("hi"));
    e.reference = make_spheroid(j.at("reference").at("a").get<double>(), j.at("reference").at("b").get<double>());
    const auto& p = j.at("params");
    e.params.alpha = p.at("alpha").get<double>();
    e.params.beta1 = p.at("beta1").get<double>();
    e.params.beta2 = p.at("beta2").get<double>();
    e.params.gamma = p.at("gamma").get<double>();
    e.params.g = p.at("g").get<double>();
    e.params.m = p.at("m").get<double>();
    e.params.h = read_vec(p.at("h"));
    e.params.d = p.at("d").get<double>();
    e.params.D = p.at("D").get<double>();
    for (const auto& q : j.at("particles")) {
      const auto& r = q.at("rotation");
      if (!r.is_array() || r.size() != 9) throw ConfigError("rotation must have 9 entries");
      Mat3 m;
      for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = r[k].get<double>();
      e.particles.push_back({read_vec(q.at("center")), Rotation::from_matrix(m)});
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("ensemble JSON: ") + ex.what());
  }
}

}  // namespace ferronema
