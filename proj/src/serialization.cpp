#include "exospin/serialization.hpp"

#include <json.hpp>

#include "exospin/errors.hpp"

namespace exospin {
namespace {

using json = nlohmann::json;

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("expected a 3-vector", 0);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

}  // namespace

std::string to_json(const GeometryPreset& p) {
  const auto& g = p.geometry;
  json j;
  j["name"] = p.name;
  j["target_lambda_m"] = p.target_lambda;
  j["measurement_time_s"] = p.measurement_time;
  j["gap_m"] = g.gap;
  j["bias_field_T"] = g.bias_field;
  j["bias_angle_rad"] = g.bias_angle;
  j["sensor"] = {{"thickness_m", g.sensor.thickness},
                 {"illum_radius_m", g.sensor.illum_radius},
                 {"sigma_nv", vec(g.sensor.sigma_nv)},
                 {"nv_density_per_m3", g.sensor.nv_density},
                 {"contrast", g.sensor.contrast},
                 {"photon_prob", g.sensor.photon_prob},
                 {"duty", g.sensor.duty},
                 {"phase_time_s", g.sensor.phase_time}};
  j["mass"] = {{"radius_m", g.mass.radius},
               {"thickness_m", g.mass.thickness},
               {"nucleon_density_per_m3", g.mass.nucleon_density}};
  if (g.mass.spin) {
    j["mass"]["spin"] = {{"polarized_density_per_m3", g.mass.spin->polarized_density},
                         {"sigma_tm", vec(g.mass.spin->sigma_tm)},
                         {"nuclear_moment_J_per_T", g.mass.spin->nuclear_moment}};
  }
  j["trajectory"] = {{"amplitude_m", g.trajectory.amplitude},
                     {"frequency_Hz", g.trajectory.frequency},
                     {"direction", vec(g.trajectory.direction)}};
  return j.dump(2) + "\n";
}

GeometryPreset preset_from_json(std::string_view text) {
  return guarded([&] {
    const json j = json::parse(text);
    GeometryPreset p;
    p.name = j.at("name").get<std::string>();
    p.target_lambda = j.at("target_lambda_m").get<double>();
    p.measurement_time = j.at("measurement_time_s").get<double>();
    auto& g = p.geometry;
    g.gap = j.at("gap_m").get<double>();
    g.bias_field = j.at("bias_field_T").get<double>();
    g.bias_angle = j.at("bias_angle_rad").get<double>();
    const json& s = j.at("sensor");
    g.sensor.thickness = s.at("thickness_m").get<double>();
    g.sensor.illum_radius = s.at("illum_radius_m").get<double>();
    g.sensor.sigma_nv = vec(s.at("sigma_nv"));
    g.sensor.nv_density = s.at("nv_density_per_m3").get<double>();
    g.sensor.contrast = s.at("contrast").get<double>();
    g.sensor.photon_prob = s.at("photon_prob").get<double>();
    g.sensor.duty = s.at("duty").get<double>();
    g.sensor.phase_time = s.at("phase_time_s").get<double>();
    const json& m = j.at("mass");
    g.mass.radius = m.at("radius_m").get<double>();
    g.mass.thickness = m.at("thickness_m").get<double>();
    g.mass.nucleon_density = m.at("nucleon_density_per_m3").get<double>();
    if (m.contains("spin")) {
      const json& sp = m.at("spin");
      g.mass.spin = SpinPolarization{sp.at("polarized_density_per_m3").get<double>(),
                                     vec(sp.at("sigma_tm")),
                                     sp.at("nuclear_moment_J_per_T").get<double>()};
    }
    const json& t = j.at("trajectory");
    g.trajectory.amplitude = t.at("amplitude_m").get<double>();
    g.trajectory.frequency = t.at("frequency_Hz").get<double>();
    g.trajectory.direction = vec(t.at("direction"));
    validate(g);
    return p;
  });
}

std::string to_json(const SystematicsBudget& b) {
  json entries = json::array();
  for (const auto& e : b.entries) {
    json je;
    je["name"] = e.name;
    je["spurious_field"] = e.spurious_field;
    je["frequency_shift"] = e.frequency_shift ? json(*e.frequency_shift) : json(nullptr);
    je["mitigations"] = e.mitigations;
    je["ratio_to_delta_b_min"] = e.ratio_to_delta_b_min;
    entries.push_back(std::move(je));
  }
  json j;
  j["entries"] = std::move(entries);
  j["geometry_ref"] = b.geometry_ref;
  return j.dump(2) + "\n";
}

SystematicsBudget budget_from_json(std::string_view text) {
  return guarded([&] {
    const json j = json::parse(text);
    SystematicsBudget b;
    b.geometry_ref = j.at("geometry_ref").get<std::string>();
    for (const json& je : j.at("entries")) {
      BudgetEntry e;
      e.name = je.at("name").get<std::string>();
      e.spurious_field = je.at("spurious_field").get<double>();
      const json& df = je.at("frequency_shift");
      if (!df.is_null()) e.frequency_shift = df.get<double>();
      e.mitigations = je.at("mitigations").get<std::string>();
      e.ratio_to_delta_b_min = je.at("ratio_to_delta_b_min").get<double>();
      b.entries.push_back(std::move(e));
    }
    return b;
  });
}

}  // namespace exospin
