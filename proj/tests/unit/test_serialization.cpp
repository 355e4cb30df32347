#include <doctest.h>

#include <json.hpp>

#include "exospin/errors.hpp"
#include "exospin/serialization.hpp"

using namespace exospin;

namespace {

void check_same(const GeometryPreset& a, const GeometryPreset& b) {
  CHECK(a.name == b.name);
  CHECK(a.target_lambda == b.target_lambda);
  CHECK(a.measurement_time == b.measurement_time);
  const auto &g = a.geometry, &h = b.geometry;
  CHECK(g.gap == h.gap);
  CHECK(g.bias_field == h.bias_field);
  CHECK(g.bias_angle == h.bias_angle);
  CHECK(g.sensor.thickness == h.sensor.thickness);
  CHECK(g.sensor.illum_radius == h.sensor.illum_radius);
  CHECK(g.sensor.sigma_nv == h.sensor.sigma_nv);
  CHECK(g.sensor.nv_density == h.sensor.nv_density);
  CHECK(g.sensor.contrast == h.sensor.contrast);
  CHECK(g.sensor.photon_prob == h.sensor.photon_prob);
  CHECK(g.sensor.duty == h.sensor.duty);
  CHECK(g.sensor.phase_time == h.sensor.phase_time);
  CHECK(g.mass.radius == h.mass.radius);
  CHECK(g.mass.thickness == h.mass.thickness);
  CHECK(g.mass.nucleon_density == h.mass.nucleon_density);
  REQUIRE(g.mass.spin.has_value() == h.mass.spin.has_value());
  if (g.mass.spin) {
    CHECK(g.mass.spin->polarized_density == h.mass.spin->polarized_density);
    CHECK(g.mass.spin->sigma_tm == h.mass.spin->sigma_tm);
    CHECK(g.mass.spin->nuclear_moment == h.mass.spin->nuclear_moment);
  }
  CHECK(g.trajectory.amplitude == h.trajectory.amplitude);
  CHECK(g.trajectory.frequency == h.trajectory.frequency);
  CHECK(g.trajectory.direction == h.trajectory.direction);
}

}  // namespace

TEST_CASE("preset round trip is the identity") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const GeometryPreset p = preset(name);
    const std::string text = to_json(p);
    check_same(p, preset_from_json(text));
    CHECK(to_json(preset_from_json(text)) == text);
  }
  GeometryPreset odd = preset("polarized-1um");
  odd.geometry.sensor.sigma_nv = Vec3(1, 2, 2) / 3.0;
  odd.geometry.bias_angle = 0.1234567890123;
  check_same(odd, preset_from_json(to_json(odd)));
}

TEST_CASE("budget round trip and schema") {
  SystematicsBudget b;
  b.geometry_ref = "unpolarized-0.5um";
  b.entries.push_back({"shear_stress", 3.2e-10, 8.883, "vacuum", 12.5});
  b.entries.push_back({"surface_charge", 1.5e-10, std::nullopt, "coat", 1526.0});
  const std::string text = to_json(b);

  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("geometry_ref") == "unpolarized-0.5um");
  REQUIRE(j.at("entries").size() == 2);
  const auto& e0 = j.at("entries")[0];
  CHECK(e0.size() == 5);
  for (const char* key :
       {"name", "spurious_field", "frequency_shift", "mitigations", "ratio_to_delta_b_min"}) {
    CHECK(e0.contains(key));
  }
  CHECK(j.at("entries")[1].at("frequency_shift").is_null());

  const SystematicsBudget back = budget_from_json(text);
  CHECK(back.geometry_ref == b.geometry_ref);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].frequency_shift == 8.883);
  CHECK_FALSE(back.entries[1].frequency_shift.has_value());
  CHECK(back.entries[1].ratio_to_delta_b_min == 1526.0);
  CHECK(to_json(back) == text);
}

TEST_CASE("malformed json is a ParseError") {
  CHECK_THROWS_AS(preset_from_json("{"), ParseError);
  CHECK_THROWS_AS(preset_from_json("{\"name\": 3}"), ParseError);
  CHECK_THROWS_AS(budget_from_json("[]"), ParseError);
}
