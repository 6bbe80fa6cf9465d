#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "delaysir/config.hpp"
#include "delaysir/errors.hpp"

using namespace delaysir;
using nlohmann::json;

namespace {
std::string field_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}
}  // namespace

TEST_CASE("defaults") {
  auto cfg = parse_config(json::object());
  CHECK(cfg.K == 20);
  CHECK(cfg.model.b == 0.05);
  CHECK(cfg.model.c == 0.01);
  CHECK(cfg.model.sigma == 1.0);
  CHECK(cfg.model.kernel.a == 100.0);
  CHECK(cfg.cubature_order == 40);
  CHECK(cfg.final_time == 15.0);
  CHECK_FALSE(cfg.m);
  CHECK(cfg.effective_cases().size() == 1);
  CHECK(cfg.grid().hx == doctest::Approx(1.0 / 19));
}

TEST_CASE("sections and schemes") {
  auto cfg = parse_config(json::parse(R"({
    "domain": {"A": 2, "K": 21},
    "kernel": {"delta": 0.1},
    "model": {"b": 0.1, "sigma": 0.5},
    "history": {"scale": 0, "center": [0.25, 0.75]},
    "scheme": ["euler", "rk2", {"name": "twice", "a": [[0, 0], [0.5, 0]], "b": [0.5, 0.5]}],
    "coupling": "frozen",
    "m": 7,
    "output": {"heatmap_scale": {"min": 0, "max": 5}},
    "cases": [{"sigma": 2}, {"delta": 0.12, "b": 0.2}]
  })"));
  CHECK(cfg.A == 2.0);
  CHECK(cfg.grid().hx == doctest::Approx(0.1));
  CHECK(cfg.history.scale == 0.0);
  CHECK(cfg.history.center.y == 0.75);
  REQUIRE(cfg.schemes.size() == 3);
  CHECK(cfg.schemes[2].build().ssp() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(cfg.coupling == DelayCoupling::frozen);
  CHECK(*cfg.m == 7);
  CHECK(cfg.heatmap_scale == HeatmapScaleMode::fixed);
  CHECK(cfg.heatmap_max == 5.0);
  auto cases = cfg.effective_cases();
  REQUIRE(cases.size() == 2);
  CHECK(cfg.model_for(cases[0]).sigma == 2.0);
  CHECK(cfg.model_for(cases[0]).kernel.delta == 0.1);
  CHECK(cfg.model_for(cases[1]).b == 0.2);

  // The resolved document parses back to the same configuration.
  auto again = parse_config(to_json(cfg));
  CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("errors name the offending key") {
  CHECK(field_of(json::parse(R"({"modle": {}})")) == "modle");
  CHECK(field_of(json::parse(R"({"model": {"beta": 1}})")) == "model.beta");
  CHECK(field_of(json::parse(R"({"model": {"b": -1}})")) == "model.b");
  CHECK(field_of(json::parse(R"({"domain": {"K": 1}})")) == "domain.K");
  CHECK(field_of(json::parse(R"({"cases": [{"delta": -0.1}]})")) == "cases[0].delta");
  CHECK(field_of(json::parse(R"({"scheme": "rk45"})")) == "scheme");
  CHECK(field_of(json::parse(R"({"m": 0})")) == "m");
  CHECK(field_of(json::parse(R"({"coupling": "lagged"})")) == "coupling");
  CHECK(field_of(json::parse(R"({"output": {"heatmap_scale": {"min": 3, "max": 1}}})")) ==
        "output.heatmap_scale");
  CHECK(field_of(json::parse(R"({"scan": {"m_floor": 4, "m_start": 2}})")) == "scan.m_start");
}

TEST_CASE("load_config") {
  auto dir = std::filesystem::temp_directory_path() / "delaysir_cfg";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << "{\n  // comment\n  \"final_time\": 3\n}\n";
    std::ofstream(dir / "bad.json") << "{ \"final_time\": }";
  }
  CHECK(load_config(dir / "ok.json").final_time == 3.0);
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}
