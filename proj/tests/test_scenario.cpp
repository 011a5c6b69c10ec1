#include <doctest.h>

#include <sstream>

#include "tandem/scenario.hpp"
#include "tandem/toml_lite.hpp"

using namespace tandem;
using nlohmann::json;

TEST_CASE("toml-lite parses the scenario subset") {
    const std::string text = R"(
# comment
name = "demo"
seed = 42
duration_s = 4.5
flag = true

[plant]
inertia = 2e-4
damping = 0.01

[gains.guidance]
kp = 5.0

[[preceptor.wheel1.moves]]
at = 1.0
target = 90.0
duration = 0.5

[[preceptor.wheel1.moves]]
after_event = "guidance_warning"
delay = 3.0
target = 0.0

[inline]
gear = { g1 = 1.0, g2 = 0.1 }
list = [1, 2.5, "x"]
)";
    const json j = parse_toml(text);
    CHECK(j.at("name") == "demo");
    CHECK(j.at("seed") == 42);
    CHECK(j.at("duration_s") == 4.5);
    CHECK(j.at("flag") == true);
    CHECK(j.at("plant").at("inertia") == 2e-4);
    CHECK(j.at("gains").at("guidance").at("kp") == 5.0);
    REQUIRE(j.at("preceptor").at("wheel1").at("moves").size() == 2);
    CHECK(j.at("preceptor").at("wheel1").at("moves")[0].at("at") == 1.0);
    CHECK(j.at("preceptor").at("wheel1").at("moves")[1].at("after_event") == "guidance_warning");
    CHECK(j.at("inline").at("gear").at("g2") == 0.1);
    CHECK(j.at("inline").at("list")[2] == "x");
}

TEST_CASE("toml-lite rejects malformed input") {
    CHECK_THROWS_AS(parse_toml("key"), ConfigError);
    CHECK_THROWS_AS(parse_toml("key = "), ConfigError);
    CHECK_THROWS_AS(parse_toml("[unclosed"), ConfigError);
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2"), ConfigError);
    CHECK_THROWS_AS(parse_toml("s = \"unterminated"), ConfigError);
    CHECK_THROWS_AS(parse_toml("v = 1.2.3"), ConfigError);
}

TEST_CASE("scenario defaults and round trip") {
    const Scenario sc = Scenario::from_json(json::object());
    CHECK(sc.loop_rate_hz == 500.0);
    CHECK(sc.encoder.counts_per_rev == 8192);
    CHECK(sc.gears[0].ratio() == doctest::Approx(0.1));
    CHECK(sc.arbitration.onset_threshold_deg == 0.02);
    CHECK(sc.arbitration.exit_dwell_cycles == 125);
    CHECK(sc.gains.guidance.kp == 5.0);
    CHECK(sc.enable.initial == 1.0);

    const Scenario back = Scenario::from_json(sc.to_json());
    CHECK(back.to_json() == sc.to_json());
}

TEST_CASE("unknown keys are rejected by name") {
    json j;
    j["name"] = "x";
    j["typo_key"] = 1;
    try {
        Scenario::from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        CHECK(std::string(ex.what()).find("typo_key") != std::string::npos);
    }

    json nested;
    nested["plant"] = {{"inertia", 1e-4}, {"wrong", 2}};
    CHECK_THROWS_AS(Scenario::from_json(nested), ConfigError);
}

TEST_CASE("script moves need exactly one anchor") {
    json j;
    j["preceptor"] = {{"wheel1", {{"moves", json::array({{{"target", 1.0}}})}}}};
    CHECK_THROWS_AS(Scenario::from_json(j), ConfigError);

    json both;
    both["preceptor"] = {
        {"wheel1",
         {{"moves", json::array({{{"at", 1.0}, {"after_event", "guidance_warning"},
                                  {"target", 1.0}}})}}}};
    CHECK_THROWS_AS(Scenario::from_json(both), ConfigError);
}

TEST_CASE("json and toml scenarios parse identically") {
    const std::string toml_text = R"(
name = "pair"
seed = 7
duration_s = 2.0

[gear]
g1 = 1.0
g2 = 0.2

[[preceptor.wheel2.moves]]
at = 0.5
target = -30.0
duration = 1.0
)";
    json jj;
    jj["name"] = "pair";
    jj["seed"] = 7;
    jj["duration_s"] = 2.0;
    jj["gear"] = {{"g1", 1.0}, {"g2", 0.2}};
    jj["preceptor"] = {
        {"wheel2",
         {{"moves", json::array({{{"at", 0.5}, {"target", -30.0}, {"duration", 1.0}}})}}}};

    const Scenario a = Scenario::from_json(parse_toml(toml_text));
    const Scenario b = Scenario::from_json(jj);
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("scenario validation catches bad configs") {
    json j;
    j["loop_rate_hz"] = 300;  // does not divide 1e6
    CHECK_THROWS_AS(Scenario::from_json(j), ConfigError);

    json zero_gear;
    zero_gear["gear"] = {{"g1", 0.0}, {"g2", 1.0}};
    CHECK_THROWS_AS(Scenario::from_json(zero_gear), ZeroGearRatio);

    json bad_colon;
    bad_colon["colon"] = {{"builtin", "does_not_exist"}};
    CHECK_THROWS_AS(Scenario::from_json(bad_colon), ConfigError);
}
