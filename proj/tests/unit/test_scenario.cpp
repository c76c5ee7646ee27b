// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mbtvlc/error.hpp"
#include "mbtvlc/scenario.hpp"

using namespace mbtvlc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("scenario")
{
    TEST_CASE("empty object gives the reference scenario")
    {
        const Scenario s = parse_scenario("{}");
        CHECK(s.system.mbt_positions.size() == 8);
        CHECK(s.system.support_positions.size() == 4);
        CHECK(s.seed == 1);
        CHECK(dump_scenario(s) == dump_scenario(Scenario{}));
    }

    TEST_CASE("malformed scenarios are configuration errors")
    {
        CHECK_THROWS_AS(parse_scenario(""), ConfigError);
        CHECK_THROWS_AS(parse_scenario("[]"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"bogus": 1})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"room": {"length_m": 8, "depth_m": 2}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"room": {"length_m": "eight"}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"room": {"width_m": -1}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"analysis": {"illumination": {"spacing_m": 0}}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"analysis": {"multiuser": {"cci_form": "cubic"}}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"light_units": {"mbt": {"positions": [[1, 1]]}}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"discretization": {"surfaces": ["roof"]}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario(R"({"analysis": {"impulse": {"receivers": ["niadr"]}}})"), ConfigError);
    }

    TEST_CASE("unknown keys are named in the message")
    {
        try {
            parse_scenario(R"({"receivers": {"adr": {"fov": 20}}})");
            FAIL("no error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("receivers.adr.fov") != std::string::npos);
        }
    }

    TEST_CASE("dump and parse round-trip")
    {
        Scenario s = multiuser_scenario();
        s.seed = 42;
        s.system.room.reflectivity[5] = 0.25;
        s.system.discretization.include[4] = false;
        s.multiuser.options.cci_form = CciForm::Literal;
        s.mobility.rho = {0.1, 0.7};
        s.calibration.second = SecondTone::BestFace;
        s.system.niadr.colors.blue = 0.22;
        const std::string text = dump_scenario(s);
        CHECK(dump_scenario(parse_scenario(text)) == text);
    }

    TEST_CASE("coarse mode scales both edges by four")
    {
        Scenario s;
        make_coarse(s);
        CHECK(s.system.discretization.first_order_edge_m == doctest::Approx(0.2));
        CHECK(s.system.discretization.second_order_edge_m == doctest::Approx(0.8));
    }

    TEST_CASE("emitted scenarios carry the reference layout and responsivities")
    {
        const fs::path a = fs::temp_directory_path() / "mbtvlc_emit_a";
        const fs::path b = fs::temp_directory_path() / "mbtvlc_emit_b";
        fs::remove_all(a);
        fs::remove_all(b);
        const auto pa = emit_reference_scenarios(a);
        const auto pb = emit_reference_scenarios(b);
        REQUIRE(pa.size() == 2);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            CHECK(slurp(pa[i]) == slurp(pb[i]));
        }

        const auto su = nlohmann::json::parse(slurp(a / "single_user.json"));
        const auto& pos = su["light_units"]["mbt"]["positions"];
        REQUIRE(pos.size() == 8);
        const double expect[8][3] = {{1, 1, 3}, {1, 3, 3}, {1, 5, 3}, {1, 7, 3},
                                     {3, 1, 3}, {3, 3, 3}, {3, 5, 3}, {3, 7, 3}};
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(pos[i][k].get<double>() == expect[i][k]);
            }
        }
        const auto mu = nlohmann::json::parse(slurp(a / "multiuser.json"));
        const auto& r = mu["receivers"]["niadr"]["responsivity"];
        CHECK(r["red"].get<double>() == 0.4);
        CHECK(r["yellow"].get<double>() == 0.35);
        CHECK(r["green"].get<double>() == 0.3);
        CHECK(r["blue"].get<double>() == 0.2);
        fs::remove_all(a);
        fs::remove_all(b);
    }

    TEST_CASE("bundled scenarios match the emitter byte for byte")
    {
        const fs::path dir = fs::path(MBTVLC_SOURCE_DIR) / "scenarios";
        CHECK(slurp(dir / "single_user.json") == dump_scenario(single_user_scenario()));
        CHECK(slurp(dir / "multiuser.json") == dump_scenario(multiuser_scenario()));
    }
}
