// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "mbtvlc/error.hpp"
#include "mbtvlc/scene.hpp"

using namespace mbtvlc;

namespace {

std::array<bool, kSurfaceCount> all_on() { return {true, true, true, true, true, true}; }

// Per-surface ceil(a/e) * ceil(b/e), written out by hand for the 8x4x3 room.
std::size_t hand_count(double e)
{
    auto c = [e](double a) { return static_cast<std::size_t>(std::ceil(a / e - 1e-9)); };
    return 2 * c(4) * c(8) + 2 * c(8) * c(3) + 2 * c(4) * c(3);
}

}  // namespace

TEST_SUITE("scene")
{
    TEST_CASE("default room carries wall, ceiling and floor reflectivities")
    {
        const Room r = build_room();
        CHECK(r.length() == 8.0);
        CHECK(r.width() == 4.0);
        CHECK(r.height() == 3.0);
        for (Surface s : {Surface::WallX0, Surface::WallX1, Surface::WallY0, Surface::WallY1, Surface::Ceiling}) {
            CHECK(r.reflectivity(s) == 0.8);
        }
        CHECK(r.reflectivity(Surface::Floor) == 0.3);
    }

    TEST_CASE("unit cube with zero reflectivity is valid")
    {
        RoomConfig c{1, 1, 1, {0, 0, 0, 0, 0, 0}};
        const Room r = build_room(c);
        for (Surface s : kAllSurfaces) {
            CHECK(r.reflectivity(s) == 0.0);
        }
    }

    TEST_CASE("non-positive extents and out-of-range reflectivity are rejected")
    {
        RoomConfig c;
        c.width_m = -1;
        CHECK_THROWS_AS(build_room(c), ConfigError);
        RoomConfig d;
        d.reflectivity[2] = 1.5;
        CHECK_THROWS_AS(build_room(d), ConfigError);
    }

    TEST_CASE("element count follows per-surface tiling")
    {
        const Room r = build_room();
        CHECK(discretize(r, 0.20, all_on()).size() == hand_count(0.20));
        CHECK(hand_count(0.20) == 3400);
        CHECK(discretize(r, 0.05, all_on()).size() == hand_count(0.05));
        // 136 m^2 of surface at 400 elements per m^2.
        CHECK(hand_count(0.05) == 54400);
    }

    TEST_CASE("ceiling-only tiling of a unit cube")
    {
        const Room r = build_room({1, 1, 1, {0.8, 0.8, 0.8, 0.8, 0.8, 0.3}});
        std::array<bool, kSurfaceCount> inc{};
        inc[static_cast<std::size_t>(Surface::Ceiling)] = true;
        const auto el = discretize(r, 0.5, inc);
        REQUIRE(el.size() == 4);
        for (const auto& e : el) {
            CHECK(e.area == doctest::Approx(0.25).epsilon(1e-15));
            CHECK(e.surface == Surface::Ceiling);
            CHECK(e.center.z == 1.0);
        }
    }

    TEST_CASE("areas sum to surface area; normals are unit and face the centre")
    {
        const Room r = build_room();
        const auto el = discretize(r, 0.25, all_on());
        std::array<double, kSurfaceCount> sum{};
        for (const auto& e : el) {
            sum[static_cast<std::size_t>(e.surface)] += e.area;
            CHECK(std::abs(norm(e.normal) - 1.0) <= 1e-12);
            CHECK(dot(e.normal, r.center() - e.center) >= 0.0);
        }
        for (Surface s : kAllSurfaces) {
            CHECK(std::abs(sum[static_cast<std::size_t>(s)] - r.area(s)) <= 1e-9 * r.area(s));
        }
    }

    TEST_CASE("element reflectivity is copied from the parent surface")
    {
        RoomConfig c;
        c.reflectivity = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
        const auto el = discretize(build_room(c), 1.0, all_on());
        for (const auto& e : el) {
            CHECK(e.reflectivity == c.reflectivity[static_cast<std::size_t>(e.surface)]);
        }
    }

    TEST_CASE("discretization is deterministic")
    {
        const Room r = build_room();
        const auto a = discretize(r, 0.2, all_on());
        const auto b = discretize(r, 0.2, all_on());
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].center == b[i].center);
            CHECK(a[i].area == b[i].area);
        }
    }

    TEST_CASE("edge larger than a surface is rejected")
    {
        CHECK_THROWS_AS(discretize(build_room({1, 1, 1}), 2.0, all_on()), ConfigError);
        CHECK_THROWS_AS(discretize(build_room(), 0.0, all_on()), ConfigError);
    }
}
