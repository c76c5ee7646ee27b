// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mbtvlc/emitters.hpp"
#include "mbtvlc/parallel.hpp"
#include "oracles.hpp"

using namespace mbtvlc;

TEST_CASE("trace matches the brute-force triple loop arrival for arrival")
{
    const Scene scene = oracle::toy_scene();
    REQUIRE(scene.fine.size() == 24);
    REQUIRE(scene.coarse.size() == 24);
    for (unsigned threads : {1u, 3u}) {
        set_thread_count(threads);
        for (const auto& toy : oracle::toy_cases()) {
            const auto c = oracle::compare_with_library(toy, scene);
            CAPTURE(threads);
            // Both reflection orders must be exercised.
            CHECK(c.oracle_by_order[1] > 0);
            CHECK(c.oracle_by_order[2] > c.oracle_by_order[1]);
            CHECK(c.library == c.oracle);
            CHECK(c.orders_match);
            CHECK(c.max_power_rel <= 1e-12);
            CHECK(c.max_delay_rel <= 1e-12);
        }
    }
    set_thread_count(1);
}

TEST_CASE("radiant intensity integrates to the transmitted power")
{
    for (double n : {0.65, 1.0, 11.0}) {
        Branch b;
        b.lambertian_order = n;
        b.ld_count = 2;
        b.ld_power_w = {0.8, 0.5, 0.3, 0.3};
        const double total = 2 * 1.9;
        // Composite Simpson over theta in [0, 90] degrees.
        const int m = 20000;
        const double h = (oracle::kPi / 2) / m;
        double acc = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double th = i * h;
            const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
            acc += w * radiant_intensity(b, th * 180.0 / oracle::kPi) * 2 * oracle::kPi * std::sin(th);
        }
        acc *= h / 3;
        CHECK(std::abs(acc - total) <= 0.005 * total);
    }
}

TEST_CASE("optimum threshold equals the numeric density crossing")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> um(0.0, 1.0), ud(1.0, 2.0), us(0.05, 0.25), ut(0.0, 0.1);
    for (int i = 0; i < 100; ++i) {
        DetectionStats s;
        s.m_us = um(rng);
        s.m_ds = s.m_us + (i % 10 == 9 ? -1 : 1) * ud(rng);
        s.s_ds = us(rng);
        s.s_us = us(rng);
        const double t = ut(rng) + 1e-3;
        const double z = opt_threshold(s, t);
        const double ref = oracle::density_crossing(s, t);
        CHECK(std::abs(z - ref) <= 1e-9 * std::abs(ref));
    }
}

TEST_CASE("detection probabilities match a Monte-Carlo estimate")
{
    struct Case {
        DetectionStats s;
        double sigma_t;
        int k;
    };
    const Case cases[] = {
        {{1.0, 0.2, 0.5, 0.25, 1000, false}, 0.05, 4},
        // Scale of the reference room's tone statistics.
        {{1.477e-6, 2.023e-7, 8.99e-7, 2.24e-7, 1000, false}, 9.78e-9, 56},
    };
    const std::size_t n = 10'000'000;
    std::uint64_t seed = 5;
    for (const auto& c : cases) {
        const auto p = detection_probabilities(c.s, c.sigma_t, c.k);
        const auto mc = oracle::monte_carlo_detection(c.s, c.sigma_t, p.threshold, c.k, n, seed++);
        CHECK(std::abs(mc.p_cds - p.p_cds) <= 3 * oracle::standard_error(p.p_cds, n));
        CHECK(std::abs(mc.p_fus - p.p_fus) <= 3 * oracle::standard_error(p.p_fus, n));
        CHECK(std::abs(mc.p_cd - p.p_cd) <= 3 * oracle::standard_error(p.p_cd, n));
    }
}
