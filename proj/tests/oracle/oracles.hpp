// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. They share input types with the
// library but none of its physics or numerics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mbtvlc/channel.hpp"
#include "mbtvlc/scm_alloc.hpp"

namespace oracle {

using mbtvlc::Vec3;

constexpr double kC = 299792458.0;
constexpr double kPi = 3.14159265358979323846;

struct Arrival {
    double t;
    double p;
    int order;
};

struct Toy {
    Vec3 src;
    Vec3 axis;  // unit
    double order;
    double watts;
    Vec3 rx;
    Vec3 normal;  // unit
    double fov_deg;
    double area;
    double cpc_n;
    double cpc_acc_deg;
    bool literal_cpc;
};

inline double len(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double dotp(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Radiant intensity of the source toward a point, W/sr.
inline double intensity(const Toy& k, const Vec3& to)
{
    const Vec3 v = to - k.src;
    const double c = dotp(k.axis, v) / len(v);
    return c > 0 ? k.watts * (k.order + 1) / (2 * kPi) * std::pow(c, k.order) : 0.0;
}

// Effective collecting area of the detector for light arriving from a point.
inline double collect(const Toy& k, const Vec3& from)
{
    const Vec3 v = from - k.rx;
    const double d = len(v);
    const double c = dotp(k.normal, v) / d;
    const double psi = std::acos(std::min(1.0, c)) * 180.0 / kPi;
    if (k.fov_deg <= 0 || c <= 0 || psi > k.fov_deg + 1e-12) {
        return 0.0;
    }
    double ang = k.cpc_acc_deg;
    if (k.literal_cpc) {
        ang = std::max(std::min(psi, k.cpc_acc_deg), 1e-3 * 180.0 / kPi);
    }
    const double s = std::sin(ang * kPi / 180.0);
    return k.area * c * (k.cpc_n * k.cpc_n / (s * s)) / (d * d);
}

// Power a surface element intercepts from a point emitter of given intensity.
inline double intercept(const mbtvlc::SurfaceElement& e, const Vec3& from, double i_w_sr)
{
    const Vec3 v = from - e.center;
    const double d = len(v);
    const double c = dotp(e.normal, v) / d;
    return c > 0 ? i_w_sr * e.area * c / (d * d) : 0.0;
}

// Lambertian re-radiation of an element toward a point, W/sr.
inline double reradiate(const mbtvlc::SurfaceElement& e, double p_in, const Vec3& to)
{
    const Vec3 v = to - e.center;
    const double c = dotp(e.normal, v) / len(v);
    return c > 0 ? e.reflectivity * p_in * c / kPi : 0.0;
}

// LOS, then every one-bounce path in element order, then every two-bounce
// path grouped by the last element (only those the detector sees).
inline std::vector<Arrival> brute_force(const Toy& k, const std::vector<mbtvlc::SurfaceElement>& els)
{
    std::vector<Arrival> out;
    const double los = intensity(k, k.rx) * collect(k, k.src);
    if (los > 0) {
        out.push_back({len(k.rx - k.src) / kC, los, 0});
    }
    for (const auto& e : els) {
        const double p_in = intercept(e, k.src, intensity(k, e.center));
        const double p = reradiate(e, p_in, k.rx) * collect(k, e.center);
        if (p > 0) {
            out.push_back({(len(e.center - k.src) + len(k.rx - e.center)) / kC, p, 1});
        }
    }
    for (std::size_t j = 0; j < els.size(); ++j) {
        const auto& e2 = els[j];
        const double g2 = collect(k, e2.center);
        if (g2 <= 0 || e2.reflectivity <= 0 || reradiate(e2, 1.0, k.rx) <= 0) {
            continue;
        }
        for (std::size_t i = 0; i < els.size(); ++i) {
            if (i == j) {
                continue;
            }
            const auto& e1 = els[i];
            const double p1 = intercept(e1, k.src, intensity(k, e1.center));
            const double p2 = intercept(e2, e1.center, reradiate(e1, p1, e2.center));
            const double p = reradiate(e2, p2, k.rx) * g2;
            if (p > 0) {
                const double path = len(e1.center - k.src) + len(e2.center - e1.center) + len(k.rx - e2.center);
                out.push_back({path / kC, p, 2});
            }
        }
    }
    return out;
}

struct TraceComparison {
    std::size_t library = 0;
    std::size_t oracle = 0;
    double max_power_rel = 0.0;
    double max_delay_rel = 0.0;
    bool orders_match = true;
    std::size_t oracle_by_order[3] = {0, 0, 0};

    bool ok(double tol = 1e-12) const
    {
        return library == oracle && orders_match && max_power_rel <= tol && max_delay_rel <= tol;
    }
};

inline mbtvlc::Scene toy_scene()
{
    mbtvlc::RoomConfig c{2, 2, 2, {0.8, 0.6, 0.7, 0.5, 0.9, 0.3}};
    mbtvlc::DiscretizationConfig d;
    d.first_order_edge_m = 1.0;
    d.second_order_edge_m = 1.0;
    return mbtvlc::build_scene(mbtvlc::build_room(c), d);
}

inline std::vector<Toy> toy_cases()
{
    auto unit = [](Vec3 v) {
        const double n = len(v);
        return Vec3{v.x / n, v.y / n, v.z / n};
    };
    return {
        {{0.7, 1.2, 2.0}, unit({0.4, 0.2, -1}), 2.0, 1.0, {1.1, 0.8, 0.6}, unit({0.3, 0.3, 1}), 70.0, 1e-4, 1.5, 70.0, false},
        {{1.0, 1.0, 2.0}, {0, 0, -1}, 1.0, 2.5, {0.4, 1.5, 0.3}, {0, 0, 1}, 85.0, 1e-6, 1.0, 89.0, false},
        {{1.6, 0.3, 1.8}, unit({-0.5, 0.5, -1}), 0.65, 1.0, {0.5, 0.5, 1.0}, unit({-1, -0.2, 0.5}), 60.0, 2e-5, 1.7, 60.0, true},
    };
}

inline TraceComparison compare_with_library(Toy k, const mbtvlc::Scene& scene)
{
    mbtvlc::PointSource src{k.src, k.axis, k.order, k.watts};
    mbtvlc::ReceiverFace f;
    f.position = k.rx;
    f.elevation_deg = std::asin(std::clamp(k.normal.z, -1.0, 1.0)) * 180.0 / kPi;
    double az = std::atan2(k.normal.y, k.normal.x) * 180.0 / kPi;
    f.azimuth_deg = az < 0 ? az + 360.0 : az;
    f.fov_deg = k.fov_deg;
    f.area_m2 = k.area;
    f.cpc = {k.cpc_n, k.cpc_acc_deg, k.literal_cpc ? mbtvlc::CpcMode::Literal : mbtvlc::CpcMode::Ideal};
    // Use the normal exactly as the library rebuilds it from the two angles.
    k.normal = f.normal();
    const auto field = mbtvlc::build_source_field(src, scene);
    const auto view = mbtvlc::build_face_view(f, scene);
    const auto ir = mbtvlc::trace(field, view, scene);
    const auto ref = brute_force(k, scene.fine);

    TraceComparison c;
    c.library = ir.size();
    c.oracle = ref.size();
    for (const auto& r : ref) {
        ++c.oracle_by_order[r.order];
    }
    for (std::size_t i = 0; i < std::min(c.library, c.oracle); ++i) {
        const auto a = ir.at(i);
        c.orders_match = c.orders_match && static_cast<int>(a.order) == ref[i].order;
        c.max_power_rel = std::max(c.max_power_rel, std::abs(a.power_w - ref[i].p) / ref[i].p);
        c.max_delay_rel = std::max(c.max_delay_rel, std::abs(a.delay_s - ref[i].t) / ref[i].t);
    }
    return c;
}

// Monte-Carlo estimate of the tone detection rule: the desired tone must
// exceed the threshold and every undesired one must stay at or below it.
struct DetectionEstimate {
    double p_cds;
    double p_fus;
    double p_cd;
    std::size_t draws;
};

inline DetectionEstimate monte_carlo_detection(const mbtvlc::DetectionStats& s, double sigma_t, double threshold,
                                               int k, std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> ds(s.m_ds, std::sqrt(s.s_ds * s.s_ds + sigma_t * sigma_t));
    std::normal_distribution<double> us(s.m_us, std::sqrt(s.s_us * s.s_us + sigma_t * sigma_t));
    std::size_t cds = 0, fus = 0, cd = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cds += ds(rng) > threshold;
        fus += us(rng) > threshold;
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = ds(rng) > threshold;
        for (int j = 1; ok && j < k; ++j) {
            ok = us(rng) <= threshold;
        }
        cd += ok;
    }
    const double dn = static_cast<double>(n);
    return {static_cast<double>(cds) / dn, static_cast<double>(fus) / dn, static_cast<double>(cd) / dn, n};
}

inline double standard_error(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

// Crossing of the two hypothesis densities between the means, by bisection
// on the log-density difference.
inline double density_crossing(const mbtvlc::DetectionStats& s, double sigma_t)
{
    const double vd = s.s_ds * s.s_ds + sigma_t * sigma_t;
    const double vu = s.s_us * s.s_us + sigma_t * sigma_t;
    auto g = [&](double z) {
        return (-(z - s.m_ds) * (z - s.m_ds) / (2 * vd) - 0.5 * std::log(vd)) -
               (-(z - s.m_us) * (z - s.m_us) / (2 * vu) - 0.5 * std::log(vu));
    };
    double lo = std::min(s.m_ds, s.m_us), hi = std::max(s.m_ds, s.m_us);
    const double glo = g(lo);
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) > 0) == (glo > 0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
