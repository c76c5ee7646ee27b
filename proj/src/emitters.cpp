// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/emitters.hpp"

#include <algorithm>
#include <cmath>

#include "mbtvlc/error.hpp"

namespace mbtvlc {

std::string_view color_name(Color c)
{
    switch (c) {
    case Color::Red: return "red";
    case Color::Yellow: return "yellow";
    case Color::Green: return "green";
    case Color::Blue: return "blue";
    }
    return "unknown";
}

double ColorPower::operator[](Color c) const
{
    switch (c) {
    case Color::Red: return red;
    case Color::Yellow: return yellow;
    case Color::Green: return green;
    case Color::Blue: return blue;
    }
    return 0.0;
}

ColorPower Branch::total_power_w() const
{
    const double k = ld_count;
    return {ld_power_w.red * k, ld_power_w.yellow * k, ld_power_w.green * k, ld_power_w.blue * k};
}

namespace {

// Horizontal run per metre of drop, 1 / tan(El).
double run_per_drop(double elevation_deg)
{
    require(elevation_deg > 0.0 && elevation_deg <= 90.0, "branch elevation must lie in (0, 90] degrees");
    if (elevation_deg == 90.0) {
        return 0.0;
    }
    return 1.0 / std::tan(deg_to_rad(elevation_deg));
}

}  // namespace

Vec3 point_p(const Branch& branch)
{
    const double d = run_per_drop(branch.elevation_deg);
    const double az = deg_to_rad(branch.azimuth_deg);
    return {branch.position.x + std::cos(az) * d, branch.position.y + std::sin(az) * d,
            branch.position.z - 1.0};
}

Vec3 branch_direction(const Branch& branch)
{
    return normalized(point_p(branch) - branch.position);
}

double irradiance_angle_deg(const Branch& branch, const Vec3& target)
{
    const double d = run_per_drop(branch.elevation_deg);
    const Vec3 p = point_p(branch);
    const double pt2 = 1.0 + d * d;
    const double rt2 = dot(target - branch.position, target - branch.position);
    const double pr2 = dot(p - target, p - target);
    if (!(rt2 > 0.0)) {
        throw ConfigError("irradiance angle undefined: target coincides with the branch");
    }
    const double c = (pt2 + rt2 - pr2) / (2.0 * std::sqrt(pt2) * std::sqrt(rt2));
    return rad_to_deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

double semi_angle_deg(double lambertian_order)
{
    require(lambertian_order > 0.0, "Lambertian order must be positive for a semi-angle");
    return rad_to_deg(std::acos(std::pow(2.0, -1.0 / lambertian_order)));
}

double lambertian_pattern(double order, double cos_theta)
{
    if (!(cos_theta > 0.0)) {
        return 0.0;
    }
    return (order + 1.0) / (2.0 * kPi) * std::pow(cos_theta, order);
}

double radiant_intensity(const Branch& branch, double theta_deg, std::optional<Color> color)
{
    if (theta_deg > 90.0) {
        return 0.0;
    }
    const double per_ld = color ? branch.ld_power_w[*color] : branch.ld_power_w.total();
    return per_ld * branch.ld_count *
           lambertian_pattern(branch.lambertian_order, std::cos(deg_to_rad(theta_deg)));
}

double luminous_intensity(const Branch& branch, double theta_deg)
{
    if (theta_deg >= 90.0) {
        return 0.0;
    }
    return branch.ld_intensity_cd * branch.ld_count *
           std::pow(std::cos(deg_to_rad(theta_deg)), branch.lambertian_order);
}

UnitTemplate mbt_template()
{
    UnitTemplate t;
    t.branch_angles_deg = {{0, 90}, {0, 60}, {60, 60}, {120, 60}, {180, 60}, {240, 60}, {300, 60}};
    t.lambertian_order = 11.0;
    t.lds_per_branch = 2;
    return t;
}

UnitTemplate support_template()
{
    UnitTemplate t;
    t.branch_angles_deg = {{0, 90}};
    t.lambertian_order = 0.65;
    t.lds_per_branch = 9;
    return t;
}

std::vector<LightUnit> build_units(const std::vector<Vec3>& mbt_positions, const UnitTemplate& mbt,
                                   const std::vector<Vec3>& support_positions,
                                   const UnitTemplate& support)
{
    std::vector<LightUnit> units;
    int next_id = 0;
    int unit_id = 0;
    auto add = [&](const Vec3& pos, const UnitTemplate& t, UnitKind kind) {
        require(!t.branch_angles_deg.empty(), "a light unit needs at least one branch");
        require(t.lds_per_branch >= 1, "a branch needs at least one laser diode");
        require(t.lambertian_order >= 0.0, "Lambertian order must be non-negative");
        LightUnit u{kind, unit_id, {}};
        for (const auto& [az, el] : t.branch_angles_deg) {
            require(az >= 0.0 && az < 360.0, "branch azimuth must lie in [0, 360) degrees");
            require(el > 0.0 && el <= 90.0, "branch elevation must lie in (0, 90] degrees");
            Branch b;
            b.position = pos;
            b.azimuth_deg = az;
            b.elevation_deg = el;
            b.lambertian_order = t.lambertian_order;
            b.ld_power_w = t.ld_power_w;
            b.ld_count = t.lds_per_branch;
            b.ld_intensity_cd = t.ld_intensity_cd;
            b.id = next_id++;
            b.unit = unit_id;
            b.carries_data = kind == UnitKind::Mbt;
            u.branches.push_back(b);
        }
        units.push_back(std::move(u));
        ++unit_id;
    };
    for (const auto& p : mbt_positions) {
        add(p, mbt, UnitKind::Mbt);
    }
    for (const auto& p : support_positions) {
        add(p, support, UnitKind::Support);
    }
    return units;
}

std::vector<Vec3> reference_mbt_positions()
{
    return {{1, 1, 3}, {1, 3, 3}, {1, 5, 3}, {1, 7, 3}, {3, 1, 3}, {3, 3, 3}, {3, 5, 3}, {3, 7, 3}};
}

std::vector<Vec3> reference_support_positions() { return {{2, 1, 3}, {2, 3, 3}, {2, 5, 3}, {2, 7, 3}}; }

std::vector<LightUnit> reference_layout(bool with_support)
{
    return build_units(reference_mbt_positions(), mbt_template(),
                       with_support ? reference_support_positions() : std::vector<Vec3>{}, support_template());
}

std::vector<Branch> all_branches(const std::vector<LightUnit>& units)
{
    std::vector<Branch> out;
    for (const auto& u : units) {
        out.insert(out.end(), u.branches.begin(), u.branches.end());
    }
    std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) { return a.id < b.id; });
    return out;
}

std::vector<Branch> communication_branches(const std::vector<LightUnit>& units)
{
    std::vector<Branch> out;
    for (const auto& b : all_branches(units)) {
        if (b.carries_data) {
            out.push_back(b);
        }
    }
    return out;
}

double footprint_overlap(const Branch& a, const Branch& b, double plane_z, double pitch_m)
{
    const double cos_a = std::cos(deg_to_rad(semi_angle_deg(a.lambertian_order)));
    const double cos_b = std::cos(deg_to_rad(semi_angle_deg(b.lambertian_order)));
    const Vec3 da = branch_direction(a);
    const Vec3 db = branch_direction(b);
    auto inside = [plane_z](const Branch& br, const Vec3& dir, double cos_limit, double x, double y) {
        const Vec3 v = Vec3{x, y, plane_z} - br.position;
        return dot(v, dir) >= cos_limit * norm(v);
    };
    // Bounding box of both footprints: cone rims reach at most drop * tan(axis + semi).
    double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
    for (const auto* br : {&a, &b}) {
        const double drop = br->position.z - plane_z;
        require(drop > 0, "footprint plane must lie below the branches");
        const double tilt = 90.0 - br->elevation_deg + semi_angle_deg(br->lambertian_order);
        require(tilt < 89.0, "footprint is unbounded on the plane");
        const double reach = drop * std::tan(deg_to_rad(tilt));
        lo_x = std::min(lo_x, br->position.x - reach);
        hi_x = std::max(hi_x, br->position.x + reach);
        lo_y = std::min(lo_y, br->position.y - reach);
        hi_y = std::max(hi_y, br->position.y + reach);
    }
    std::size_t both = 0, either = 0;
    for (double x = lo_x; x <= hi_x; x += pitch_m) {
        for (double y = lo_y; y <= hi_y; y += pitch_m) {
            const bool ia = inside(a, da, cos_a, x, y);
            const bool ib = inside(b, db, cos_b, x, y);
            both += ia && ib;
            either += ia || ib;
        }
    }
    return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace mbtvlc
