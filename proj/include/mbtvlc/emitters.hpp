// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "mbtvlc/geometry.hpp"

namespace mbtvlc {

enum class Color : unsigned char { Red, Yellow, Green, Blue };

inline constexpr std::array<Color, 4> kAllColors = {Color::Red, Color::Yellow, Color::Green, Color::Blue};

std::string_view color_name(Color c);

// Optical power per laser diode colour, watts.
struct ColorPower {
    double red = 0.0;
    double yellow = 0.0;
    double green = 0.0;
    double blue = 0.0;

    double operator[](Color c) const;
    double total() const { return red + yellow + green + blue; }
};

// Table III split of one 1.9 W RYGB laser diode.
inline constexpr ColorPower kRygbLdPower{0.8, 0.5, 0.3, 0.3};

// One transmitter branch: a group of identical, co-located, co-aimed
// Lambertian laser diodes.
struct Branch {
    Vec3 position;
    double azimuth_deg = 0.0;
    double elevation_deg = 90.0;  // from the horizontal; 90 points straight down
    double lambertian_order = 1.0;
    ColorPower ld_power_w = kRygbLdPower;
    int ld_count = 1;
    double ld_intensity_cd = 162.0;  // peak luminous intensity per diode
    int id = 0;                      // global id; unit_index * 7 + branch_index for MBT units
    int unit = 0;
    bool carries_data = true;

    ColorPower total_power_w() const;
};

enum class UnitKind { Mbt, Support };

struct LightUnit {
    UnitKind kind = UnitKind::Mbt;
    int id = 0;
    std::vector<Branch> branches;
};

// Unit vector along the branch axis, pointing down into the room.
Vec3 branch_direction(const Branch& branch);

// The point one metre below the branch on its axis construction.
Vec3 point_p(const Branch& branch);

// Irradiance angle from the law-of-cosines construction through point P.
double irradiance_angle_deg(const Branch& branch, const Vec3& target);

// Half-power semi-angle of a cos^n pattern, degrees.
double semi_angle_deg(double lambertian_order);

// Generalised Lambertian radiant intensity, W/sr, at angle theta from the axis.
// Uses the summed colour power when no colour is given; zero beyond 90 degrees.
double radiant_intensity(const Branch& branch, double theta_deg, std::optional<Color> color = std::nullopt);

// Luminous intensity of the whole branch, cd.
double luminous_intensity(const Branch& branch, double theta_deg);

// Normalised Lambertian pattern (n + 1) / (2 pi) cos^n(theta), per steradian,
// for cos_theta in [-1, 1]; zero for cos_theta <= 0.
double lambertian_pattern(double order, double cos_theta);

struct UnitTemplate {
    std::vector<std::array<double, 2>> branch_angles_deg;  // (azimuth, elevation)
    double lambertian_order = 11.0;
    int lds_per_branch = 2;
    ColorPower ld_power_w = kRygbLdPower;
    double ld_intensity_cd = 162.0;
};

UnitTemplate mbt_template();
UnitTemplate support_template();

// Builds units with globally unique branch ids: MBT units first, seven ids
// each, then support units.
std::vector<LightUnit> build_units(const std::vector<Vec3>& mbt_positions, const UnitTemplate& mbt,
                                   const std::vector<Vec3>& support_positions,
                                   const UnitTemplate& support);

std::vector<Vec3> reference_mbt_positions();
std::vector<Vec3> reference_support_positions();

// The eight MBT units and (optionally) four support units of the reference room.
std::vector<LightUnit> reference_layout(bool with_support = true);

// All branches across the units, in id order.
std::vector<Branch> all_branches(const std::vector<LightUnit>& units);

// Only the data-carrying branches, in id order.
std::vector<Branch> communication_branches(const std::vector<LightUnit>& units);

// Footprint overlap between two branches on a horizontal plane: the area
// where both are within their half-power cones, divided by the area covered
// by either. Evaluated on a square sampling grid of the given pitch.
double footprint_overlap(const Branch& a, const Branch& b, double plane_z, double pitch_m = 0.005);

}  // namespace mbtvlc
