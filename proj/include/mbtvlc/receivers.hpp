// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mbtvlc/emitters.hpp"
#include "mbtvlc/geometry.hpp"

namespace mbtvlc {

class ImpulseResponse;

// Ideal: constant N^2 / sin^2(psi_c) inside the acceptance angle.
// Literal: N^2 / sin^2(psi) with the incidence angle itself, floored at 1 mrad.
enum class CpcMode { Ideal, Literal };

struct Cpc {
    double refractive_index = 1.7;
    double acceptance_deg = 20.0;
    CpcMode mode = CpcMode::Ideal;
};

double cpc_gain(const Cpc& cpc, double incidence_deg);

struct ReceiverFace {
    Vec3 position;
    double azimuth_deg = 0.0;
    double elevation_deg = 90.0;  // 90 looks straight up
    double fov_deg = 20.0;        // half-angle
    double area_m2 = 1e-6;
    Cpc cpc;
    std::optional<Color> filter;  // empty: unfiltered
    double responsivity = 0.4;    // A/W
    int id = 0;
    int branch = 0;  // faces sharing a branch share position and orientation

    Vec3 normal() const { return direction_from_angles(azimuth_deg, elevation_deg); }
};

enum class ReceiverKind { Wfov, Adr, NiAdr };

struct ReceiverSpec {
    ReceiverKind kind = ReceiverKind::Wfov;
    std::vector<ReceiverFace> faces;

    // One representative face per branch (same geometry), in branch order.
    std::vector<ReceiverFace> apertures() const;
    // Faces of a branch carrying the given filter (or unfiltered when empty).
    const ReceiverFace* face_for(int branch, std::optional<Color> filter) const;
    std::size_t branch_count() const;
    ReceiverSpec placed_at(const Vec3& position) const;
};

struct ColorResponsivity {
    double red = 0.4;
    double yellow = 0.35;
    double green = 0.3;
    double blue = 0.2;

    double operator[](Color c) const;
};

// Orientation pattern shared by the ADR and NI-ADR branches.
std::vector<std::array<double, 2>> diversity_angles_deg();

// Geometry and optics of a receiver type, independent of where it is placed.
struct ReceiverDesign {
    ReceiverKind kind = ReceiverKind::Wfov;
    double fov_deg = 40.0;
    double area_m2 = 1e-6;
    Cpc cpc{1.7, 40.0, CpcMode::Ideal};
    double responsivity = 0.4;       // unfiltered faces
    ColorResponsivity colors;        // NI-ADR colour faces
    std::vector<std::array<double, 2>> angles_deg{{0.0, 90.0}};  // (azimuth, elevation) per branch
};

ReceiverDesign wfov_design();
ReceiverDesign adr_design();
ReceiverDesign niadr_design();

ReceiverSpec make_receiver(const ReceiverDesign& design, const Vec3& position);

ReceiverSpec make_wfov(const Vec3& position, double refractive_index = 1.7);
ReceiverSpec make_adr(const Vec3& position, double refractive_index = 1.7);
ReceiverSpec make_niadr(const Vec3& position, const ColorResponsivity& r = {},
                        double refractive_index = 1.7);

// Validates face invariants: positive area, FOV within the CPC acceptance.
void validate(const ReceiverSpec& spec);

// Received power of one colour, for an impulse response traced with the
// branch's total transmit power. Ideal filters pass only their own colour.
double face_received_power(const ImpulseResponse& ir, const ReceiverFace& face,
                           const ColorPower& transmitted, Color color);

struct Selection {
    std::size_t index = 0;
    double value = 0.0;
};

// Maximum metric; ties go to the lowest index.
Selection select_best(std::span<const double> values);

}  // namespace mbtvlc
