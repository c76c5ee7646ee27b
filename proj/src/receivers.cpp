// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/receivers.hpp"

#include <algorithm>
#include <cmath>

#include "mbtvlc/channel.hpp"
#include "mbtvlc/error.hpp"

namespace mbtvlc {

double cpc_gain(const Cpc& cpc, double incidence_deg)
{
    if (incidence_deg < 0.0 || incidence_deg > cpc.acceptance_deg) {
        return 0.0;
    }
    const double n2 = cpc.refractive_index * cpc.refractive_index;
    double angle_deg = cpc.acceptance_deg;
    if (cpc.mode == CpcMode::Literal) {
        angle_deg = std::max(incidence_deg, rad_to_deg(1e-3));
    }
    const double s = std::sin(deg_to_rad(angle_deg));
    return n2 / (s * s);
}

double ColorResponsivity::operator[](Color c) const
{
    switch (c) {
    case Color::Red: return red;
    case Color::Yellow: return yellow;
    case Color::Green: return green;
    case Color::Blue: return blue;
    }
    return 0.0;
}

std::vector<ReceiverFace> ReceiverSpec::apertures() const
{
    std::vector<ReceiverFace> out;
    for (const auto& f : faces) {
        if (std::none_of(out.begin(), out.end(), [&](const ReceiverFace& o) { return o.branch == f.branch; })) {
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.branch < b.branch; });
    return out;
}

const ReceiverFace* ReceiverSpec::face_for(int branch, std::optional<Color> filter) const
{
    for (const auto& f : faces) {
        if (f.branch == branch && f.filter == filter) {
            return &f;
        }
    }
    return nullptr;
}

std::size_t ReceiverSpec::branch_count() const { return apertures().size(); }

ReceiverSpec ReceiverSpec::placed_at(const Vec3& position) const
{
    ReceiverSpec out = *this;
    for (auto& f : out.faces) {
        f.position = position;
    }
    return out;
}

std::vector<std::array<double, 2>> diversity_angles_deg()
{
    return {{0, 90}, {0, 60}, {60, 60}, {120, 60}, {180, 60}, {240, 60}, {300, 60}};
}

ReceiverDesign wfov_design() { return {}; }

ReceiverDesign adr_design()
{
    ReceiverDesign d;
    d.kind = ReceiverKind::Adr;
    d.fov_deg = 20.0;
    d.area_m2 = 0.4e-6;
    d.cpc.acceptance_deg = 20.0;
    d.angles_deg = diversity_angles_deg();
    return d;
}

ReceiverDesign niadr_design()
{
    ReceiverDesign d = adr_design();
    d.kind = ReceiverKind::NiAdr;
    d.area_m2 = 1e-6;
    return d;
}

ReceiverSpec make_receiver(const ReceiverDesign& design, const Vec3& position)
{
    ReceiverSpec spec{design.kind, {}};
    int branch = 0;
    for (const auto& [az, el] : design.angles_deg) {
        ReceiverFace f;
        f.position = position;
        f.azimuth_deg = az;
        f.elevation_deg = el;
        f.fov_deg = design.fov_deg;
        f.area_m2 = design.area_m2;
        f.cpc = design.cpc;
        f.responsivity = design.responsivity;
        f.branch = branch;
        if (design.kind == ReceiverKind::NiAdr) {
            for (Color c : kAllColors) {
                f.filter = c;
                f.responsivity = design.colors[c];
                f.id = static_cast<int>(spec.faces.size());
                spec.faces.push_back(f);
            }
        } else {
            f.id = static_cast<int>(spec.faces.size());
            spec.faces.push_back(f);
        }
        ++branch;
    }
    return spec;
}

ReceiverSpec make_wfov(const Vec3& position, double refractive_index)
{
    ReceiverDesign d = wfov_design();
    d.cpc.refractive_index = refractive_index;
    return make_receiver(d, position);
}

ReceiverSpec make_adr(const Vec3& position, double refractive_index)
{
    ReceiverDesign d = adr_design();
    d.cpc.refractive_index = refractive_index;
    return make_receiver(d, position);
}

ReceiverSpec make_niadr(const Vec3& position, const ColorResponsivity& r, double refractive_index)
{
    ReceiverDesign d = niadr_design();
    d.cpc.refractive_index = refractive_index;
    d.colors = r;
    return make_receiver(d, position);
}

void validate(const ReceiverSpec& spec)
{
    require(!spec.faces.empty(), "receiver needs at least one face");
    for (const auto& f : spec.faces) {
        require(f.area_m2 > 0, "detector area must be positive");
        require(f.responsivity > 0, "responsivity must be positive");
        require(f.cpc.refractive_index >= 1.0, "CPC refractive index must be at least 1");
        require(f.cpc.acceptance_deg > 0 && f.cpc.acceptance_deg < 90, "CPC acceptance must lie in (0, 90)");
        require(f.fov_deg >= 0 && f.fov_deg <= f.cpc.acceptance_deg + 1e-12,
                "face FOV must not exceed the CPC acceptance angle");
        require(f.elevation_deg >= -90 && f.elevation_deg <= 90, "face elevation must lie in [-90, 90]");
    }
}

double face_received_power(const ImpulseResponse& ir, const ReceiverFace& face,
                           const ColorPower& transmitted, Color color)
{
    if (face.filter && *face.filter != color) {
        return 0.0;
    }
    const double total = transmitted.total();
    if (total <= 0.0) {
        return 0.0;
    }
    return ir.total_power() * (transmitted[color] / total);
}

Selection select_best(std::span<const double> values)
{
    if (values.empty()) {
        throw ConfigError("select_best needs at least one value");
    }
    Selection best{0, values[0]};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > best.value) {
            best = {i, values[i]};
        }
    }
    return best;
}

}  // namespace mbtvlc
